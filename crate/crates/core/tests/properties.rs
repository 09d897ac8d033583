mod common;

use common::{arb_redexy, arb_term};
use confluence_core::diff::{diff, follow, Diff};
use confluence_core::parallel::{complete_dev, par_reducts, par_step_check, par_subst_check};
use confluence_core::reduction::{beta_reducts, betaeta_reducts, eta_reducts, normalize, reachable, Normalization};
use confluence_core::term::{occurs, shift, shift_up, strengthen, subst};
use confluence_core::{parse, pretty, union_rel, NamingContext, Relation, Term};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn pretty_then_parse_is_identity(t in arb_term(2)) {
        let ctx = NamingContext::from_list("x, y").unwrap();
        let text = pretty(&t, &ctx).unwrap();
        prop_assert_eq!(parse(&text, &ctx).unwrap(), t);
    }

    #[test]
    fn json_round_trip(t in arb_term(3)) {
        let s = serde_json::to_string(&t).unwrap();
        prop_assert_eq!(serde_json::from_str::<Term>(&s).unwrap(), t);
    }

    #[test]
    fn shift_down_undoes_shift_up(t in arb_term(3), k in 0usize..4, cutoff in 0usize..4) {
        let up = shift_up(&t, k, cutoff);
        prop_assert_eq!(shift(&up, -(k as isize), cutoff).unwrap(), t);
    }

    #[test]
    fn strengthen_iff_not_occurs(t in arb_term(3), j in 0usize..3) {
        match strengthen(&t, j) {
            Ok(s) => {
                prop_assert!(!occurs(&t, j));
                prop_assert_eq!(shift_up(&s, 1, j), t);
            }
            Err(_) => prop_assert!(occurs(&t, j)),
        }
    }

    #[test]
    fn substituting_an_absent_variable_is_identity(t in arb_term(2), s in arb_term(2), j in 0usize..3) {
        prop_assert_eq!(subst(&shift_up(&t, 1, j), j, &s), t);
    }

    #[test]
    fn substitutions_commute(t in arb_term(3), s in arb_term(2), u in arb_term(1), j in 0usize..2) {
        let lhs = subst(&subst(&t, 0, &s), j, &u);
        let rhs = subst(&subst(&t, j + 1, &shift_up(&u, 1, 0)), 0, &subst(&s, j, &u));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn sandwich(t in arb_redexy(1)) {
        let par = par_reducts(&t);
        for b in beta_reducts(&t) {
            prop_assert!(par.contains(&b));
        }
        let reach = reachable(&t, &Relation::beta(), t.size() * 2, 100_000);
        for p in &par {
            prop_assert!(reach.contains(p), "{:?} not reached from {:?}", p, t);
        }
    }

    #[test]
    fn triangle(t in arb_redexy(1)) {
        let cd = complete_dev(&t);
        prop_assert!(par_step_check(&t, &cd));
        for n in par_reducts(&t) {
            prop_assert!(par_step_check(&n, &cd), "{:?} does not reach {:?}", n, cd);
        }
    }

    #[test]
    fn step_check_agrees_with_enumeration(t in arb_redexy(1), other in arb_term(1)) {
        let par = par_reducts(&t);
        let mut candidates = par.clone();
        for p in &par {
            candidates.extend(beta_reducts(p));
        }
        candidates.push(other);
        for n in candidates {
            prop_assert_eq!(par_step_check(&t, &n), par.contains(&n), "{:?} => {:?}", t, n);
        }
    }

    #[test]
    fn parallel_steps_are_stable_under_substitution(m in arb_redexy(1), n in arb_redexy(0)) {
        for m2 in par_reducts(&m).into_iter().take(4) {
            for n2 in par_reducts(&n).into_iter().take(4) {
                prop_assert_eq!(par_subst_check(&m, &m2, &n, &n2), Ok(true));
            }
        }
    }

    #[test]
    fn union_of_beta_and_eta_is_betaeta(t in arb_redexy(1)) {
        let u = union_rel(&Relation::beta(), &Relation::eta());
        prop_assert_eq!(u.reducts(&t), betaeta_reducts(&t));
        prop_assert_eq!(union_rel(&Relation::beta(), &Relation::empty()).reducts(&t), beta_reducts(&t));
    }

    #[test]
    fn eta_terminates_by_size(t in arb_term(2)) {
        for r in eta_reducts(&t) {
            prop_assert!(r.size() < t.size());
        }
        let normal = matches!(normalize(&t, &Relation::eta(), t.size()), Normalization::NormalForm(_));
        prop_assert!(normal);
    }

    #[test]
    fn reducts_are_deterministic(t in arb_redexy(1)) {
        for rel in [Relation::beta(), Relation::eta(), Relation::betaeta(), Relation::par()] {
            prop_assert_eq!(rel.reducts(&t), rel.reducts(&t));
        }
    }

    #[test]
    fn diff_is_equality_with_a_replayable_witness(a in arb_term(2), b in arb_term(2)) {
        match diff(&a, &b) {
            Diff::Equal => prop_assert_eq!(a, b),
            Diff::Differ(w) => {
                prop_assert_ne!(&a, &b);
                let (x, y) = (follow(&a, &w.path).unwrap(), follow(&b, &w.path).unwrap());
                let differs = match (x, y) {
                    (Term::Var(i), Term::Var(j)) => i != j,
                    _ => std::mem::discriminant(x) != std::mem::discriminant(y),
                };
                prop_assert!(differs);
            }
        }
    }
}

#[test]
fn reachability_monotone_in_budget() {
    let t = parse("(\\x. x x) ((\\y. y) (\\y. y))", &NamingContext::empty()).unwrap();
    let small = reachable(&t, &Relation::beta(), 1, 100);
    let large = reachable(&t, &Relation::beta(), 4, 100);
    assert!(small.terms().all(|u| large.contains(u)));
    assert!(large.is_complete());
}
