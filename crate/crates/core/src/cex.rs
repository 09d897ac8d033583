//! Counterexample search for the one-step diamond.

use std::hash::Hash;

use indexmap::IndexSet;
use serde::Serialize;

use crate::diff::{diff, Diff};
use crate::error::RelationError;
use crate::generate::{gen_terms, gen_typed_terms, Calculus, CorpusSpec};
use crate::reduction::Trace;
use crate::relation::Relation;
use crate::scan::{scan, Verdict};
use crate::systemf::{typed_eta_reducts, EtaRules, TTerm};
use crate::term::Term;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample<T = Term> {
    pub peak: T,
    pub left: T,
    pub right: T,
    pub left_trace: Trace<T>,
    pub right_trace: Trace<T>,
    pub reason: String,
}

impl<T: Clone> Counterexample<T> {
    /// A peak with two one-step branches.
    pub fn fork(peak: &T, left: &T, right: &T, reason: impl Into<String>) -> Counterexample<T> {
        Counterexample {
            peak: peak.clone(),
            left: left.clone(),
            right: right.clone(),
            left_trace: Trace {
                steps: vec![peak.clone(), left.clone()],
            },
            right_trace: Trace {
                steps: vec![peak.clone(), right.clone()],
            },
            reason: reason.into(),
        }
    }
}

pub const NOT_ONE_STEP_JOINABLE: &str = "branches differ, neither steps to the other, and they share no one-step reduct";

/// True iff `m1` and `m2` cannot be closed with at most one step on each
/// side: they differ, neither is a one-step reduct of the other, and they
/// have no common one-step reduct.
pub fn not_one_step_joinable(m1: &Term, m2: &Term, rel: &Relation) -> bool {
    if diff(m1, m2) == Diff::Equal {
        return false;
    }
    not_joinable_given(m1, m2, &rel.reducts(m1), &rel.reducts(m2))
}

/// The same test with both reduct sets already computed.
pub fn not_joinable_given<T: Eq + Hash>(m1: &T, m2: &T, r1: &[T], r2: &[T]) -> bool {
    if m1 == m2 || r1.contains(m2) || r2.contains(m1) {
        return false;
    }
    let r1: IndexSet<&T> = r1.iter().collect();
    !r2.iter().any(|t| r1.contains(t))
}

/// The first pair of branches of `m`, by reduct order, that cannot be
/// closed in one step.
pub fn diamond_failure_at<T, F, E>(m: &T, reducts: F) -> Result<Option<(T, T)>, E>
where
    T: Eq + Hash + Clone,
    F: Fn(&T) -> Result<Vec<T>, E>,
{
    let rs = reducts(m)?;
    if rs.len() < 2 {
        return Ok(None);
    }
    let next: Vec<Vec<T>> = rs.iter().map(&reducts).collect::<Result<_, E>>()?;
    for i in 0..rs.len() {
        for j in i + 1..rs.len() {
            if not_joinable_given(&rs[i], &rs[j], &next[i], &next[j]) {
                return Ok(Some((rs[i].clone(), rs[j].clone())));
            }
        }
    }
    Ok(None)
}

fn untyped_failure_at(m: &Term, rel: &Relation) -> Option<(Term, Term)> {
    diamond_failure_at(m, |t| Ok::<_, std::convert::Infallible>(rel.reducts(t))).unwrap_or_else(|e| match e {})
}

/// The canonically first peak in the corpus whose `rel` branches are not
/// one-step joinable, with its first such pair of branches.
pub fn find_diamond_cex(rel: &Relation, spec: &CorpusSpec) -> Option<Counterexample> {
    scan(gen_terms(spec), |m| match untyped_failure_at(m, rel) {
        Some((l, r)) => Verdict::Fail(Counterexample::fork(m, &l, &r, NOT_ONE_STEP_JOINABLE)),
        None => Verdict::Closed,
    })
    .first_failure
    .map(|(_, c)| c)
}

/// The η rules that go with a calculus: the full set for the unit/product
/// extension, function-η otherwise.
pub fn eta_rules_for(calculus: Calculus) -> EtaRules {
    match calculus {
        Calculus::EtaExt => EtaRules::Full,
        _ => EtaRules::Function,
    }
}

pub fn find_typed_eta_diamond_cex(spec: &CorpusSpec) -> Result<Option<Counterexample<TTerm>>, RelationError> {
    find_typed_eta_diamond_cex_with(spec, eta_rules_for(spec.calculus))
}

/// Same search with an explicit rule set, e.g. function-η alone over the
/// unit/product corpus.
pub fn find_typed_eta_diamond_cex_with(
    spec: &CorpusSpec,
    rules: EtaRules,
) -> Result<Option<Counterexample<TTerm>>, RelationError> {
    let ctx = &spec.typed_context;
    for m in gen_typed_terms(spec) {
        if let Some((l, r)) = diamond_failure_at(&m, |t| typed_eta_reducts(ctx, t, rules))? {
            return Ok(Some(Counterexample::fork(&m, &l, &r, NOT_ONE_STEP_JOINABLE)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systemf::{parse_signature, parse_tterm};
    use crate::term::{parse, NamingContext};

    fn c(text: &str) -> Term {
        parse(text, &NamingContext::empty()).unwrap()
    }

    #[test]
    fn not_joinable_examples() {
        let beta = Relation::beta();
        assert!(not_one_step_joinable(
            &c("((\\x. x) (\\x. x)) ((\\x. x) (\\x. x))"),
            &c("(\\x. x x) (\\x. x)"),
            &beta
        ));
        let t = c("(\\x. x x) (\\x. x)");
        assert!(!not_one_step_joinable(&t, &t, &beta));
        let ctx = NamingContext::from_list("y").unwrap();
        let (a, b) = (parse("(\\x. x) y", &ctx).unwrap(), parse("y", &ctx).unwrap());
        assert!(!not_one_step_joinable(&a, &b, &beta));
    }

    #[test]
    fn beta_peak_at_height_three() {
        let cex = find_diamond_cex(&Relation::beta(), &CorpusSpec::untyped(3, 0)).unwrap();
        assert_eq!(cex.peak, c("(\\x. x x) ((\\y. y) (\\y. y))"));
        assert_eq!(cex.left, c("((\\y. y) (\\y. y)) ((\\y. y) (\\y. y))"));
        assert_eq!(cex.right, c("(\\x. x x) (\\y. y)"));
        assert!(cex.left_trace.is_valid(&Relation::beta()));
        assert!(cex.right_trace.is_valid(&Relation::beta()));
    }

    #[test]
    fn no_cex_when_none_exists() {
        assert!(find_diamond_cex(&Relation::beta(), &CorpusSpec::untyped(1, 0)).is_none());
        assert!(find_diamond_cex(&Relation::par(), &CorpusSpec::untyped(3, 0)).is_none());
    }

    #[test]
    fn typed_eta_search() {
        let sig = parse_signature("p:Unit*Unit").unwrap();
        let spec = CorpusSpec::typed(Calculus::EtaExt, 2, sig.ctx().clone());
        let cex = find_typed_eta_diamond_cex(&spec).unwrap().unwrap();
        assert_eq!(cex.peak, parse_tterm("<fst p, snd p>", &sig).unwrap());
        assert_eq!(cex.left, parse_tterm("p", &sig).unwrap());
        assert_eq!(cex.right, parse_tterm("<(), snd p>", &sig).unwrap());
        let spec1 = CorpusSpec::typed(Calculus::EtaExt, 1, sig.ctx().clone());
        assert!(find_typed_eta_diamond_cex(&spec1).unwrap().is_none());
    }
}
