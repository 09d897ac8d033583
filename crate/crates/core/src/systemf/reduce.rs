use indexmap::IndexSet;

use crate::error::RelationError;
use crate::term::Term;

use super::{tm_occurs, tm_strengthen, tm_subst, tm_ty_subst, typecheck, TTerm, Ty, TyCtx};

fn admit(ctx: &TyCtx, m: &TTerm) -> Result<Ty, RelationError> {
    Ok(typecheck(ctx, m)?)
}

/// All typed parallel reducts of a well-typed term: congruence everywhere,
/// `(λx:A. M) N ⇒ M'[N']` and `(Λ. M) [B] ⇒ M'[B]`.
pub fn typed_par_reducts(ctx: &TyCtx, m: &TTerm) -> Result<Vec<TTerm>, RelationError> {
    admit(ctx, m)?;
    Ok(par_set(m).into_iter().collect())
}

/// Typed `m ⇒ n`, both sides admitted by the checker.
pub fn typed_par_step_check(ctx: &TyCtx, m: &TTerm, n: &TTerm) -> Result<bool, RelationError> {
    admit(ctx, m)?;
    admit(ctx, n)?;
    Ok(par_set(m).contains(n))
}

fn cross<F>(xs: &IndexSet<TTerm>, ys: &IndexSet<TTerm>, out: &mut IndexSet<TTerm>, mut f: F)
where
    F: FnMut(&TTerm, &TTerm) -> TTerm,
{
    for x in xs {
        for y in ys {
            out.insert(f(x, y));
        }
    }
}

fn par_set(m: &TTerm) -> IndexSet<TTerm> {
    match m {
        TTerm::Var(_) | TTerm::Unit => IndexSet::from([m.clone()]),
        TTerm::Lam(a, b) => par_set(b).into_iter().map(|b2| TTerm::lam(a.clone(), b2)).collect(),
        TTerm::TLam(b) => par_set(b).into_iter().map(TTerm::tlam).collect(),
        TTerm::Fst(p) => par_set(p).into_iter().map(TTerm::fst).collect(),
        TTerm::Snd(p) => par_set(p).into_iter().map(TTerm::snd).collect(),
        TTerm::Pair(a, b) => {
            let mut out = IndexSet::new();
            cross(&par_set(a), &par_set(b), &mut out, |x, y| TTerm::pair(x.clone(), y.clone()));
            out
        }
        TTerm::App(f, a) => {
            let fs = par_set(f);
            let args = par_set(a);
            let mut out = IndexSet::new();
            cross(&fs, &args, &mut out, |x, y| TTerm::app(x.clone(), y.clone()));
            if matches!(**f, TTerm::Lam(..)) {
                cross(&fs, &args, &mut out, |f2, a2| match f2 {
                    TTerm::Lam(_, body) => tm_subst(body, 0, a2),
                    _ => unreachable!("λ only reduces to λ"),
                });
            }
            out
        }
        TTerm::TApp(f, ty) => {
            let fs = par_set(f);
            let mut out: IndexSet<TTerm> = fs.iter().map(|f2| TTerm::tapp(f2.clone(), ty.clone())).collect();
            if matches!(**f, TTerm::TLam(_)) {
                for f2 in &fs {
                    let TTerm::TLam(body) = f2 else { unreachable!("Λ only reduces to Λ") };
                    out.insert(tm_ty_subst(body, 0, ty));
                }
            }
            out
        }
    }
}

/// Contracts every visible β and type-β redex at once.
pub fn typed_complete_dev(ctx: &TyCtx, m: &TTerm) -> Result<TTerm, RelationError> {
    admit(ctx, m)?;
    Ok(cd(m))
}

fn cd(m: &TTerm) -> TTerm {
    match m {
        TTerm::Var(_) | TTerm::Unit => m.clone(),
        TTerm::Lam(a, b) => TTerm::lam(a.clone(), cd(b)),
        TTerm::TLam(b) => TTerm::tlam(cd(b)),
        TTerm::Fst(p) => TTerm::fst(cd(p)),
        TTerm::Snd(p) => TTerm::snd(cd(p)),
        TTerm::Pair(a, b) => TTerm::pair(cd(a), cd(b)),
        TTerm::App(f, a) => match &**f {
            TTerm::Lam(_, body) => tm_subst(&cd(body), 0, &cd(a)),
            _ => TTerm::app(cd(f), cd(a)),
        },
        TTerm::TApp(f, ty) => match &**f {
            TTerm::TLam(body) => tm_ty_subst(&cd(body), 0, ty),
            _ => TTerm::tapp(cd(f), ty.clone()),
        },
    }
}

/// One-step β and type-β, in pre-order of the contracted redex.
pub fn typed_beta_reducts(ctx: &TyCtx, m: &TTerm) -> Result<Vec<TTerm>, RelationError> {
    admit(ctx, m)?;
    let mut out = IndexSet::new();
    beta_into(m, &mut |t| {
        out.insert(t);
    });
    Ok(out.into_iter().collect())
}

fn beta_into(m: &TTerm, emit: &mut dyn FnMut(TTerm)) {
    match m {
        TTerm::Var(_) | TTerm::Unit => {}
        TTerm::Lam(a, b) => beta_into(b, &mut |b2| emit(TTerm::lam(a.clone(), b2))),
        TTerm::TLam(b) => beta_into(b, &mut |b2| emit(TTerm::tlam(b2))),
        TTerm::Fst(p) => beta_into(p, &mut |p2| emit(TTerm::fst(p2))),
        TTerm::Snd(p) => beta_into(p, &mut |p2| emit(TTerm::snd(p2))),
        TTerm::Pair(a, b) => {
            beta_into(a, &mut |a2| emit(TTerm::pair(a2, (**b).clone())));
            beta_into(b, &mut |b2| emit(TTerm::pair((**a).clone(), b2)));
        }
        TTerm::App(f, a) => {
            if let TTerm::Lam(_, body) = &**f {
                emit(tm_subst(body, 0, a));
            }
            beta_into(f, &mut |f2| emit(TTerm::app(f2, (**a).clone())));
            beta_into(a, &mut |a2| emit(TTerm::app((**f).clone(), a2)));
        }
        TTerm::TApp(f, ty) => {
            if let TTerm::TLam(body) = &**f {
                emit(tm_ty_subst(body, 0, ty));
            }
            beta_into(f, &mut |f2| emit(TTerm::tapp(f2, ty.clone())));
        }
    }
}

/// Which typed η rules are active.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EtaRules {
    /// `λx:A. M x ↦ M` only.
    Function,
    /// Function-η, surjective pairing `<fst M, snd M> ↦ M`, and unit-η
    /// `M ↦ ()` for every `M : Unit` other than `()`.
    Full,
}

/// One-step typed η with the unit and product rules.
pub fn typed_eta_reducts_ext(ctx: &TyCtx, m: &TTerm) -> Result<Vec<TTerm>, RelationError> {
    typed_eta_reducts(ctx, m, EtaRules::Full)
}

/// One-step typed η under the given rule set, in pre-order of the contracted
/// redex.
pub fn typed_eta_reducts(ctx: &TyCtx, m: &TTerm, rules: EtaRules) -> Result<Vec<TTerm>, RelationError> {
    admit(ctx, m)?;
    let mut out = IndexSet::new();
    let mut ctx = ctx.clone();
    eta_into(&mut ctx, m, rules, &mut |t| {
        out.insert(t);
    })?;
    Ok(out.into_iter().collect())
}

fn eta_into(
    ctx: &mut TyCtx,
    m: &TTerm,
    rules: EtaRules,
    emit: &mut dyn FnMut(TTerm),
) -> Result<(), RelationError> {
    if let TTerm::Lam(_, body) = m {
        if let TTerm::App(f, x) = &**body {
            if **x == TTerm::Var(0) && !tm_occurs(f, 0) {
                emit(tm_strengthen(f, 0).expect("variable does not occur"));
            }
        }
    }
    if rules == EtaRules::Full {
        if let TTerm::Pair(a, b) = m {
            if let (TTerm::Fst(p), TTerm::Snd(q)) = (&**a, &**b) {
                if p == q {
                    emit((**p).clone());
                }
            }
        }
        if *m != TTerm::Unit && typecheck(ctx, m)? == Ty::Unit {
            emit(TTerm::Unit);
        }
    }
    match m {
        TTerm::Var(_) | TTerm::Unit => {}
        TTerm::Lam(a, b) => {
            ctx.push_term(a.clone());
            let r = eta_into(ctx, b, rules, &mut |b2| emit(TTerm::lam(a.clone(), b2)));
            ctx.pop();
            r?;
        }
        TTerm::TLam(b) => {
            ctx.push_type();
            let r = eta_into(ctx, b, rules, &mut |b2| emit(TTerm::tlam(b2)));
            ctx.pop();
            r?;
        }
        TTerm::Fst(p) => eta_into(ctx, p, rules, &mut |p2| emit(TTerm::fst(p2)))?,
        TTerm::Snd(p) => eta_into(ctx, p, rules, &mut |p2| emit(TTerm::snd(p2)))?,
        TTerm::TApp(f, ty) => eta_into(ctx, f, rules, &mut |f2| emit(TTerm::tapp(f2, ty.clone())))?,
        TTerm::Pair(a, b) => {
            eta_into(ctx, a, rules, &mut |a2| emit(TTerm::pair(a2, (**b).clone())))?;
            eta_into(ctx, b, rules, &mut |b2| emit(TTerm::pair((**a).clone(), b2)))?;
        }
        TTerm::App(f, a) => {
            eta_into(ctx, f, rules, &mut |f2| emit(TTerm::app(f2, (**a).clone())))?;
            eta_into(ctx, a, rules, &mut |a2| emit(TTerm::app((**f).clone(), a2)))?;
        }
    }
    Ok(())
}

/// Drops annotations and type abstraction/application. `None` for terms
/// that use the unit/product extension.
pub fn erase(m: &TTerm) -> Option<Term> {
    Some(match m {
        TTerm::Var(i) => Term::Var(*i),
        TTerm::Lam(_, b) => Term::lam(erase(b)?),
        TTerm::App(f, a) => Term::app(erase(f)?, erase(a)?),
        TTerm::TLam(b) | TTerm::TApp(b, _) => erase(b)?,
        TTerm::Unit | TTerm::Pair(..) | TTerm::Fst(_) | TTerm::Snd(_) => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parallel::par_step_check;

    fn poly_id() -> TTerm {
        TTerm::tlam(TTerm::lam(Ty::TVar(0), TTerm::Var(0)))
    }

    /// Context `b` (a type), `c : b`.
    fn sig() -> TyCtx {
        TyCtx::empty().with_type().with_term(Ty::TVar(0))
    }

    #[test]
    fn tbeta_instance() {
        let b = Ty::TVar(0);
        let m = TTerm::tapp(poly_id(), b.clone());
        let reducts = typed_par_reducts(&sig(), &m).unwrap();
        assert!(reducts.contains(&TTerm::lam(b, TTerm::Var(0))));
        assert_eq!(reducts.len(), 2);
    }

    #[test]
    fn variable_only_reduces_to_itself() {
        assert_eq!(typed_par_reducts(&sig(), &TTerm::Var(0)).unwrap(), vec![TTerm::Var(0)]);
    }

    #[test]
    fn beta_with_closed_argument() {
        let b = Ty::TVar(0);
        let m = TTerm::app(TTerm::lam(b, TTerm::Var(0)), TTerm::Var(0));
        assert_eq!(typed_par_reducts(&sig(), &m).unwrap(), vec![m.clone(), TTerm::Var(0)]);
    }

    #[test]
    fn ill_typed_input_is_rejected() {
        let m = TTerm::app(TTerm::Var(0), TTerm::Var(0));
        assert!(matches!(typed_par_reducts(&sig(), &m), Err(RelationError::IllTypedInput(_))));
        assert!(typed_complete_dev(&sig(), &m).is_err());
    }

    #[test]
    fn complete_dev_contracts_type_redex() {
        let b = Ty::TVar(0);
        let m = TTerm::tapp(poly_id(), b.clone());
        assert_eq!(typed_complete_dev(&sig(), &m).unwrap(), TTerm::lam(b, TTerm::Var(0)));
        assert_eq!(typed_complete_dev(&sig(), &TTerm::Var(0)).unwrap(), TTerm::Var(0));
    }

    #[test]
    fn complete_dev_nested_redexes() {
        // (Λ. λx:a. x) [b] c  ⇒  c  in one development.
        let m = TTerm::app(TTerm::tapp(poly_id(), Ty::TVar(0)), TTerm::Var(0));
        let dev = typed_complete_dev(&sig(), &m).unwrap();
        // The head is not syntactically a λ, so only the type redex fires.
        assert_eq!(dev, TTerm::app(TTerm::lam(Ty::TVar(0), TTerm::Var(0)), TTerm::Var(0)));
        assert!(typed_par_step_check(&sig(), &m, &dev).unwrap());
    }

    #[test]
    fn surjective_pairing_peak() {
        let ctx = TyCtx::empty().with_term(Ty::prod(Ty::Unit, Ty::Unit));
        let p = TTerm::Var(0);
        let peak = TTerm::pair(TTerm::fst(p.clone()), TTerm::snd(p.clone()));
        assert_eq!(
            typed_eta_reducts_ext(&ctx, &peak).unwrap(),
            vec![
                p.clone(),
                TTerm::pair(TTerm::Unit, TTerm::snd(p.clone())),
                TTerm::pair(TTerm::fst(p), TTerm::Unit),
            ]
        );
    }

    #[test]
    fn function_eta_and_unit() {
        let ctx = TyCtx::empty().with_type().with_term(Ty::arr(Ty::TVar(0), Ty::TVar(0)));
        let m = TTerm::lam(Ty::TVar(0), TTerm::app(TTerm::Var(1), TTerm::Var(0)));
        assert_eq!(typed_eta_reducts_ext(&ctx, &m).unwrap(), vec![TTerm::Var(0)]);
        assert!(typed_eta_reducts_ext(&TyCtx::empty(), &TTerm::Unit).unwrap().is_empty());
    }

    #[test]
    fn unit_eta_fires_on_unit_typed_subterms_only_with_full_rules() {
        let ctx = TyCtx::empty().with_term(Ty::prod(Ty::Unit, Ty::Unit));
        let m = TTerm::fst(TTerm::Var(0));
        assert_eq!(typed_eta_reducts_ext(&ctx, &m).unwrap(), vec![TTerm::Unit]);
        assert!(typed_eta_reducts(&ctx, &m, EtaRules::Function).unwrap().is_empty());
    }

    #[test]
    fn one_step_beta_and_tbeta() {
        let m = TTerm::app(TTerm::tapp(poly_id(), Ty::TVar(0)), TTerm::Var(0));
        let r = typed_beta_reducts(&sig(), &m).unwrap();
        assert_eq!(r, vec![TTerm::app(TTerm::lam(Ty::TVar(0), TTerm::Var(0)), TTerm::Var(0))]);
    }

    #[test]
    fn erasure_of_a_typed_step_is_an_untyped_step() {
        let m = TTerm::app(TTerm::lam(Ty::TVar(0), TTerm::Var(0)), TTerm::Var(0));
        for n in typed_par_reducts(&sig(), &m).unwrap() {
            assert!(par_step_check(&erase(&m).unwrap(), &erase(&n).unwrap()));
        }
        assert_eq!(erase(&TTerm::Unit), None);
    }
}
