use crate::error::TypeError;

use super::{ty_subst, TTerm, Ty, TyCtx};

/// Computes the unique type of `t` in `ctx`.
pub fn typecheck(ctx: &TyCtx, t: &TTerm) -> Result<Ty, TypeError> {
    let mut ctx = ctx.clone();
    let mut path = String::from("root");
    infer(&mut ctx, t, &mut path)
}

fn well_formed(ctx: &TyCtx, ty: &Ty) -> Result<(), TypeError> {
    fn first_unbound(ty: &Ty, depth: usize) -> Option<usize> {
        match ty {
            Ty::TVar(i) if *i >= depth => Some(i - depth),
            Ty::TVar(_) | Ty::Unit => None,
            Ty::All(b) => first_unbound(b, depth + 1),
            Ty::Arr(a, b) | Ty::Prod(a, b) => first_unbound(a, depth).or_else(|| first_unbound(b, depth)),
        }
    }
    match first_unbound(ty, ctx.type_depth()) {
        Some(i) => Err(TypeError::UnboundTypeVariable(i + ctx.type_depth())),
        None => Ok(()),
    }
}

fn descend<T>(path: &mut String, step: &str, f: impl FnOnce(&mut String) -> T) -> T {
    let len = path.len();
    path.push('.');
    path.push_str(step);
    let out = f(path);
    path.truncate(len);
    out
}

fn infer(ctx: &mut TyCtx, t: &TTerm, path: &mut String) -> Result<Ty, TypeError> {
    match t {
        TTerm::Var(i) => ctx.lookup(*i).ok_or(TypeError::UnboundVariable(*i)),
        TTerm::Lam(annot, body) => {
            well_formed(ctx, annot)?;
            ctx.push_term(annot.clone());
            let body_ty = descend(path, "body", |p| infer(ctx, body, p));
            ctx.pop();
            Ok(Ty::arr(annot.clone(), body_ty?))
        }
        TTerm::App(f, a) => {
            let fty = descend(path, "fun", |p| infer(ctx, f, p))?;
            let aty = descend(path, "arg", |p| infer(ctx, a, p))?;
            match fty {
                Ty::Arr(dom, cod) if *dom == aty => Ok(*cod),
                Ty::Arr(dom, _) => Err(TypeError::mismatch(&format!("{path}.arg"), &*dom, &aty)),
                other => Err(TypeError::mismatch(&format!("{path}.fun"), "a function type", &other)),
            }
        }
        TTerm::TLam(body) => {
            ctx.push_type();
            let body_ty = descend(path, "body", |p| infer(ctx, body, p));
            ctx.pop();
            Ok(Ty::all(body_ty?))
        }
        TTerm::TApp(f, arg) => {
            well_formed(ctx, arg)?;
            match descend(path, "fun", |p| infer(ctx, f, p))? {
                Ty::All(body) => Ok(ty_subst(&body, 0, arg)),
                other => Err(TypeError::mismatch(&format!("{path}.fun"), "a universal type", &other)),
            }
        }
        TTerm::Unit => Ok(Ty::Unit),
        TTerm::Pair(a, b) => {
            let aty = descend(path, "fst", |p| infer(ctx, a, p))?;
            let bty = descend(path, "snd", |p| infer(ctx, b, p))?;
            Ok(Ty::prod(aty, bty))
        }
        TTerm::Fst(p) | TTerm::Snd(p) => match descend(path, "pair", |q| infer(ctx, p, q))? {
            Ty::Prod(a, b) => Ok(if matches!(t, TTerm::Fst(_)) { *a } else { *b }),
            other => Err(TypeError::mismatch(&format!("{path}.pair"), "a product type", &other)),
        },
    }
}
