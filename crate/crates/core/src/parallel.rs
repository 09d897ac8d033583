//! Parallel reduction and complete developments.
//!
//! `M ⇒ N` contracts any subset of the redexes visible in `M` at once:
//!
//! ```text
//!   x ⇒ x
//!   λM ⇒ λM'              if M ⇒ M'
//!   M N ⇒ M' N'           if M ⇒ M', N ⇒ N'
//!   (λM) N ⇒ M'[0 := N']  if M ⇒ M', N ⇒ N'
//! ```
//!
//! [`par_reducts`] enumerates the relation bottom-up; [`par_step_check`]
//! decides it by recursion on the source without enumerating anything, so the
//! two can be cross-checked.

use indexmap::IndexSet;

use crate::error::RelationError;
use crate::relation::ReductSet;
use crate::term::{shift, shift_up, subst, Term};

pub fn par_reducts(m: &Term) -> ReductSet {
    par_set(m).into_iter().collect()
}

fn par_set(m: &Term) -> IndexSet<Term> {
    match m {
        Term::Var(_) => IndexSet::from([m.clone()]),
        Term::Lam(body) => par_set(body).into_iter().map(Term::lam).collect(),
        Term::App(f, a) => {
            let fs = par_set(f);
            let args = par_set(a);
            let mut out = IndexSet::new();
            for f2 in &fs {
                for a2 in &args {
                    out.insert(Term::app(f2.clone(), a2.clone()));
                }
            }
            if f.is_lam() {
                // The bodies are the lambda reducts with the binder stripped.
                for f2 in &fs {
                    let Term::Lam(body2) = f2 else { unreachable!("λ only reduces to λ") };
                    for a2 in &args {
                        out.insert(subst(body2, 0, a2));
                    }
                }
            }
            out
        }
    }
}

/// A simultaneous substitution: index `i < terms.len()` maps to `terms[i]`,
/// every other index `i` maps to `Var(i - terms.len() + base)`.
#[derive(Debug, Clone)]
struct Env {
    terms: Vec<Term>,
    base: usize,
}

impl Env {
    fn identity() -> Env {
        Env {
            terms: Vec::new(),
            base: 0,
        }
    }

    fn lookup(&self, i: usize) -> Term {
        match self.terms.get(i) {
            Some(t) => t.clone(),
            None => Term::Var(i - self.terms.len() + self.base),
        }
    }

    /// The environment to use under one more binder.
    fn lift(&self) -> Env {
        let mut terms = Vec::with_capacity(self.terms.len() + 1);
        terms.push(Term::Var(0));
        terms.extend(self.terms.iter().map(|t| shift_up(t, 1, 0)));
        Env {
            terms,
            base: self.base + 1,
        }
    }

    /// Binds index 0 to `t` and pushes the rest of the environment up.
    fn cons(&self, t: Term) -> Env {
        let mut terms = Vec::with_capacity(self.terms.len() + 1);
        terms.push(t);
        terms.extend(self.terms.iter().cloned());
        Env {
            terms,
            base: self.base,
        }
    }

    fn apply(&self, t: &Term) -> Term {
        fn go(env: &Env, t: &Term, depth: usize) -> Term {
            match t {
                Term::Var(i) if *i < depth => Term::Var(*i),
                Term::Var(i) => shift_up(&env.lookup(i - depth), depth, 0),
                Term::Lam(b) => Term::lam(go(env, b, depth + 1)),
                Term::App(f, a) => Term::app(go(env, f, depth), go(env, a, depth)),
            }
        }
        go(self, t, 0)
    }
}

/// Decides `m ⇒ n` by recursion on `m`.
pub fn par_step_check(m: &Term, n: &Term) -> bool {
    matches_under(m, &Env::identity(), n)
}

/// Is there an `m'` with `m ⇒ m'` and `m'σ = q`?
///
/// In the β case the unknown argument `a'σ` either appears (shifted) as a
/// subterm of `q`, or is never used, in which case `aσ` serves.
fn matches_under(m: &Term, env: &Env, q: &Term) -> bool {
    match m {
        Term::Var(i) => env.lookup(*i) == *q,
        Term::Lam(body) => match q {
            Term::Lam(qb) => matches_under(body, &env.lift(), qb),
            _ => false,
        },
        Term::App(f, a) => {
            if let Term::App(qf, qa) = q {
                if matches_under(f, env, qf) && matches_under(a, env, qa) {
                    return true;
                }
            }
            let Term::Lam(body) = &**f else { return false };
            arg_candidates(a, env, q)
                .into_iter()
                .any(|cand| matches_under(a, env, &cand) && matches_under(body, &env.cons(cand), q))
        }
    }
}

fn arg_candidates(a: &Term, env: &Env, q: &Term) -> IndexSet<Term> {
    fn collect(q: &Term, depth: usize, out: &mut IndexSet<Term>) {
        if let Ok(lowered) = shift(q, -(depth as isize), 0) {
            out.insert(lowered);
        }
        match q {
            Term::Var(_) => {}
            Term::Lam(b) => collect(b, depth + 1, out),
            Term::App(f, a) => {
                collect(f, depth, out);
                collect(a, depth, out);
            }
        }
    }
    let mut out = IndexSet::new();
    out.insert(env.apply(a));
    collect(q, 0, &mut out);
    out
}

/// Takahashi's complete development: contracts every visible redex at once.
pub fn complete_dev(m: &Term) -> Term {
    match m {
        Term::Var(_) => m.clone(),
        Term::Lam(body) => Term::lam(complete_dev(body)),
        Term::App(f, a) => match &**f {
            Term::Lam(body) => subst(&complete_dev(body), 0, &complete_dev(a)),
            _ => Term::app(complete_dev(f), complete_dev(a)),
        },
    }
}

/// Checks one instance of stability under substitution: from `m ⇒ m'` and
/// `n ⇒ n'`, does `m[0 := n] ⇒ m'[0 := n']` hold?
pub fn par_subst_check(m: &Term, m2: &Term, n: &Term, n2: &Term) -> Result<bool, RelationError> {
    if !par_step_check(m, m2) {
        return Err(RelationError::PreconditionViolated(format!("{m:?} does not parallel-reduce to {m2:?}")));
    }
    if !par_step_check(n, n2) {
        return Err(RelationError::PreconditionViolated(format!("{n:?} does not parallel-reduce to {n2:?}")));
    }
    Ok(par_step_check(&subst(m, 0, n), &subst(m2, 0, n2)))
}
