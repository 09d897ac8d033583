//! Structural inequality with a witness path.

use serde::Serialize;

use crate::term::Term;

/// Which child to descend into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Selector {
    Body,
    Fun,
    Arg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MismatchKind {
    VarIndex,
    VarVsLam,
    VarVsApp,
    LamVsVar,
    LamVsApp,
    AppVsVar,
    AppVsLam,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiffWitness {
    pub path: Vec<Selector>,
    pub kind: MismatchKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Diff {
    Equal,
    Differ(DiffWitness),
}

/// The first disagreement in pre-order, if any.
pub fn diff(m: &Term, n: &Term) -> Diff {
    let mut path = Vec::new();
    match go(m, n, &mut path) {
        Some(kind) => Diff::Differ(DiffWitness { path, kind }),
        None => Diff::Equal,
    }
}

fn go(m: &Term, n: &Term, path: &mut Vec<Selector>) -> Option<MismatchKind> {
    use MismatchKind::*;
    match (m, n) {
        (Term::Var(i), Term::Var(j)) => (i != j).then_some(VarIndex),
        (Term::Var(_), Term::Lam(_)) => Some(VarVsLam),
        (Term::Var(_), Term::App(..)) => Some(VarVsApp),
        (Term::Lam(_), Term::Var(_)) => Some(LamVsVar),
        (Term::Lam(_), Term::App(..)) => Some(LamVsApp),
        (Term::App(..), Term::Var(_)) => Some(AppVsVar),
        (Term::App(..), Term::Lam(_)) => Some(AppVsLam),
        (Term::Lam(a), Term::Lam(b)) => descend(Selector::Body, a, b, path),
        (Term::App(f, a), Term::App(g, b)) => {
            descend(Selector::Fun, f, g, path).or_else(|| descend(Selector::Arg, a, b, path))
        }
    }
}

fn descend(sel: Selector, m: &Term, n: &Term, path: &mut Vec<Selector>) -> Option<MismatchKind> {
    path.push(sel);
    let r = go(m, n, path);
    if r.is_none() {
        path.pop();
    }
    r
}

/// Follows `path` from `t`; `None` if a selector does not fit.
pub fn follow<'a>(t: &'a Term, path: &[Selector]) -> Option<&'a Term> {
    path.iter().try_fold(t, |t, sel| match (sel, t) {
        (Selector::Body, Term::Lam(b)) => Some(&**b),
        (Selector::Fun, Term::App(f, _)) => Some(&**f),
        (Selector::Arg, Term::App(_, a)) => Some(&**a),
        _ => None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let i = Term::identity();
        assert_eq!(diff(&i, &i), Diff::Equal);
        let app = Term::app(Term::Var(0), Term::Var(0));
        assert_eq!(
            diff(&i, &app),
            Diff::Differ(DiffWitness { path: vec![], kind: MismatchKind::LamVsApp })
        );
        assert_eq!(
            diff(&Term::Var(0), &Term::Var(1)),
            Diff::Differ(DiffWitness { path: vec![], kind: MismatchKind::VarIndex })
        );
    }

    #[test]
    fn path_reaches_disagreement() {
        let m = Term::lam(Term::app(Term::Var(0), Term::lam(Term::Var(0))));
        let n = Term::lam(Term::app(Term::Var(0), Term::lam(Term::Var(1))));
        let Diff::Differ(w) = diff(&m, &n) else { panic!("terms differ") };
        assert_eq!(w.path, vec![Selector::Body, Selector::Arg, Selector::Body]);
        assert_eq!(follow(&m, &w.path), Some(&Term::Var(0)));
        assert_eq!(follow(&n, &w.path), Some(&Term::Var(1)));
    }
}
