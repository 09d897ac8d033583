//! Nameless lambda terms.
//!
//! Bound variables are 0-based binder distances, so two terms are
//! α-equivalent exactly when they are structurally equal. Free variables
//! are indices that point past the outermost binder into a
//! [`NamingContext`].

pub(crate) mod parse;
mod pretty;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::TermError;

pub use parse::parse;
pub use pretty::{pretty, NameSupply};

/// An untyped lambda term with index-based variables.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Term {
    Var(usize),
    Lam(Box<Term>),
    App(Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(index: usize) -> Term {
        Term::Var(index)
    }

    pub fn lam(body: Term) -> Term {
        Term::Lam(Box::new(body))
    }

    pub fn app(fun: Term, arg: Term) -> Term {
        Term::App(Box::new(fun), Box::new(arg))
    }

    /// `λx. x`
    pub fn identity() -> Term {
        Term::lam(Term::Var(0))
    }

    /// Height with `height(Var) = 0`; both binders and applications add one.
    pub fn height(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::Lam(body) => 1 + body.height(),
            Term::App(f, a) => 1 + f.height().max(a.height()),
        }
    }

    /// Number of constructors.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::Lam(body) => 1 + body.size(),
            Term::App(f, a) => 1 + f.size() + a.size(),
        }
    }

    /// Number of free indices the term needs, i.e. one more than the largest
    /// free index (0 for closed terms).
    pub fn free_span(&self) -> usize {
        fn go(t: &Term, depth: usize) -> usize {
            match t {
                Term::Var(i) if *i >= depth => i - depth + 1,
                Term::Var(_) => 0,
                Term::Lam(body) => go(body, depth + 1),
                Term::App(f, a) => go(f, depth).max(go(a, depth)),
            }
        }
        go(self, 0)
    }

    pub fn is_closed(&self) -> bool {
        self.free_span() == 0
    }

    pub fn is_lam(&self) -> bool {
        matches!(self, Term::Lam(_))
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(i) => write!(f, "{i}"),
            Term::Lam(body) => write!(f, "λ.{body:?}"),
            Term::App(a, b) => write!(f, "({a:?} {b:?})"),
        }
    }
}

/// Free-variable names, outermost first. Index 0 refers to the last entry.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NamingContext {
    names: Vec<String>,
}

impl NamingContext {
    pub fn empty() -> NamingContext {
        NamingContext::default()
    }

    pub fn new<I, S>(names: I) -> Result<NamingContext, TermError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut ctx = NamingContext::default();
        for name in names {
            ctx.push(name.into())?;
        }
        Ok(ctx)
    }

    /// Parses a comma-separated list such as `"x,y"`.
    pub fn from_list(list: &str) -> Result<NamingContext, TermError> {
        NamingContext::new(
            list.split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(str::to_owned),
        )
    }

    /// Synthesized context `v0, v1, ...` of the given length, used when a
    /// term has free indices but no names were supplied.
    pub fn generated(len: usize) -> NamingContext {
        NamingContext {
            names: (0..len).map(|i| format!("v{i}")).collect(),
        }
    }

    pub fn push(&mut self, name: String) -> Result<(), TermError> {
        if self.names.contains(&name) {
            return Err(TermError::DuplicateName(name));
        }
        self.names.push(name);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.names.iter().any(|n| n == name)
    }

    /// Index of the innermost occurrence of `name`.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().rev().position(|n| n == name)
    }

    pub fn name_of(&self, index: usize) -> Option<&str> {
        let len = self.names.len();
        (index < len).then(|| self.names[len - 1 - index].as_str())
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

/// Adds `amount` to every free index `>= cutoff`.
pub fn shift(t: &Term, amount: isize, cutoff: usize) -> Result<Term, TermError> {
    match t {
        Term::Var(i) if *i >= cutoff => {
            let shifted = *i as isize + amount;
            if shifted < 0 {
                Err(TermError::NegativeIndex { index: *i, amount })
            } else {
                Ok(Term::Var(shifted as usize))
            }
        }
        Term::Var(i) => Ok(Term::Var(*i)),
        Term::Lam(body) => Ok(Term::lam(shift(body, amount, cutoff + 1)?)),
        Term::App(f, a) => Ok(Term::app(shift(f, amount, cutoff)?, shift(a, amount, cutoff)?)),
    }
}

/// Upward shift, which can never fail.
pub fn shift_up(t: &Term, amount: usize, cutoff: usize) -> Term {
    if amount == 0 {
        return t.clone();
    }
    match t {
        Term::Var(i) if *i >= cutoff => Term::Var(i + amount),
        Term::Var(i) => Term::Var(*i),
        Term::Lam(body) => Term::lam(shift_up(body, amount, cutoff + 1)),
        Term::App(f, a) => Term::app(shift_up(f, amount, cutoff), shift_up(a, amount, cutoff)),
    }
}

/// Replaces free index `j` of `t` by `s` and closes the gap: free indices
/// above `j` move down by one. `s` lives in the context with `j` removed and
/// is shifted as it passes under binders.
///
/// `subst(body, 0, arg)` is the contractum of `(λ. body) arg`.
pub fn subst(t: &Term, j: usize, s: &Term) -> Term {
    fn go(t: &Term, depth: usize, j: usize, s: &Term) -> Term {
        match t {
            Term::Var(i) => {
                let target = j + depth;
                if *i == target {
                    shift_up(s, depth, 0)
                } else if *i > target {
                    Term::Var(i - 1)
                } else {
                    Term::Var(*i)
                }
            }
            Term::Lam(body) => Term::lam(go(body, depth + 1, j, s)),
            Term::App(f, a) => Term::app(go(f, depth, j, s), go(a, depth, j, s)),
        }
    }
    go(t, 0, j, s)
}

/// True iff free index `j` occurs in `t`.
pub fn occurs(t: &Term, j: usize) -> bool {
    match t {
        Term::Var(i) => *i == j,
        Term::Lam(body) => occurs(body, j + 1),
        Term::App(f, a) => occurs(f, j) || occurs(a, j),
    }
}

/// Removes the unused free index `j`, moving the free indices above it down.
pub fn strengthen(t: &Term, j: usize) -> Result<Term, TermError> {
    if occurs(t, j) {
        return Err(TermError::OccursCheckFailed { index: j });
    }
    Ok(strengthen_unchecked(t, j, 0))
}

fn strengthen_unchecked(t: &Term, j: usize, depth: usize) -> Term {
    match t {
        Term::Var(i) if *i > j + depth => Term::Var(i - 1),
        Term::Var(i) => Term::Var(*i),
        Term::Lam(body) => Term::lam(strengthen_unchecked(body, j, depth + 1)),
        Term::App(f, a) => Term::app(
            strengthen_unchecked(f, j, depth),
            strengthen_unchecked(a, j, depth),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Term::Var;

    fn lam(b: Term) -> Term {
        Term::lam(b)
    }
    fn app(f: Term, a: Term) -> Term {
        Term::app(f, a)
    }

    #[test]
    fn shift_examples() {
        assert_eq!(shift(&Var(0), 1, 0).unwrap(), Var(1));
        assert_eq!(shift(&lam(Var(0)), 1, 0).unwrap(), lam(Var(0)));
        assert_eq!(shift(&lam(Var(1)), 1, 0).unwrap(), lam(Var(2)));
    }

    #[test]
    fn shift_below_zero_is_an_error() {
        assert!(matches!(
            shift(&Var(0), -1, 0),
            Err(TermError::NegativeIndex { index: 0, amount: -1 })
        ));
        assert_eq!(shift(&lam(Var(0)), -1, 0).unwrap(), lam(Var(0)));
    }

    #[test]
    fn subst_examples() {
        let i = Term::identity();
        assert_eq!(subst(&app(Var(0), Var(0)), 0, &i), app(i.clone(), i.clone()));
        assert_eq!(subst(&lam(Var(1)), 0, &Var(3)), lam(Var(4)));
        assert_eq!(subst(&lam(Var(0)), 0, &app(Var(7), Var(2))), lam(Var(0)));
    }

    #[test]
    fn subst_closes_the_gap() {
        // (1 0 2)[1 := 5] = 0 ... indices above 1 drop by one.
        let t = app(app(Var(1), Var(0)), Var(2));
        assert_eq!(subst(&t, 1, &Var(5)), app(app(Var(5), Var(0)), Var(1)));
    }

    #[test]
    fn occurs_examples() {
        assert!(occurs(&lam(app(Var(1), Var(0))), 0));
        assert!(!occurs(&lam(Var(0)), 0));
        assert!(occurs(&app(Var(0), Var(1)), 1));
    }

    #[test]
    fn strengthen_examples() {
        assert_eq!(strengthen(&Var(1), 0).unwrap(), Var(0));
        assert_eq!(strengthen(&lam(Var(0)), 0).unwrap(), lam(Var(0)));
        assert!(matches!(
            strengthen(&Var(0), 0),
            Err(TermError::OccursCheckFailed { index: 0 })
        ));
    }

    #[test]
    fn heights() {
        assert_eq!(Var(0).height(), 0);
        assert_eq!(Term::identity().height(), 1);
        let omega_half = lam(app(Var(0), Var(0)));
        let ii = app(Term::identity(), Term::identity());
        assert_eq!(app(omega_half, ii).height(), 3);
    }

    #[test]
    fn naming_context_rejects_duplicates() {
        assert!(NamingContext::from_list("x,y,x").is_err());
        let ctx = NamingContext::from_list("f, a").unwrap();
        assert_eq!(ctx.index_of("a"), Some(0));
        assert_eq!(ctx.index_of("f"), Some(1));
        assert_eq!(ctx.name_of(1), Some("f"));
    }

    #[test]
    fn json_encoding() {
        let t = app(lam(Var(0)), Var(3));
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(json, r#"{"app":[{"lam":{"var":0}},{"var":3}]}"#);
        let back: Term = serde_json::from_str(&json).unwrap();
        assert_eq!(back, t);
    }
}
