use std::fmt;
use std::sync::Arc;

use indexmap::IndexSet;

use crate::parallel::par_reducts;
use crate::reduction::{beta_reducts, betaeta_reducts, eta_reducts};
use crate::term::Term;

/// Ordered, duplicate-free one-step reducts.
pub type ReductSet = Vec<Term>;

type ReductFn = dyn Fn(&Term) -> ReductSet + Send + Sync;

/// An abstract one-step reduction given by its finite reduct sets.
#[derive(Clone)]
pub struct Relation {
    name: String,
    reducts: Arc<ReductFn>,
}

impl Relation {
    pub fn new<F>(name: impl Into<String>, reducts: F) -> Relation
    where
        F: Fn(&Term) -> ReductSet + Send + Sync + 'static,
    {
        Relation {
            name: name.into(),
            reducts: Arc::new(reducts),
        }
    }

    pub fn beta() -> Relation {
        Relation::new("beta", beta_reducts)
    }

    pub fn eta() -> Relation {
        Relation::new("eta", eta_reducts)
    }

    pub fn betaeta() -> Relation {
        Relation::new("betaeta", betaeta_reducts)
    }

    /// Parallel reduction. Reflexive, so every term is its own reduct.
    pub fn par() -> Relation {
        Relation::new("par", par_reducts)
    }

    pub fn empty() -> Relation {
        Relation::new("empty", |_| Vec::new())
    }

    pub fn identity() -> Relation {
        Relation::new("identity", |t| vec![t.clone()])
    }

    /// Looks up one of the built-in untyped relations by its CLI name.
    pub fn by_name(name: &str) -> Option<Relation> {
        match name {
            "beta" => Some(Relation::beta()),
            "eta" => Some(Relation::eta()),
            "betaeta" => Some(Relation::betaeta()),
            "par" => Some(Relation::par()),
            "empty" => Some(Relation::empty()),
            "identity" => Some(Relation::identity()),
            _ => None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn reducts(&self, t: &Term) -> ReductSet {
        (self.reducts)(t)
    }

    /// True iff `t` has no reducts.
    pub fn is_normal(&self, t: &Term) -> bool {
        self.reducts(t).is_empty()
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Relation").field(&self.name).finish()
    }
}

/// Pointwise union: the reducts of `r` followed by those of `s` not already
/// listed.
pub fn union_rel(r: &Relation, s: &Relation) -> Relation {
    let (r, s) = (r.clone(), s.clone());
    let name = format!("{}+{}", r.name, s.name);
    Relation::new(name, move |t| {
        let mut out: IndexSet<Term> = r.reducts(t).into_iter().collect();
        out.extend(s.reducts(t));
        out.into_iter().collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{parse, NamingContext};

    #[test]
    fn union_of_beta_and_eta_is_betaeta() {
        let ctx = NamingContext::from_list("y").unwrap();
        let u = union_rel(&Relation::beta(), &Relation::eta());
        for text in ["\\x. (\\y. y) x", "(\\x. x x) ((\\y. y) (\\y. y))", "\\x. y x", "y"] {
            let t = parse(text, &ctx).unwrap();
            assert_eq!(u.reducts(&t), betaeta_reducts(&t), "{text}");
        }
        assert_eq!(u.name(), "beta+eta");
    }

    #[test]
    fn union_with_empty_is_identity_on_reducts() {
        let t = parse("(\\x. x) ((\\x. x) (\\x. x))", &NamingContext::empty()).unwrap();
        let u = union_rel(&Relation::beta(), &Relation::empty());
        assert_eq!(u.reducts(&t), beta_reducts(&t));
    }

    #[test]
    fn by_name() {
        assert_eq!(Relation::by_name("par").unwrap().name(), "par");
        assert!(Relation::by_name("gamma").is_none());
    }
}
