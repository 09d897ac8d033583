//! Bounded, executable checks of confluence-style properties for the untyped
//! λ-calculus (β, η, parallel reduction) and System F.

pub mod cex;
pub mod cli;
pub mod diff;
pub mod error;
pub mod generate;
pub mod parallel;
pub mod props;
pub mod reduction;
pub mod relation;
pub mod scan;
pub mod systemf;
pub mod term;

pub use cex::{find_diamond_cex, find_typed_eta_diamond_cex, not_one_step_joinable, Counterexample};
pub use error::{Error, ParseError, RelationError, TermError, TypeError};
pub use generate::{gen_terms, gen_typed_terms, Calculus, CorpusSpec};
pub use props::{Budget, Outcome, PropertyKind, PropertyReport};
pub use reduction::{reachable, Reachable, Trace};
pub use relation::{union_rel, ReductSet, Relation};
pub use term::{parse, pretty, NamingContext, Term};
