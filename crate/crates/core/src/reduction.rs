//! One-step β, η and βη reduction, plus bounded closures over any
//! [`Relation`].
//!
//! Reduct sets are listed in pre-order of the contracted redex (outermost,
//! then leftmost), with duplicates dropped after their first occurrence.

use indexmap::{IndexMap, IndexSet};
use serde::{Deserialize, Serialize};

use crate::relation::{ReductSet, Relation};
use crate::term::{occurs, strengthen, subst, Term};

fn dedup(terms: Vec<Term>) -> ReductSet {
    let set: IndexSet<Term> = terms.into_iter().collect();
    set.into_iter().collect()
}

pub fn beta_reducts(t: &Term) -> ReductSet {
    fn go(t: &Term, out: &mut Vec<Term>) {
        match t {
            Term::Var(_) => {}
            Term::Lam(body) => {
                let mut inner = Vec::new();
                go(body, &mut inner);
                out.extend(inner.into_iter().map(Term::lam));
            }
            Term::App(f, a) => {
                if let Term::Lam(body) = &**f {
                    out.push(subst(body, 0, a));
                }
                let mut inner = Vec::new();
                go(f, &mut inner);
                out.extend(inner.into_iter().map(|f2| Term::app(f2, (**a).clone())));
                let mut inner = Vec::new();
                go(a, &mut inner);
                out.extend(inner.into_iter().map(|a2| Term::app((**f).clone(), a2)));
            }
        }
    }
    let mut out = Vec::new();
    go(t, &mut out);
    dedup(out)
}

/// The contractum of `t` if it is an η-redex `λx. M x` with `x` not free
/// in `M`.
pub fn eta_contract(t: &Term) -> Option<Term> {
    match t {
        Term::Lam(body) => match &**body {
            Term::App(m, x) if **x == Term::Var(0) && !occurs(m, 0) => strengthen(m, 0).ok(),
            _ => None,
        },
        _ => None,
    }
}

pub fn eta_reducts(t: &Term) -> ReductSet {
    fn go(t: &Term, out: &mut Vec<Term>) {
        match t {
            Term::Var(_) => {}
            Term::Lam(body) => {
                if let Some(c) = eta_contract(t) {
                    out.push(c);
                }
                let mut inner = Vec::new();
                go(body, &mut inner);
                out.extend(inner.into_iter().map(Term::lam));
            }
            Term::App(f, a) => {
                let mut inner = Vec::new();
                go(f, &mut inner);
                out.extend(inner.into_iter().map(|f2| Term::app(f2, (**a).clone())));
                let mut inner = Vec::new();
                go(a, &mut inner);
                out.extend(inner.into_iter().map(|a2| Term::app((**f).clone(), a2)));
            }
        }
    }
    let mut out = Vec::new();
    go(t, &mut out);
    dedup(out)
}

/// β-reducts followed by the η-reducts not already present.
pub fn betaeta_reducts(t: &Term) -> ReductSet {
    let mut out = beta_reducts(t);
    out.extend(eta_reducts(t));
    dedup(out)
}

/// A reduction sequence, source first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace<T = Term> {
    pub steps: Vec<T>,
}

impl<T> Trace<T> {
    pub fn single(t: T) -> Trace<T> {
        Trace { steps: vec![t] }
    }

    pub fn source(&self) -> &T {
        &self.steps[0]
    }

    pub fn target(&self) -> &T {
        self.steps.last().expect("trace is never empty")
    }

    /// Number of reduction steps.
    pub fn len(&self) -> usize {
        self.steps.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl Trace {
    /// True iff every consecutive pair is a `rel` step.
    pub fn is_valid(&self, rel: &Relation) -> bool {
        !self.steps.is_empty()
            && self
                .steps
                .windows(2)
                .all(|w| rel.reducts(&w[0]).contains(&w[1]))
    }
}

#[derive(Debug, Clone, Copy)]
struct Node {
    parent: Option<usize>,
    depth: usize,
}

/// Terms reachable from a source by breadth-first search.
#[derive(Debug, Clone)]
pub struct Reachable {
    nodes: IndexMap<Term, Node>,
    /// The node budget ran out before the depth budget did.
    pub truncated: bool,
    /// Some term at the depth limit still has unexplored reducts.
    pub frontier_open: bool,
}

impl Reachable {
    /// True iff the set is the full reflexive-transitive closure.
    pub fn is_complete(&self) -> bool {
        !self.truncated && !self.frontier_open
    }

    pub fn contains(&self, t: &Term) -> bool {
        self.nodes.contains_key(t)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Terms in discovery order, source first.
    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        self.nodes.keys()
    }

    pub fn distance(&self, t: &Term) -> Option<usize> {
        self.nodes.get(t).map(|n| n.depth)
    }

    pub fn position(&self, t: &Term) -> Option<usize> {
        self.nodes.get_index_of(t)
    }

    /// A shortest trace from the source to `t`.
    pub fn trace_to(&self, t: &Term) -> Option<Trace> {
        let mut idx = self.nodes.get_index_of(t)?;
        let mut steps = Vec::new();
        loop {
            let (term, node) = self.nodes.get_index(idx).expect("valid index");
            steps.push(term.clone());
            match node.parent {
                Some(p) => idx = p,
                None => break,
            }
        }
        steps.reverse();
        Some(Trace { steps })
    }
}

/// Breadth-first closure of `t` under `rel`, at most `depth_budget` steps
/// deep and at most `node_budget` terms large.
pub fn reachable(t: &Term, rel: &Relation, depth_budget: usize, node_budget: usize) -> Reachable {
    let mut nodes = IndexMap::new();
    nodes.insert(
        t.clone(),
        Node {
            parent: None,
            depth: 0,
        },
    );
    let mut truncated = false;
    let mut level_start = 0;
    let mut depth = 0;
    'bfs: while depth < depth_budget {
        let level_end = nodes.len();
        if level_start == level_end {
            break;
        }
        for idx in level_start..level_end {
            let source = nodes.get_index(idx).expect("valid index").0.clone();
            for r in rel.reducts(&source) {
                if nodes.contains_key(&r) {
                    continue;
                }
                if nodes.len() >= node_budget {
                    truncated = true;
                    break 'bfs;
                }
                nodes.insert(
                    r,
                    Node {
                        parent: Some(idx),
                        depth: depth + 1,
                    },
                );
            }
        }
        level_start = level_end;
        depth += 1;
    }
    let frontier_open = !truncated
        && depth == depth_budget
        && nodes
            .get_range(level_start..)
            .into_iter()
            .flat_map(|slice| slice.keys())
            .any(|u| rel.reducts(u).iter().any(|r| !nodes.contains_key(r)));
    Reachable {
        nodes,
        truncated,
        frontier_open,
    }
}

/// A common reduct with shortest traces to it from both sides.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Join {
    pub witness: Term,
    pub left: Trace,
    pub right: Trace,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum JoinResult {
    Joined(Join),
    /// No common reduct inside the budgets. This never means the terms are
    /// not joinable.
    NotFoundWithinBudget,
}

impl JoinResult {
    pub fn is_joined(&self) -> bool {
        matches!(self, JoinResult::Joined(_))
    }
}

/// Picks the common reduct with the fewest combined steps, breaking ties by
/// discovery order on the left.
pub fn join_reachable(left: &Reachable, right: &Reachable) -> Option<Join> {
    let witness = left
        .terms()
        .filter_map(|u| {
            let dr = right.distance(u)?;
            Some((left.distance(u).expect("present") + dr, u))
        })
        .min_by_key(|(d, _)| *d)
        .map(|(_, u)| u.clone())?;
    Some(Join {
        left: left.trace_to(&witness).expect("present"),
        right: right.trace_to(&witness).expect("present"),
        witness,
    })
}

pub fn joinable(
    t1: &Term,
    t2: &Term,
    rel: &Relation,
    depth_budget: usize,
    node_budget: usize,
) -> JoinResult {
    let left = reachable(t1, rel, depth_budget, node_budget);
    let right = reachable(t2, rel, depth_budget, node_budget);
    match join_reachable(&left, &right) {
        Some(j) => JoinResult::Joined(j),
        None => JoinResult::NotFoundWithinBudget,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Normalization {
    NormalForm(Term),
    FuelExhausted(Term),
}

/// Leftmost-outermost normalization: always takes the first reduct.
pub fn normalize(t: &Term, rel: &Relation, fuel: usize) -> Normalization {
    let mut current = t.clone();
    for _ in 0..fuel {
        match rel.reducts(&current).into_iter().next() {
            Some(next) => current = next,
            None => return Normalization::NormalForm(current),
        }
    }
    if rel.is_normal(&current) {
        Normalization::NormalForm(current)
    } else {
        Normalization::FuelExhausted(current)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{parse, NamingContext};

    fn p(text: &str) -> Term {
        parse(text, &NamingContext::from_list("y").unwrap()).unwrap()
    }

    fn c(text: &str) -> Term {
        parse(text, &NamingContext::empty()).unwrap()
    }

    #[test]
    fn beta_examples() {
        let peak = c("(\\x. x x) ((\\z. z) (\\z. z))");
        assert_eq!(
            beta_reducts(&peak),
            vec![c("((\\z. z) (\\z. z)) ((\\z. z) (\\z. z))"), c("(\\x. x x) (\\z. z)")]
        );
        assert!(beta_reducts(&Term::Var(0)).is_empty());
        assert_eq!(beta_reducts(&c("(\\x. x) ((\\x. x) (\\x. x))")), vec![c("(\\x. x) (\\x. x)")]);
    }

    #[test]
    fn eta_examples() {
        assert_eq!(eta_reducts(&p("\\x. y x")), vec![p("y")]);
        assert!(eta_reducts(&p("\\x. x x")).is_empty());
        // Both redexes contract to the same term up to α.
        assert_eq!(eta_reducts(&p("\\x. (\\z. y z) x")), vec![p("\\z. y z")]);
    }

    #[test]
    fn eta_under_application() {
        let t = p("(\\x. y x) (\\x. y x)");
        assert_eq!(eta_reducts(&t), vec![p("y (\\x. y x)"), p("(\\x. y x) y")]);
    }

    #[test]
    fn betaeta_examples() {
        assert!(betaeta_reducts(&Term::Var(0)).is_empty());
        let peak = c("(\\x. x x) ((\\z. z) (\\z. z))");
        assert_eq!(betaeta_reducts(&peak), beta_reducts(&peak));
    }

    #[test]
    fn lambda_x_i_x_reduces_to_identity_both_ways() {
        // β and η give α-equal results here; the set collapses to one term.
        assert_eq!(betaeta_reducts(&c("\\x. (\\y. y) x")), vec![c("\\x. x")]);
    }

    #[test]
    fn reachable_examples() {
        let beta = Relation::beta();
        let ii = c("(\\x. x) (\\x. x)");
        let r = reachable(&ii, &beta, 5, 100);
        assert_eq!(r.terms().cloned().collect::<Vec<_>>(), vec![ii.clone(), Term::identity()]);
        assert!(r.is_complete());
        let r = reachable(&p("y"), &beta, 5, 100);
        assert_eq!(r.len(), 1);
        let peak = c("(\\x. x x) ((\\z. z) (\\z. z))");
        let r = reachable(&peak, &beta, 10, 10_000);
        assert_eq!(r.len(), 7);
        assert!(r.contains(&ii));
        assert!(r.contains(&c("(\\x. x x) (\\z. z)")));
    }

    #[test]
    fn reachable_budgets() {
        let beta = Relation::beta();
        let peak = c("(\\x. x x) ((\\z. z) (\\z. z))");
        let r = reachable(&peak, &beta, 1, 10_000);
        assert_eq!(r.len(), 3);
        assert!(r.frontier_open && !r.truncated && !r.is_complete());
        let r = reachable(&peak, &beta, 10, 2);
        assert_eq!(r.len(), 2);
        assert!(r.truncated);
        let omega = c("(\\x. x x) (\\x. x x)");
        let r = reachable(&omega, &beta, 1, 10);
        assert!(r.is_complete(), "Ω's closure is the singleton");
    }

    #[test]
    fn trace_reconstruction() {
        let beta = Relation::beta();
        let peak = c("(\\x. x x) ((\\z. z) (\\z. z))");
        let r = reachable(&peak, &beta, 10, 10_000);
        let tr = r.trace_to(&Term::identity()).unwrap();
        assert_eq!(tr.len(), 3);
        assert!(tr.is_valid(&beta));
        assert_eq!(tr.source(), &peak);
    }

    #[test]
    fn joinable_examples() {
        let beta = Relation::beta();
        let l = c("((\\z. z) (\\z. z)) ((\\z. z) (\\z. z))");
        let r = c("(\\x. x x) (\\z. z)");
        let ii = c("(\\x. x) (\\x. x)");
        match joinable(&l, &r, &beta, 10, 10_000) {
            JoinResult::Joined(j) => {
                assert_eq!(j.witness, ii);
                assert_eq!(j.left.len(), 2);
                assert_eq!(j.right.len(), 1);
                assert!(j.left.is_valid(&beta) && j.right.is_valid(&beta));
            }
            other => panic!("{other:?}"),
        }
        let t = c("(\\x. x x) (\\x. x x)");
        match joinable(&t, &t, &Relation::eta(), 1, 1) {
            JoinResult::Joined(j) => {
                assert_eq!(j.witness, t);
                assert!(j.left.is_empty() && j.right.is_empty());
            }
            other => panic!("{other:?}"),
        }
        let xy = NamingContext::from_list("x,y").unwrap();
        let x = parse("x", &xy).unwrap();
        let y = parse("y", &xy).unwrap();
        assert_eq!(joinable(&x, &y, &beta, 5, 100), JoinResult::NotFoundWithinBudget);
    }

    #[test]
    fn join_json() {
        let j = Join {
            witness: Term::Var(0),
            left: Trace::single(Term::Var(0)),
            right: Trace::single(Term::Var(0)),
        };
        assert_eq!(
            serde_json::to_string(&j).unwrap(),
            r#"{"witness":{"var":0},"left":{"steps":[{"var":0}]},"right":{"steps":[{"var":0}]}}"#
        );
    }

    #[test]
    fn normalize_examples() {
        let beta = Relation::beta();
        let peak = c("(\\x. x x) ((\\z. z) (\\z. z))");
        assert_eq!(normalize(&peak, &beta, 20), Normalization::NormalForm(Term::identity()));
        let omega = c("(\\x. x x) (\\x. x x)");
        assert_eq!(normalize(&omega, &beta, 50), Normalization::FuelExhausted(omega));
        assert_eq!(normalize(&p("\\x. y x"), &Relation::eta(), 10), Normalization::NormalForm(p("y")));
    }

    #[test]
    fn normalize_reports_normal_form_reached_on_last_unit_of_fuel() {
        let ii = c("(\\x. x) (\\x. x)");
        assert_eq!(normalize(&ii, &Relation::beta(), 1), Normalization::NormalForm(Term::identity()));
    }
}
