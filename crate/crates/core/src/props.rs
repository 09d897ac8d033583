//! Bounded checkers for the abstract rewriting diagrams.
//!
//! Every checker walks the corpus in canonical order and reports the first
//! failing instance. A closing search that runs out of budget makes the
//! instance inconclusive, never failing.

use std::collections::HashMap;
use std::time::Instant;

use serde_json::{json, Value};

use crate::cex::{diamond_failure_at, Counterexample, NOT_ONE_STEP_JOINABLE};
use crate::generate::{gen_terms, CorpusSpec};
use crate::reduction::{join_reachable, reachable, Reachable, Trace};
use crate::relation::Relation;
use crate::scan::{scan, Scan, Verdict};
use crate::term::Term;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropertyKind {
    Diamond,
    StrongCommutation,
    Commutation,
    Confluence,
    Strip,
}

impl PropertyKind {
    pub fn name(self) -> &'static str {
        match self {
            PropertyKind::Diamond => "diamond",
            PropertyKind::StrongCommutation => "strong-commutation",
            PropertyKind::Commutation => "commutation",
            PropertyKind::Confluence => "confluence",
            PropertyKind::Strip => "strip",
        }
    }
}

/// Depth and node limits for each reachability search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub depth: usize,
    pub nodes: usize,
}

impl Budget {
    pub fn new(depth: usize) -> Budget {
        Budget { depth, nodes: 10_000 }
    }

    pub fn with_nodes(mut self, nodes: usize) -> Budget {
        self.nodes = nodes;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail(Box<Counterexample>),
    /// Number of instances whose diagram could not be closed within budget.
    Inconclusive(usize),
}

#[derive(Debug, Clone)]
pub struct PropertyReport {
    pub property: PropertyKind,
    pub relations: Vec<String>,
    pub corpus: CorpusSpec,
    pub budget: Option<Budget>,
    pub outcome: Outcome,
    pub instances_checked: usize,
    pub elapsed_ms: u128,
}

impl PropertyReport {
    pub fn is_pass(&self) -> bool {
        self.outcome == Outcome::Pass
    }

    pub fn is_fail(&self) -> bool {
        matches!(self.outcome, Outcome::Fail(_))
    }

    pub fn counterexample(&self) -> Option<&Counterexample> {
        match &self.outcome {
            Outcome::Fail(c) => Some(c),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        let outcome = match self.outcome {
            Outcome::Pass => "pass",
            Outcome::Fail(_) => "fail",
            Outcome::Inconclusive(_) => "inconclusive",
        };
        let mut v = json!({
            "property": self.property.name(),
            "relations": self.relations,
            "corpus": self.corpus.to_json(),
            "outcome": outcome,
            "instances_checked": self.instances_checked,
            "elapsed_ms": self.elapsed_ms as u64,
        });
        if let Some(b) = self.budget {
            v["budget"] = json!({ "depth": b.depth, "nodes": b.nodes });
        }
        match &self.outcome {
            Outcome::Fail(c) => v["counterexample"] = serde_json::to_value(c).expect("terms serialize"),
            Outcome::Inconclusive(n) => v["inconclusive_instances"] = json!(n),
            Outcome::Pass => {}
        }
        v
    }
}

fn report(
    property: PropertyKind,
    rels: &[&Relation],
    corpus: &CorpusSpec,
    budget: Option<Budget>,
    started: Instant,
    scan: Scan<Counterexample>,
) -> PropertyReport {
    let instances_checked = scan.instances_checked();
    let outcome = match scan.first_failure {
        Some((_, c)) => Outcome::Fail(Box::new(c)),
        None if scan.open > 0 => Outcome::Inconclusive(scan.open),
        None => Outcome::Pass,
    };
    PropertyReport {
        property,
        relations: rels.iter().map(|r| r.name().to_owned()).collect(),
        corpus: corpus.clone(),
        budget,
        outcome,
        instances_checked,
        elapsed_ms: started.elapsed().as_millis(),
    }
}

/// Every pair of one-step branches closes with at most one step on each
/// side: the branches are equal, one steps to the other, or they share a
/// one-step reduct.
pub fn check_diamond(rel: &Relation, corpus: &CorpusSpec) -> PropertyReport {
    let started = Instant::now();
    let s = scan(gen_terms(corpus), |m| diamond_instance(rel, m));
    report(PropertyKind::Diamond, &[rel], corpus, None, started, s)
}

fn diamond_instance(rel: &Relation, m: &Term) -> Verdict<Counterexample> {
    let found = diamond_failure_at(m, |t| Ok::<_, std::convert::Infallible>(rel.reducts(t))).unwrap_or_else(|e| match e {});
    match found {
        Some((l, r)) => Verdict::Fail(Counterexample::fork(m, &l, &r, NOT_ONE_STEP_JOINABLE)),
        None => Verdict::Closed,
    }
}

/// For `m1 ∈ r(m)` and `m2 ∈ s(m)`: some `n` with `m1 →s* n` and
/// `m2 →r= n`.
pub fn check_strong_commutation(r: &Relation, s: &Relation, corpus: &CorpusSpec, budget: Budget) -> PropertyReport {
    let started = Instant::now();
    let sc = scan(gen_terms(corpus), |m| strong_commutation_instance(r, s, m, budget));
    report(PropertyKind::StrongCommutation, &[r, s], corpus, Some(budget), started, sc)
}

fn strong_commutation_instance(r: &Relation, s: &Relation, m: &Term, budget: Budget) -> Verdict<Counterexample> {
    let left = r.reducts(m);
    if left.is_empty() {
        return Verdict::Closed;
    }
    let right = s.reducts(m);
    let mut open = false;
    for m1 in &left {
        let closure = reachable(m1, s, budget.depth, budget.nodes);
        for m2 in &right {
            let targets = r.reducts(m2);
            if closure.terms().any(|n| n == m2 || targets.contains(n)) {
                continue;
            }
            if closure.is_complete() {
                return Verdict::Fail(Counterexample::fork(
                    m,
                    m1,
                    m2,
                    "no term reachable from the left branch equals the right branch or one of its one-step reducts",
                ));
            }
            open = true;
        }
    }
    if open {
        Verdict::Open
    } else {
        Verdict::Closed
    }
}

/// For `m1 ∈ r*(m)` and `m2 ∈ s*(m)`: some `n` with `m1 →s* n` and
/// `m2 →r* n`.
pub fn check_commutation(r: &Relation, s: &Relation, corpus: &CorpusSpec, budget: Budget) -> PropertyReport {
    let started = Instant::now();
    let sc = scan(gen_terms(corpus), |m| commutation_instance(r, s, m, budget));
    report(PropertyKind::Commutation, &[r, s], corpus, Some(budget), started, sc)
}

/// Commutation of `rel` with itself.
pub fn check_confluence(rel: &Relation, corpus: &CorpusSpec, budget: Budget) -> PropertyReport {
    let mut rep = check_commutation(rel, rel, corpus, budget);
    rep.property = PropertyKind::Confluence;
    rep.relations.truncate(1);
    rep
}

fn commutation_instance(r: &Relation, s: &Relation, m: &Term, budget: Budget) -> Verdict<Counterexample> {
    let from_r = reachable(m, r, budget.depth, budget.nodes);
    let from_s = reachable(m, s, budget.depth, budget.nodes);
    if from_r.len() == 1 || from_s.len() == 1 {
        // One side is the trivial path; the other closes against it.
        return Verdict::Closed;
    }
    let mut s_closures: HashMap<&Term, Reachable> = HashMap::new();
    let mut open = !from_r.is_complete() || !from_s.is_complete();
    for m2 in from_s.terms() {
        let back = reachable(m2, r, budget.depth, budget.nodes);
        for m1 in from_r.terms() {
            let fwd = s_closures
                .entry(m1)
                .or_insert_with(|| reachable(m1, s, budget.depth, budget.nodes));
            if join_reachable(fwd, &back).is_some() {
                continue;
            }
            if fwd.is_complete() && back.is_complete() {
                return Verdict::Fail(Counterexample {
                    peak: m.clone(),
                    left: m1.clone(),
                    right: m2.clone(),
                    left_trace: from_r.trace_to(m1).expect("member"),
                    right_trace: from_s.trace_to(m2).expect("member"),
                    reason: "the complete closures of the two branches are disjoint".into(),
                });
            }
            open = true;
        }
    }
    if open {
        Verdict::Open
    } else {
        Verdict::Closed
    }
}

/// For `m1 ∈ rel(m)` and `m2 ∈ rel*(m)`: `m1` and `m2` are joinable.
pub fn check_strip(rel: &Relation, corpus: &CorpusSpec, budget: Budget) -> PropertyReport {
    let started = Instant::now();
    let sc = scan(gen_terms(corpus), |m| strip_instance(rel, m, budget));
    report(PropertyKind::Strip, &[rel], corpus, Some(budget), started, sc)
}

fn strip_instance(rel: &Relation, m: &Term, budget: Budget) -> Verdict<Counterexample> {
    let one = rel.reducts(m);
    if one.is_empty() {
        return Verdict::Closed;
    }
    let many = reachable(m, rel, budget.depth, budget.nodes);
    let mut open = !many.is_complete();
    for m1 in &one {
        let left = reachable(m1, rel, budget.depth, budget.nodes);
        for m2 in many.terms() {
            let right = reachable(m2, rel, budget.depth, budget.nodes);
            if join_reachable(&left, &right).is_some() {
                continue;
            }
            if left.is_complete() && right.is_complete() {
                return Verdict::Fail(Counterexample {
                    peak: m.clone(),
                    left: m1.clone(),
                    right: m2.clone(),
                    left_trace: Trace {
                        steps: vec![m.clone(), m1.clone()],
                    },
                    right_trace: many.trace_to(m2).expect("member"),
                    reason: "the complete closures of the two branches are disjoint".into(),
                });
            }
            open = true;
        }
    }
    if open {
        Verdict::Open
    } else {
        Verdict::Closed
    }
}

/// Re-checks a reported counterexample from scratch: the traces are valid
/// paths from the peak, and the closing condition still fails.
pub fn revalidate(
    kind: PropertyKind,
    r: &Relation,
    s: &Relation,
    budget: Budget,
    cex: &Counterexample,
) -> bool {
    let (lrel, rrel) = match kind {
        PropertyKind::Diamond | PropertyKind::Confluence | PropertyKind::Strip => (r, r),
        PropertyKind::StrongCommutation | PropertyKind::Commutation => (r, s),
    };
    let traces_ok = cex.left_trace.source() == &cex.peak
        && cex.right_trace.source() == &cex.peak
        && cex.left_trace.target() == &cex.left
        && cex.right_trace.target() == &cex.right
        && cex.left_trace.is_valid(lrel)
        && cex.right_trace.is_valid(rrel);
    if !traces_ok {
        return false;
    }
    match kind {
        PropertyKind::Diamond => crate::cex::not_one_step_joinable(&cex.left, &cex.right, r),
        PropertyKind::StrongCommutation => {
            cex.left_trace.len() == 1 && cex.right_trace.len() == 1 && {
                let closure = reachable(&cex.left, s, budget.depth, budget.nodes);
                let targets = r.reducts(&cex.right);
                closure.is_complete() && !closure.terms().any(|n| *n == cex.right || targets.contains(n))
            }
        }
        PropertyKind::Commutation | PropertyKind::Confluence | PropertyKind::Strip => {
            let (ls, rs) = match kind {
                PropertyKind::Commutation => (s, r),
                _ => (r, r),
            };
            let left = reachable(&cex.left, ls, budget.depth, budget.nodes);
            let right = reachable(&cex.right, rs, budget.depth, budget.nodes);
            left.is_complete() && right.is_complete() && join_reachable(&left, &right).is_none()
        }
    }
}
