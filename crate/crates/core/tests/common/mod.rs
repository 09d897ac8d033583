#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::HashMap;

use confluence_core::Term;
use proptest::prelude::*;

/// Exact-height counts from the height equations, kept separate from the
/// library's cumulative recurrence:
/// e(0,c) = c,
/// e(h,c) = e(h-1,c+1) + 2·e(h-1,c)·L(h-2,c) + e(h-1,c)²,
/// with L(k,c) the sum of e(0..=k, c).
pub fn exact_count(h: usize, c: usize, memo: &mut HashMap<(usize, usize), u128>) -> u128 {
    if let Some(&n) = memo.get(&(h, c)) {
        return n;
    }
    let n = if h == 0 {
        c as u128
    } else {
        let top = exact_count(h - 1, c, memo);
        let lower: u128 = (0..h - 1).map(|k| exact_count(k, c, memo)).sum();
        exact_count(h - 1, c + 1, memo) + 2 * top * lower + top * top
    };
    memo.insert((h, c), n);
    n
}

pub fn oracle_count(h: usize, c: usize) -> u128 {
    let mut memo = HashMap::new();
    (0..=h).map(|k| exact_count(k, c, &mut memo)).sum()
}

fn rank(t: &Term) -> u8 {
    match t {
        Term::Var(_) => 0,
        Term::Lam(_) => 1,
        Term::App(..) => 2,
    }
}

/// Canonical order: height, then constructor, then children left to right.
pub fn canonical_cmp(a: &Term, b: &Term) -> Ordering {
    a.height()
        .cmp(&b.height())
        .then_with(|| rank(a).cmp(&rank(b)))
        .then_with(|| match (a, b) {
            (Term::Var(i), Term::Var(j)) => i.cmp(j),
            (Term::Lam(x), Term::Lam(y)) => canonical_cmp(x, y),
            (Term::App(f, x), Term::App(g, y)) => canonical_cmp(f, g).then_with(|| canonical_cmp(x, y)),
            _ => unreachable!("same rank"),
        })
}

/// Terms whose free indices are below `ctx`.
pub fn arb_term(ctx: usize) -> BoxedStrategy<Term> {
    arb_term_sized(ctx, 5)
}

pub fn arb_term_sized(ctx: usize, depth: u32) -> BoxedStrategy<Term> {
    if depth == 0 {
        return if ctx == 0 {
            Just(Term::identity()).boxed()
        } else {
            (0..ctx).prop_map(Term::Var).boxed()
        };
    }
    let leaf = arb_term_sized(ctx, 0);
    prop_oneof![
        1 => leaf,
        2 => arb_term_sized(ctx + 1, depth - 1).prop_map(Term::lam),
        2 => (arb_term_sized(ctx, depth - 1), arb_term_sized(ctx, depth - 1)).prop_map(|(f, a)| Term::app(f, a)),
    ]
    .boxed()
}

/// Applications of λ-terms, so that redexes are common.
pub fn arb_redexy(ctx: usize) -> BoxedStrategy<Term> {
    prop_oneof![
        arb_term(ctx),
        (arb_term_sized(ctx + 1, 3), arb_term_sized(ctx, 3)).prop_map(|(b, a)| Term::app(Term::lam(b), a)),
        (arb_term_sized(ctx + 2, 3), arb_term_sized(ctx, 3), arb_term_sized(ctx, 2))
            .prop_map(|(b, a, c)| Term::app(Term::app(Term::lam(Term::lam(b)), a), c)),
    ]
    .boxed()
}
