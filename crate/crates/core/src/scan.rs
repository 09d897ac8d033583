//! Runs a per-instance check over a corpus, optionally on a worker pool, and
//! keeps the failure with the smallest corpus index.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use rayon::iter::{ParallelBridge, ParallelIterator};

pub const THREADS_ENV: &str = "CONFLUENCE_LAB_THREADS";

pub enum Verdict<C> {
    Closed,
    Fail(C),
    /// The closing search ran out of budget.
    Open,
}

pub struct Scan<C> {
    /// Smallest failing index with its counterexample.
    pub first_failure: Option<(usize, C)>,
    pub open: usize,
    pub total: usize,
}

impl<C> Scan<C> {
    /// Instances that count towards the outcome: all of them on success, up
    /// to and including the first failure otherwise.
    pub fn instances_checked(&self) -> usize {
        match &self.first_failure {
            Some((i, _)) => i + 1,
            None => self.total,
        }
    }
}

/// Worker count from the environment: `None` for the default pool, `Some(0)`
/// for sequential.
pub fn configured_threads() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok()
}

pub fn scan<T, C, I, F>(items: I, check: F) -> Scan<C>
where
    T: Send,
    C: Send,
    I: Iterator<Item = T> + Send,
    F: Fn(&T) -> Verdict<C> + Sync + Send,
{
    match configured_threads() {
        Some(0) => scan_sequential(items, check),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| scan_parallel(items, check)),
            Err(_) => scan_sequential(items, check),
        },
        None => scan_parallel(items, check),
    }
}

fn scan_sequential<T, C, I, F>(items: I, check: F) -> Scan<C>
where
    I: Iterator<Item = T>,
    F: Fn(&T) -> Verdict<C>,
{
    let mut open = 0;
    let mut total = 0;
    for (i, t) in items.enumerate() {
        total += 1;
        match check(&t) {
            Verdict::Closed => {}
            Verdict::Open => open += 1,
            Verdict::Fail(c) => {
                return Scan {
                    first_failure: Some((i, c)),
                    open,
                    total,
                }
            }
        }
    }
    Scan {
        first_failure: None,
        open,
        total,
    }
}

fn scan_parallel<T, C, I, F>(items: I, check: F) -> Scan<C>
where
    T: Send,
    C: Send,
    I: Iterator<Item = T> + Send,
    F: Fn(&T) -> Verdict<C> + Sync + Send,
{
    let best = AtomicUsize::new(usize::MAX);
    let failure: Mutex<Option<(usize, C)>> = Mutex::new(None);
    let open = AtomicUsize::new(0);
    let total = AtomicUsize::new(0);
    items.enumerate().par_bridge().for_each(|(i, t)| {
        total.fetch_add(1, Ordering::Relaxed);
        if i > best.load(Ordering::Relaxed) {
            return;
        }
        match check(&t) {
            Verdict::Closed => {}
            Verdict::Open => {
                open.fetch_add(1, Ordering::Relaxed);
            }
            Verdict::Fail(c) => {
                let mut slot = failure.lock().expect("no panics while held");
                if slot.as_ref().is_none_or(|(j, _)| i < *j) {
                    *slot = Some((i, c));
                    best.fetch_min(i, Ordering::Relaxed);
                }
            }
        }
    });
    Scan {
        first_failure: failure.into_inner().expect("no panics while held"),
        open: open.into_inner(),
        total: total.into_inner(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fail_on_multiples_of_7(n: &usize) -> Verdict<usize> {
        match n {
            n if *n > 0 && n % 7 == 0 => Verdict::Fail(*n),
            n if n % 5 == 0 => Verdict::Open,
            _ => Verdict::Closed,
        }
    }

    #[test]
    fn parallel_reports_minimum() {
        for _ in 0..20 {
            let s = scan_parallel(0..10_000usize, fail_on_multiples_of_7);
            assert_eq!(s.first_failure, Some((7, 7)));
            assert_eq!(s.total, 10_000);
        }
    }

    #[test]
    fn sequential_matches() {
        let s = scan_sequential(0..100usize, fail_on_multiples_of_7);
        assert_eq!(s.first_failure.map(|(i, _)| i), Some(7));
        assert_eq!(s.instances_checked(), 8);
        let s = scan_sequential(0..5usize, fail_on_multiples_of_7);
        assert!(s.first_failure.is_none());
        assert_eq!(s.open, 1);
        assert_eq!(s.instances_checked(), 5);
    }
}
