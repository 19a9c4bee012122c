//! Fixed-cost predecessor search.
//!
//! The search treats the `n + 1` possible answers (`-1 ..= n-1`) as the
//! search space and halves it without branching on the outcome, so every
//! call performs exactly `floor(log2 n) + 1` key comparisons regardless of
//! where the key lands. That makes comparison counts a deterministic function
//! of the array length, which is what the efficiency checks rely on.

use crate::error::{check_key, Result};

/// Receives one tick per `value <= key` evaluation.
pub trait Counter {
    fn tick(&mut self);
}

/// Discards ticks; compiles away in the untraced paths.
#[derive(Debug, Default, Clone, Copy)]
pub struct NoCount;

impl Counter for NoCount {
    #[inline(always)]
    fn tick(&mut self) {}
}

/// Counts ticks.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct Tally(pub usize);

impl Counter for Tally {
    #[inline(always)]
    fn tick(&mut self) {
        self.0 += 1;
    }
}

/// Number of comparisons [`strict_predecessor`] performs on `len` values.
pub fn search_cost(len: usize) -> usize {
    if len == 0 {
        0
    } else {
        len.ilog2() as usize + 1
    }
}

/// `max{t : values[t] <= key}`, or `-1` when `key < values[0]`.
///
/// `values` must be non-decreasing. NaN keys are rejected.
pub fn strict_predecessor(values: &[f64], key: f64) -> Result<isize> {
    check_key(key)?;
    Ok(predecessor_counted(values, key, &mut NoCount))
}

#[inline]
pub(crate) fn predecessor_counted<C: Counter>(values: &[f64], key: f64, counter: &mut C) -> isize {
    // Candidate answers are base ..= base + len - 1, with base starting at -1.
    let mut base: isize = -1;
    let mut len = values.len() + 1;
    while len > 1 {
        let half = len / 2;
        let probe = base + half as isize;
        counter.tick();
        // probe is in 0..values.len() because half >= 1 and half < len.
        if values[probe as usize] <= key {
            base = probe;
        }
        len -= half;
    }
    base
}
