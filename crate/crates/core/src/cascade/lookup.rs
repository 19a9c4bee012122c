use super::CascadeGrid;
use crate::error::{check_key, Error, Result};
use crate::grid::GridSet;
use crate::search::{predecessor_counted, Counter, NoCount, Tally};

/// Clamped predecessor index into each original grid.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LookupResult {
    pub indices: Vec<usize>,
}

/// A lookup plus the work it did.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LookupTrace {
    /// Always 1: the descent never falls back to searching.
    pub binary_searches: usize,
    pub binary_search_comparisons: usize,
    /// Comparisons made while stepping onto levels 2..=k.
    pub per_level_comparisons: Vec<usize>,
    pub result: LookupResult,
}

impl LookupTrace {
    pub fn total_comparisons(&self) -> usize {
        self.binary_search_comparisons + self.per_level_comparisons.iter().sum::<usize>()
    }
}

trait Instrument {
    fn search(&mut self) -> &mut impl Counter;
    fn level_tick(&mut self, step: usize);
}

impl Instrument for NoCount {
    #[inline(always)]
    fn search(&mut self) -> &mut impl Counter {
        self
    }

    #[inline(always)]
    fn level_tick(&mut self, _step: usize) {}
}

struct TraceCounts {
    search: Tally,
    steps: Vec<usize>,
}

impl Instrument for TraceCounts {
    fn search(&mut self) -> &mut impl Counter {
        &mut self.search
    }

    fn level_tick(&mut self, step: usize) {
        self.steps[step] += 1;
    }
}

impl CascadeGrid {
    fn descend<I: Instrument>(&self, key: f64, out: &mut [usize], inst: &mut I) {
        let mut j = predecessor_counted(&self.levels[0].values, key, inst.search()) as i64;
        for (i, level) in self.levels.iter().enumerate() {
            out[i] = if j < 0 { 0 } else { level.p1[j as usize].max(0) as usize };
            if let Some(p2) = &level.p2 {
                let next = &self.levels[i + 1].values;
                let b = if j < 0 { -1 } else { p2[j as usize] };
                let up = (b + 1) as usize;
                j = if up < next.len() {
                    inst.level_tick(i);
                    if next[up] <= key {
                        b + 1
                    } else {
                        b
                    }
                } else {
                    b
                };
            }
        }
    }

    /// Writes the k clamped indices for `key` into `out` (length k).
    /// Skips the grid-shape check that [`cascade_lookup`] does.
    pub fn lookup_into(&self, key: f64, out: &mut [usize]) -> Result<()> {
        check_key(key)?;
        if out.len() != self.k() {
            return Err(Error::InvalidArgument(format!(
                "output buffer has length {}, cascade has {} levels",
                out.len(),
                self.k()
            )));
        }
        self.descend(key, out, &mut NoCount);
        Ok(())
    }

    pub fn lookup(&self, key: f64) -> Result<LookupResult> {
        let mut indices = vec![0; self.k()];
        self.lookup_into(key, &mut indices)?;
        Ok(LookupResult { indices })
    }

    pub fn lookup_traced(&self, key: f64) -> Result<LookupTrace> {
        check_key(key)?;
        let mut indices = vec![0; self.k()];
        let mut counts = TraceCounts {
            search: Tally::default(),
            steps: vec![0; self.k() - 1],
        };
        self.descend(key, &mut indices, &mut counts);
        Ok(LookupTrace {
            binary_searches: 1,
            binary_search_comparisons: counts.search.0,
            per_level_comparisons: counts.steps,
            result: LookupResult { indices },
        })
    }
}

/// Indices of `key` in every grid via one search on level 1 and one
/// bridge step per further level.
pub fn cascade_lookup(cascade: &CascadeGrid, grids: &GridSet, key: f64) -> Result<LookupResult> {
    check_key(key)?;
    cascade.check_shape(grids)?;
    cascade.lookup(key)
}

pub fn cascade_lookup_traced(cascade: &CascadeGrid, grids: &GridSet, key: f64) -> Result<LookupTrace> {
    check_key(key)?;
    cascade.check_shape(grids)?;
    cascade.lookup_traced(key)
}
