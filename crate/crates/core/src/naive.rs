//! Reference lookups: k independent searches, no shared structure.

use crate::cascade::LookupResult;
use crate::error::{check_key, Error, Result};
use crate::grid::GridSet;
use crate::search::{predecessor_counted, search_cost, NoCount, Tally};

/// Oracle: per grid, the clamped count of values `<= key` minus one.
///
/// Uses `slice::partition_point`, which shares no code with the fixed-cost
/// search the cascade is built on.
pub fn naive_lookup(grids: &GridSet, key: f64) -> Result<LookupResult> {
    check_key(key)?;
    let indices = grids
        .grids()
        .iter()
        .map(|g| g.partition_point(|&v| v <= key).saturating_sub(1))
        .collect();
    Ok(LookupResult { indices })
}

/// k independent fixed-cost binary searches, the baseline the cascade
/// is benchmarked against.
pub fn binary_lookup_into(grids: &GridSet, key: f64, out: &mut [usize]) -> Result<()> {
    check_key(key)?;
    if out.len() != grids.k() {
        return Err(Error::InvalidArgument(format!(
            "output buffer has length {}, grid set has {} grids",
            out.len(),
            grids.k()
        )));
    }
    for (slot, g) in out.iter_mut().zip(grids.grids()) {
        *slot = predecessor_counted(g, key, &mut NoCount).max(0) as usize;
    }
    Ok(())
}

/// As [`binary_lookup_into`], also returning the comparisons made.
pub fn binary_lookup_traced(grids: &GridSet, key: f64) -> Result<(LookupResult, usize)> {
    check_key(key)?;
    let mut tally = Tally::default();
    let indices = grids
        .grids()
        .iter()
        .map(|g| predecessor_counted(g, key, &mut tally).max(0) as usize)
        .collect();
    Ok((LookupResult { indices }, tally.0))
}

/// Comparisons one [`binary_lookup_traced`] call makes on `grids`.
pub fn binary_lookup_cost(grids: &GridSet) -> usize {
    grids.grids().iter().map(|g| search_cost(g.len())).sum()
}
