use std::ops::Deref;

use crate::error::{Error, Result};

/// A sorted energy grid (eV). Non-empty, non-decreasing, finite.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyGrid(Vec<f64>);

impl EnergyGrid {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        check_grid(&values).map_err(|(index, reason)| Error::InvalidArgument(format!(
            "energy grid invalid at index {index}: {reason}"
        )))?;
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for EnergyGrid {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// Returns the first offending position and why.
pub(crate) fn check_grid(values: &[f64]) -> std::result::Result<(), (usize, String)> {
    if values.is_empty() {
        return Err((0, "grid is empty".into()));
    }
    for (t, v) in values.iter().enumerate() {
        if !v.is_finite() {
            return Err((t, format!("value {v} is not finite")));
        }
        if t > 0 && values[t - 1] > *v {
            return Err((t, format!("not sorted ({} > {v})", values[t - 1])));
        }
    }
    Ok(())
}

/// The k original grids `L_1 .. L_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSet {
    grids: Vec<EnergyGrid>,
}

impl GridSet {
    /// Validates every grid; errors name the 1-based grid and 0-based index.
    pub fn new(grids: Vec<Vec<f64>>) -> Result<Self> {
        if grids.is_empty() {
            return Err(Error::BuildRejected {
                grid: 0,
                index: 0,
                reason: "grid set is empty".into(),
            });
        }
        let grids = grids
            .into_iter()
            .enumerate()
            .map(|(i, values)| {
                check_grid(&values).map_err(|(index, reason)| Error::BuildRejected {
                    grid: i + 1,
                    index,
                    reason,
                })?;
                Ok(EnergyGrid(values))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { grids })
    }

    pub fn from_grids(grids: Vec<EnergyGrid>) -> Result<Self> {
        if grids.is_empty() {
            return Err(Error::BuildRejected {
                grid: 0,
                index: 0,
                reason: "grid set is empty".into(),
            });
        }
        Ok(Self { grids })
    }

    pub fn k(&self) -> usize {
        self.grids.len()
    }

    pub fn grids(&self) -> &[EnergyGrid] {
        &self.grids
    }

    pub fn grid(&self, i: usize) -> &EnergyGrid {
        &self.grids[i]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.grids.iter().map(|g| g.len()).collect()
    }

    pub fn total_len(&self) -> usize {
        self.grids.iter().map(|g| g.len()).sum()
    }

    /// Mean grid length.
    pub fn mean_len(&self) -> f64 {
        self.total_len() as f64 / self.k() as f64
    }

    /// Smallest and largest value over all grids.
    pub fn span(&self) -> (f64, f64) {
        self.grids.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), g| {
            (lo.min(g[0]), hi.max(g[g.len() - 1]))
        })
    }

    pub fn into_vecs(self) -> Vec<Vec<f64>> {
        self.grids.into_iter().map(EnergyGrid::into_inner).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_grids_with_location() {
        assert!(matches!(
            GridSet::new(vec![]),
            Err(Error::BuildRejected { grid: 0, .. })
        ));
        assert!(matches!(
            GridSet::new(vec![vec![1.0], vec![]]),
            Err(Error::BuildRejected { grid: 2, index: 0, .. })
        ));
        assert!(matches!(
            GridSet::new(vec![vec![1.0, 3.0, 2.0]]),
            Err(Error::BuildRejected { grid: 1, index: 2, .. })
        ));
        assert!(matches!(
            GridSet::new(vec![vec![1.0], vec![0.0, f64::NAN]]),
            Err(Error::BuildRejected { grid: 2, index: 1, .. })
        ));
        assert!(GridSet::new(vec![vec![f64::INFINITY]]).is_err());
    }

    #[test]
    fn duplicates_are_legal() {
        let g = GridSet::new(vec![vec![1.0, 1.0, 2.0]]).unwrap();
        assert_eq!(g.sizes(), vec![3]);
        assert_eq!(g.span(), (1.0, 2.0));
    }
}
