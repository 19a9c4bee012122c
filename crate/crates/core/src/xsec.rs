//! Microscopic and macroscopic cross sections on top of lookup indices.
//!
//! Interpolation is lin-lin between adjacent grid points. Outside a segment
//! (above the last point, below the first, or across a doubled point) the
//! tabulated value at the index is returned unchanged.

use crate::cascade::CascadeGrid;
use crate::error::{check_key, Error, Result};
use crate::grid::{EnergyGrid, GridSet};

/// Cross sections (barns) tabulated on one nuclide's energy grid.
#[derive(Debug, Clone, PartialEq)]
pub struct NuclideTable {
    grid: EnergyGrid,
    sigma: Vec<f64>,
}

impl NuclideTable {
    pub fn new(grid: EnergyGrid, sigma: Vec<f64>) -> Result<Self> {
        if sigma.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "{} sigma values for a grid of {} points",
                sigma.len(),
                grid.len()
            )));
        }
        if let Some(t) = sigma.iter().position(|s| !s.is_finite() || *s < 0.0) {
            return Err(Error::InvalidArgument(format!(
                "sigma[{t}] = {} is not a finite non-negative value",
                sigma[t]
            )));
        }
        Ok(Self { grid, sigma })
    }

    pub fn grid(&self) -> &EnergyGrid {
        &self.grid
    }

    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }
}

/// Nuclide ordinals with number densities in atoms/(barn cm).
#[derive(Debug, Clone, PartialEq)]
pub struct Material {
    components: Vec<(usize, f64)>,
}

impl Material {
    pub fn new(components: Vec<(usize, f64)>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidArgument("material has no components".into()));
        }
        if let Some(&(n, d)) = components.iter().find(|(_, d)| !d.is_finite() || *d < 0.0) {
            return Err(Error::InvalidArgument(format!(
                "nuclide {n} has invalid density {d}"
            )));
        }
        Ok(Self { components })
    }

    pub fn components(&self) -> &[(usize, f64)] {
        &self.components
    }
}

/// Grids of `tables` as a grid set, for building a cascade.
pub fn tables_gridset(tables: &[NuclideTable]) -> Result<GridSet> {
    GridSet::from_grids(tables.iter().map(|t| t.grid.clone()).collect())
}

/// Lin-lin cross section at `key`, given `idx` = clamped predecessor of
/// `key` in the table's grid.
pub fn interp_sigma(table: &NuclideTable, idx: usize, key: f64) -> Result<f64> {
    check_key(key)?;
    let grid = table.grid.values();
    let sigma = &table.sigma;
    if idx >= grid.len() {
        return Err(Error::InvalidArgument(format!(
            "index {idx} out of range for a grid of {} points",
            grid.len()
        )));
    }
    if idx + 1 == grid.len() || key <= grid[0] || grid[idx] == grid[idx + 1] {
        return Ok(sigma[idx]);
    }
    let (e0, e1) = (grid[idx], grid[idx + 1]);
    let (s0, s1) = (sigma[idx], sigma[idx + 1]);
    Ok(s0 + (key - e0) / (e1 - e0) * (s1 - s0))
}

fn check_tables(tables: &[NuclideTable], cascade: &CascadeGrid) -> Result<()> {
    let sizes = cascade.grid_sizes();
    if tables.len() != sizes.len() {
        return Err(Error::StructureMismatch(format!(
            "{} tables for a cascade of {} levels",
            tables.len(),
            sizes.len()
        )));
    }
    for (i, (t, &n)) in tables.iter().zip(sizes).enumerate() {
        if t.grid.len() != n {
            return Err(Error::StructureMismatch(format!(
                "table {} has {} points, cascade expects {n}",
                i + 1,
                t.grid.len()
            )));
        }
    }
    Ok(())
}

/// Evaluates every table at its precomputed index.
pub fn eval_micro_at(tables: &[NuclideTable], indices: &[usize], key: f64) -> Result<Vec<f64>> {
    tables
        .iter()
        .zip(indices)
        .map(|(t, &idx)| interp_sigma(t, idx, key))
        .collect()
}

/// Microscopic cross section of every nuclide at `key`, one cascade descent.
pub fn eval_micro_all(tables: &[NuclideTable], cascade: &CascadeGrid, key: f64) -> Result<Vec<f64>> {
    check_tables(tables, cascade)?;
    let found = cascade.lookup(key)?;
    eval_micro_at(tables, &found.indices, key)
}

/// Macroscopic cross section (1/cm): sum of density times micro sigma.
pub fn eval_macro(
    material: &Material,
    tables: &[NuclideTable],
    cascade: &CascadeGrid,
    key: f64,
) -> Result<f64> {
    if let Some(&(n, _)) = material.components.iter().find(|(n, _)| *n >= tables.len()) {
        return Err(Error::InvalidArgument(format!(
            "material references nuclide {n}, only {} tables",
            tables.len()
        )));
    }
    let micro = eval_micro_all(tables, cascade, key)?;
    Ok(material.components.iter().map(|&(n, d)| d * micro[n]).sum())
}
