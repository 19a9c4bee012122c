//! Python bindings for `fcgrid-core`.
//!
//! Every core error surfaces as `ValueError`.

use std::fmt::Display;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyBytes, PyDict};

use fcgrid_core::io::{decode_cascade, decode_cascade_with, encode_cascade};
use fcgrid_core::{self as core, BuildOptions, CascadeGrid, EnergyGrid, Promotion, TieBreak};

fn value_error(e: impl Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// k sorted energy grids.
#[pyclass(frozen, module = "fcgrid")]
struct GridSet {
    inner: core::GridSet,
}

#[pymethods]
impl GridSet {
    #[new]
    fn new(grids: Vec<Vec<f64>>) -> PyResult<Self> {
        core::GridSet::new(grids).map(|inner| Self { inner }).map_err(value_error)
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn sizes(&self) -> Vec<usize> {
        self.inner.sizes()
    }

    fn grids(&self) -> Vec<Vec<f64>> {
        self.inner.grids().iter().map(|g| g.to_vec()).collect()
    }

    fn __len__(&self) -> usize {
        self.inner.k()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("GridSet(k={}, sizes={:?})", self.inner.k(), self.inner.sizes())
    }
}

/// Fractional cascade over a `GridSet`.
#[pyclass(frozen, module = "fcgrid")]
struct Cascade {
    inner: CascadeGrid,
}

#[pymethods]
impl Cascade {
    #[new]
    #[pyo3(signature = (grids, *, even_promotion = false, promoted_first = false))]
    fn new(grids: &GridSet, even_promotion: bool, promoted_first: bool) -> Self {
        let options = BuildOptions {
            promotion: if even_promotion {
                Promotion::EvenPositions
            } else {
                Promotion::OddPositions
            },
            tie_break: if promoted_first {
                TieBreak::PromotedFirst
            } else {
                TieBreak::GridFirst
            },
        };
        Self {
            inner: core::build_cascade_with(&grids.inner, options),
        }
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn level_sizes(&self) -> Vec<usize> {
        self.inner.level_sizes()
    }

    #[getter]
    fn total_entries(&self) -> usize {
        self.inner.total_entries()
    }

    /// Per-grid indices of the largest value <= key, clamped to 0.
    fn lookup(&self, key: f64) -> PyResult<Vec<usize>> {
        self.inner.lookup(key).map(|r| r.indices).map_err(value_error)
    }

    fn lookup_traced<'py>(&self, py: Python<'py>, key: f64) -> PyResult<Bound<'py, PyDict>> {
        let t = self.inner.lookup_traced(key).map_err(value_error)?;
        let d = PyDict::new(py);
        d.set_item("indices", &t.result.indices)?;
        d.set_item("binary_searches", t.binary_searches)?;
        d.set_item("binary_search_comparisons", t.binary_search_comparisons)?;
        d.set_item("per_level_comparisons", &t.per_level_comparisons)?;
        d.set_item("total_comparisons", t.total_comparisons())?;
        Ok(d)
    }

    /// Violations against `grids`, one message each; empty when valid.
    fn validate(&self, grids: &GridSet) -> Vec<String> {
        core::validate_structure(&self.inner, &grids.inner)
            .iter()
            .map(ToString::to_string)
            .collect()
    }

    fn stats<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let s = core::structure_stats(&self.inner);
        let d = PyDict::new(py);
        d.set_item("k", s.k)?;
        d.set_item("level_sizes", &s.level_sizes)?;
        d.set_item("total_entries", s.total_entries)?;
        d.set_item("total_grid", s.total_grid)?;
        d.set_item("ratio", s.ratio)?;
        d.set_item("memory_bytes", s.memory_bytes)?;
        d.set_item("within_bound", s.within_bound())?;
        Ok(d)
    }

    fn to_bytes<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        PyBytes::new(py, &encode_cascade(&self.inner))
    }

    /// Decodes a snapshot. With `grids`, it is checked against them;
    /// otherwise against the grids the snapshot implies.
    #[staticmethod]
    #[pyo3(signature = (data, grids = None))]
    fn from_bytes(data: &[u8], grids: Option<&GridSet>) -> PyResult<Self> {
        let inner = match grids {
            Some(g) => decode_cascade_with(data, &g.inner),
            None => decode_cascade(data),
        }
        .map_err(value_error)?;
        Ok(Self { inner })
    }

    fn __repr__(&self) -> String {
        format!("Cascade(k={}, level_sizes={:?})", self.inner.k(), self.inner.level_sizes())
    }
}

/// One nuclide: an energy grid with its pointwise cross sections.
#[pyclass(frozen, module = "fcgrid")]
struct NuclideTable {
    inner: core::NuclideTable,
}

#[pymethods]
impl NuclideTable {
    #[new]
    fn new(grid: Vec<f64>, sigma: Vec<f64>) -> PyResult<Self> {
        let grid = EnergyGrid::new(grid).map_err(value_error)?;
        core::NuclideTable::new(grid, sigma)
            .map(|inner| Self { inner })
            .map_err(value_error)
    }

    /// Lin-lin interpolation at `key` in the segment starting at `idx`.
    fn interp(&self, idx: usize, key: f64) -> PyResult<f64> {
        core::interp_sigma(&self.inner, idx, key).map_err(value_error)
    }
}

fn core_tables(list: &[PyRef<'_, NuclideTable>]) -> Vec<core::NuclideTable> {
    list.iter().map(|t| t.inner.clone()).collect()
}

#[pyfunction]
fn naive_lookup(grids: &GridSet, key: f64) -> PyResult<Vec<usize>> {
    core::naive_lookup(&grids.inner, key)
        .map(|r| r.indices)
        .map_err(value_error)
}

/// Index of the last value <= `key`, or -1 when `key` precedes them all.
#[pyfunction]
fn strict_predecessor(values: Vec<f64>, key: f64) -> PyResult<isize> {
    core::strict_predecessor(&values, key).map_err(value_error)
}

#[pyfunction]
fn paper_example() -> GridSet {
    GridSet {
        inner: core::paper_example_gridset(),
    }
}

#[pyfunction]
#[pyo3(signature = (k = 8, size_min = 64, size_max = 1024, seed = 0, duplicate_fraction = 0.0))]
fn generate(
    k: usize,
    size_min: usize,
    size_max: usize,
    seed: u64,
    duplicate_fraction: f64,
) -> PyResult<GridSet> {
    let spec = core::GenSpec {
        k,
        size_min,
        size_max,
        seed,
        duplicate_fraction,
        ..Default::default()
    };
    let doc = core::generate_gridset(&spec).map_err(value_error)?;
    Ok(GridSet { inner: doc.grids })
}

#[pyfunction]
fn parse_grids(text: &str) -> PyResult<GridSet> {
    core::io::parse_gridset(text)
        .map(|inner| GridSet { inner })
        .map_err(value_error)
}

#[pyfunction]
fn write_grids(grids: &GridSet) -> String {
    core::io::write_gridset(&grids.inner)
}

/// Grid set formed by the tables' energy grids, in order.
#[pyfunction]
fn tables_gridset(tables: Vec<PyRef<'_, NuclideTable>>) -> PyResult<GridSet> {
    core::xsec::tables_gridset(&core_tables(&tables))
        .map(|inner| GridSet { inner })
        .map_err(value_error)
}

#[pyfunction]
fn eval_micro_all(tables: Vec<PyRef<'_, NuclideTable>>, cascade: &Cascade, key: f64) -> PyResult<Vec<f64>> {
    core::eval_micro_all(&core_tables(&tables), &cascade.inner, key).map_err(value_error)
}

/// `material` is a list of (nuclide index, number density) pairs.
#[pyfunction]
fn eval_macro(
    material: Vec<(usize, f64)>,
    tables: Vec<PyRef<'_, NuclideTable>>,
    cascade: &Cascade,
    key: f64,
) -> PyResult<f64> {
    let material = core::Material::new(material).map_err(value_error)?;
    core::eval_macro(&material, &core_tables(&tables), &cascade.inner, key).map_err(value_error)
}

#[pymodule]
pub fn fcgrid(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<GridSet>()?;
    m.add_class::<Cascade>()?;
    m.add_class::<NuclideTable>()?;
    m.add_function(wrap_pyfunction!(naive_lookup, m)?)?;
    m.add_function(wrap_pyfunction!(strict_predecessor, m)?)?;
    m.add_function(wrap_pyfunction!(paper_example, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(parse_grids, m)?)?;
    m.add_function(wrap_pyfunction!(write_grids, m)?)?;
    m.add_function(wrap_pyfunction!(tables_gridset, m)?)?;
    m.add_function(wrap_pyfunction!(eval_micro_all, m)?)?;
    m.add_function(wrap_pyfunction!(eval_macro, m)?)?;
    Ok(())
}
