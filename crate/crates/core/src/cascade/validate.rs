//! Structural checks, recomputed independently of the builder.
//!
//! Bridges are recomputed with a fresh predecessor search per entry rather
//! than the builder's two-pointer sweep.

use std::fmt;

use super::{CascadeGrid, CascadeLevel};
use crate::grid::{check_grid, GridSet};
use crate::search::{predecessor_counted, NoCount};

#[derive(Debug, Clone, PartialEq)]
pub enum ViolationKind {
    /// Level count or a stored grid size disagrees with the grid set.
    Shape { expected: usize, got: usize },
    NonFinite { value: f64 },
    Unsorted,
    /// A value of `L_i` is absent (or under-represented) in level `i`.
    MissingGridValue { grid_index: usize, value: f64 },
    /// Level `i` minus `L_i` is not the promoted part of level `i + 1`.
    Promotion,
    SizeRecurrence { expected: usize, got: usize },
    P1 { expected: i64, got: i64 },
    P2 { expected: i64, got: i64 },
    /// `p2` present on the last level or missing on an inner one.
    P2Presence,
    /// Column lengths inside a level disagree.
    ColumnLength,
    SizeBound { total: usize, limit: usize },
}

/// One failed invariant. `level` and `entry` are 0-based; display is
/// 1-based for levels.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub level: Option<usize>,
    pub entry: Option<usize>,
    pub kind: ViolationKind,
}

impl Violation {
    fn at(level: usize, entry: Option<usize>, kind: ViolationKind) -> Self {
        Self {
            level: Some(level),
            entry,
            kind,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.level, self.entry) {
            (Some(l), Some(e)) => write!(f, "level {} entry {}: ", l + 1, e)?,
            (Some(l), None) => write!(f, "level {}: ", l + 1)?,
            _ => write!(f, "cascade: ")?,
        }
        use ViolationKind::*;
        match &self.kind {
            Shape { expected, got } => write!(f, "shape mismatch, expected {expected}, got {got}"),
            NonFinite { value } => write!(f, "non-finite value {value}"),
            Unsorted => write!(f, "values not sorted"),
            MissingGridValue { grid_index, value } => {
                write!(f, "grid value {value} (index {grid_index}) missing from level")
            }
            Promotion => write!(f, "promoted values differ from odd positions of next level"),
            SizeRecurrence { expected, got } => {
                write!(f, "size recurrence broken, expected {expected} entries, got {got}")
            }
            P1 { expected, got } => write!(f, "p1 is {got}, expected {expected}"),
            P2 { expected, got } => write!(f, "p2 is {got}, expected {expected}"),
            P2Presence => write!(f, "p2 must be stored on every level but the last"),
            ColumnLength => write!(f, "value/p1/p2 columns have different lengths"),
            SizeBound { total, limit } => {
                write!(f, "total size {total} exceeds bound 2*sum|L_i| = {limit}")
            }
        }
    }
}

/// Empty iff every cascade invariant holds for `cascade` built over `grids`.
pub fn validate_structure(cascade: &CascadeGrid, grids: &GridSet) -> Vec<Violation> {
    validate_parts(&cascade.grid_sizes, &cascade.levels, grids)
}

pub(super) fn validate_parts(
    grid_sizes: &[usize],
    levels: &[CascadeLevel],
    grids: &GridSet,
) -> Vec<Violation> {
    let mut out = Vec::new();
    let k = grids.k();
    if levels.len() != k || grid_sizes.len() != k {
        out.push(Violation {
            level: None,
            entry: None,
            kind: ViolationKind::Shape {
                expected: k,
                got: levels.len().min(grid_sizes.len()),
            },
        });
        return out;
    }
    for (i, (&n, g)) in grid_sizes.iter().zip(grids.grids()).enumerate() {
        if n != g.len() {
            out.push(Violation::at(i, None, ViolationKind::Shape { expected: g.len(), got: n }));
        }
    }

    // Per-level value checks first; bridge checks need sorted levels.
    let mut sorted = vec![true; k];
    for (i, level) in levels.iter().enumerate() {
        let columns_ok = level.p1.len() == level.len()
            && level.p2.as_ref().is_none_or(|p2| p2.len() == level.len());
        if !columns_ok {
            out.push(Violation::at(i, None, ViolationKind::ColumnLength));
            sorted[i] = false;
            continue;
        }
        if level.p2.is_some() != (i + 1 < k) {
            out.push(Violation::at(i, None, ViolationKind::P2Presence));
        }
        if let Err((t, _)) = check_grid(&level.values) {
            let v = level.values.get(t).copied().unwrap_or(f64::NAN);
            let kind = if level.values.is_empty() || v.is_finite() {
                ViolationKind::Unsorted
            } else {
                ViolationKind::NonFinite { value: v }
            };
            out.push(Violation::at(i, Some(t), kind));
            sorted[i] = false;
        }
    }

    for (i, level) in levels.iter().enumerate() {
        let own = grids.grid(i).values();
        let next = levels.get(i + 1);
        let expected_len = own.len() + next.map_or(0, |n| n.len() / 2);
        if level.len() != expected_len {
            out.push(Violation::at(
                i,
                None,
                ViolationKind::SizeRecurrence {
                    expected: expected_len,
                    got: level.len(),
                },
            ));
        }
        if !sorted[i] {
            continue;
        }
        if next.is_none_or(|_| sorted[i + 1]) {
            let promoted: Vec<f64> = next
                .map(|n| n.values.iter().skip(1).step_by(2).copied().collect())
                .unwrap_or_default();
            check_composition(i, &level.values, own, &promoted, &mut out);
        }

        for (t, &v) in level.values.iter().enumerate() {
            let expected = predecessor_counted(own, v, &mut NoCount) as i64;
            if level.p1[t] != expected {
                out.push(Violation::at(
                    i,
                    Some(t),
                    ViolationKind::P1 {
                        expected,
                        got: level.p1[t],
                    },
                ));
            }
        }
        if let (Some(p2), Some(next)) = (&level.p2, next) {
            if sorted[i + 1] {
                for (t, &v) in level.values.iter().enumerate() {
                    let expected = predecessor_counted(&next.values, v, &mut NoCount) as i64;
                    if p2[t] != expected {
                        out.push(Violation::at(
                            i,
                            Some(t),
                            ViolationKind::P2 { expected, got: p2[t] },
                        ));
                    }
                }
            }
        }
    }

    let total: usize = levels.iter().map(CascadeLevel::len).sum();
    let limit = 2 * grids.total_len();
    if total > limit {
        out.push(Violation {
            level: None,
            entry: None,
            kind: ViolationKind::SizeBound { total, limit },
        });
    }
    out
}

/// Checks that `level` is exactly `own` plus `promoted` as multisets.
/// All three inputs are sorted.
fn check_composition(i: usize, level: &[f64], own: &[f64], promoted: &[f64], out: &mut Vec<Violation>) {
    let (rest, missing) = split_off(level, own);
    if let Some(&g) = missing.first() {
        out.push(Violation::at(
            i,
            None,
            ViolationKind::MissingGridValue {
                grid_index: g,
                value: own[g],
            },
        ));
    }
    let mismatch = rest
        .iter()
        .zip(promoted)
        .position(|(&(_, a), &b)| a != b)
        .or_else(|| (rest.len() != promoted.len()).then(|| rest.len().min(promoted.len())));
    if let Some(p) = mismatch {
        out.push(Violation::at(i, rest.get(p).map(|&(t, _)| t), ViolationKind::Promotion));
    }
}

/// Removes `own` from `level` (multiset difference). Returns the leftover
/// `(position, value)` pairs and the indices of `own` that found no match.
fn split_off(level: &[f64], own: &[f64]) -> (Vec<(usize, f64)>, Vec<usize>) {
    let mut rest = Vec::new();
    let mut missing = Vec::new();
    let mut g = 0;
    for (t, &v) in level.iter().enumerate() {
        while g < own.len() && own[g] < v {
            missing.push(g);
            g += 1;
        }
        if g < own.len() && own[g] == v {
            g += 1;
        } else {
            rest.push((t, v));
        }
    }
    missing.extend(g..own.len());
    (rest, missing)
}

pub(super) fn recover_grids(levels: &[CascadeLevel]) -> Result<GridSet, Vec<Violation>> {
    if levels.is_empty() {
        return Err(vec![Violation {
            level: None,
            entry: None,
            kind: ViolationKind::Shape { expected: 1, got: 0 },
        }]);
    }
    let mut grids = vec![Vec::new(); levels.len()];
    for (i, level) in levels.iter().enumerate().rev() {
        if let Err((t, _)) = check_grid(&level.values) {
            return Err(vec![Violation::at(i, Some(t), ViolationKind::Unsorted)]);
        }
        let promoted: Vec<f64> = levels
            .get(i + 1)
            .map(|n| n.values.iter().skip(1).step_by(2).copied().collect())
            .unwrap_or_default();
        // Here the promoted values play the "known" part and the rest is L_i.
        let (rest, missing) = split_off(&level.values, &promoted);
        if !missing.is_empty() {
            return Err(vec![Violation::at(i, None, ViolationKind::Promotion)]);
        }
        grids[i] = rest.into_iter().map(|(_, v)| v).collect();
    }
    GridSet::new(grids).map_err(|_| {
        vec![Violation {
            level: None,
            entry: None,
            kind: ViolationKind::Shape { expected: 1, got: 0 },
        }]
    })
}
