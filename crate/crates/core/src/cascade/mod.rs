//! The cascade grid: augmented levels `M_1 .. M_k` with bridge indices.
//!
//! Level `i` holds every value of `L_i` merged with the values at odd
//! positions (1, 3, 5, ...) of level `i + 1`. Each entry carries
//!
//! * `p1`: the strict predecessor of the entry's value in `L_i`, and
//! * `p2`: the strict predecessor of the entry's value in level `i + 1`
//!   (absent on the last level),
//!
//! both defined by value with `-1` meaning "below everything". Because
//! the bridges are complete, a query does one binary search on level 1 and
//! then at most one comparison per further level.

mod lookup;
mod stats;
mod validate;

pub use lookup::{cascade_lookup, cascade_lookup_traced, LookupResult, LookupTrace};
pub use stats::{structure_stats, StructureStats};
pub use validate::{validate_structure, Violation, ViolationKind};

use crate::error::{Error, Result};
use crate::grid::GridSet;

/// Which positions of level `i + 1` are copied into level `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Promotion {
    /// Positions 1, 3, 5, ...; level sizes follow `|L_i| + floor(|M_{i+1}| / 2)`.
    #[default]
    OddPositions,
    /// Positions 0, 2, 4, ...; sizes follow `|L_i| + ceil(|M_{i+1}| / 2)`.
    /// This variant can exceed the `2 * sum |L_i|` size bound and fails
    /// [`validate_structure`]; it exists as a negative fixture.
    EvenPositions,
}

/// Ordering of equal values during the merge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    #[default]
    GridFirst,
    PromotedFirst,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BuildOptions {
    pub promotion: Promotion,
    pub tie_break: TieBreak,
}

/// One augmented level in struct-of-arrays form.
#[derive(Debug, Clone, PartialEq)]
pub struct CascadeLevel {
    pub values: Vec<f64>,
    pub p1: Vec<i64>,
    /// `None` on the last level.
    pub p2: Option<Vec<i64>>,
}

impl CascadeLevel {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn entry(&self, t: usize) -> CascadeEntry {
        CascadeEntry {
            value: self.values[t],
            p1: self.p1[t],
            p2: self.p2.as_ref().map(|p2| p2[t]),
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = CascadeEntry> + '_ {
        (0..self.len()).map(|t| self.entry(t))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CascadeEntry {
    pub value: f64,
    pub p1: i64,
    pub p2: Option<i64>,
}

/// A built cascade. Immutable; share freely across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct CascadeGrid {
    grid_sizes: Vec<usize>,
    levels: Vec<CascadeLevel>,
}

/// Unchecked cascade parts, as read from a snapshot or taken apart for
/// fault injection. Becomes a [`CascadeGrid`] only through validation.
#[derive(Debug, Clone, PartialEq)]
pub struct RawCascade {
    pub grid_sizes: Vec<usize>,
    pub levels: Vec<CascadeLevel>,
}

impl CascadeGrid {
    pub fn k(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[CascadeLevel] {
        &self.levels
    }

    pub fn level(&self, i: usize) -> &CascadeLevel {
        &self.levels[i]
    }

    pub fn grid_sizes(&self) -> &[usize] {
        &self.grid_sizes
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(CascadeLevel::len).collect()
    }

    pub fn total_entries(&self) -> usize {
        self.levels.iter().map(CascadeLevel::len).sum()
    }

    pub fn into_raw(self) -> RawCascade {
        RawCascade {
            grid_sizes: self.grid_sizes,
            levels: self.levels,
        }
    }

    /// Errors unless `grids` has the shape this cascade was built from.
    pub fn check_shape(&self, grids: &GridSet) -> Result<()> {
        if grids.k() != self.k() {
            return Err(Error::StructureMismatch(format!(
                "cascade has {} levels, grid set has {} grids",
                self.k(),
                grids.k()
            )));
        }
        for (i, (g, &n)) in grids.grids().iter().zip(&self.grid_sizes).enumerate() {
            if g.len() != n {
                return Err(Error::StructureMismatch(format!(
                    "grid {} has {} values, cascade expects {n}",
                    i + 1,
                    g.len()
                )));
            }
        }
        Ok(())
    }
}

impl RawCascade {
    pub fn validate(&self, grids: &GridSet) -> Vec<Violation> {
        validate::validate_parts(&self.grid_sizes, &self.levels, grids)
    }

    /// Rebuilds `L_1 .. L_k` from the levels alone: `L_k = M_k` and
    /// `L_i = M_i` minus the promoted values of `M_{i+1}` (as multisets).
    pub fn recover_grids(&self) -> std::result::Result<GridSet, Vec<Violation>> {
        validate::recover_grids(&self.levels)
    }

    /// Validates against `grids` and seals the structure.
    pub fn into_cascade(self, grids: &GridSet) -> std::result::Result<CascadeGrid, Vec<Violation>> {
        let violations = self.validate(grids);
        if violations.is_empty() {
            Ok(CascadeGrid {
                grid_sizes: self.grid_sizes,
                levels: self.levels,
            })
        } else {
            Err(violations)
        }
    }

    /// Validates against the grids recovered from the levels themselves.
    pub fn into_cascade_self_checked(self) -> std::result::Result<CascadeGrid, Vec<Violation>> {
        let grids = self.recover_grids()?;
        self.into_cascade(&grids)
    }
}

pub fn build_cascade(grids: &GridSet) -> CascadeGrid {
    build_cascade_with(grids, BuildOptions::default())
}

/// Builds from level k down to level 1 in time linear in the output size.
pub fn build_cascade_with(grids: &GridSet, options: BuildOptions) -> CascadeGrid {
    let k = grids.k();
    let mut levels: Vec<CascadeLevel> = Vec::with_capacity(k);
    for i in (0..k).rev() {
        let own = grids.grid(i).values();
        let level = match levels.last() {
            None => CascadeLevel {
                values: own.to_vec(),
                p1: bridges(own, own),
                p2: None,
            },
            Some(next) => {
                let values = merge(own, &promoted(&next.values, options.promotion), options.tie_break);
                CascadeLevel {
                    p1: bridges(&values, own),
                    p2: Some(bridges(&values, &next.values)),
                    values,
                }
            }
        };
        levels.push(level);
    }
    levels.reverse();
    CascadeGrid {
        grid_sizes: grids.sizes(),
        levels,
    }
}

fn promoted(values: &[f64], promotion: Promotion) -> Vec<f64> {
    let skip = match promotion {
        Promotion::OddPositions => 1,
        Promotion::EvenPositions => 0,
    };
    values.iter().skip(skip).step_by(2).copied().collect()
}

fn merge(own: &[f64], promoted: &[f64], tie_break: TieBreak) -> Vec<f64> {
    let mut out = Vec::with_capacity(own.len() + promoted.len());
    let (mut a, mut b) = (0, 0);
    while a < own.len() && b < promoted.len() {
        let take_own = match tie_break {
            TieBreak::GridFirst => own[a] <= promoted[b],
            TieBreak::PromotedFirst => own[a] < promoted[b],
        };
        if take_own {
            out.push(own[a]);
            a += 1;
        } else {
            out.push(promoted[b]);
            b += 1;
        }
    }
    out.extend_from_slice(&own[a..]);
    out.extend_from_slice(&promoted[b..]);
    out
}

/// For each of `values` (sorted), the strict predecessor in `target` (sorted).
fn bridges(values: &[f64], target: &[f64]) -> Vec<i64> {
    let mut t = 0;
    values
        .iter()
        .map(|&v| {
            while t < target.len() && target[t] <= v {
                t += 1;
            }
            t as i64 - 1
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture_grids() -> GridSet {
        GridSet::new(vec![
            vec![1.0, 2.0, 3.0, 4.0, 5.0],
            vec![1.5, 2.5, 3.5, 4.5, 5.5, 6.5],
            vec![0.5, 1.5, 2.5, 3.5],
        ])
        .unwrap()
    }

    fn unit_shape(sizes: &[usize]) -> GridSet {
        GridSet::new(
            sizes
                .iter()
                .map(|&n| (0..n).map(|t| t as f64).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn fixture_level_sizes() {
        let c = build_cascade(&fixture_grids());
        assert_eq!(c.level_sizes(), vec![9, 8, 4]);
        assert_eq!(c.total_entries(), 21);
    }

    #[test]
    fn fixture_levels_by_hand() {
        let c = build_cascade(&fixture_grids());
        // M_3 = L_3; M_2 = L_2 + {1.5, 3.5}; M_1 = L_1 + {1.5, 3.5, 4.5, 6.5}.
        assert_eq!(c.level(2).values, vec![0.5, 1.5, 2.5, 3.5]);
        assert_eq!(c.level(1).values, vec![1.5, 1.5, 2.5, 3.5, 3.5, 4.5, 5.5, 6.5]);
        assert_eq!(
            c.level(0).values,
            vec![1.0, 1.5, 2.0, 3.0, 3.5, 4.0, 4.5, 5.0, 6.5]
        );
        assert_eq!(c.level(0).p1, vec![0, 0, 1, 2, 2, 3, 3, 4, 4]);
        assert_eq!(c.level(0).p2.as_deref(), Some(&[-1, 1, 1, 2, 4, 4, 5, 5, 7][..]));
        // Equal values share bridges.
        assert_eq!(c.level(1).p1[..2], [0, 0]);
        assert_eq!(c.level(1).p2.as_deref().unwrap()[..2], [1, 1]);
        assert!(c.level(2).p2.is_none());
    }

    #[test]
    fn single_grid_is_identity() {
        let c = build_cascade(&GridSet::new(vec![vec![1.0, 2.0, 3.0]]).unwrap());
        assert_eq!(c.k(), 1);
        assert_eq!(c.level(0).values, vec![1.0, 2.0, 3.0]);
        assert_eq!(c.level(0).p1, vec![0, 1, 2]);
        assert!(c.level(0).p2.is_none());
    }

    #[test]
    fn duplicate_values_get_last_index() {
        let c = build_cascade(&GridSet::new(vec![vec![1.0, 2.0, 2.0, 3.0]]).unwrap());
        assert_eq!(c.level(0).p1, vec![0, 2, 2, 3]);
    }

    #[test]
    fn size_recurrence_floor_and_ceil() {
        let g = unit_shape(&[1, 1, 1, 1, 3]);
        assert_eq!(build_cascade(&g).level_sizes(), vec![2, 2, 2, 2, 3]);
        let ceil = build_cascade_with(
            &g,
            BuildOptions {
                promotion: Promotion::EvenPositions,
                ..Default::default()
            },
        );
        assert_eq!(ceil.level_sizes(), vec![3, 3, 3, 3, 3]);
    }

    #[test]
    fn tie_break_changes_order_not_bridges() {
        let g = GridSet::new(vec![vec![1.0, 2.0], vec![0.0, 2.0, 2.0, 5.0]]).unwrap();
        let a = build_cascade(&g);
        let b = build_cascade_with(
            &g,
            BuildOptions {
                tie_break: TieBreak::PromotedFirst,
                ..Default::default()
            },
        );
        // Values are numerically identical, so the by-value bridges agree too.
        assert_eq!(a.level(0).values, b.level(0).values);
        assert_eq!(a.level(0).p1, b.level(0).p1);
        assert_eq!(a.level(0).p2, b.level(0).p2);
    }

    #[test]
    fn deterministic() {
        assert_eq!(build_cascade(&fixture_grids()), build_cascade(&fixture_grids()));
    }

    #[test]
    fn shape_check() {
        let c = build_cascade(&fixture_grids());
        assert!(c.check_shape(&fixture_grids()).is_ok());
        let other = unit_shape(&[5, 6, 3]);
        assert!(matches!(c.check_shape(&other), Err(Error::StructureMismatch(_))));
        assert!(c.check_shape(&unit_shape(&[5, 6])).is_err());
    }
}
