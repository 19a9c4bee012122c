//! Differential verification: cascade lookups against the naive oracle,
//! plus structural and efficiency checks on every traced lookup.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cascade::{build_cascade, validate_structure, CascadeGrid, LookupTrace};
use crate::error::Result;
use crate::gridgen::{generate_gridset, GenSpec};
use crate::grid::GridSet;
use crate::naive::naive_lookup;
use crate::search::search_cost;

#[derive(Debug, Clone, PartialEq)]
pub struct Mismatch {
    pub gridset: usize,
    pub key: f64,
    /// 0-based grid index.
    pub level: usize,
    pub expected: usize,
    pub got: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerifyReport {
    pub gridsets: usize,
    pub keys: usize,
    pub mismatches: usize,
    pub first_mismatch: Option<Mismatch>,
    pub structural_violations: usize,
    pub first_violation: Option<String>,
    pub efficiency_violations: usize,
    pub first_efficiency_violation: Option<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.mismatches == 0 && self.structural_violations == 0 && self.efficiency_violations == 0
    }

    /// Folds `other` in; `first_*` fields keep the earliest entry.
    pub fn merge(&mut self, other: VerifyReport) {
        self.gridsets += other.gridsets;
        self.keys += other.keys;
        self.mismatches += other.mismatches;
        self.structural_violations += other.structural_violations;
        self.efficiency_violations += other.efficiency_violations;
        if self.first_mismatch.is_none() {
            self.first_mismatch = other.first_mismatch;
        }
        if self.first_violation.is_none() {
            self.first_violation = other.first_violation;
        }
        if self.first_efficiency_violation.is_none() {
            self.first_efficiency_violation = other.first_efficiency_violation;
        }
    }

    pub fn to_tsv(&self) -> String {
        let first = self
            .first_mismatch
            .as_ref()
            .map(|m| format!("{}:{:?}:{}:{}:{}", m.gridset, m.key, m.level + 1, m.expected, m.got))
            .unwrap_or_else(|| "-".into());
        format!(
            "gridsets\tkeys\tmismatches\tfirst_mismatch\tstructural_violations\tfirst_violation\tefficiency_violations\tstatus\n\
             {}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            self.gridsets,
            self.keys,
            self.mismatches,
            first,
            self.structural_violations,
            self.first_violation.as_deref().unwrap_or("-"),
            self.efficiency_violations,
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "grid sets tested: {}", self.gridsets)?;
        writeln!(f, "keys checked: {}", self.keys)?;
        writeln!(f, "mismatches: {}", self.mismatches)?;
        if let Some(m) = &self.first_mismatch {
            writeln!(
                f,
                "  first: set {} key {:?} grid {} expected {} got {}",
                m.gridset,
                m.key,
                m.level + 1,
                m.expected,
                m.got
            )?;
        }
        writeln!(f, "structural violations: {}", self.structural_violations)?;
        if let Some(v) = &self.first_violation {
            writeln!(f, "  first: {v}")?;
        }
        writeln!(f, "efficiency violations: {}", self.efficiency_violations)?;
        if let Some(v) = &self.first_efficiency_violation {
            writeln!(f, "  first: {v}")?;
        }
        write!(f, "result: {}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

/// Every distinct grid value, its neighbours one ulp away, and
/// `min - 1` / `max + 1`. Sorted, deduplicated.
pub fn boundary_keys(grids: &GridSet) -> Vec<f64> {
    let mut keys: Vec<f64> = grids
        .grids()
        .iter()
        .flat_map(|g| g.iter().flat_map(|&v| [v.next_down(), v, v.next_up()]))
        .collect();
    let (lo, hi) = grids.span();
    keys.push(lo - 1.0);
    keys.push(hi + 1.0);
    keys.sort_by(f64::total_cmp);
    keys.dedup();
    keys
}

/// `count` keys: half uniform over `[min - 1, max + 1]`, half log-uniform
/// over the grid span when it is positive (uniform otherwise).
pub fn random_keys(grids: &GridSet, count: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = grids.span();
    (0..count)
        .map(|i| {
            let u: f64 = rng.random();
            if i % 2 == 1 && lo > 0.0 && hi > lo {
                (lo.ln() + u * (hi.ln() - lo.ln())).exp()
            } else {
                (lo - 1.0) + u * ((hi + 1.0) - (lo - 1.0))
            }
        })
        .collect()
}

pub fn verification_keys(grids: &GridSet, random: usize, seed: u64) -> Vec<f64> {
    let mut keys = boundary_keys(grids);
    keys.extend(random_keys(grids, random, seed));
    keys
}

/// Problems with one traced lookup, if any.
pub fn efficiency_problem(cascade: &CascadeGrid, trace: &LookupTrace) -> Option<String> {
    let limit = search_cost(cascade.level(0).len());
    if trace.binary_searches != 1 {
        return Some(format!("{} binary searches", trace.binary_searches));
    }
    if trace.binary_search_comparisons > limit {
        return Some(format!(
            "binary search used {} comparisons, limit {limit}",
            trace.binary_search_comparisons
        ));
    }
    if trace.per_level_comparisons.len() + 1 != cascade.k() {
        return Some("per-level counter missing".into());
    }
    trace
        .per_level_comparisons
        .iter()
        .position(|&c| c > 1)
        .map(|i| {
            format!(
                "level {} used {} comparisons",
                i + 2,
                trace.per_level_comparisons[i]
            )
        })
}

/// Runs the full check set for one grid set. `gridset` labels the report.
pub fn verify_gridset(gridset: usize, grids: &GridSet, cascade: &CascadeGrid, keys: &[f64]) -> VerifyReport {
    let mut report = VerifyReport {
        gridsets: 1,
        ..Default::default()
    };
    let violations = validate_structure(cascade, grids);
    report.structural_violations = violations.len();
    report.first_violation = violations.first().map(ToString::to_string);
    if !violations.is_empty() {
        // Lookups on a broken structure prove nothing.
        return report;
    }
    for &key in keys {
        report.keys += 1;
        let (Ok(trace), Ok(expected)) = (cascade.lookup_traced(key), naive_lookup(grids, key)) else {
            continue;
        };
        if let Some(level) = (0..grids.k()).find(|&i| trace.result.indices[i] != expected.indices[i]) {
            report.mismatches += 1;
            report.first_mismatch.get_or_insert(Mismatch {
                gridset,
                key,
                level,
                expected: expected.indices[level],
                got: trace.result.indices[level],
            });
        }
        if let Some(problem) = efficiency_problem(cascade, &trace) {
            report.efficiency_violations += 1;
            report
                .first_efficiency_violation
                .get_or_insert(format!("set {gridset} key {key:?}: {problem}"));
        }
    }
    report
}

/// Keys-per-set seed for set `index` under a run seed.
fn key_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_mul(0x2545_f491_4f6c_dd1d).wrapping_add(index as u64 + 1)
}

/// Builds and verifies every set. Work is spread over the rayon pool; the
/// merged report is independent of thread count.
pub fn verify_sets(sets: &[GridSet], random_keys: usize, seed: u64) -> VerifyReport {
    let reports: Vec<VerifyReport> = sets
        .par_iter()
        .enumerate()
        .map(|(i, grids)| {
            let cascade = build_cascade(grids);
            let keys = verification_keys(grids, random_keys, key_seed(seed, i));
            verify_gridset(i, grids, &cascade, &keys)
        })
        .collect();
    reports.into_iter().fold(VerifyReport::default(), |mut acc, r| {
        acc.merge(r);
        acc
    })
}

/// Generator spec for fuzz set `index`: k in 1..=16, sizes within
/// 1..=1024, duplicate fraction alternating 0 and 0.05.
pub fn fuzz_spec(seed: u64, index: usize) -> GenSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(key_seed(seed, index) ^ 0xf0f0_f0f0);
    let a = rng.random_range(1..=1024);
    let b = rng.random_range(1..=1024);
    GenSpec {
        k: rng.random_range(1..=16),
        size_min: a.min(b),
        size_max: a.max(b),
        duplicate_fraction: if index.is_multiple_of(2) { 0.0 } else { 0.05 },
        seed: key_seed(seed, index),
        ..GenSpec::default()
    }
}

pub fn fuzz_gridsets(count: usize, seed: u64) -> Result<Vec<GridSet>> {
    (0..count)
        .map(|i| generate_gridset(&fuzz_spec(seed, i)).map(|d| d.grids))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gridgen::paper_example_gridset;

    #[test]
    fn boundary_keys_cover_edges() {
        let g = paper_example_gridset();
        let keys = boundary_keys(&g);
        assert!(keys.contains(&-0.5));
        assert!(keys.contains(&7.5));
        assert!(keys.contains(&1.5_f64.next_up()));
        assert!(keys.contains(&1.5_f64.next_down()));
        // 12 distinct values, three keys each, plus two outliers.
        assert_eq!(keys.len(), 12 * 3 + 2);
    }

    #[test]
    fn fixture_verifies() {
        let g = paper_example_gridset();
        let r = verify_sets(std::slice::from_ref(&g), 100, 1);
        assert!(r.passed(), "{r}");
        assert_eq!(r.keys, 38 + 100);
    }

    #[test]
    fn broken_structure_is_reported_without_lookups() {
        use crate::cascade::{build_cascade_with, BuildOptions, Promotion};
        let g = crate::gridgen::gridset_with_sizes(&[1, 1, 1, 1, 3], 2, 0.0).unwrap();
        let ceil = build_cascade_with(
            &g,
            BuildOptions {
                promotion: Promotion::EvenPositions,
                ..Default::default()
            },
        );
        let r = verify_gridset(0, &g, &ceil, &boundary_keys(&g));
        assert!(!r.passed());
        assert!(r.structural_violations > 0);
        assert_eq!(r.keys, 0);
    }

    #[test]
    fn merge_is_order_stable() {
        let sets = fuzz_gridsets(6, 3).unwrap();
        let a = verify_sets(&sets, 20, 9);
        let b = verify_sets(&sets, 20, 9);
        assert_eq!(a, b);
        assert_eq!(a.gridsets, 6);
        assert!(a.passed(), "{a}");
    }

    #[test]
    fn fuzz_specs_stay_in_range() {
        for i in 0..50 {
            let s = fuzz_spec(7, i);
            assert!((1..=16).contains(&s.k));
            assert!(1 <= s.size_min && s.size_min <= s.size_max && s.size_max <= 1024);
        }
    }

    #[test]
    fn tsv_has_header_and_row() {
        let r = VerifyReport::default();
        let tsv = r.to_tsv();
        assert_eq!(tsv.lines().count(), 2);
        assert!(tsv.ends_with("PASS\n"));
    }
}
