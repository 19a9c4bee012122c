//! Cascade vs k independent binary searches on one key stream.

use std::fmt;
use std::hint::black_box;
use std::time::Instant;

use crate::cascade::CascadeGrid;
use crate::error::Result;
use crate::grid::GridSet;
use crate::naive::{binary_lookup_cost, binary_lookup_into, binary_lookup_traced};
use crate::search::search_cost;

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub queries: usize,
    pub k: usize,
    pub cascade_ns_per_query: f64,
    pub naive_ns_per_query: f64,
    pub cascade_mean_comparisons: f64,
    pub cascade_max_comparisons: usize,
    pub naive_mean_comparisons: f64,
    pub naive_max_comparisons: usize,
    /// `floor(log2 |M_1|) + 1 + (k - 1)`.
    pub cascade_bound: usize,
    /// `sum_i floor(log2 |L_i|) + 1`.
    pub naive_bound: usize,
    /// Queries whose results differ between the two paths.
    pub disagreements: usize,
}

impl BenchReport {
    pub fn speedup(&self) -> f64 {
        self.naive_ns_per_query / self.cascade_ns_per_query
    }

    pub fn bound_holds(&self) -> bool {
        self.cascade_max_comparisons <= self.cascade_bound && self.disagreements == 0
    }

    pub fn to_tsv(&self) -> String {
        format!(
            "queries\tk\tcascade_ns\tnaive_ns\tspeedup\tcascade_mean_cmp\tcascade_max_cmp\tcascade_bound\tnaive_mean_cmp\tnaive_bound\tstatus\n\
             {}\t{}\t{:.1}\t{:.1}\t{:.3}\t{:.3}\t{}\t{}\t{:.3}\t{}\t{}\n",
            self.queries,
            self.k,
            self.cascade_ns_per_query,
            self.naive_ns_per_query,
            self.speedup(),
            self.cascade_mean_comparisons,
            self.cascade_max_comparisons,
            self.cascade_bound,
            self.naive_mean_comparisons,
            self.naive_bound,
            if self.bound_holds() { "PASS" } else { "FAIL" }
        )
    }
}

impl fmt::Display for BenchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "queries: {}  k: {}", self.queries, self.k)?;
        writeln!(
            f,
            "cascade: {:.1} ns/query, comparisons mean {:.2} max {} (bound {})",
            self.cascade_ns_per_query, self.cascade_mean_comparisons, self.cascade_max_comparisons, self.cascade_bound
        )?;
        writeln!(
            f,
            "naive:   {:.1} ns/query, comparisons mean {:.2} max {} (expected {})",
            self.naive_ns_per_query, self.naive_mean_comparisons, self.naive_max_comparisons, self.naive_bound
        )?;
        writeln!(f, "speedup: {:.2}x", self.speedup())?;
        write!(f, "comparison bound: {}", if self.bound_holds() { "PASS" } else { "FAIL" })
    }
}

/// `floor(log2 2n) + 1 + (k - 1)`: cascade comparisons for k grids of n.
pub fn uniform_cascade_bound(n: usize, k: usize) -> usize {
    search_cost(2 * n) + k - 1
}

/// `k * (floor(log2 n) + 1)`: k independent searches over grids of n.
pub fn uniform_naive_cost(n: usize, k: usize) -> usize {
    k * search_cost(n)
}

/// Times both paths over `keys` after one untimed warm-up pass, then counts
/// comparisons with a traced pass.
pub fn run_bench(grids: &GridSet, cascade: &CascadeGrid, keys: &[f64]) -> Result<BenchReport> {
    cascade.check_shape(grids)?;
    let k = grids.k();
    let mut a = vec![0usize; k];
    let mut b = vec![0usize; k];

    for &key in keys {
        cascade.lookup_into(key, &mut a)?;
        binary_lookup_into(grids, key, &mut b)?;
    }

    let start = Instant::now();
    for &key in keys {
        cascade.lookup_into(black_box(key), &mut a)?;
        black_box(&a);
    }
    let cascade_ns = start.elapsed().as_nanos() as f64;

    let start = Instant::now();
    for &key in keys {
        binary_lookup_into(grids, black_box(key), &mut b)?;
        black_box(&b);
    }
    let naive_ns = start.elapsed().as_nanos() as f64;

    let (mut c_sum, mut c_max, mut n_sum, mut n_max, mut disagreements) = (0, 0, 0, 0, 0);
    for &key in keys {
        let trace = cascade.lookup_traced(key)?;
        let (naive, cost) = binary_lookup_traced(grids, key)?;
        let total = trace.total_comparisons();
        c_sum += total;
        c_max = c_max.max(total);
        n_sum += cost;
        n_max = n_max.max(cost);
        if trace.result != naive {
            disagreements += 1;
        }
    }
    let q = keys.len().max(1) as f64;
    Ok(BenchReport {
        queries: keys.len(),
        k,
        cascade_ns_per_query: cascade_ns / q,
        naive_ns_per_query: naive_ns / q,
        cascade_mean_comparisons: c_sum as f64 / q,
        cascade_max_comparisons: c_max,
        naive_mean_comparisons: n_sum as f64 / q,
        naive_max_comparisons: n_max,
        cascade_bound: search_cost(cascade.level(0).len()) + k - 1,
        naive_bound: binary_lookup_cost(grids),
        disagreements,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cascade::build_cascade;
    use crate::gridgen::gridset_with_sizes;
    use crate::verify::random_keys;

    #[test]
    fn uniform_formulas() {
        assert_eq!(uniform_cascade_bound(1024, 8), 19);
        assert_eq!(uniform_naive_cost(1024, 8), 88);
        for k in 4..=16 {
            for n in [256, 300, 1000, 1024, 5000] {
                assert!(uniform_cascade_bound(n, k) < uniform_naive_cost(n, k));
            }
        }
    }

    #[test]
    fn single_grid_costs_match() {
        let g = gridset_with_sizes(&[500], 1, 0.0).unwrap();
        let c = build_cascade(&g);
        let r = run_bench(&g, &c, &random_keys(&g, 200, 2)).unwrap();
        assert_eq!(r.cascade_max_comparisons, r.naive_max_comparisons);
        assert_eq!(r.cascade_mean_comparisons, r.naive_mean_comparisons);
        assert!(r.bound_holds());
    }

    #[test]
    fn uniform_1024_by_8() {
        let g = gridset_with_sizes(&[1024; 8], 5, 0.0).unwrap();
        let c = build_cascade(&g);
        let r = run_bench(&g, &c, &random_keys(&g, 500, 6)).unwrap();
        assert!(r.cascade_max_comparisons <= 19);
        assert_eq!(r.naive_max_comparisons, 88);
        assert_eq!(r.naive_mean_comparisons, 88.0);
        assert!(r.bound_holds());
        assert_eq!(r.disagreements, 0);
    }
}
