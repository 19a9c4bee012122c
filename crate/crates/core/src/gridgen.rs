//! Deterministic synthetic grid sets.
//!
//! Generator: ChaCha8 seeded with `seed_from_u64(seed)`. Per grid, in
//! order: draw the size uniformly from `size_min..=size_max`; draw that many
//! energies log-uniformly over `[energy_min, energy_max]`, sort, drop
//! repeats and redraw until the grid is strictly increasing; then for each
//! position `t >= 1`, with probability `duplicate_fraction`, copy the value
//! at `t - 1` into `t`. Sigma values come from a second ChaCha8 stream
//! seeded with `seed ^ SIGMA_STREAM`, log-uniform over [1e-2, 1e4] barns,
//! so enabling sigma never perturbs the grids.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grid::GridSet;
use crate::io::GridDocument;

const SIGMA_STREAM: u64 = 0x9e37_79b9_7f4a_7c15;

#[derive(Debug, Clone, PartialEq)]
pub struct GenSpec {
    pub k: usize,
    pub size_min: usize,
    pub size_max: usize,
    pub energy_min: f64,
    pub energy_max: f64,
    pub duplicate_fraction: f64,
    pub seed: u64,
    pub with_sigma: bool,
}

impl Default for GenSpec {
    fn default() -> Self {
        Self {
            k: 8,
            size_min: 64,
            size_max: 1024,
            energy_min: 1e-5,
            energy_max: 2e7,
            duplicate_fraction: 0.0,
            seed: 0,
            with_sigma: false,
        }
    }
}

impl GenSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        if self.k == 0 {
            return bad("k must be at least 1".into());
        }
        if self.size_min == 0 || self.size_min > self.size_max {
            return bad(format!(
                "need 1 <= size_min <= size_max, got {}..{}",
                self.size_min, self.size_max
            ));
        }
        if !(self.energy_min > 0.0 && self.energy_min < self.energy_max && self.energy_max.is_finite()) {
            return bad(format!(
                "need 0 < energy_min < energy_max, got {}..{}",
                self.energy_min, self.energy_max
            ));
        }
        if !(0.0..=1.0).contains(&self.duplicate_fraction) {
            return bad(format!(
                "duplicate_fraction must lie in [0, 1], got {}",
                self.duplicate_fraction
            ));
        }
        Ok(())
    }
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    let (a, b) = (lo.ln(), hi.ln());
    (a + rng.random::<f64>() * (b - a)).exp().clamp(lo, hi)
}

fn draw_grid(rng: &mut ChaCha8Rng, size: usize, spec: &GenSpec) -> Vec<f64> {
    let mut values: Vec<f64> = Vec::with_capacity(size);
    while values.len() < size {
        let missing = size - values.len();
        values.extend((0..missing).map(|_| log_uniform(rng, spec.energy_min, spec.energy_max)));
        values.sort_by(f64::total_cmp);
        values.dedup();
    }
    for t in 1..size {
        if rng.random::<f64>() < spec.duplicate_fraction {
            values[t] = values[t - 1];
        }
    }
    values
}

pub fn generate_gridset(spec: &GenSpec) -> Result<GridDocument> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let grids: Vec<Vec<f64>> = (0..spec.k)
        .map(|_| {
            let size = rng.random_range(spec.size_min..=spec.size_max);
            draw_grid(&mut rng, size, spec)
        })
        .collect();
    let sigma = spec.with_sigma.then(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed ^ SIGMA_STREAM);
        grids
            .iter()
            .map(|g| g.iter().map(|_| log_uniform(&mut rng, 1e-2, 1e4)).collect())
            .collect()
    });
    let grids = GridSet::new(grids)?;
    Ok(GridDocument { grids, sigma })
}

/// Grids with exactly the given sizes, drawn as in [`generate_gridset`].
pub fn gridset_with_sizes(sizes: &[usize], seed: u64, duplicate_fraction: f64) -> Result<GridSet> {
    let spec = GenSpec {
        k: sizes.len(),
        size_min: 1,
        size_max: 1,
        duplicate_fraction,
        seed,
        ..GenSpec::default()
    };
    spec.validate()?;
    if sizes.contains(&0) {
        return Err(Error::InvalidArgument("grid sizes must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    GridSet::new(sizes.iter().map(|&n| draw_grid(&mut rng, n, &spec)).collect())
}

/// The three-grid fixture: sizes 5, 6, 4.
pub fn paper_example_gridset() -> GridSet {
    GridSet::new(vec![
        vec![1.0, 2.0, 3.0, 4.0, 5.0],
        vec![1.5, 2.5, 3.5, 4.5, 5.5, 6.5],
        vec![0.5, 1.5, 2.5, 3.5],
    ])
    .expect("fixture is valid")
}

/// Size vectors that stress the `2 * sum |L_i|` bound and the boundary
/// paths of the descent.
pub fn adversarial_shapes() -> Vec<Vec<usize>> {
    let mut shapes: Vec<Vec<usize>> = (1..=8).map(|k| vec![1; k]).collect();
    shapes.push(vec![1, 1, 1, 1, 3]);
    shapes.push(vec![3, 1, 1, 1, 1]);
    shapes.push((1..=8).rev().collect());
    shapes.push(vec![64, 32, 16, 8, 4, 2, 1]);
    shapes.push((1..=8).collect());
    shapes.push(vec![1, 2, 4, 8, 16, 32, 64]);
    shapes.push(vec![2, 2, 2, 2, 2, 2, 2, 2]);
    shapes.push(vec![1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 2]);
    shapes.push(vec![1024, 1, 1, 1, 1, 1, 1, 1]);
    shapes.push(vec![1, 1, 1, 1, 1, 1, 1, 1024]);
    shapes.push(vec![1000]);
    shapes
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(k: usize, lo: usize, hi: usize, dup: f64, seed: u64) -> GenSpec {
        GenSpec {
            k,
            size_min: lo,
            size_max: hi,
            duplicate_fraction: dup,
            seed,
            ..GenSpec::default()
        }
    }

    #[test]
    fn deterministic() {
        let s = GenSpec {
            with_sigma: true,
            ..spec(3, 8, 8, 0.1, 42)
        };
        let a = generate_gridset(&s).unwrap();
        assert_eq!(a, generate_gridset(&s).unwrap());
        assert_eq!(a.grids.sizes(), vec![8, 8, 8]);
        assert_ne!(a, generate_gridset(&GenSpec { seed: 43, ..s }).unwrap());
    }

    #[test]
    fn sigma_does_not_change_grids() {
        let s = spec(4, 10, 50, 0.05, 9);
        let plain = generate_gridset(&s).unwrap();
        let with = generate_gridset(&GenSpec { with_sigma: true, ..s }).unwrap();
        assert_eq!(plain.grids, with.grids);
        let sigma = with.sigma.unwrap();
        assert!(sigma.iter().flatten().all(|&x| x > 0.0 && x.is_finite()));
        assert_eq!(sigma.iter().map(Vec::len).collect::<Vec<_>>(), with.grids.sizes());
    }

    #[test]
    fn zero_duplicates_is_strict() {
        let d = generate_gridset(&spec(6, 1, 500, 0.0, 1)).unwrap();
        for g in d.grids.grids() {
            assert!(g.windows(2).all(|w| w[0] < w[1]));
            assert!(g.iter().all(|&v| (1e-5..=2e7).contains(&v)));
        }
    }

    #[test]
    fn duplicates_appear() {
        let d = generate_gridset(&spec(2, 1000, 1000, 0.2, 5)).unwrap();
        let dups: usize = d
            .grids
            .grids()
            .iter()
            .map(|g| g.windows(2).filter(|w| w[0] == w[1]).count())
            .sum();
        assert!((300..=500).contains(&dups), "{dups}");
    }

    #[test]
    fn degenerate_single_point() {
        let d = generate_gridset(&spec(1, 1, 1, 0.0, 3)).unwrap();
        assert_eq!(d.grids.sizes(), vec![1]);
    }

    #[test]
    fn invalid_specs() {
        assert!(generate_gridset(&spec(0, 1, 1, 0.0, 0)).is_err());
        assert!(generate_gridset(&spec(1, 0, 1, 0.0, 0)).is_err());
        assert!(generate_gridset(&spec(1, 5, 4, 0.0, 0)).is_err());
        assert!(generate_gridset(&spec(1, 1, 1, 1.5, 0)).is_err());
        let bad_energy = GenSpec {
            energy_min: 0.0,
            ..spec(1, 1, 1, 0.0, 0)
        };
        assert!(generate_gridset(&bad_energy).is_err());
    }

    #[test]
    fn fixture() {
        let g = paper_example_gridset();
        assert_eq!(g.k(), 3);
        assert_eq!(g.sizes(), vec![5, 6, 4]);
        assert_eq!(g.grid(2)[0], 0.5);
    }

    #[test]
    fn shapes_cover_required_cases() {
        let s = adversarial_shapes();
        assert!(s.contains(&vec![1, 1, 1, 1, 3]));
        for k in 1..=8 {
            assert!(s.contains(&vec![1; k]));
        }
        let g = gridset_with_sizes(&[1, 1, 1, 1, 3], 0, 0.0).unwrap();
        assert_eq!(g.sizes(), vec![1, 1, 1, 1, 3]);
    }
}
