#![allow(dead_code)]

use fcgrid_core::GridSet;

/// Walks each grid from the front while the next value is `<= key`,
/// starting at index 0, so keys below a grid clamp to 0.
pub fn linear_scan(grids: &GridSet, key: f64) -> Vec<usize> {
    grids
        .grids()
        .iter()
        .map(|g| {
            let mut idx = 0;
            while idx + 1 < g.len() && g[idx + 1] <= key {
                idx += 1;
            }
            idx
        })
        .collect()
}

/// Level sizes from the recurrence `|M_k| = |L_k|`,
/// `|M_i| = |L_i| + floor(|M_{i+1}| / 2)` (or ceil).
pub fn recurrence(sizes: &[usize], ceil: bool) -> Vec<usize> {
    let mut out = vec![0; sizes.len()];
    let mut below = 0usize;
    for i in (0..sizes.len()).rev() {
        let promoted = if ceil { below.div_ceil(2) } else { below / 2 };
        out[i] = sizes[i] + promoted;
        below = out[i];
    }
    out
}
