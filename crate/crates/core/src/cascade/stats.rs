use std::fmt;

use super::CascadeGrid;

#[derive(Debug, Clone, PartialEq)]
pub struct StructureStats {
    pub k: usize,
    pub level_sizes: Vec<usize>,
    /// Sum of level sizes.
    pub total_entries: usize,
    /// Sum of original grid sizes.
    pub total_grid: usize,
    pub ratio: f64,
    /// value + p1 on every entry, p2 on all but the last level.
    pub memory_bytes: usize,
}

impl StructureStats {
    pub fn bound(&self) -> usize {
        2 * self.total_grid
    }

    pub fn within_bound(&self) -> bool {
        self.total_entries <= self.bound()
    }
}

pub fn structure_stats(cascade: &CascadeGrid) -> StructureStats {
    let level_sizes = cascade.level_sizes();
    let total_entries: usize = level_sizes.iter().sum();
    let total_grid: usize = cascade.grid_sizes().iter().sum();
    let last = level_sizes.last().copied().unwrap_or(0);
    let memory_bytes = total_entries * 24 - last * 8;
    StructureStats {
        k: cascade.k(),
        level_sizes,
        total_entries,
        total_grid,
        ratio: total_entries as f64 / total_grid as f64,
        memory_bytes,
    }
}

impl fmt::Display for StructureStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sizes: Vec<String> = self.level_sizes.iter().map(ToString::to_string).collect();
        writeln!(f, "k: {}", self.k)?;
        writeln!(f, "level sizes: [{}]", sizes.join(", "))?;
        writeln!(f, "total: {}", self.total_entries)?;
        writeln!(f, "grid total: {}", self.total_grid)?;
        writeln!(f, "ratio: {}", self.ratio)?;
        write!(f, "memory bytes: {}", self.memory_bytes)
    }
}
