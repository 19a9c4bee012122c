//! Cascade grids: fractional cascading over k sorted energy grids.
//!
//! A [`CascadeGrid`] built from a [`GridSet`] answers "where does energy E
//! fall in every grid" with one binary search plus at most one comparison
//! per additional grid, and returns exactly what k independent searches
//! ([`naive_lookup`]) would. On top of the indices, [`xsec`] interpolates
//! microscopic and macroscopic cross sections.
//!
//! ```
//! use fcgrid_core::{build_cascade, cascade_lookup, naive_lookup, paper_example_gridset};
//!
//! let grids = paper_example_gridset();
//! let cascade = build_cascade(&grids);
//! let found = cascade_lookup(&cascade, &grids, 3.2).unwrap();
//! assert_eq!(found.indices, vec![2, 1, 2]);
//! assert_eq!(found, naive_lookup(&grids, 3.2).unwrap());
//! ```

pub mod bench;
pub mod cascade;
pub mod error;
pub mod grid;
pub mod gridgen;
pub mod io;
pub mod naive;
pub mod search;
pub mod verify;
pub mod xsec;

pub use cascade::{
    build_cascade, build_cascade_with, cascade_lookup, cascade_lookup_traced, structure_stats,
    validate_structure, BuildOptions, CascadeEntry, CascadeGrid, CascadeLevel, LookupResult,
    LookupTrace, Promotion, RawCascade, StructureStats, TieBreak, Violation, ViolationKind,
};
pub use error::{DecodeError, Error, Result};
pub use grid::{EnergyGrid, GridSet};
pub use gridgen::{adversarial_shapes, generate_gridset, paper_example_gridset, GenSpec};
pub use io::GridDocument;
pub use naive::naive_lookup;
pub use search::strict_predecessor;
pub use xsec::{eval_macro, eval_micro_all, interp_sigma, Material, NuclideTable};
