//! Persistence: the line-oriented grid text format and the binary cascade
//! snapshot.

mod snapshot;
mod text;

pub use snapshot::{decode_cascade, decode_cascade_with, decode_raw, encode_cascade, MAGIC, VERSION};
pub use text::{parse_document, parse_gridset, write_document, write_gridset};

use crate::error::Result;
use crate::grid::GridSet;
use crate::xsec::NuclideTable;

/// A grid set plus optional per-point sigma columns.
#[derive(Debug, Clone, PartialEq)]
pub struct GridDocument {
    pub grids: GridSet,
    pub sigma: Option<Vec<Vec<f64>>>,
}

impl GridDocument {
    pub fn new(grids: GridSet) -> Self {
        Self { grids, sigma: None }
    }

    /// One table per grid, when sigma columns are present.
    pub fn tables(&self) -> Option<Result<Vec<NuclideTable>>> {
        self.sigma.as_ref().map(|sigma| {
            self.grids
                .grids()
                .iter()
                .zip(sigma)
                .map(|(g, s)| NuclideTable::new(g.clone(), s.clone()))
                .collect()
        })
    }
}
