//! Binary cascade snapshot.
//!
//! Layout, all integers little-endian:
//!
//! | field                 | type        |
//! |-----------------------|-------------|
//! | magic `FCG1`          | 4 bytes     |
//! | version (1)           | u8          |
//! | k                     | u64         |
//! | grid sizes            | k x u64     |
//! | per level: count      | u64         |
//! | per entry: value      | f64         |
//! | per entry: p1, p2     | i64, i64    |
//!
//! `p2` is written as -1 on the last level.

use crate::cascade::{CascadeGrid, CascadeLevel, RawCascade};
use crate::error::{DecodeError, Error, Result};
use crate::grid::GridSet;

pub const MAGIC: [u8; 4] = *b"FCG1";
pub const VERSION: u8 = 1;

const ENTRY_BYTES: usize = 24;

pub fn encode_cascade(cascade: &CascadeGrid) -> Vec<u8> {
    let mut out = Vec::with_capacity(13 + 8 * cascade.k() * 2 + cascade.total_entries() * ENTRY_BYTES);
    out.extend_from_slice(&MAGIC);
    out.push(VERSION);
    out.extend_from_slice(&(cascade.k() as u64).to_le_bytes());
    for &n in cascade.grid_sizes() {
        out.extend_from_slice(&(n as u64).to_le_bytes());
    }
    for level in cascade.levels() {
        out.extend_from_slice(&(level.len() as u64).to_le_bytes());
        for e in level.entries() {
            out.extend_from_slice(&e.value.to_le_bytes());
            out.extend_from_slice(&e.p1.to_le_bytes());
            out.extend_from_slice(&e.p2.unwrap_or(-1).to_le_bytes());
        }
    }
    out
}

struct Reader<'a> {
    bytes: &'a [u8],
    offset: usize,
}

impl Reader<'_> {
    fn take<const N: usize>(&mut self) -> Result<[u8; N], DecodeError> {
        let end = self.offset + N;
        let chunk = self.bytes.get(self.offset..end).ok_or_else(|| DecodeError::Truncated {
            offset: self.offset,
            needed: end - self.bytes.len(),
        })?;
        self.offset = end;
        Ok(chunk.try_into().expect("chunk has length N"))
    }

    fn u64(&mut self) -> Result<u64, DecodeError> {
        self.take().map(u64::from_le_bytes)
    }

    fn i64(&mut self) -> Result<i64, DecodeError> {
        self.take().map(i64::from_le_bytes)
    }

    fn f64(&mut self) -> Result<f64, DecodeError> {
        self.take().map(f64::from_le_bytes)
    }

    fn remaining(&self) -> usize {
        self.bytes.len() - self.offset
    }

    /// A count whose items take at least `unit` bytes each.
    fn count(&mut self, unit: usize, what: &str) -> Result<usize, DecodeError> {
        let at = self.offset;
        let n = self.u64()?;
        if n > (self.remaining() / unit) as u64 {
            return Err(DecodeError::Truncated {
                offset: at,
                needed: (n as usize).saturating_mul(unit).saturating_sub(self.remaining()),
            });
        }
        if n == 0 {
            return Err(DecodeError::OutOfRange {
                offset: at,
                what: format!("{what} must be at least 1"),
            });
        }
        Ok(n as usize)
    }
}

/// Reads the format without checking any cascade invariant.
pub fn decode_raw(bytes: &[u8]) -> Result<RawCascade, DecodeError> {
    if bytes.len() < 4 || bytes[..4] != MAGIC {
        return Err(DecodeError::BadMagic);
    }
    let mut r = Reader { bytes, offset: 4 };
    let [version] = r.take::<1>()?;
    if version != VERSION {
        return Err(DecodeError::UnsupportedVersion(version));
    }
    let k = r.count(16, "k")?;
    let grid_sizes = (0..k)
        .map(|_| {
            let at = r.offset;
            let n = r.u64()?;
            usize::try_from(n).map_err(|_| DecodeError::OutOfRange {
                offset: at,
                what: format!("grid size {n}"),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut levels = Vec::with_capacity(k);
    for i in 0..k {
        let n = r.count(ENTRY_BYTES, "level size")?;
        let last = i + 1 == k;
        let mut level = CascadeLevel {
            values: Vec::with_capacity(n),
            p1: Vec::with_capacity(n),
            p2: (!last).then(|| Vec::with_capacity(n)),
        };
        for _ in 0..n {
            level.values.push(r.f64()?);
            level.p1.push(r.i64()?);
            let at = r.offset;
            let p2 = r.i64()?;
            match &mut level.p2 {
                Some(col) => col.push(p2),
                None if p2 != -1 => {
                    return Err(DecodeError::OutOfRange {
                        offset: at,
                        what: format!("p2 on the last level must be -1, found {p2}"),
                    })
                }
                None => {}
            }
        }
        levels.push(level);
    }
    if r.remaining() > 0 {
        return Err(DecodeError::TrailingBytes(r.remaining()));
    }
    Ok(RawCascade { grid_sizes, levels })
}

/// Decodes and validates against the grids recovered from the snapshot.
///
/// A snapshot carries no copy of the original grids, so a corrupted value
/// that still forms a consistent cascade for some other grid set passes
/// here. Use [`decode_cascade_with`] when the grids are at hand.
pub fn decode_cascade(bytes: &[u8]) -> Result<CascadeGrid> {
    decode_raw(bytes)?
        .into_cascade_self_checked()
        .map_err(|v| Error::Decode(DecodeError::Invalid(v)))
}

/// Decodes and validates against the grid set the cascade was built from.
pub fn decode_cascade_with(bytes: &[u8], grids: &GridSet) -> Result<CascadeGrid> {
    decode_raw(bytes)?
        .into_cascade(grids)
        .map_err(|v| Error::Decode(DecodeError::Invalid(v)))
}
