//! Grid text format.
//!
//! ```text
//! # comments run to end of line; blank lines are ignored
//! 2            <- k
//! 3            <- n_1
//! 1.0 2.0 3.0  <- n_1 values, ascending, on one line
//! 1            <- n_2
//! 0.5
//! sigma        <- optional; same shape as the grid block
//! 2
//! 3
//! 10.0 12.0 9.5
//! 1
//! 4.0
//! ```
//!
//! Values are written in Rust's shortest round-trip notation, so parsing
//! what [`write_gridset`] emits restores every bit.

use std::fmt::Write as _;

use super::GridDocument;
use crate::error::{Error, Result};
use crate::grid::GridSet;

struct Line<'a> {
    number: usize,
    tokens: Vec<(usize, &'a str)>,
}

fn significant_lines(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let body = raw.split('#').next().unwrap_or("");
            let mut tokens = Vec::new();
            let mut start = None;
            for (c, ch) in body.char_indices().chain(std::iter::once((body.len(), ' '))) {
                match (ch.is_whitespace(), start) {
                    (false, None) => start = Some(c),
                    (true, Some(s)) => {
                        tokens.push((s + 1, &body[s..c]));
                        start = None;
                    }
                    _ => {}
                }
            }
            (!tokens.is_empty()).then_some(Line {
                number: i + 1,
                tokens,
            })
        })
        .collect()
}

struct Cursor<'a> {
    lines: Vec<Line<'a>>,
    next: usize,
    last_line: usize,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

impl<'a> Cursor<'a> {
    fn line(&mut self, what: &str) -> Result<&Line<'a>> {
        match self.lines.get(self.next) {
            Some(l) => {
                self.next += 1;
                Ok(l)
            }
            None => Err(err(self.last_line + 1, 1, format!("unexpected end of input, expected {what}"))),
        }
    }

    fn peek_word(&self) -> Option<&str> {
        self.lines
            .get(self.next)
            .filter(|l| l.tokens.len() == 1)
            .map(|l| l.tokens[0].1)
    }

    fn count(&mut self, what: &str) -> Result<usize> {
        let line = self.line(what)?;
        let (col, tok) = line.tokens[0];
        if line.tokens.len() != 1 {
            return Err(err(line.number, line.tokens[1].0, format!("expected only {what} on this line")));
        }
        match tok.parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(err(line.number, col, format!("malformed {what} '{tok}'"))),
        }
    }

    /// A line of exactly `n` finite numbers. `label` names the block for
    /// diagnostics ("grid 2", "sigma 2").
    fn values(&mut self, n: usize, label: &str) -> Result<(usize, Vec<(usize, f64)>)> {
        let line = self.line(&format!("{n} values for {label}"))?;
        if line.tokens.len() != n {
            let col = line.tokens.get(n).map_or(line.tokens[0].0, |t| t.0);
            return Err(err(
                line.number,
                col,
                format!("{label}: expected {n} values, found {}", line.tokens.len()),
            ));
        }
        let values = line
            .tokens
            .iter()
            .map(|&(col, tok)| match tok.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok((col, v)),
                Ok(_) => Err(err(line.number, col, format!("{label}: non-finite value '{tok}'"))),
                Err(_) => Err(err(line.number, col, format!("{label}: expected a number, found '{tok}'"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((line.number, values))
    }
}

pub fn parse_document(text: &str) -> Result<GridDocument> {
    let lines = significant_lines(text);
    let last_line = text.lines().count();
    let mut cur = Cursor {
        lines,
        next: 0,
        last_line,
    };

    let k = cur.count("grid count k")?;
    let mut grids = Vec::with_capacity(k);
    for i in 1..=k {
        let n = cur.count(&format!("size of grid {i}"))?;
        let (line, values) = cur.values(n, &format!("grid {i}"))?;
        for t in 1..values.len() {
            if values[t - 1].1 > values[t].1 {
                return Err(err(line, values[t].0, format!("grid {i} not sorted at position {t}")));
            }
        }
        grids.push(values.into_iter().map(|(_, v)| v).collect::<Vec<f64>>());
    }

    let mut sigma = None;
    if cur.peek_word() == Some("sigma") {
        cur.next += 1;
        let sk = cur.count("sigma grid count")?;
        if sk != k {
            let line = cur.lines[cur.next - 1].number;
            return Err(err(line, 1, format!("sigma block has {sk} grids, expected {k}")));
        }
        let mut cols = Vec::with_capacity(k);
        for (i, g) in grids.iter().enumerate() {
            let label = format!("sigma {}", i + 1);
            let n = cur.count(&format!("size of {label}"))?;
            if n != g.len() {
                let line = cur.lines[cur.next - 1].number;
                return Err(err(line, 1, format!("{label} has {n} values, grid has {}", g.len())));
            }
            let (line, values) = cur.values(n, &label)?;
            if let Some(&(col, v)) = values.iter().find(|(_, v)| *v < 0.0) {
                return Err(err(line, col, format!("{label}: negative cross section {v}")));
            }
            cols.push(values.into_iter().map(|(_, v)| v).collect());
        }
        sigma = Some(cols);
    }

    if let Some(extra) = cur.lines.get(cur.next) {
        return Err(err(extra.number, extra.tokens[0].0, "unexpected trailing content"));
    }
    let grids = GridSet::new(grids)?;
    Ok(GridDocument { grids, sigma })
}

pub fn parse_gridset(text: &str) -> Result<GridSet> {
    parse_document(text).map(|d| d.grids)
}

fn write_block<'a>(out: &mut String, rows: impl ExactSizeIterator<Item = &'a [f64]>) {
    let _ = writeln!(out, "{}", rows.len());
    for row in rows {
        let _ = writeln!(out, "{}", row.len());
        let rendered: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
        let _ = writeln!(out, "{}", rendered.join(" "));
    }
}

pub fn write_document(doc: &GridDocument) -> String {
    let mut out = String::from("# fcgrid grid set\n");
    write_block(&mut out, doc.grids.grids().iter().map(|g| g.values()));
    if let Some(sigma) = &doc.sigma {
        out.push_str("sigma\n");
        write_block(&mut out, sigma.iter().map(Vec::as_slice));
    }
    out
}

pub fn write_gridset(grids: &GridSet) -> String {
    write_document(&GridDocument::new(grids.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gridgen::{generate_gridset, paper_example_gridset, GenSpec};
    use proptest::prelude::*;

    fn parse_err(text: &str) -> (usize, usize, String) {
        match parse_document(text) {
            Err(Error::Parse { line, column, message }) => (line, column, message),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn minimal_document() {
        let g = parse_gridset("1\n3\n1.0 2.0 3.0\n").unwrap();
        assert_eq!(g.k(), 1);
        assert_eq!(g.grid(0).values(), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn comments_and_blank_lines() {
        let g = parse_gridset("# header\n\n2 # k\n1\n5e-1\n\n2\n  1   2 # tail\n").unwrap();
        assert_eq!(g.sizes(), vec![1, 2]);
        assert_eq!(g.grid(0)[0], 0.5);
    }

    #[test]
    fn unsorted_names_grid_and_position() {
        let (line, col, msg) = parse_err("1\n2\n3.0 2.0\n");
        assert_eq!(msg, "grid 1 not sorted at position 1");
        assert_eq!((line, col), (3, 5));
    }

    #[test]
    fn diagnostics() {
        assert_eq!(parse_err("x\n").2, "malformed grid count k 'x'");
        assert_eq!(parse_err("0\n").2, "malformed grid count k '0'");
        assert_eq!(parse_err("1\n3\n1 2\n").2, "grid 1: expected 3 values, found 2");
        let (line, col, msg) = parse_err("1\n2\n1 abc\n");
        assert_eq!((line, col, msg.as_str()), (3, 3, "grid 1: expected a number, found 'abc'"));
        assert!(parse_err("1\n1\nnan\n").2.contains("non-finite"));
        assert!(parse_err("2\n1\n1\n").2.contains("unexpected end of input"));
        assert_eq!(parse_err("1\n1\n1\n7\n").2, "unexpected trailing content");
        assert!(parse_err("1\n1\n1\nsigma\n1\n2\n1 2\n").2.contains("sigma 1 has 2 values"));
        assert!(parse_err("1\n1\n1\nsigma\n1\n1\n-3\n").2.contains("negative"));
    }

    #[test]
    fn sigma_block() {
        let d = parse_document("2\n2\n1 2\n1\n3\nsigma\n2\n2\n10 20\n1\n5\n").unwrap();
        assert_eq!(d.sigma, Some(vec![vec![10.0, 20.0], vec![5.0]]));
        assert_eq!(parse_document(&write_document(&d)).unwrap(), d);
    }

    #[test]
    fn fixture_round_trip() {
        let g = paper_example_gridset();
        let text = write_gridset(&g);
        assert_eq!(parse_gridset(&text).unwrap(), g);
        assert_eq!(text, write_gridset(&g));
    }

    #[test]
    fn generated_round_trip_is_exact() {
        let spec = GenSpec {
            k: 5,
            size_min: 1,
            size_max: 300,
            duplicate_fraction: 0.1,
            seed: 11,
            with_sigma: true,
            ..GenSpec::default()
        };
        let d = generate_gridset(&spec).unwrap();
        assert_eq!(parse_document(&write_document(&d)).unwrap(), d);
    }

    proptest! {
        #[test]
        fn arbitrary_finite_values_round_trip(
            mut grids in prop::collection::vec(
                prop::collection::vec(prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL | prop::num::f64::ZERO, 1..20),
                1..5,
            )
        ) {
            for g in &mut grids {
                g.sort_by(f64::total_cmp);
            }
            let set = GridSet::new(grids).unwrap();
            let back = parse_gridset(&write_gridset(&set)).unwrap();
            for (a, b) in set.grids().iter().zip(back.grids()) {
                let a: Vec<u64> = a.iter().map(|v| v.to_bits()).collect();
                let b: Vec<u64> = b.iter().map(|v| v.to_bits()).collect();
                prop_assert_eq!(a, b);
            }
        }
    }
}
