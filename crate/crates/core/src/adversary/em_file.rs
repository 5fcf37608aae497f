//! Plain-text format for [`EntangleMeasureConfig`].
//!
//! ```text
//! # comments run to end of line
//! probe_dim 2
//! forward  <2·(2d)² reals: row-major, each entry as re im>
//! return   <same>
//! initial  <2·d reals: re im per amplitude>
//! ```
//!
//! Tokens are whitespace separated, so rows may be laid out freely.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;

use super::{AdversaryError, EntangleMeasureConfig};
use crate::qsim::{Complex64, StateVector, Unitary};

/// Unitarity and normalization slack accepted from files.
pub const EM_FILE_UNITARY_TOL: f64 = 1e-8;

struct Tokens<'a> {
    inner: Box<dyn Iterator<Item = &'a str> + 'a>,
}

impl<'a> Tokens<'a> {
    fn new(text: &'a str) -> Self {
        let it: Box<dyn Iterator<Item = &'a str> + 'a> = Box::new(
            text.lines()
                .map(|l| l.split('#').next().unwrap_or(""))
                .flat_map(str::split_whitespace),
        );
        Self { inner: it }
    }

    fn keyword(&mut self, want: &str) -> Result<(), AdversaryError> {
        match self.inner.next() {
            Some(t) if t == want => Ok(()),
            Some(t) => Err(parse_err(format!("expected '{want}', found '{t}'"))),
            None => Err(parse_err(format!("expected '{want}', found end of file"))),
        }
    }

    fn reals(&mut self, count: usize, what: &str) -> Result<Vec<f64>, AdversaryError> {
        (0..count)
            .map(|i| {
                let t = self
                    .inner
                    .next()
                    .ok_or_else(|| parse_err(format!("{what}: expected {count} numbers, found {i}")))?;
                t.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| parse_err(format!("{what}: '{t}' is not a number")))
            })
            .collect()
    }

    fn complex(&mut self, count: usize, what: &str) -> Result<Vec<Complex64>, AdversaryError> {
        let r = self.reals(2 * count, what)?;
        Ok(r.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect())
    }
}

fn parse_err(msg: String) -> AdversaryError {
    AdversaryError::Parse(msg)
}

fn unitary(entries: Vec<Complex64>, dim: usize, what: &str) -> Result<Unitary, AdversaryError> {
    let m = DMatrix::from_row_slice(dim, dim, &entries);
    Unitary::with_tolerance(m, EM_FILE_UNITARY_TOL)
        .map_err(|e| parse_err(format!("{what} matrix is not unitary ({e})")))
}

pub fn parse_em_file(text: &str) -> Result<EntangleMeasureConfig, AdversaryError> {
    let mut t = Tokens::new(text);
    t.keyword("probe_dim")?;
    let dim_tok = t.inner.next().ok_or_else(|| parse_err("missing probe_dim value".into()))?;
    let probe_dim: usize = dim_tok
        .parse()
        .map_err(|_| parse_err(format!("probe_dim '{dim_tok}' is not a positive integer")))?;
    if !matches!(probe_dim, 2 | 4 | 8) {
        return Err(AdversaryError::InvalidConfig(format!(
            "probe_dim must be 2, 4 or 8 (got {probe_dim})"
        )));
    }
    let d = 2 * probe_dim;
    t.keyword("forward")?;
    let forward = unitary(t.complex(d * d, "forward")?, d, "forward")?;
    t.keyword("return")?;
    let ret = unitary(t.complex(d * d, "return")?, d, "return")?;
    t.keyword("initial")?;
    let amps = t.complex(probe_dim, "initial")?;
    let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    if (norm - 1.0).abs() > EM_FILE_UNITARY_TOL {
        return Err(parse_err(format!("initial probe is not normalized (norm² = {norm})")));
    }
    let initial = StateVector::normalized(amps)?;
    if let Some(extra) = t.inner.next() {
        return Err(parse_err(format!("unexpected trailing token '{extra}'")));
    }
    EntangleMeasureConfig::new(probe_dim, forward, ret, initial)
}

pub fn read_em_file(path: impl AsRef<Path>) -> Result<EntangleMeasureConfig, AdversaryError> {
    parse_em_file(&std::fs::read_to_string(path)?)
}

/// Serializes a configuration so that [`parse_em_file`] reads it back
/// exactly.
pub fn write_em_file(config: &EntangleMeasureConfig) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "probe_dim {}", config.probe_dim());
    for (name, u) in [("forward", config.forward()), ("return", config.ret())] {
        let _ = writeln!(out, "{name}");
        let m = u.matrix();
        for r in 0..m.nrows() {
            let row: Vec<String> = (0..m.ncols())
                .map(|c| format!("{} {}", m[(r, c)].re, m[(r, c)].im))
                .collect();
            let _ = writeln!(out, "  {}", row.join("  "));
        }
    }
    let amps: Vec<String> = config
        .initial_probe()
        .amplitudes()
        .iter()
        .map(|a| format!("{} {}", a.re, a.im))
        .collect();
    let _ = writeln!(out, "initial\n  {}", amps.join("  "));
    out
}
