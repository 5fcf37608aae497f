//! Report rendering. CSV columns match the JSON field order; floats use the
//! shortest representation that round-trips.

use std::io::Write;
use std::path::PathBuf;

use anyhow::{Context, Result};
use serde::Serialize;

use crate::Format;

pub struct Options {
    pub format: Format,
    pub out: Option<PathBuf>,
}

/// A flat record with a fixed column order.
pub trait Row: Serialize {
    const HEADER: &'static [&'static str];
    fn fields(&self) -> Vec<String>;
}

pub fn float(x: f64) -> String {
    format!("{x}")
}

pub fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn csv_bytes<R: Row>(rows: &[R]) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(R::HEADER)?;
    for r in rows {
        w.write_record(r.fields())?;
    }
    Ok(w.into_inner()?)
}

fn json_bytes<T: Serialize + ?Sized>(value: &T) -> Result<Vec<u8>> {
    let mut s = serde_json::to_vec_pretty(value)?;
    s.push(b'\n');
    Ok(s)
}

/// Emits a table as a CSV table or a JSON array.
pub fn emit_rows<R: Row>(rows: &[R], opts: &Options) -> Result<()> {
    let bytes = match opts.format {
        Format::Csv => csv_bytes(rows)?,
        Format::Json => json_bytes(rows)?,
    };
    write_out(&bytes, opts)
}

/// Emits a single record as a one-row CSV table or a JSON object.
pub fn emit_one<R: Row>(row: &R, opts: &Options) -> Result<()> {
    let bytes = match opts.format {
        Format::Csv => csv_bytes(std::slice::from_ref(row))?,
        Format::Json => json_bytes(row)?,
    };
    write_out(&bytes, opts)
}

fn write_out(bytes: &[u8], opts: &Options) -> Result<()> {
    match &opts.out {
        Some(p) => std::fs::write(p, bytes).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
            Ok(())
        }
    }
}
