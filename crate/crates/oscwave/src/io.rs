//! File formats.
//!
//! * grid functions: CSV with columns `r, theta, phi, re, im`, one row per
//!   quadrature node in grid index order;
//! * spectral coefficients: JSON array of `[m, k, n, re, im]`;
//! * spectral sets: JSON object `{a, lambda_max, modes: [[m, k, n, lambda]]}`.
//!
//! Numbers are written in the shortest decimal form that parses back to the
//! same `f64`, independent of locale.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use oscwave_core::transforms::{GridFunction, QuadratureGrid, SpectralCoefficients};
use oscwave_core::{ModeIndex, OperatorParams, SpectralSet};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Shortest round-trip decimal representation.
pub fn fmt_f64(x: f64) -> String {
    ryu::Buffer::new().format(x).to_owned()
}

fn csv_err(what: &'static str, e: csv::Error) -> Error {
    Error::Format {
        what,
        detail: e.to_string(),
    }
}

fn parse_field(what: &'static str, s: &str) -> Result<f64> {
    s.trim().parse::<f64>().map_err(|e| Error::Format {
        what,
        detail: format!("`{s}`: {e}"),
    })
}

/// Writes a numeric table with a header row.
pub fn write_table<W: Write>(
    out: W,
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<f64>>,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)
        .map_err(|e| csv_err("CSV table", e))?;
    for row in rows {
        if row.len() != header.len() {
            return Err(Error::Format {
                what: "CSV table",
                detail: format!("row of {} fields", row.len()),
            });
        }
        w.write_record(row.iter().map(|&v| fmt_f64(v)))
            .map_err(|e| csv_err("CSV table", e))?;
    }
    w.flush().map_err(|e| Error::Format {
        what: "CSV table",
        detail: e.to_string(),
    })
}

/// Reads a numeric table written by [`write_table`]; returns the header and rows.
pub fn read_table<R: Read>(input: R) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut r = csv::Reader::from_reader(input);
    let header = r
        .headers()
        .map_err(|e| csv_err("CSV table", e))?
        .iter()
        .map(str::to_owned)
        .collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| csv_err("CSV table", e))?;
        rows.push(
            rec.iter()
                .map(|f| parse_field("CSV table", f))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    Ok((header, rows))
}

pub const GRID_FUNCTION_HEADER: [&str; 5] = ["r", "theta", "phi", "re", "im"];

pub fn write_grid_function<W: Write>(f: &GridFunction, out: W) -> Result<()> {
    let grid = f.grid();
    let rows = f.values().iter().enumerate().map(|(i, v)| {
        let p = grid.point(i);
        vec![p.r, p.theta, p.phi, v.re, v.im]
    });
    write_table(out, &GRID_FUNCTION_HEADER, rows)
}

/// Reads samples on `grid`; the coordinates in the file must be the grid nodes.
pub fn read_grid_function<R: Read>(input: R, grid: Arc<QuadratureGrid>) -> Result<GridFunction> {
    let (header, rows) = read_table(input)?;
    if header != GRID_FUNCTION_HEADER {
        return Err(Error::Format {
            what: "grid function",
            detail: format!("header {header:?}"),
        });
    }
    if rows.len() != grid.len() {
        return Err(Error::Format {
            what: "grid function",
            detail: format!("{} rows for a grid of {} nodes", rows.len(), grid.len()),
        });
    }
    let mut values = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let p = grid.point(i);
        let matches = [p.r, p.theta, p.phi]
            .iter()
            .zip(row)
            .all(|(a, b)| (a - b).abs() <= 1e-12 * (1.0 + a.abs()));
        if !matches {
            return Err(Error::Format {
                what: "grid function",
                detail: format!("row {i} is not grid node {i}"),
            });
        }
        values.push(Complex64::new(row[3], row[4]));
    }
    Ok(GridFunction::new(grid, values)?)
}

/// One `[m, k, n, re, im]` entry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientEntry(pub usize, pub usize, pub i64, pub f64, pub f64);

pub fn coefficient_entries(c: &SpectralCoefficients) -> Vec<CoefficientEntry> {
    c.iter()
        .map(|(md, _, v)| CoefficientEntry(md.m, md.k, md.n, v.re, v.im))
        .collect()
}

pub fn write_coefficients<W: Write>(c: &SpectralCoefficients, out: W) -> Result<()> {
    serde_json::to_writer(out, &coefficient_entries(c))?;
    Ok(())
}

pub fn read_coefficient_entries<R: Read>(input: R) -> Result<Vec<CoefficientEntry>> {
    Ok(serde_json::from_reader(input)?)
}

/// Places `entries` on `set`; a mode outside the set is an error, and modes
/// of the set not listed get coefficient zero.
pub fn coefficients_on_set(
    entries: &[CoefficientEntry],
    set: Arc<SpectralSet>,
) -> Result<SpectralCoefficients> {
    let mut c = SpectralCoefficients::zeros(set.clone());
    for e in entries {
        let md = ModeIndex::new(e.0, e.1, e.2)?;
        let i = set.position(&md).ok_or_else(|| Error::Format {
            what: "coefficients",
            detail: format!(
                "mode ({}, {}, {}) is not in the spectral set",
                e.0, e.1, e.2
            ),
        })?;
        c.values_mut()[i] = Complex64::new(e.3, e.4);
    }
    Ok(c)
}

/// Coefficients over exactly the listed modes.
pub fn coefficients_from_entries(
    entries: &[CoefficientEntry],
    params: OperatorParams,
) -> Result<SpectralCoefficients> {
    let modes = entries
        .iter()
        .map(|e| ModeIndex::new(e.0, e.1, e.2))
        .collect::<Result<Vec<_>, _>>()?;
    let set = Arc::new(SpectralSet::from_modes(params, modes));
    if set.len() != entries.len() {
        return Err(Error::Format {
            what: "coefficients",
            detail: "repeated mode".into(),
        });
    }
    coefficients_on_set(entries, set)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectralSetDocument {
    pub a: f64,
    pub lambda_max: f64,
    pub modes: Vec<(usize, usize, i64, f64)>,
}

impl SpectralSetDocument {
    pub fn from_set(set: &SpectralSet) -> Self {
        let modes = (0..set.len())
            .map(|i| {
                let md = set.modes()[i];
                (md.m, md.k, md.n, set.lambda(i))
            })
            .collect();
        SpectralSetDocument {
            a: set.params().a(),
            lambda_max: set.lambda_max(),
            modes,
        }
    }

    /// Rebuilds the set, checking each listed eigenvalue.
    pub fn to_set(&self) -> Result<SpectralSet> {
        let params = OperatorParams::new(self.a)?;
        let mut modes = Vec::with_capacity(self.modes.len());
        for &(m, k, n, lam) in &self.modes {
            let want = params.eigenvalue(m, k);
            if (want - lam).abs() > 1e-12 * want {
                return Err(Error::Format {
                    what: "spectral set",
                    detail: format!("mode ({m}, {k}, {n}) lists λ = {lam}, expected {want}"),
                });
            }
            modes.push(ModeIndex::new(m, k, n)?);
        }
        Ok(SpectralSet::from_modes(params, modes))
    }
}

pub(crate) fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

pub(crate) fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| Error::io(path, e))
}

/// Writes pretty JSON followed by a newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(path, e))
}
