//! CSV and JSON files.
//!
//! Floats are written with Rust's shortest round-trip formatting (`{:?}`),
//! which is locale independent and parses back to the identical value.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use allometry_core::entropy::EntropyPoint;
use allometry_core::sweeps::{Fig2Row, HGammaPoint, SweepRow};
use allometry_core::SystemSample;
use serde::Serialize;

use crate::error::{CliError, Result};

/// Minimum number of valid rows in an ingested scatter.
pub const MIN_SCATTER_ROWS: usize = 3;

pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::io(path, e))
}

fn write_rows<I>(path: &Path, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(create(path)?);
    let to_err = |e: csv::Error| CliError::io(path, e.into());
    w.write_record(header).map_err(to_err)?;
    for row in rows {
        w.write_record(&row).map_err(to_err)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

/// `point_id,P,T`
pub fn write_scatter_csv(path: &Path, samples: &[SystemSample]) -> Result<()> {
    write_rows(
        path,
        &["point_id", "P", "T"],
        samples.iter().map(|s| {
            vec![
                s.task_id.to_string(),
                s.population.to_string(),
                fmt_f64(s.new_tags),
            ]
        }),
    )
}

/// A row skipped during ingestion because its values are out of domain.
#[derive(Debug, Clone, PartialEq)]
pub struct RowDiagnostic {
    pub line: u64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IngestedScatter {
    pub samples: Vec<SystemSample>,
    pub rejected: Vec<RowDiagnostic>,
}

enum Population {
    Count(u64),
    /// Parsed but not a whole count of at least 1.
    Invalid,
}

/// Integers parse exactly; other numeric forms (`10.0`, `1e3`) are accepted
/// when they denote a whole count.
fn parse_population(field: &str) -> Option<Population> {
    if let Ok(n) = field.parse::<u64>() {
        return Some(if n >= 1 {
            Population::Count(n)
        } else {
            Population::Invalid
        });
    }
    let v: f64 = field.parse().ok().filter(|v: &f64| !v.is_nan())?;
    Some(if v >= 1.0 && v.fract() == 0.0 && v < u64::MAX as f64 {
        Population::Count(v as u64)
    } else {
        Population::Invalid
    })
}

/// Reads a scatter with header `point_id,P,T` or `P,T`.
///
/// Rows that parse but have `P < 1`, a fractional `P`, or `T ≤ 0` are
/// skipped and reported in [`IngestedScatter::rejected`]; rows that do not
/// parse are errors.
pub fn read_scatter_csv(path: &Path) -> Result<IngestedScatter> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file);
    let mut records = rdr.records();
    let header = match records.next() {
        None => {
            return Err(CliError::BadInput(format!(
                "{}: fewer than {MIN_SCATTER_ROWS} valid rows",
                path.display()
            )))
        }
        Some(r) => r.map_err(|e| CliError::BadInput(format!("{}: {e}", path.display())))?,
    };
    let cols: Vec<&str> = header.iter().collect();
    let with_id = match cols.as_slice() {
        ["point_id", "P", "T"] => true,
        ["P", "T"] => false,
        _ => {
            return Err(CliError::Row {
                path: path.into(),
                line: 1,
                msg: format!(
                    "expected header `point_id,P,T` or `P,T`, got `{}`",
                    cols.join(",")
                ),
            })
        }
    };
    let width = if with_id { 3 } else { 2 };

    let mut samples = Vec::new();
    let mut rejected = Vec::new();
    for (idx, rec) in records.enumerate() {
        let rec = rec.map_err(|e| CliError::BadInput(format!("{}: {e}", path.display())))?;
        let line = rec.position().map_or(idx as u64 + 2, |p| p.line());
        let row_err = |msg: String| CliError::Row {
            path: path.into(),
            line,
            msg,
        };
        if rec.len() == 1 && rec.get(0) == Some("") {
            continue;
        }
        if rec.len() != width {
            return Err(row_err(format!(
                "expected {width} fields, found {}",
                rec.len()
            )));
        }
        let fields: Vec<&str> = rec.iter().collect();
        let (id, p_field, t_field) = if with_id {
            let id = fields[0]
                .parse::<u64>()
                .map_err(|_| row_err(format!("point_id `{}` is not an integer", fields[0])))?;
            (id, fields[1], fields[2])
        } else {
            (idx as u64, fields[0], fields[1])
        };
        let p = parse_population(p_field)
            .ok_or_else(|| row_err(format!("P `{p_field}` is not a number")))?;
        let t: f64 = t_field
            .parse()
            .ok()
            .filter(|t: &f64| !t.is_nan())
            .ok_or_else(|| row_err(format!("T `{t_field}` is not a number")))?;
        let population = match p {
            Population::Count(n) => n,
            Population::Invalid => {
                rejected.push(RowDiagnostic {
                    line,
                    reason: format!("P = {p_field} is not a whole count >= 1"),
                });
                continue;
            }
        };
        if !(t > 0.0 && t.is_finite()) {
            rejected.push(RowDiagnostic {
                line,
                reason: format!("T = {t_field} is not positive and finite"),
            });
            continue;
        }
        samples.push(SystemSample {
            population,
            new_tags: t,
            task_id: id,
        });
    }
    if samples.len() < MIN_SCATTER_ROWS {
        return Err(CliError::BadInput(format!(
            "{}: fewer than {MIN_SCATTER_ROWS} valid rows",
            path.display()
        )));
    }
    Ok(IngestedScatter { samples, rejected })
}

/// `family,n_sims,mean_gamma,sd_gamma`
pub fn write_table1_csv(path: &Path, rows: &[SweepRow]) -> Result<()> {
    write_rows(
        path,
        &["family", "n_sims", "mean_gamma", "sd_gamma"],
        rows.iter().map(|r| {
            vec![
                r.family.label().to_string(),
                r.n_sims.to_string(),
                fmt_f64(r.mean_gamma),
                fmt_f64(r.sd_gamma),
            ]
        }),
    )
}

/// `family,p1,p2,H,gamma`; `p2` is empty for Poisson.
pub fn write_hgamma_csv(path: &Path, points: &[HGammaPoint]) -> Result<()> {
    write_rows(
        path,
        &["family", "p1", "p2", "H", "gamma"],
        points.iter().map(|p| {
            vec![
                p.family.label().to_string(),
                fmt_f64(p.spec.p1),
                fmt_opt(p.spec.p2),
                fmt_f64(p.h()),
                fmt_f64(p.gamma),
            ]
        }),
    )
}

/// `C,beta,H`
pub fn write_fig2_csv(path: &Path, rows: &[Fig2Row]) -> Result<()> {
    write_rows(
        path,
        &["C", "beta", "H"],
        rows.iter()
            .map(|r| vec![fmt_f64(r.c), fmt_f64(r.beta), fmt_f64(r.entropy.h_rescaled)]),
    )
}

/// `C,beta,N,h1,h_rescaled,mode`
pub fn write_entropy_csv(path: &Path, rows: &[Fig2Row]) -> Result<()> {
    write_rows(
        path,
        &["C", "beta", "N", "h1", "h_rescaled", "mode"],
        rows.iter().map(|r| {
            vec![
                fmt_f64(r.c),
                fmt_f64(r.beta),
                r.entropy.n_users.to_string(),
                fmt_f64(r.entropy.h1),
                fmt_f64(r.entropy.h_rescaled),
                r.entropy.mode.name().to_string(),
            ]
        }),
    )
}

/// Reads a `C,beta,H` surface.
pub fn read_fig2_csv(path: &Path) -> Result<Vec<EntropyPoint>> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(file);
    let header = rdr
        .headers()
        .map_err(|e| CliError::BadInput(format!("{}: {e}", path.display())))?
        .clone();
    if header.iter().collect::<Vec<_>>() != ["C", "beta", "H"] {
        return Err(CliError::Row {
            path: path.into(),
            line: 1,
            msg: "expected header `C,beta,H`".into(),
        });
    }
    let mut points = Vec::new();
    for (idx, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| CliError::BadInput(format!("{}: {e}", path.display())))?;
        let line = rec.position().map_or(idx as u64 + 2, |p| p.line());
        let num = |i: usize| -> Result<f64> {
            let field = rec.get(i).unwrap_or("");
            field.parse::<f64>().map_err(|_| CliError::Row {
                path: path.into(),
                line,
                msg: format!("`{field}` is not a number"),
            })
        };
        points.push(EntropyPoint {
            c: num(0)?,
            beta: num(1)?,
            h: num(2)?,
        });
    }
    Ok(points)
}

/// Pretty JSON with a trailing newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| CliError::io(path, e.into()))?;
    w.write_all(b"\n")
        .and_then(|_| w.flush())
        .map_err(|e| CliError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting_round_trips() {
        for x in [
            1.0,
            0.1,
            1e-300,
            123456789.125,
            1.7976931348623157e308,
            3.0e110,
        ] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
        assert_eq!(fmt_f64(100.0), "100.0");
    }
}
