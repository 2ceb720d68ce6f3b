//! CSV tables: divergence norms per stage and immersed boundary errors.

use std::path::{Path, PathBuf};

use crate::diagnostics::DivergenceReport;
use crate::error::{Error, Result};
use crate::pipeline::BoundaryError;

pub const DIAGNOSTICS_FILE: &str = "diagnostics.csv";
pub const BOUNDARY_ERROR_FILE: &str = "boundary_error.csv";

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Parse {
            path: path.to_path_buf(),
            msg: format!("{other:?}"),
        },
    }
}

fn write_table(path: &Path, header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    w.write_record(header).map_err(|e| csv_err(path, e))?;
    for row in rows {
        w.write_record(&row).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Writes `diagnostics.csv`, and `boundary_error.csv` when `bc_errors` is
/// non-empty. Returns the paths written.
pub fn write_report(reports: &[DivergenceReport], bc_errors: &[BoundaryError], dir: &Path) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    let path = dir.join(DIAGNOSTICS_FILE);
    write_table(
        &path,
        &["stage", "method", "linf", "l2", "argmax_i", "argmax_region"],
        reports.iter().map(|r| {
            vec![
                r.stage.name().to_string(),
                r.method.name().to_string(),
                num(r.linf),
                num(r.l2),
                r.argmax.to_string(),
                r.argmax_tag.label().to_string(),
            ]
        }),
    )?;
    written.push(path);

    if let Some(first) = bc_errors.first() {
        let dim = first.error.len();
        let many_regions = bc_errors.iter().any(|r| r.region != first.region);
        let header: &[&str] = if dim == 2 {
            &["edge", "s", "du1", "du2"]
        } else {
            &["edge", "s", "t", "du1", "du2", "du3"]
        };
        let path = dir.join(BOUNDARY_ERROR_FILE);
        write_table(
            &path,
            header,
            bc_errors.iter().map(|r| {
                let mut row = vec![if many_regions {
                    format!("{}/{}", r.region, r.edge)
                } else {
                    r.edge.to_string()
                }];
                row.push(num(r.s));
                if dim == 3 {
                    row.push(num(r.t));
                }
                row.extend(r.error.iter().map(|&e| num(e)));
                row
            }),
        )?;
        written.push(path);
    }
    Ok(written)
}

/// One parsed row of `diagnostics.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsRow {
    pub stage: String,
    pub method: String,
    pub linf: f64,
    pub l2: f64,
    pub argmax_i: usize,
    pub argmax_region: String,
}

pub fn read_diagnostics(path: &Path) -> Result<Vec<DiagnosticsRow>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_err(path, e))?;
    let bad = |msg: String| Error::Parse {
        path: path.to_path_buf(),
        msg,
    };
    r.records()
        .map(|rec| {
            let rec = rec.map_err(|e| csv_err(path, e))?;
            if rec.len() != 6 {
                return Err(bad(format!("expected 6 columns, found {}", rec.len())));
            }
            let f = |i: usize| rec[i].parse::<f64>().map_err(|_| bad(format!("bad number '{}'", &rec[i])));
            Ok(DiagnosticsRow {
                stage: rec[0].to_string(),
                method: rec[1].to_string(),
                linf: f(2)?,
                l2: f(3)?,
                argmax_i: rec[4].parse().map_err(|_| bad(format!("bad index '{}'", &rec[4])))?,
                argmax_region: rec[5].to_string(),
            })
        })
        .collect()
}

/// One parsed row of `boundary_error.csv`; `t` is zero for 2D files.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryErrorRow {
    pub edge: String,
    pub s: f64,
    pub t: f64,
    pub du: Vec<f64>,
}

pub fn read_boundary_errors(path: &Path) -> Result<Vec<BoundaryErrorRow>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_err(path, e))?;
    let three_d = r.headers().map_err(|e| csv_err(path, e))?.len() == 6;
    let bad = |msg: String| Error::Parse {
        path: path.to_path_buf(),
        msg,
    };
    r.records()
        .map(|rec| {
            let rec = rec.map_err(|e| csv_err(path, e))?;
            let nums = (1..rec.len())
                .map(|i| rec[i].parse::<f64>().map_err(|_| bad(format!("bad number '{}'", &rec[i]))))
                .collect::<Result<Vec<_>>>()?;
            let (s, t, du) = if three_d {
                (nums[0], nums[1], nums[2..].to_vec())
            } else {
                (nums[0], 0.0, nums[1..].to_vec())
            };
            Ok(BoundaryErrorRow {
                edge: rec[0].to_string(),
                s,
                t,
                du,
            })
        })
        .collect()
}
