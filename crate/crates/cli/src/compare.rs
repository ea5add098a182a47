//! Per-family norm ratios between two runs.

use std::fmt::Write as _;
use std::path::Path;

use crate::output::{read_csv, CsvTable};

#[derive(Debug, thiserror::Error)]
pub enum CompareError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("the runs monitor different columns")]
    Columns,
    #[error("the runs share no time interval")]
    NoOverlap,
}

/// Ratios `a / b` at the times of run `a` that fall inside run `b`'s time
/// range; `b` is interpolated linearly between its rows. `0 / 0` counts as 1.
#[derive(Clone, Debug, PartialEq)]
pub struct RatioTable {
    pub columns: Vec<String>,
    pub rows: Vec<(f64, Vec<f64>)>,
}

impl RatioTable {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Ratio of column `name` in the last row.
    pub fn last(&self, name: &str) -> Option<f64> {
        let c = self.column(name)?;
        self.rows.last().map(|(_, r)| r[c])
    }

    pub fn to_csv(&self) -> String {
        let mut s = format!("t,{}\n", self.columns.join(","));
        for (t, r) in &self.rows {
            let _ = write!(s, "{t:e}");
            for v in r {
                let _ = write!(s, ",{v:e}");
            }
            s.push('\n');
        }
        s
    }
}

fn ratio(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        if a == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        a / b
    }
}

/// Row of `table` at time `t`, linear between neighbouring rows. The first
/// column is time and must be increasing.
pub fn interpolate(table: &CsvTable, t: f64) -> Option<Vec<f64>> {
    let rows = &table.rows;
    let first = rows.first()?;
    let last = rows.last()?;
    let tol = 1e-12 * (1.0 + last[0].abs());
    if t < first[0] - tol || t > last[0] + tol {
        return None;
    }
    if let Some(r) = rows.iter().find(|r| (r[0] - t).abs() <= tol) {
        return Some(r.clone());
    }
    let k = rows.iter().position(|r| r[0] > t)?;
    let (lo, hi) = (&rows[k - 1], &rows[k]);
    let w = (t - lo[0]) / (hi[0] - lo[0]);
    Some(lo.iter().zip(hi).map(|(a, b)| a + w * (b - a)).collect())
}

pub fn compare_tables(a: &CsvTable, b: &CsvTable) -> Result<RatioTable, CompareError> {
    if a.header != b.header {
        return Err(CompareError::Columns);
    }
    let mut rows = Vec::new();
    for ra in &a.rows {
        if let Some(rb) = interpolate(b, ra[0]) {
            rows.push((
                ra[0],
                ra[1..]
                    .iter()
                    .zip(&rb[1..])
                    .map(|(x, y)| ratio(*x, *y))
                    .collect(),
            ));
        }
    }
    if rows.is_empty() {
        return Err(CompareError::NoOverlap);
    }
    Ok(RatioTable {
        columns: a.header[1..].to_vec(),
        rows,
    })
}

pub fn compare_dirs(a: &Path, b: &Path) -> Result<RatioTable, CompareError> {
    let read = |d: &Path| {
        let p = d.join("constraints.csv");
        read_csv(&p).map_err(|source| CompareError::Read {
            path: p.display().to_string(),
            source,
        })
    };
    compare_tables(&read(a)?, &read(b)?)
}
