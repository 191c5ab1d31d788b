//! Text formats: JSON state files and comma-separated grids.
//!
//! Numbers are written in shortest round-trip form, so reading a written file
//! reproduces every value exactly.

use serde::{Deserialize, Serialize};

use crate::channel::{attenuate, Transmittance};
use crate::cov::CovMatrix;
use crate::error::{Error, Result};
use crate::families::RegionMap;
use crate::witness::{gamma_coefficients, ppt_witness};

/// The only accepted value of [`StateFile::ordering`].
pub const ORDERING: &str = "q1,p1,q2,p2";

/// On-disk form of a covariance matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub label: String,
    pub ordering: String,
    pub matrix: [[f64; 4]; 4],
}

impl StateFile {
    pub fn new(label: impl Into<String>, v: &CovMatrix) -> Self {
        Self {
            label: label.into(),
            ordering: ORDERING.to_string(),
            matrix: v.rows(),
        }
    }

    /// Parses and validates; errors carry the 1-based line and column.
    pub fn parse(text: &str) -> Result<Self> {
        let file: StateFile = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        if file.ordering != ORDERING {
            return Err(Error::Parse {
                line: locate(text, "\"ordering\"").0,
                column: locate(text, "\"ordering\"").1,
                message: format!("ordering must be \"{ORDERING}\", got \"{}\"", file.ordering),
            });
        }
        file.covariance().map_err(|e| {
            let (line, column) = locate(text, "\"matrix\"");
            Error::Parse {
                line,
                column,
                message: e.to_string(),
            }
        })?;
        Ok(file)
    }

    pub fn covariance(&self) -> Result<CovMatrix> {
        CovMatrix::from_rows(self.matrix)
    }

    /// Pretty JSON with one matrix row per line.
    pub fn to_json(&self) -> String {
        let rows: Vec<String> = self
            .matrix
            .iter()
            .map(|row| {
                let cells: Vec<String> = row.iter().map(json_value).collect();
                format!("    [{}]", cells.join(", "))
            })
            .collect();
        format!(
            "{{\n  \"label\": {},\n  \"ordering\": {},\n  \"matrix\": [\n{}\n  ]\n}}\n",
            json_value(&self.label),
            json_value(&self.ordering),
            rows.join(",\n")
        )
    }
}

fn json_value<T: Serialize + ?Sized>(value: &T) -> String {
    serde_json::to_string(value).expect("plain values always serialize")
}

/// 1-based position of the first occurrence of `needle`, or `(1, 1)`.
fn locate(text: &str, needle: &str) -> (usize, usize) {
    let Some(offset) = text.find(needle) else {
        return (1, 1);
    };
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

/// Shortest string that parses back to the same `f64`.
pub fn number(x: f64) -> String {
    format!("{x:?}")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub t1: f64,
    pub t2: f64,
    pub w_ppt_attenuated: f64,
    pub w_reduced: f64,
}

/// `W_ppt` of the attenuated state and `W_R` on an `n x n` grid of `[0, 1]^2`,
/// row-major with `t1` outer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanGrid {
    pub resolution: usize,
    pub rows: Vec<ScanRow>,
}

pub fn scan(v: &CovMatrix, resolution: usize) -> Result<ScanGrid> {
    if resolution < 2 {
        return Err(Error::InvalidParameter {
            name: "grid",
            value: resolution as f64,
            reason: "at least 2 points per axis required".into(),
        });
    }
    let g = gamma_coefficients(v);
    let step = |k: usize| k as f64 / (resolution - 1) as f64;
    let mut rows = Vec::with_capacity(resolution * resolution);
    for i in 0..resolution {
        for j in 0..resolution {
            let (t1, t2) = (step(i), step(j));
            let t = Transmittance::new(t1, t2)?;
            rows.push(ScanRow {
                t1,
                t2,
                w_ppt_attenuated: ppt_witness(&attenuate(v, t)),
                w_reduced: g.reduced_at(t1, t2),
            });
        }
    }
    Ok(ScanGrid { resolution, rows })
}

impl ScanGrid {
    pub fn to_csv(&self) -> String {
        let rows = self.rows.iter().map(|r| {
            [r.t1, r.t2, r.w_ppt_attenuated, r.w_reduced].map(number).to_vec()
        });
        write_csv(&["t1", "t2", "w_ppt_attenuated", "w_reduced"], rows)
    }
}

pub fn contour_csv(points: &[(f64, f64)]) -> String {
    write_csv(&["t1", "t2"], points.iter().map(|&(t1, t2)| vec![number(t1), number(t2)]))
}

impl RegionMap {
    pub fn to_csv(&self) -> String {
        let header = [
            self.x_label.as_str(),
            self.y_label.as_str(),
            "region",
            "boundary",
            "w_ppt",
            "w_full",
            "w_ch1",
            "w_ch2",
        ];
        let rows = self.cells.iter().map(|c| {
            let mut row = vec![number(c.x), number(c.y), c.region.to_string(), c.boundary.to_string()];
            row.extend([c.w_ppt, c.w_full, c.w_ch1, c.w_ch2].map(number));
            row
        });
        write_csv(&header, rows)
    }
}

fn write_csv(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    // writing to memory cannot fail
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    let bytes = w.into_inner().expect("in-memory flush");
    String::from_utf8(bytes).expect("fields are ASCII")
}
