//! Convergence tables: the carrier for every limit diagnostic. A table lists
//! `(n, value, reference, |value − reference|)` rows for one `z` and one
//! method and serializes to CSV or JSON.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::ComplexValue;

/// Formats a double with 17 significant digits, round-trip safe.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n: u64,
    pub re: f64,
    pub im: f64,
    pub ref_re: f64,
    pub ref_im: f64,
    pub abs_err: f64,
}

impl ConvergenceRow {
    pub fn new(n: u64, value: ComplexValue, reference: ComplexValue) -> Self {
        Self {
            n,
            re: value.re,
            im: value.im,
            ref_re: reference.re,
            ref_im: reference.im,
            abs_err: (value - reference).norm(),
        }
    }

    pub fn value(&self) -> ComplexValue {
        ComplexValue::new(self.re, self.im)
    }

    pub fn reference(&self) -> ComplexValue {
        ComplexValue::new(self.ref_re, self.ref_im)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTable {
    pub z_re: f64,
    pub z_im: f64,
    pub method: String,
    /// Left empty unless the caller stamps the table; unstamped tables are
    /// reproducible byte for byte.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    pub const CSV_HEADER: &'static str = "n,re,im,ref_re,ref_im,abs_err";

    pub fn new(z: ComplexValue, method: impl Into<String>) -> Self {
        Self {
            z_re: z.re,
            z_im: z.im,
            method: method.into(),
            timestamp: None,
            rows: Vec::new(),
        }
    }

    pub fn z(&self) -> ComplexValue {
        ComplexValue::new(self.z_re, self.z_im)
    }

    /// Appends a row; `n` must exceed the previous row's `n`.
    pub fn push(&mut self, n: u64, value: ComplexValue, reference: ComplexValue) -> Result<()> {
        if let Some(last) = self.rows.last() {
            if n <= last.n {
                return Err(Error::Invariant(format!(
                    "convergence rows must have increasing n ({} after {})",
                    n, last.n
                )));
            }
        }
        self.rows.push(ConvergenceRow::new(n, value, reference));
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.n,
                fmt17(r.re),
                fmt17(r.im),
                fmt17(r.ref_re),
                fmt17(r.ref_im),
                fmt17(r.abs_err)
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }

    /// Least-squares slope of `log abs_err` against `log n`, over rows with a
    /// positive error. `None` with fewer than two usable rows.
    pub fn error_slope(&self) -> Option<f64> {
        let pts: Vec<(f64, f64)> = self
            .rows
            .iter()
            .filter(|r| r.abs_err > 0.0 && r.n > 0)
            .map(|r| ((r.n as f64).ln(), r.abs_err.ln()))
            .collect();
        least_squares_slope(&pts)
    }
}

pub fn least_squares_slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        None
    } else {
        Some(sxy / sxx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::c64;

    #[test]
    fn rows_must_increase() {
        let mut t = ConvergenceTable::new(c64(2.0, 0.0), "euler-product");
        t.push(10, c64(1.0, 0.0), c64(1.0, 0.0)).unwrap();
        assert!(t.push(10, c64(1.0, 0.0), c64(1.0, 0.0)).is_err());
        assert!(t.push(5, c64(1.0, 0.0), c64(1.0, 0.0)).is_err());
    }

    #[test]
    fn csv_and_json_shapes() {
        let mut t = ConvergenceTable::new(c64(0.5, 14.0), "ratio");
        t.push(100, c64(0.1, -0.2), c64(0.0, 0.0)).unwrap();
        let csv = t.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(ConvergenceTable::CSV_HEADER));
        let cells: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(cells.len(), 6);
        assert_eq!(cells[1].parse::<f64>().unwrap(), 0.1);
        let back = ConvergenceTable::from_json(&t.to_json()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn slope_of_power_law() {
        let mut t = ConvergenceTable::new(c64(2.0, 0.0), "x");
        for n in [10u64, 100, 1000] {
            t.push(n, c64(1.0 / n as f64, 0.0), c64(0.0, 0.0)).unwrap();
        }
        assert!((t.error_slope().unwrap() + 1.0).abs() < 1e-12);
    }
}
