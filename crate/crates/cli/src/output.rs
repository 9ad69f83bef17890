use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use zreg::report::fmt17;
use zreg::{format_complex, ComplexValue, ConvergenceTable};

use crate::args::{Command, Format};

/// Everything that determines a run's values. Thread count and output path
/// are left out because they cannot change a result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub tool: String,
    pub prime_cache: Option<String>,
    pub command: Command,
}

impl RunConfig {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Envelope {
    pub config: RunConfig,
    pub result: Value,
}

/// One command's output in all three renderings.
pub struct Report {
    pub result: Value,
    pub csv: String,
    pub text: String,
}

impl Report {
    pub fn new(result: impl Serialize, csv: String, text: String) -> Self {
        Self {
            result: serde_json::to_value(result).expect("result serializes"),
            csv,
            text,
        }
    }

    pub fn table(t: &ConvergenceTable) -> Self {
        Self::new(t, t.to_csv(), table_text(t))
    }
}

pub fn render(format: Format, config: &RunConfig, report: &Report) -> String {
    match format {
        Format::Json => {
            let env = Envelope {
                config: config.clone(),
                result: report.result.clone(),
            };
            let mut s = serde_json::to_string_pretty(&env).expect("envelope serializes");
            s.push('\n');
            s
        }
        Format::Csv => format!("# config: {}\n{}", config.to_json_line(), report.csv),
        Format::Text => format!("# config: {}\n{}", config.to_json_line(), report.text),
    }
}

/// Builds CSV text with a fixed header.
pub struct Csv {
    out: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut out = header.join(",");
        out.push('\n');
        Self { out }
    }

    pub fn row<I, S>(&mut self, cells: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let cells: Vec<String> = cells.into_iter().map(|c| quote(c.as_ref())).collect();
        self.out.push_str(&cells.join(","));
        self.out.push('\n');
    }

    pub fn finish(self) -> String {
        self.out
    }
}

fn quote(cell: &str) -> String {
    if cell.contains([',', '"', '\n']) {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_string()
    }
}

pub fn f(x: f64) -> String {
    fmt17(x)
}

pub fn re_im(z: ComplexValue) -> [String; 2] {
    [fmt17(z.re), fmt17(z.im)]
}

pub fn table_text(t: &ConvergenceTable) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# {} at z = {}", t.method, format_complex(t.z()));
    let _ = writeln!(s, "{:>10}  {:<45}  {:<45}  abs_err", "n", "value", "reference");
    for r in &t.rows {
        let _ = writeln!(
            s,
            "{:>10}  {:<45}  {:<45}  {:e}",
            r.n,
            format_complex(r.value()),
            format_complex(r.reference()),
            r.abs_err
        );
    }
    if let Some(slope) = t.error_slope() {
        let _ = writeln!(s, "# error slope against log n: {slope:.4}");
    }
    s
}

/// JSON pointer paths where two values differ, at most `limit` of them.
pub fn diff_paths(a: &Value, b: &Value, limit: usize) -> Vec<String> {
    fn walk(a: &Value, b: &Value, path: String, out: &mut Vec<String>, limit: usize) {
        if out.len() >= limit || a == b {
            return;
        }
        match (a, b) {
            (Value::Object(x), Value::Object(y)) => {
                for (k, va) in x {
                    match y.get(k) {
                        Some(vb) => walk(va, vb, format!("{path}/{k}"), out, limit),
                        None => out.push(format!("{path}/{k} (missing)")),
                    }
                }
                for k in y.keys().filter(|k| !x.contains_key(*k)) {
                    out.push(format!("{path}/{k} (unexpected)"));
                }
            }
            (Value::Array(x), Value::Array(y)) if x.len() == y.len() => {
                for (i, (va, vb)) in x.iter().zip(y).enumerate() {
                    walk(va, vb, format!("{path}/{i}"), out, limit);
                }
            }
            _ => out.push(format!("{}: {} vs {}", if path.is_empty() { "/" } else { &path }, a, b)),
        }
    }
    let mut out = Vec::new();
    walk(a, b, String::new(), &mut out, limit);
    out.truncate(limit);
    out
}
