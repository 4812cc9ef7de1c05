//! Experiment outputs: a JSON metadata header followed by CSV rows or JSON
//! lines. All writers are byte-stable for identical inputs.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::dist::{EmpiricalDist, MassFunction};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Metadata written at the head of every output file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Metadata {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub streams: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
}

impl Metadata {
    pub fn new(command: impl Into<String>) -> Self {
        Metadata {
            tool: "av321",
            version: VERSION,
            command: command.into(),
            n: None,
            seed: None,
            streams: None,
            samples: None,
        }
    }

    /// The header block: one `# `-prefixed line of compact JSON.
    pub fn header(&self) -> String {
        format!(
            "# {}\n",
            serde_json::to_string(self).expect("metadata serializes")
        )
    }
}

#[derive(Debug, thiserror::Error)]
#[error("writing {path}: {source}")]
pub struct ReportError {
    pub path: PathBuf,
    #[source]
    pub source: io::Error,
}

/// A CSV table with a fixed header.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    /// One JSON object per row, keyed by column name. Cells that parse as
    /// numbers are written as numbers.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            let obj: serde_json::Map<String, serde_json::Value> = self
                .columns
                .iter()
                .zip(row)
                .map(|(k, v)| {
                    let value = v
                        .parse::<serde_json::Number>()
                        .map(serde_json::Value::Number)
                        .unwrap_or_else(|_| serde_json::Value::String(v.clone()));
                    (k.clone(), value)
                })
                .collect();
            writeln!(out, "{}", serde_json::Value::Object(obj)).expect("string write");
        }
        out
    }
}

/// One row of a convergence series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergencePoint {
    pub n: u64,
    pub tv: f64,
    pub ci: f64,
}

pub fn convergence_table(points: &[ConvergencePoint]) -> Table {
    let mut t = Table::new(&["n", "tv", "ci"]);
    for p in points {
        t.push(vec![
            p.n.to_string(),
            format!("{:.6}", p.tv),
            format!("{:.6}", p.ci),
        ]);
    }
    t
}

/// Theoretical and empirical masses side by side over the union of the
/// empirical support and the theoretical atoms above `min_mass`.
pub fn pmf_overlay(
    theory: &impl MassFunction,
    empirical: &EmpiricalDist<u64>,
    min_mass: f64,
) -> Table {
    let mut t = Table::new(&["outcome", "theoretical", "empirical"]);
    let mut last = empirical.support_bound();
    while theory.mass(last + 1) >= min_mass {
        last += 1;
    }
    let observed_max = if empirical.total() == 0 {
        0
    } else {
        empirical.support_bound()
    };
    for k in 0..=last.max(observed_max) {
        let th = theory.mass(k);
        let em = empirical.frequency(&k);
        if th >= min_mass || empirical.count(&k) > 0 {
            t.push(vec![k.to_string(), format!("{th:.8}"), format!("{em:.8}")]);
        }
    }
    t
}

/// Rough 95% scale of the total variation distance produced by sampling
/// noise alone: `(1/2) sum_k 1.96 sqrt(p_k (1 - p_k) / N)` over observed cells.
pub fn tv_noise_scale<K: Ord + Clone>(empirical: &EmpiricalDist<K>) -> f64 {
    let n = empirical.total() as f64;
    if n == 0.0 {
        return 0.0;
    }
    0.5 * empirical
        .iter()
        .map(|(k, _)| {
            let p = empirical.frequency(k);
            1.96 * (p * (1.0 - p) / n).sqrt()
        })
        .sum::<f64>()
}

/// Writes `meta`'s header then `body` to `path`.
pub fn write_report(path: &Path, meta: &Metadata, body: &str) -> Result<(), ReportError> {
    let mut text = meta.header();
    text.push_str(body);
    fs::write(path, text).map_err(|source| ReportError {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::Pmf;

    #[test]
    fn header_only_csv_for_empty_results() {
        assert_eq!(convergence_table(&[]).to_csv(), "n,tv,ci\n");
    }

    #[test]
    fn convergence_rows() {
        let pts: Vec<_> = [50, 200, 1000]
            .into_iter()
            .map(|n| ConvergencePoint {
                n,
                tv: 0.01,
                ci: 0.002,
            })
            .collect();
        let csv = convergence_table(&pts).to_csv();
        assert_eq!(csv.lines().count(), 4);
        assert!(csv.contains("200,0.010000,0.002000"));
    }

    #[test]
    fn overlay_uses_union_support() {
        let g = Pmf::geometric(2.0 / 3.0).unwrap();
        let emp: EmpiricalDist<u64> = [0, 0, 0, 1, 9].into_iter().collect();
        let t = pmf_overlay(&g, &emp, 1e-3);
        let outcomes: Vec<&str> = t.rows.iter().map(|r| r[0].as_str()).collect();
        // theoretical atoms with mass >= 1e-3 are 0..=5; 9 is observed
        assert_eq!(outcomes, vec!["0", "1", "2", "3", "4", "5", "9"]);
        assert!(t.rows.iter().all(|r| r.len() == 3));
    }

    #[test]
    fn json_lines_types() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec!["1".into(), "x y".into()]);
        assert_eq!(t.to_json_lines(), "{\"a\":1,\"b\":\"x y\"}\n");
    }

    #[test]
    fn io_errors_carry_path() {
        let err = write_report(
            Path::new("/nonexistent/dir/out.csv"),
            &Metadata::new("t"),
            "",
        )
        .unwrap_err();
        assert!(err.to_string().contains("/nonexistent/dir/out.csv"));
    }

    #[test]
    fn metadata_header_is_one_line() {
        let mut m = Metadata::new("sample-perm");
        m.seed = Some(7);
        let h = m.header();
        assert!(h.starts_with("# {\"tool\":\"av321\""));
        assert!(h.contains("\"seed\":7"));
        assert_eq!(h.matches('\n').count(), 1);
    }
}
