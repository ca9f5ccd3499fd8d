//! Machine-readable outputs: the per-frame time series and the verdict
//! summary. Both are rendered through fixed format strings so identical
//! inputs produce byte-identical files.

use serde::Serialize;
use std::fmt::Write as _;

fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{x:.16e}")
    }
}

/// One row of the time series; optional quantities are NaN when not
/// applicable (open frames, skipped Harnack frames, d = 1 pinching).
#[derive(Debug, Clone)]
pub struct ReportRow {
    pub t: f64,
    pub max_h: f64,
    pub min_h: f64,
    pub diam: f64,
    /// min Q_k for k = 1..d-1 (empty for curves).
    pub min_q: Vec<f64>,
    pub min_z: f64,
    pub phi: f64,
}

#[derive(Debug, Clone)]
pub struct ReportTable {
    /// Number of Q_k columns (d - 1 for d >= 2, else 0).
    pub q_columns: usize,
    pub rows: Vec<ReportRow>,
}

impl ReportTable {
    pub fn column_names(&self) -> Vec<String> {
        let mut cols = vec!["t".into(), "maxH".into(), "minH".into(), "diam".into()];
        for k in 1..=self.q_columns {
            cols.push(format!("minQ{k}"));
        }
        cols.push("minZ".into());
        cols.push("phi".into());
        cols
    }

    fn row_values(&self, r: &ReportRow) -> Vec<f64> {
        let mut v = vec![r.t, r.max_h, r.min_h, r.diam];
        v.extend(&r.min_q);
        v.push(r.min_z);
        v.push(r.phi);
        v
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.column_names().join(","));
        for r in &self.rows {
            let vals: Vec<String> = self.row_values(r).iter().map(|x| fmt_f64(*x)).collect();
            let _ = writeln!(out, "{}", vals.join(","));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut out = String::new();
        out.push_str("{\n  \"columns\": [");
        let cols: Vec<String> = self
            .column_names()
            .iter()
            .map(|c| format!("\"{c}\""))
            .collect();
        out.push_str(&cols.join(", "));
        out.push_str("],\n  \"rows\": [\n");
        for (i, r) in self.rows.iter().enumerate() {
            let vals: Vec<String> = self
                .row_values(r)
                .iter()
                .map(|x| {
                    if x.is_nan() {
                        "null".to_string()
                    } else {
                        fmt_f64(*x)
                    }
                })
                .collect();
            let _ = write!(out, "    [{}]", vals.join(", "));
            out.push_str(if i + 1 < self.rows.len() { ",\n" } else { "\n" });
        }
        out.push_str("  ]\n}\n");
        out
    }
}

/// Outcome of one verification check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckVerdict {
    pub name: String,
    pub pass: bool,
    /// Worst margin in the check's own units; positive is slack.
    pub worst_margin: f64,
    /// Where the worst margin occurred.
    pub location: String,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub scenario: String,
    pub geometry: String,
    pub seed: u64,
    pub tol_scale: f64,
    pub stop: String,
    pub steps: usize,
    pub frames: usize,
    pub checks: Vec<CheckVerdict>,
    pub exit_code: i32,
}

impl Verdict {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("verdict serializes");
        s.push('\n');
        s
    }
}
