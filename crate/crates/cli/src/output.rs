//! Trajectory CSV and summary JSON.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde_json::Value;
use solvfel::dynamics::Record;

pub const CSV_HEADER: &str = "tau,A0_scaled,phi,bunch_re,bunch_im,p_mean,conserved";
pub const SUMMARY_FILE: &str = "summary.json";
pub const TRAJECTORY_FILE: &str = "trajectory.csv";
pub const PLOT_FILE: &str = "trajectory.svg";

/// One trajectory row as stored on disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Row {
    pub tau: f64,
    pub amplitude: f64,
    pub phase: f64,
    pub bunch_re: f64,
    pub bunch_im: f64,
    pub p_mean: f64,
    pub conserved: f64,
}

impl Row {
    pub fn bunching_abs(&self) -> f64 {
        self.bunch_re.hypot(self.bunch_im)
    }
}

impl From<&Record> for Row {
    fn from(r: &Record) -> Self {
        Self {
            tau: r.tau,
            amplitude: r.amplitude,
            phase: r.phase,
            bunch_re: r.bunching.re,
            bunch_im: r.bunching.im,
            p_mean: r.p_mean,
            conserved: r.conserved,
        }
    }
}

pub fn trajectory_csv(records: &[Record]) -> String {
    let mut out = String::with_capacity(records.len() * 170 + 64);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        let row = Row::from(r);
        let _ = writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            row.tau, row.amplitude, row.phase, row.bunch_re, row.bunch_im, row.p_mean, row.conserved
        );
    }
    out
}

pub fn parse_trajectory_csv(text: &str) -> Result<Vec<Row>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == CSV_HEADER => {}
        Some(h) => bail!("unexpected trajectory header `{h}`; expected `{CSV_HEADER}`"),
        None => bail!("trajectory file is empty"),
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let v: Vec<f64> = line
            .split(',')
            .map(|f| f.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .with_context(|| format!("line {}: malformed number", i + 2))?;
        if v.len() != 7 {
            bail!("line {}: expected 7 columns, found {}", i + 2, v.len());
        }
        rows.push(Row {
            tau: v[0],
            amplitude: v[1],
            phase: v[2],
            bunch_re: v[3],
            bunch_im: v[4],
            p_mean: v[5],
            conserved: v[6],
        });
    }
    Ok(rows)
}

/// JSON number, or a string for infinities and NaN.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        Value::from(x)
    } else if x.is_nan() {
        Value::from("nan")
    } else if x > 0.0 {
        Value::from("inf")
    } else {
        Value::from("-inf")
    }
}

pub fn opt_num(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

pub fn summary_json(summary: &Value) -> String {
    let mut s = serde_json::to_string_pretty(summary).expect("summary is plain JSON");
    s.push('\n');
    s
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}
