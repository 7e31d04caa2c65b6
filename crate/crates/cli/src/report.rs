//! Machine-readable run results: named threshold checks, a plot-ready time
//! series, and JSON / plain-text / CSV renderings. All numeric output is
//! deterministic for a fixed config; CSV floats carry 17 significant digits
//! so values round-trip exactly through text.

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};

/// Comparison a check applies between its measured value and threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CheckOp {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
    #[serde(rename = "<")]
    Below,
    #[serde(rename = ">")]
    Above,
    #[serde(rename = "==")]
    Equal,
}

impl CheckOp {
    pub fn holds(self, value: f64, threshold: f64) -> bool {
        match self {
            CheckOp::AtMost => value <= threshold,
            CheckOp::AtLeast => value >= threshold,
            CheckOp::Below => value < threshold,
            CheckOp::Above => value > threshold,
            CheckOp::Equal => value == threshold,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            CheckOp::AtMost => "<=",
            CheckOp::AtLeast => ">=",
            CheckOp::Below => "<",
            CheckOp::Above => ">",
            CheckOp::Equal => "==",
        }
    }
}

/// One named assertion: measured value, comparison, threshold, verdict.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub op: CheckOp,
    pub threshold: f64,
    pub passed: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, value: f64, op: CheckOp, threshold: f64) -> Self {
        let passed = op.holds(value, threshold);
        Check {
            name: name.into(),
            value,
            op,
            threshold,
            passed,
        }
    }
}

/// Fixed column order of every emitted time series.
pub const COLUMNS: [&str; 5] = ["t", "fidelity", "purity", "residual", "entropy"];

/// One row per clock reading; cells a scenario does not produce stay empty
/// (`null` in JSON, an empty cell in CSV).
#[derive(Debug, Clone, Serialize)]
pub struct TimeSeries {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl TimeSeries {
    pub fn empty() -> Self {
        TimeSeries {
            columns: COLUMNS.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_row(
        &mut self,
        t: f64,
        fidelity: Option<f64>,
        purity: Option<f64>,
        residual: Option<f64>,
        entropy: Option<f64>,
    ) {
        self.rows
            .push(vec![Some(t), fidelity, purity, residual, entropy]);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|cell| match cell {
                    Some(v) => format!("{v:.16e}"),
                    None => String::new(),
                })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// Complete result of one scenario run.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub scenario: String,
    pub version: String,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub timeseries: TimeSeries,
}

impl RunReport {
    pub fn new(scenario: String, seed: u64, checks: Vec<Check>, timeseries: TimeSeries) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        RunReport {
            scenario,
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            passed,
            checks,
            timeseries,
        }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    pub fn render_text(&self) -> String {
        let mut out = format!(
            "scenario {} (seed {}, version {})\n",
            self.scenario, self.seed, self.version
        );
        for check in &self.checks {
            out.push_str(&format!(
                "  {} {} = {:.6e} (need {} {:e})\n",
                if check.passed { "PASS" } else { "FAIL" },
                check.name,
                check.value,
                check.op.symbol(),
                check.threshold,
            ));
        }
        let passed = self.checks.iter().filter(|c| c.passed).count();
        out.push_str(&format!(
            "result: {} ({passed}/{} checks, {} timeseries rows)\n",
            if self.passed { "PASS" } else { "FAIL" },
            self.checks.len(),
            self.timeseries.rows.len(),
        ));
        out
    }
}

/// Writes the series as CSV. An empty series still gets its header line.
pub fn emit_timeseries(series: &TimeSeries, path: &Path) -> Result<()> {
    std::fs::write(path, series.to_csv()).map_err(|source| Error::Io {
        action: "write",
        path: path.to_path_buf(),
        source,
    })
}

/// Writes `report.json` and `timeseries.csv` into `dir`, creating it first.
pub fn write_report(report: &RunReport, dir: &Path) -> Result<(PathBuf, PathBuf)> {
    std::fs::create_dir_all(dir).map_err(|source| Error::Io {
        action: "create",
        path: dir.to_path_buf(),
        source,
    })?;
    let report_path = dir.join("report.json");
    std::fs::write(&report_path, report.to_json()).map_err(|source| Error::Io {
        action: "write",
        path: report_path.clone(),
        source,
    })?;
    let series_path = dir.join("timeseries.csv");
    emit_timeseries(&report.timeseries, &series_path)?;
    Ok((report_path, series_path))
}
