//! Experiment reports and their on-disk formats.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::projection::Margin;
use crate::stats::LinearFit;

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Int(i64),
    Num(f64),
    Bool(bool),
    Text(String),
}

impl Value {
    fn to_csv(&self) -> String {
        match self {
            Value::Int(v) => v.to_string(),
            Value::Num(v) => format_float(*v),
            Value::Bool(v) => v.to_string(),
            Value::Text(v) => v.clone(),
        }
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Num(v)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as i64)
    }
}

impl From<i64> for Value {
    fn from(v: i64) -> Self {
        Value::Int(v)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_string())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}

/// 17 significant digits, locale-free.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.16e}")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FittedConstant {
    pub name: String,
    pub estimate: f64,
    pub ci: Option<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    /// `None` when the check was vacuous or inapplicable.
    pub margin: Option<Margin>,
    pub note: String,
}

impl CheckRecord {
    pub fn holds(&self) -> bool {
        self.margin.is_none_or(|m| m.holds)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub version: String,
    pub seed: u64,
    pub config: serde_json::Value,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    pub fits: Vec<FittedConstant>,
    pub regressions: Vec<(String, LinearFit)>,
    pub checks: Vec<CheckRecord>,
    pub notes: Vec<String>,
}

impl ExperimentReport {
    pub fn new(experiment: &str, seed: u64, config: serde_json::Value, columns: &[&str]) -> Self {
        ExperimentReport {
            experiment: experiment.to_string(),
            version: ARTIFACT_VERSION.to_string(),
            seed,
            config,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            fits: Vec::new(),
            regressions: Vec::new(),
            checks: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn fit(&mut self, name: &str, estimate: f64, ci: Option<(f64, f64)>) {
        self.fits.push(FittedConstant {
            name: name.to_string(),
            estimate,
            ci,
        });
    }

    pub fn check(&mut self, name: &str, margin: Option<Margin>, note: impl Into<String>) {
        self.checks.push(CheckRecord {
            name: name.to_string(),
            margin,
            note: note.into(),
        });
    }

    pub fn fitted(&self, name: &str) -> Option<f64> {
        self.fits.iter().find(|f| f.name == name).map(|f| f.estimate)
    }

    pub fn regression(&self, name: &str) -> Option<&LinearFit> {
        self.regressions.iter().find(|r| r.0 == name).map(|r| &r.1)
    }

    pub fn column(&self, name: &str) -> Vec<f64> {
        let Some(i) = self.columns.iter().position(|c| c == name) else {
            return Vec::new();
        };
        self.rows
            .iter()
            .filter_map(|r| match r[i] {
                Value::Num(v) => Some(v),
                Value::Int(v) => Some(v as f64),
                _ => None,
            })
            .collect()
    }

    pub fn all_checks_hold(&self) -> bool {
        self.checks.iter().all(CheckRecord::holds)
    }

    pub fn csv_string(&self) -> Result<String> {
        let mut out = String::new();
        let config = serde_json::to_string(&self.config)?;
        let _ = writeln!(out, "# experiment: {}", self.experiment);
        let _ = writeln!(out, "# version: {}", self.version);
        let _ = writeln!(out, "# seed: {}", self.seed);
        let _ = writeln!(out, "# config: {config}");
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Value::to_csv))?;
        }
        let body = w.into_inner().map_err(|e| crate::TeichError::Io(e.to_string()))?;
        out.push_str(&String::from_utf8_lossy(&body));
        Ok(out)
    }

    pub fn json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// A matplotlib script plotting `y` against `x` from the CSV next to it.
    pub fn plot_script(&self, x: &str, y: &str) -> String {
        let csv = format!("{}.csv", self.experiment);
        format!(
            "# experiment: {exp}\n# version: {ver}\n# seed: {seed}\n\
             import csv\nimport os\n\nimport matplotlib.pyplot as plt\n\n\
             here = os.path.dirname(os.path.abspath(__file__))\n\
             with open(os.path.join(here, \"{csv}\")) as fh:\n    \
             rows = list(csv.DictReader(line for line in fh if not line.startswith(\"#\")))\n\n\
             xs = [float(r[\"{x}\"]) for r in rows if r[\"{y}\"] not in (\"\", \"nan\")]\n\
             ys = [float(r[\"{y}\"]) for r in rows if r[\"{y}\"] not in (\"\", \"nan\")]\n\
             plt.scatter(xs, ys, s=8)\nplt.xlabel(\"{x}\")\nplt.ylabel(\"{y}\")\n\
             plt.title(\"{exp}\")\nplt.savefig(os.path.join(here, \"{exp}.png\"), dpi=150)\n",
            exp = self.experiment,
            ver = self.version,
            seed = self.seed,
        )
    }

    /// Writes `<id>.csv`, `<id>.json` and `<id>_plot.py` into `dir`.
    pub fn write_all(&self, dir: &Path, x: &str, y: &str) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        let csv_path = dir.join(format!("{}.csv", self.experiment));
        let json_path = dir.join(format!("{}.json", self.experiment));
        let plot_path = dir.join(format!("{}_plot.py", self.experiment));
        fs::write(&csv_path, self.csv_string()?)?;
        fs::write(&json_path, self.json_string()?)?;
        fs::write(&plot_path, self.plot_script(x, y))?;
        Ok(vec![csv_path, json_path, plot_path])
    }
}
