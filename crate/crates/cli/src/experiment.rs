use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;

use crate::config::RunConfig;
use crate::error::{CliError, Result};

/// `value <= bound`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Named scalars, verdicts and equal-length columns.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExperimentResult {
    pub scalars: Vec<(String, f64)>,
    pub verdicts: Vec<Verdict>,
    pub columns: Vec<(String, Vec<f64>)>,
}

impl ExperimentResult {
    pub fn scalar(&mut self, name: &str, value: f64) -> Result<()> {
        if !value.is_finite() {
            return Err(CliError::Numerical(format!("{name} is not finite ({value})")));
        }
        self.scalars.push((name.to_string(), value));
        Ok(())
    }

    pub fn verdict(&mut self, name: &str, value: f64, bound: f64) -> Result<()> {
        self.scalar(name, value)?;
        self.verdicts.push(Verdict { name: name.to_string(), value, bound, pass: value <= bound });
        Ok(())
    }

    pub fn column(&mut self, name: &str, values: Vec<f64>) {
        if let Some((_, first)) = self.columns.first() {
            assert_eq!(first.len(), values.len(), "column {name} has the wrong length");
        }
        self.columns.push((name.to_string(), values));
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.scalars.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, |(_, c)| c.len())
    }

    /// Human-readable summary, one line per scalar.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for (name, value) in &self.scalars {
            match self.verdicts.iter().find(|v| &v.name == name) {
                Some(v) => out.push_str(&format!(
                    "{} {name} = {value:.6e} (bound {:.1e})\n",
                    if v.pass { "PASS" } else { "FAIL" },
                    v.bound
                )),
                None => out.push_str(&format!("     {name} = {value:.6e}\n")),
            }
        }
        out
    }
}

/// 17 significant digits.
fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}

/// `<path>.meta.json`.
pub fn meta_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

/// Writes the series as CSV and a JSON sidecar with the scalars, verdicts
/// and the resolved configuration.
pub fn emit_csv(result: &ExperimentResult, config: &RunConfig, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    if !result.columns.is_empty() {
        w.write_record(result.columns.iter().map(|(n, _)| n.as_str()))?;
        for i in 0..result.rows() {
            w.write_record(result.columns.iter().map(|(_, c)| fmt_real(c[i])))?;
        }
    }
    w.flush()?;

    let scalars: serde_json::Map<String, serde_json::Value> =
        result.scalars.iter().map(|(n, v)| (n.clone(), json!(v))).collect();
    let meta = json!({
        "config": config,
        "scalars": scalars,
        "verdicts": result.verdicts,
        "columns": result.columns.iter().map(|(n, _)| n).collect::<Vec<_>>(),
    });
    let text = serde_json::to_string_pretty(&meta).map_err(|e| CliError::Io(std::io::Error::other(e)))?;
    fs::write(meta_path(path), text + "\n")?;
    Ok(())
}
