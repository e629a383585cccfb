//! Versioned JSON run reports and the on-disk result cache.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Result;

pub const SCHEMA_VERSION: u32 = 1;
pub const CACHE_ENV: &str = "PANCAKE_CACHE_DIR";
pub const DEFAULT_CACHE_DIR: &str = ".pancake-cache";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// `Finding` records a measured fact that is not a pass/fail claim, such as
/// an integer missing from a spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Finding,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub method: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tolerance: Option<f64>,
    pub detail: Value,
}

impl Check {
    pub fn new(name: impl Into<String>, outcome: Outcome, detail: Value) -> Self {
        Self {
            name: name.into(),
            outcome,
            method: None,
            tolerance: None,
            detail,
        }
    }

    pub fn pass_if(name: impl Into<String>, ok: bool, detail: Value) -> Self {
        Self::new(name, if ok { Outcome::Pass } else { Outcome::Fail }, detail)
    }

    pub fn method(mut self, method: impl ToString) -> Self {
        self.method = Some(method.to_string());
        self
    }

    pub fn tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = Some(tolerance);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: u32,
    pub command: String,
    pub parameters: Value,
    pub outcome: Outcome,
    pub checks: Vec<Check>,
    #[serde(default)]
    pub artifacts: Vec<String>,
    #[serde(default)]
    pub timings_ms: serde_json::Map<String, Value>,
    pub tool_version: String,
    /// Human-readable lines printed when `--json` is not given.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub summary: Vec<String>,
    /// Bulky auxiliary outputs such as spectrum CSVs.
    #[serde(default, skip_serializing_if = "serde_json::Map::is_empty")]
    pub data: serde_json::Map<String, Value>,
}

impl RunReport {
    pub fn new(command: impl Into<String>, parameters: Value) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            command: command.into(),
            parameters,
            outcome: Outcome::Pass,
            checks: Vec::new(),
            artifacts: Vec::new(),
            timings_ms: serde_json::Map::new(),
            tool_version: TOOL_VERSION.to_string(),
            summary: Vec::new(),
            data: serde_json::Map::new(),
        }
    }

    /// Appends a check; any failure makes the run fail.
    pub fn push(&mut self, check: Check) {
        match (self.outcome, check.outcome) {
            (_, Outcome::Fail) => self.outcome = Outcome::Fail,
            (Outcome::Pass, Outcome::Finding) => self.outcome = Outcome::Finding,
            _ => {}
        }
        self.checks.push(check);
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.summary.push(text.into());
    }

    pub fn time(&mut self, label: &str, ms: f64) {
        self.timings_ms.insert(label.to_string(), Value::from(ms));
    }

    pub fn failed(&self) -> bool {
        self.outcome == Outcome::Fail
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable")
    }

    /// One row per check: `name,outcome,method,tolerance`.
    pub fn checks_csv(&self) -> String {
        let mut s = String::from("name,outcome,method,tolerance\n");
        for c in &self.checks {
            let outcome = match c.outcome {
                Outcome::Pass => "pass",
                Outcome::Fail => "fail",
                Outcome::Finding => "finding",
            };
            s.push_str(&format!(
                "{},{},{},{}\n",
                csv_field(&c.name),
                outcome,
                c.method.as_deref().unwrap_or(""),
                c.tolerance.map(|t| format!("{t:e}")).unwrap_or_default()
            ));
        }
        s
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Writes via a sibling temporary file and a rename.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let name = path
        .file_name()
        .map(|s| s.to_string_lossy())
        .unwrap_or_default();
    let tmp = path.with_file_name(format!(".{name}.{}.tmp", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Report cache keyed by command, `n` and tool version.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    /// `$PANCAKE_CACHE_DIR`, else `./.pancake-cache`.
    pub fn from_env() -> Self {
        match std::env::var_os(CACHE_ENV) {
            Some(d) if !d.is_empty() => Self::new(d),
            _ => Self::new(DEFAULT_CACHE_DIR),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, command: &str, key: &str) -> PathBuf {
        self.dir.join(format!(
            "{command}-{key}-v{TOOL_VERSION}-s{SCHEMA_VERSION}.json"
        ))
    }

    /// A cached report, or `None` if absent or unreadable.
    pub fn load(&self, command: &str, key: &str) -> Option<RunReport> {
        let text = fs::read_to_string(self.path_for(command, key)).ok()?;
        let report: RunReport = serde_json::from_str(&text).ok()?;
        (report.schema == SCHEMA_VERSION && report.tool_version == TOOL_VERSION).then_some(report)
    }

    pub fn store(&self, command: &str, key: &str, report: &RunReport) -> Result<PathBuf> {
        let path = self.path_for(command, key);
        write_atomic(&path, report.to_json().as_bytes())?;
        Ok(path)
    }

    /// Stores a side file such as a spectrum CSV next to the reports.
    pub fn store_text(&self, command: &str, key: &str, ext: &str, text: &str) -> Result<PathBuf> {
        let path = self
            .dir
            .join(format!("{command}-{key}-v{TOOL_VERSION}.{ext}"));
        write_atomic(&path, text.as_bytes())?;
        Ok(path)
    }
}
