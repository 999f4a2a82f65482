//! Report types and deterministic serialization.
//!
//! Every float leaves the program through [`Sig17`], which prints 17 significant
//! digits in exponent form so values round-trip exactly and identical runs
//! produce identical bytes.

use std::io::Write;
use std::path::Path;

use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::config::{ConfigEcho, Format};

/// A float serialized with 17 significant digits; non-finite values become `null`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sig17(pub f64);

impl Sig17 {
    pub fn text(self) -> String {
        if self.0.is_finite() {
            format!("{:.16e}", self.0)
        } else {
            format!("{}", self.0)
        }
    }
}

impl Serialize for Sig17 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = RawValue::from_string(self.text()).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub max_deviation: Option<Sig17>,
    pub threshold: Sig17,
    pub status: Status,
    /// Why a check was skipped or failed to run, or what its pass means.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    /// Passes iff `deviation` is finite and strictly below `threshold`.
    pub fn measured(name: impl Into<String>, deviation: f64, threshold: f64) -> Self {
        let status = if deviation < threshold {
            Status::Pass
        } else {
            Status::Fail
        };
        Self {
            name: name.into(),
            max_deviation: Some(Sig17(deviation)),
            threshold: Sig17(threshold),
            status,
            note: None,
        }
    }

    pub fn skipped(name: impl Into<String>, threshold: f64, reason: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            max_deviation: None,
            threshold: Sig17(threshold),
            status: Status::Skipped,
            note: Some(reason.into()),
        }
    }

    /// A check whose computation itself failed.
    pub fn errored(name: impl Into<String>, threshold: f64, error: impl std::fmt::Display) -> Self {
        Self {
            name: name.into(),
            max_deviation: None,
            threshold: Sig17(threshold),
            status: Status::Fail,
            note: Some(format!("error: {error}")),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// A reported quantity with no pass/fail threshold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Observation {
    pub name: String,
    pub value: Option<Sig17>,
    pub note: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub config_echo: ConfigEcho,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub observations: Vec<Observation>,
    pub version: &'static str,
}

impl Report {
    pub fn new(config_echo: ConfigEcho, checks: Vec<Check>) -> Self {
        Self {
            config_echo,
            checks,
            observations: Vec::new(),
            version: env!("CARGO_PKG_VERSION"),
        }
    }

    pub fn with_observations(mut self, observations: Vec<Observation>) -> Self {
        self.observations = observations;
        self
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => to_json(self),
            Format::Csv => {
                let mut out = String::from("name,max_deviation,threshold,status,note\n");
                for c in &self.checks {
                    let dev = c.max_deviation.map(Sig17::text).unwrap_or_default();
                    let status = match c.status {
                        Status::Pass => "pass",
                        Status::Fail => "fail",
                        Status::Skipped => "skipped",
                    };
                    out.push_str(&csv_row(&[
                        c.name.clone(),
                        dev,
                        c.threshold.text(),
                        status.to_string(),
                        c.note.clone().unwrap_or_default(),
                    ]));
                }
                for o in &self.observations {
                    out.push_str(&csv_row(&[
                        o.name.clone(),
                        o.value.map(Sig17::text).unwrap_or_default(),
                        String::new(),
                        "observed".to_string(),
                        o.note.clone(),
                    ]));
                }
                out
            }
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types always serialize");
    s.push('\n');
    s
}

/// One CSV line, quoting fields that contain separators or quotes.
pub fn csv_row(fields: &[String]) -> String {
    let quoted: Vec<String> = fields
        .iter()
        .map(|f| {
            if f.contains([',', '"', '\n']) {
                format!("\"{}\"", f.replace('"', "\"\""))
            } else {
                f.clone()
            }
        })
        .collect();
    format!("{}\n", quoted.join(","))
}

/// Writes `text` to `path` through a temporary file in the same directory and a rename,
/// or to stdout when no path is given.
pub fn emit(text: &str, path: Option<&Path>) -> std::io::Result<()> {
    match path {
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes())?;
            lock.flush()
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(d) if !d.as_os_str().is_empty() => d,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(text.as_bytes())?;
            tmp.as_file().sync_all()?;
            tmp.persist(path).map_err(|e| e.error)?;
            Ok(())
        }
    }
}
