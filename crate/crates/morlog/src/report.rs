//! Structured run reports shared by the CLI and the FFI layer.
//!
//! A `Report` is the single output artifact of every subcommand: the
//! command name, the parameters as given, named results, and a list of
//! checks, each an identity verified by exact computation. Maps are
//! ordered and serialization is canonical, so a fixed configuration
//! produces byte-identical output.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::Serialize;

use crate::{Error, Result};

/// One verified identity: a stable anchor name, the verdict, and a short
/// human-readable detail line.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub anchor: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub params: BTreeMap<String, String>,
    pub results: BTreeMap<String, serde_json::Value>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(command: &str) -> Report {
        Report {
            command: command.to_string(),
            params: BTreeMap::new(),
            results: BTreeMap::new(),
            checks: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn result(&mut self, key: &str, value: impl Into<serde_json::Value>) -> &mut Self {
        self.results.insert(key.to_string(), value.into());
        self
    }

    pub fn check(&mut self, anchor: &str, pass: bool, detail: impl ToString) -> &mut Self {
        self.checks.push(Check {
            anchor: anchor.to_string(),
            pass,
            detail: detail.to_string(),
        });
        self
    }

    /// True when every check passed (vacuously true without checks).
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One CSV row per check: `anchor,pass,detail`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("anchor,pass,detail\n");
        for c in &self.checks {
            out.push_str(&format!(
                "{},{},{}\n",
                csv_field(&c.anchor),
                c.pass,
                csv_field(&c.detail)
            ));
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("command: {}\n", self.command);
        for (k, v) in &self.params {
            out.push_str(&format!("param {k} = {v}\n"));
        }
        for (k, v) in &self.results {
            match v {
                serde_json::Value::String(s) => out.push_str(&format!("{k}: {s}\n")),
                other => out.push_str(&format!("{k}: {other}\n")),
            }
        }
        for c in &self.checks {
            let verdict = if c.pass { "pass" } else { "FAIL" };
            out.push_str(&format!("[{verdict}] {}: {}\n", c.anchor, c.detail));
        }
        let verdict = if self.pass() { "ok" } else { "FAILED" };
        out.push_str(&format!("overall: {verdict}\n"));
        out
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => self.to_json(),
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Text => self.to_text(),
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<OutputFormat> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "text" => Ok(OutputFormat::Text),
            other => Err(Error::usage(format!(
                "unknown output format {other:?} (expected json, csv, or text)"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rendering_is_deterministic() {
        let build = || {
            let mut r = Report::new("demo");
            r.param("prime", 2).param("rank", 3);
            r.result("values", vec![1, 7, 7, 1]);
            r.check("alternating-sum", true, "sum = 0");
            r
        };
        let a = build();
        let b = build();
        for f in [OutputFormat::Json, OutputFormat::Csv, OutputFormat::Text] {
            assert_eq!(a.render(f), b.render(f));
        }
        assert!(a.pass());
        let json: serde_json::Value = serde_json::from_str(&a.to_json()).unwrap();
        assert_eq!(json["command"], "demo");
        assert_eq!(json["checks"][0]["anchor"], "alternating-sum");
    }

    #[test]
    fn csv_escapes_commas_and_quotes() {
        let mut r = Report::new("demo");
        r.check("c", false, "a,b and \"q\"");
        let csv = r.to_csv();
        assert!(csv.contains("\"a,b and \"\"q\"\"\""));
        assert!(!r.pass());
    }

    #[test]
    fn format_parsing() {
        assert_eq!("json".parse::<OutputFormat>().unwrap(), OutputFormat::Json);
        assert!("yaml".parse::<OutputFormat>().is_err());
    }
}
