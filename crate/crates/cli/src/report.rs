use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub detail: Value,
}

/// Output of one command. Field order and map ordering are fixed, so equal
/// inputs give byte-identical reports.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub command: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub facts: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<Value>,
    /// A translated document to print in place of the report.
    #[serde(skip)]
    pub document: Option<Value>,
}

impl Report {
    pub fn new(command: Vec<String>) -> Self {
        Report { command, ..Default::default() }
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: impl Serialize) {
        let status = if passed { Status::Pass } else { Status::Fail };
        self.checks.push(Check { name: name.into(), status, detail: serde_json::to_value(detail).unwrap_or(Value::Null) });
    }

    pub fn skip(&mut self, name: &str, reason: &str) {
        self.checks.push(Check { name: name.into(), status: Status::Skipped, detail: Value::String(reason.into()) });
    }

    pub fn fact(&mut self, name: &str, value: impl Serialize) {
        self.facts.insert(name.into(), serde_json::to_value(value).unwrap_or(Value::Null));
    }

    pub fn passed(&self) -> bool {
        self.error.is_none() && self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{}", self.command.join(" "));
        if let Some(kind) = &self.kind {
            let _ = writeln!(s, "  kind: {kind}");
        }
        if let Some(e) = &self.error {
            let _ = writeln!(s, "  error: {e}");
            if let Some(Value::Array(ws)) = &self.witnesses {
                for w in ws {
                    let _ = writeln!(s, "    {w}");
                }
            }
        }
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Skipped => "skip",
            };
            let _ = write!(s, "  {:width$}  {tag}", c.name);
            if c.status != Status::Pass && !c.detail.is_null() {
                let _ = write!(s, "  {}", c.detail);
            }
            s.push('\n');
        }
        for (k, v) in &self.facts {
            let _ = writeln!(s, "  {k} = {v}");
        }
        s
    }
}
