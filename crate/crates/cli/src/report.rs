//! Report assembly and emission as JSON or markdown.

use serde::Serialize;
use serde_json::{json, Value};

/// Version of the JSON layout, shipped as `schema/report.schema.json`.
pub const SCHEMA_VERSION: u64 = 1;

/// Outcome of one comparison against a published value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Match,
    Mismatch,
    /// The published value is known to conflict with the computation and is
    /// reported without being counted.
    Disputed,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub check: String,
    pub expected: Value,
    pub computed: Value,
    pub status: Status,
}

/// A markdown table.
#[derive(Clone, Debug)]
pub struct Table {
    pub title: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(title: impl Into<String>, headers: &[&str]) -> Table {
        Table { title: title.into(), headers: headers.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }
    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub args: Value,
    pub ring: Value,
    pub result: Value,
    pub verdicts: Vec<Verdict>,
    pub tables: Vec<Table>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(command: &str, args: Value, ring: Value) -> Report {
        Report { command: command.into(), args, ring, result: Value::Null, verdicts: Vec::new(), tables: Vec::new(), notes: Vec::new() }
    }

    /// Records a comparison; equal JSON values match.
    pub fn check(&mut self, check: impl Into<String>, expected: impl Serialize, computed: impl Serialize) -> bool {
        let (expected, computed) = (to_value(expected), to_value(computed));
        let status = if expected == computed { Status::Match } else { Status::Mismatch };
        self.verdicts.push(Verdict { check: check.into(), expected, computed, status });
        status == Status::Match
    }

    /// Records a comparison against a published value known to be in dispute.
    pub fn disputed(&mut self, check: impl Into<String>, expected: impl Serialize, computed: impl Serialize) {
        let (expected, computed) = (to_value(expected), to_value(computed));
        self.verdicts.push(Verdict { check: check.into(), expected, computed, status: Status::Disputed });
    }

    /// `None` when nothing was compared, otherwise whether every counted
    /// comparison matched.
    pub fn published_match(&self) -> Option<bool> {
        if self.verdicts.is_empty() {
            None
        } else {
            Some(self.verdicts.iter().all(|v| v.status != Status::Mismatch))
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": SCHEMA_VERSION,
            "command": self.command,
            "args": self.args,
            "ring": self.ring,
            "result": self.result,
            "verdicts": self.verdicts,
            "notes": self.notes,
            "published_match": self.published_match(),
        })
    }

    pub fn emit_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn emit_markdown(&self) -> String {
        let mut out = format!("# dgg {}\n\n", self.command);
        if let Value::Object(m) = &self.ring {
            let parts: Vec<String> = m.iter().map(|(k, v)| format!("{k} = {}", plain(v))).collect();
            out.push_str(&format!("Ring: {}\n\n", parts.join(", ")));
        }
        for t in &self.tables {
            out.push_str(&format!("## {}\n\n", t.title));
            out.push_str(&format!("| {} |\n", t.headers.join(" | ")));
            out.push_str(&format!("|{}\n", "---|".repeat(t.headers.len())));
            for r in &t.rows {
                let cells: Vec<String> = r.iter().map(|c| cell(c)).collect();
                out.push_str(&format!("| {} |\n", cells.join(" | ")));
            }
            out.push('\n');
        }
        if !self.verdicts.is_empty() {
            out.push_str("## Comparisons\n\n| check | expected | computed | status |\n|---|---|---|---|\n");
            for v in &self.verdicts {
                let status = serde_json::to_value(v.status).expect("status serializes");
                out.push_str(&format!("| {} | {} | {} | {} |\n", cell(&v.check), cell(&plain(&v.expected)), cell(&plain(&v.computed)), plain(&status)));
            }
            out.push('\n');
        }
        for n in &self.notes {
            out.push_str(&format!("- {n}\n"));
        }
        if !self.notes.is_empty() {
            out.push('\n');
        }
        let pm = match self.published_match() {
            None => "n/a".to_string(),
            Some(b) => b.to_string(),
        };
        out.push_str(&format!("published match: {pm}\n"));
        out
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("value serializes")
}

/// JSON value without string quotes, for markdown cells.
pub fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Escapes pipes so a value stays inside one markdown cell.
fn cell(s: &str) -> String {
    s.replace('|', "\\|")
}
