//! Reports: a human-readable part and a JSON part in which every number is
//! tagged `exact`, `certified-enclosure` or `display-only-float`.

use std::fmt::Display;

use minbound::pipeline::{Verdict, VerdictStatus};
use serde_json::{json, Value};

pub fn exact(v: impl Display) -> Value {
    json!({ "kind": "exact", "value": v.to_string() })
}

pub fn enclosure(lo: impl Display, hi: impl Display) -> Value {
    json!({ "kind": "certified-enclosure", "lo": lo.to_string(), "hi": hi.to_string() })
}

pub fn float(v: f64) -> Value {
    json!({ "kind": "display-only-float", "value": format!("{v:.6}") })
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    lines: Vec<String>,
    pub machine: serde_json::Map<String, Value>,
    pub verdicts: Vec<Verdict>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            lines: Vec::new(),
            machine: serde_json::Map::new(),
            verdicts: Vec::new(),
        }
    }

    pub fn heading(&mut self, title: &str) {
        if !self.lines.is_empty() {
            self.lines.push(String::new());
        }
        self.lines.push(format!("## {title}"));
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.lines.push(text.into());
    }

    pub fn set(&mut self, key: &str, v: Value) {
        self.machine.insert(key.to_string(), v);
    }

    pub fn add_verdicts(&mut self, vs: &[Verdict]) {
        self.verdicts.extend_from_slice(vs);
    }

    pub fn failed(&self) -> bool {
        self.verdicts.iter().any(|v| v.status == VerdictStatus::Fail)
    }

    pub fn render(&self) -> String {
        let mut out = format!("# minbound {}\n\n", self.command);
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        let mut machine = self.machine.clone();
        if !self.verdicts.is_empty() {
            out.push_str("\n## verdicts\n");
            for v in &self.verdicts {
                out.push_str(&format!("[{}] {}: {}\n", v.status, v.name, v.detail));
            }
            machine.insert(
                "verdicts".into(),
                Value::Array(
                    self.verdicts
                        .iter()
                        .map(|v| json!({ "name": v.name, "status": v.status.to_string(), "detail": v.detail }))
                        .collect(),
                ),
            );
        }
        machine.insert("command".into(), Value::String(self.command.clone()));
        out.push_str("\n--- machine-readable ---\n");
        out.push_str(&serde_json::to_string_pretty(&Value::Object(machine)).expect("json"));
        out.push('\n');
        out
    }
}
