//! `KEY: value` reports with a JSON mirror.
//!
//! Text: one `KEY: value` line per entry, in insertion order. JSON:
//! `{"command": …, "entries": [[KEY, value], …]}` with the same entries,
//! numbers as JSON numbers rounded exactly as in the text form.

use serde_json::{json, Value};
use wgspec_core::format::{fmt_complex, fmt_real};
use wgspec_core::Complex64;

pub struct Report {
    command: &'static str,
    entries: Vec<(String, Value)>,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        let mut r = Report {
            command,
            entries: Vec::new(),
        };
        r.text("COMMAND", command);
        r
    }

    pub fn text(&mut self, key: &str, value: impl Into<String>) {
        self.entries.push((key.to_string(), Value::String(value.into())));
    }

    pub fn num(&mut self, key: &str, x: f64) {
        let rounded: f64 = fmt_real(x).parse().expect("formatted real parses");
        self.entries.push((key.to_string(), json!(rounded)));
    }

    pub fn int(&mut self, key: &str, n: usize) {
        self.entries.push((key.to_string(), json!(n)));
    }

    pub fn pass(&mut self, key: &str, ok: bool) {
        self.text(key, if ok { "PASS" } else { "FAIL" });
    }

    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            let entries: Vec<Value> = self.entries.iter().map(|(k, v)| json!([k, v])).collect();
            let mut s = serde_json::to_string_pretty(&json!({
                "command": self.command,
                "entries": entries,
            }))
            .expect("report serializes");
            s.push('\n');
            return s;
        }
        let mut out = String::new();
        for (k, v) in &self.entries {
            out.push_str(k);
            out.push_str(": ");
            match v {
                Value::String(s) => out.push_str(s),
                Value::Number(n) => out.push_str(&fmt_real(n.as_f64().expect("finite number"))),
                other => out.push_str(&other.to_string()),
            }
            out.push('\n');
        }
        out
    }
}

/// Real values print as plain reals, others as `a+bi`.
pub fn point(z: Complex64) -> String {
    if fmt_real(z.im) == "0" {
        fmt_real(z.re)
    } else {
        fmt_complex(z)
    }
}

pub fn point_list(values: &[Complex64]) -> String {
    values.iter().map(|&z| point(z)).collect::<Vec<_>>().join(", ")
}

pub fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}
