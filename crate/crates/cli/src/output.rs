//! Report printing: a human-readable summary followed by one JSON block.

use std::io::Write;

use serde_json::{json, Map, Value};

use fiplab::functionals::Outcome;

pub struct Report {
    title: String,
    lines: Vec<String>,
    data: Map<String, Value>,
}

impl Report {
    pub fn new(title: String) -> Self {
        Report { title, lines: Vec::new(), data: Map::new() }
    }

    pub fn line(&mut self, line: String) {
        self.lines.push(line);
    }

    pub fn set(&mut self, key: &str, value: Value) {
        self.data.insert(key.to_string(), value);
    }

    /// Writes the report to stdout; a closed pipe just ends the output.
    pub fn print(&self) {
        let _ = self.write_to(&mut std::io::stdout().lock());
    }

    fn write_to(&self, out: &mut impl Write) -> std::io::Result<()> {
        writeln!(out, "{}", self.title)?;
        for line in &self.lines {
            writeln!(out, "  {line}")?;
        }
        writeln!(out, "--- json ---")?;
        writeln!(out, "{}", serde_json::to_string_pretty(&self.data).expect("report serializes"))?;
        out.flush()
    }
}

pub fn outcome_text<T: std::fmt::Display>(o: &Outcome<T>) -> String {
    match o {
        Outcome::Converged(v) => format!("converged {v}"),
        Outcome::Diverged { budget } => format!("diverged (budget {budget})"),
        Outcome::IllFormedOracle(why) => format!("ill-formed oracle: {why}"),
    }
}

pub fn outcome_json<T: std::fmt::Display>(o: &Outcome<T>) -> Value {
    match o {
        Outcome::Converged(v) => json!({ "converged": v.to_string() }),
        Outcome::Diverged { budget } => json!({ "diverged": budget }),
        Outcome::IllFormedOracle(why) => json!({ "illFormed": why }),
    }
}
