//! Structured command reports, rendered as indented text or JSON.

use serde::Serialize;
use serde_json::{Map, Value};

use crate::cli::matrix_file::MatrixFile;
use crate::matrix::CMatrix;

#[derive(Clone, Debug)]
pub struct Report {
    command: String,
    inputs: Map<String, Value>,
    tolerances: Map<String, Value>,
    results: Map<String, Value>,
    runtime_ms: Option<f64>,
}

fn value(v: impl Serialize) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

/// JSON form of a matrix, in the matrix-file schema so it can be fed back.
pub fn matrix_value(a: &CMatrix) -> Value {
    value(MatrixFile::from_matrix(a))
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            inputs: Map::new(),
            tolerances: Map::new(),
            results: Map::new(),
            runtime_ms: None,
        }
    }

    pub fn input(&mut self, key: &str, v: impl Serialize) -> &mut Self {
        self.inputs.insert(key.to_string(), value(v));
        self
    }

    pub fn tolerance(&mut self, key: &str, v: impl Serialize) -> &mut Self {
        self.tolerances.insert(key.to_string(), value(v));
        self
    }

    pub fn result(&mut self, key: &str, v: impl Serialize) -> &mut Self {
        self.results.insert(key.to_string(), value(v));
        self
    }

    pub fn set_runtime_ms(&mut self, ms: f64) {
        self.runtime_ms = Some(ms);
    }

    pub fn results(&self) -> &Map<String, Value> {
        &self.results
    }

    pub fn to_value(&self) -> Value {
        let mut m = Map::new();
        m.insert("command".into(), Value::String(self.command.clone()));
        m.insert("inputs".into(), Value::Object(self.inputs.clone()));
        m.insert("tolerances".into(), Value::Object(self.tolerances.clone()));
        m.insert("results".into(), Value::Object(self.results.clone()));
        if let Some(ms) = self.runtime_ms {
            m.insert("runtime_ms".into(), value(ms));
        }
        Value::Object(m)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("reports serialize") + "\n"
    }

    /// `key: value` lines; objects nest by two spaces, everything else is
    /// written as compact JSON.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Value::Object(m) = self.to_value() {
            render(&m, 0, &mut out);
        }
        out
    }
}

fn render(m: &Map<String, Value>, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    for (k, v) in m {
        match v {
            Value::Object(inner) if !inner.is_empty() && !is_matrix(inner) => {
                out.push_str(&format!("{pad}{k}:\n"));
                render(inner, depth + 1, out);
            }
            Value::String(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
            other => out.push_str(&format!("{pad}{k}: {other}\n")),
        }
    }
}

fn is_matrix(m: &Map<String, Value>) -> bool {
    m.contains_key("entries") && m.contains_key("n")
}
