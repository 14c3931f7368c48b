use num_complex::Complex64;
use serde_json::{json, Value};

use crate::amplitude::{Matrix, NumericMode};

/// Version tag of every JSON artifact.
pub const SCHEMA: &str = "multiport/1";

/// Header plus rows of already formatted cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<const N: usize>(header: [&str; N]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let quote = |c: &String| {
            if c.contains([',', '"', '\n']) {
                format!("\"{}\"", c.replace('"', "\"\""))
            } else {
                c.clone()
            }
        };
        let mut s = String::new();
        for line in std::iter::once(&self.header).chain(&self.rows) {
            s.push_str(&line.iter().map(quote).collect::<Vec<_>>().join(","));
            s.push('\n');
        }
        s
    }
}

#[derive(Debug, Clone)]
pub struct Output {
    pub data: Value,
    pub table: Option<Table>,
    /// Exit code to report after emitting the artifact.
    pub status: i32,
}

impl Output {
    pub fn new(data: Value, table: Option<Table>) -> Self {
        Self { data, table, status: 0 }
    }

    pub fn render_json(&self, command: &str, mode: NumericMode) -> String {
        let doc = json!({
            "schema": SCHEMA,
            "command": command,
            "numeric_mode": mode,
            "data": self.data,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("JSON values serialize");
        s.push('\n');
        s
    }

    pub fn render_csv(&self) -> Option<String> {
        self.table.as_ref().map(Table::render)
    }
}

pub fn c64_cells(z: Complex64) -> [String; 2] {
    [z.re.to_string(), z.im.to_string()]
}

pub fn matrix_json(m: &Matrix<Complex64>) -> Value {
    Value::Array(
        m.rows()
            .map(|row| Value::Array(row.iter().map(|z| json!({ "re": z.re, "im": z.im })).collect()))
            .collect(),
    )
}
