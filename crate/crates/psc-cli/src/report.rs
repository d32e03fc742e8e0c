use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::{write, Fatal};

pub const SCHEMA_VERSION: u32 = 1;

pub enum Outcome {
    Ok,
    /// A property or validation did not hold.
    Failed,
}

#[derive(Serialize)]
pub struct Row {
    pub name: String,
    pub passed: bool,
    pub data: Value,
    /// Table text only.
    #[serde(skip)]
    pub detail: String,
}

impl Row {
    pub fn new(name: String, passed: bool, data: Value, detail: String) -> Self {
        Row {
            name,
            passed,
            data,
            detail,
        }
    }
}

#[derive(Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub seed: Option<u64>,
    pub passed: bool,
    pub total: usize,
    pub failures: usize,
    pub rows: Vec<Row>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            seed: None,
            passed: true,
            total: 0,
            failures: 0,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Row) {
        self.total += 1;
        if !row.passed {
            self.failures += 1;
            self.passed = false;
        }
        self.rows.push(row);
    }

    pub fn table(&self) -> String {
        let width = self.rows.iter().map(|r| r.name.len()).max().unwrap_or(0).max(4);
        let mut out = String::new();
        for r in &self.rows {
            let status = if r.passed { "pass" } else { "FAIL" };
            let _ = writeln!(out, "{status}  {:<width$}  {}", r.name, r.detail);
        }
        let _ = writeln!(
            out,
            "{}: {} rows, {} failed",
            self.command, self.total, self.failures
        );
        out
    }

    /// Prints the table and writes the JSON summary to `json` when given.
    pub fn emit(&self, json: Option<&Path>) -> Result<Outcome, Fatal> {
        print!("{}", self.table());
        if let Some(path) = json {
            let mut text = serde_json::to_string_pretty(self)?;
            text.push('\n');
            write(path, &text)?;
        }
        Ok(if self.passed {
            Outcome::Ok
        } else {
            Outcome::Failed
        })
    }
}
