//! Reports and their JSON, CSV and text renderings.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub class: String,
    pub params: BTreeMap<String, String>,
    pub quantity: String,
    pub value: Value,
    pub elapsed_ms: u64,
    pub memo_entries: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub optimal_first_moves: Vec<String>,
    #[serde(default)]
    pub columns: Vec<String>,
    #[serde(default)]
    pub rows: Vec<Vec<Value>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl Format {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" | "table" => Ok(Format::Text),
            _ => Err(Error::InvalidParameter(format!("unknown format {:?}", s))),
        }
    }
}

impl Report {
    pub fn new(class: impl Into<String>, quantity: impl Into<String>) -> Self {
        Report {
            class: class.into(),
            params: BTreeMap::new(),
            quantity: quantity.into(),
            value: Value::Null,
            elapsed_ms: 0,
            memo_entries: 0,
            optimal_first_moves: Vec::new(),
            columns: Vec::new(),
            rows: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn columns(&mut self, cols: &[&str]) -> &mut Self {
        self.columns = cols.iter().map(|c| c.to_string()).collect();
        self
    }

    pub fn row(&mut self, values: Vec<Value>) -> &mut Self {
        self.rows.push(values);
        self
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), msg: e.to_string() })
    }

    pub fn emit(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Csv => self.to_csv(),
            Format::Text => self.to_text(),
        }
    }

    /// The rows as RFC 4180 CSV with a header line. A report without rows
    /// becomes a single `class,quantity,value` row.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
        if self.columns.is_empty() {
            w.write_record(["class", "quantity", "value"]).expect("write to memory");
            w.write_record([self.class.clone(), self.quantity.clone(), cell(&self.value)]).expect("write to memory");
            return String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf8");
        }
        w.write_record(&self.columns).expect("write to memory");
        for row in &self.rows {
            w.write_record(row.iter().map(cell)).expect("write to memory");
        }
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf8")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} = {}\n", self.class, self.quantity, cell(&self.value));
        for (k, v) in &self.params {
            out.push_str(&format!("  {}: {}\n", k, v));
        }
        if self.memo_entries > 0 {
            out.push_str(&format!("  memo_entries: {}\n", self.memo_entries));
        }
        if !self.optimal_first_moves.is_empty() {
            out.push_str(&format!("  optimal_first_moves: {}\n", self.optimal_first_moves.join(" ")));
        }
        if !self.columns.is_empty() {
            out.push('\n');
            out.push_str(&text_table(&self.columns, &self.rows));
        }
        out
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

pub fn text_table(columns: &[String], rows: &[Vec<Value>]) -> String {
    let cells: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(cell).collect()).collect();
    let widths: Vec<usize> = (0..columns.len())
        .map(|i| cells.iter().filter_map(|r| r.get(i)).map(|c| c.len()).chain([columns[i].len()]).max().unwrap_or(0))
        .collect();
    let line = |vals: Vec<&str>| {
        let parts: Vec<String> = vals.iter().enumerate().map(|(i, v)| format!("{:<w$}", v, w = widths[i])).collect();
        format!("{}\n", parts.join("  ").trim_end())
    };
    let mut out = line(columns.iter().map(|c| c.as_str()).collect());
    out.push_str(&line(widths.iter().map(|&w| "-".repeat(w)).collect::<Vec<_>>().iter().map(|s| s.as_str()).collect()));
    for r in &cells {
        out.push_str(&line(r.iter().map(|c| c.as_str()).collect()));
    }
    out
}
