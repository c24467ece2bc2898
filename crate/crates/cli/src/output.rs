use std::fmt::Display;
use std::io::{self, Write};

use serde_json::{Map, Value};

use crate::args::Format;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Decimal-string encoding used for every number in machine output.
pub fn num(x: impl Display) -> Value {
    Value::String(x.to_string())
}

pub fn opt_num<T: Display>(x: Option<T>) -> Value {
    x.map_or(Value::Null, num)
}

pub fn opt_bool(x: Option<bool>) -> Value {
    x.map_or(Value::Null, Value::Bool)
}

/// Rows for CSV output when a command is naturally tabular.
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

pub struct Report {
    pub command: &'static str,
    pub inputs: Map<String, Value>,
    pub results: Map<String, Value>,
    pub verdicts: Map<String, Value>,
    pub text: String,
    pub table: Option<Table>,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Self {
            command,
            inputs: Map::new(),
            results: Map::new(),
            verdicts: Map::new(),
            text: String::new(),
            table: None,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut top = Map::new();
        top.insert("command".into(), Value::String(self.command.into()));
        top.insert("inputs".into(), Value::Object(self.inputs.clone()));
        top.insert("results".into(), Value::Object(self.results.clone()));
        top.insert("verdicts".into(), Value::Object(self.verdicts.clone()));
        top.insert("version".into(), Value::String(VERSION.into()));
        Value::Object(top)
    }

    pub fn write(&self, format: Format, out: &mut impl Write) -> io::Result<()> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, &self.to_json())?;
                writeln!(out)
            }
            Format::Text => {
                out.write_all(self.text.as_bytes())?;
                if !self.text.ends_with('\n') {
                    writeln!(out)?;
                }
                Ok(())
            }
            Format::Csv => match &self.table {
                Some(t) => write_table(t, out),
                None => {
                    let mut cols = Vec::new();
                    let mut vals = Vec::new();
                    for (section, map) in [
                        ("inputs", &self.inputs),
                        ("results", &self.results),
                        ("verdicts", &self.verdicts),
                    ] {
                        flatten(section, map, &mut cols, &mut vals);
                    }
                    writeln!(out, "{}", cols.join(","))?;
                    writeln!(out, "{}", vals.join(","))
                }
            },
        }
    }
}

pub fn write_table(t: &Table, out: &mut impl Write) -> io::Result<()> {
    writeln!(out, "{}", t.header.join(","))?;
    for row in &t.rows {
        writeln!(out, "{}", row.iter().map(|c| csv_field(c)).collect::<Vec<_>>().join(","))?;
    }
    Ok(())
}

fn flatten(prefix: &str, map: &Map<String, Value>, cols: &mut Vec<String>, vals: &mut Vec<String>) {
    for (k, v) in map {
        let key = format!("{prefix}.{k}");
        match v {
            Value::Object(inner) => flatten(&key, inner, cols, vals),
            other => {
                cols.push(key);
                vals.push(csv_field(&scalar(other)));
            }
        }
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(scalar).collect::<Vec<_>>().join(";"),
        other => other.to_string(),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
