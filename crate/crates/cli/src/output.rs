//! Rendering of command results as JSON lines, CSV or plain text.

use std::io::Write;

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Adds the run's seed (and nothing else) to every top-level object.
pub fn stamp(mut v: Value, seed: u64) -> Value {
    match &mut v {
        Value::Object(m) => {
            m.insert("seed".into(), Value::from(seed));
        }
        Value::Array(items) => {
            for item in items.iter_mut() {
                if let Value::Object(m) = item {
                    m.insert("seed".into(), Value::from(seed));
                }
            }
        }
        _ => {}
    }
    v
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn rows(v: &Value) -> Vec<&Map<String, Value>> {
    match v {
        Value::Object(m) => vec![m],
        Value::Array(items) => items.iter().filter_map(Value::as_object).collect(),
        _ => Vec::new(),
    }
}

/// One CSV row per object, columns from the first object's keys.
pub fn to_csv(v: &Value) -> String {
    let rows = rows(v);
    let Some(first) = rows.first() else {
        return String::new();
    };
    let header: Vec<&String> = first.keys().collect();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header.iter().map(|k| k.as_str()))
        .expect("in-memory writer");
    for r in &rows {
        w.write_record(header.iter().map(|k| r.get(*k).map(scalar).unwrap_or_default()))
            .expect("in-memory writer");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8 fields")
}

/// Emits `v` in the requested format; `text` is used verbatim for the text
/// format when given, else the value is pretty-printed.
pub fn emit(out: &mut impl Write, format: Format, v: &Value, text: Option<String>) -> std::io::Result<()> {
    match format {
        Format::Json => writeln!(out, "{v}"),
        Format::Csv => write!(out, "{}", to_csv(v)),
        Format::Text => match text {
            Some(t) => writeln!(out, "{t}"),
            None => writeln!(out, "{}", serde_json::to_string_pretty(v).expect("valid json")),
        },
    }
}
