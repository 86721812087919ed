//! Report envelope and its JSON / CSV renderings.

use clap::ValueEnum;
use ffincidence::report::{Assertion, MAX_SAFE_INTEGER};
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Serialize)]
pub struct Envelope {
    pub command: String,
    pub params: Value,
    pub results: Vec<Value>,
    pub mismatches: Vec<Value>,
    pub assertions: Vec<Assertion>,
    pub elapsed_ms: u64,
    pub seed: Option<u64>,
    pub version: String,
}

impl Envelope {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.assertions.iter().all(|a| a.pass)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }
}

/// Serializes to a JSON value, turning integers beyond `2^53` into decimal strings.
pub fn to_value<T: Serialize + ?Sized>(v: &T) -> Value {
    let mut value = serde_json::to_value(v).expect("report types serialize to JSON");
    clamp_integers(&mut value);
    value
}

fn clamp_integers(v: &mut Value) {
    match v {
        Value::Number(n) => {
            let unsafe_int = n.as_u64().is_some_and(|u| u > MAX_SAFE_INTEGER)
                || n.as_i64().is_some_and(|i| i.unsigned_abs() > MAX_SAFE_INTEGER);
            if unsafe_int {
                *v = Value::String(n.to_string());
            }
        }
        Value::Array(items) => items.iter_mut().for_each(clamp_integers),
        Value::Object(map) => map.values_mut().for_each(clamp_integers),
        _ => {}
    }
}

pub fn render_json(env: &Envelope) -> String {
    let mut s = serde_json::to_string_pretty(&to_value(env)).expect("envelope serializes");
    s.push('\n');
    s
}

/// One row per result item; nested objects become dotted columns, arrays stay JSON.
pub fn render_csv(env: &Envelope) -> Result<String, csv::Error> {
    let rows: Vec<Vec<(String, String)>> = env
        .results
        .iter()
        .map(|item| {
            let mut row = Vec::new();
            flatten("", item, &mut row);
            row
        })
        .collect();
    let mut header: Vec<String> = Vec::new();
    for row in &rows {
        for (k, _) in row {
            if !header.contains(k) {
                header.push(k.clone());
            }
        }
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    if !rows.is_empty() {
        w.write_record(&header)?;
    }
    for row in &rows {
        w.write_record(header.iter().map(|h| row.iter().find(|(k, _)| k == h).map_or("", |(_, v)| v.as_str())))?;
    }
    let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, child, out);
            }
        }
        Value::Null => out.push((prefix.to_string(), String::new())),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        Value::Array(_) => out.push((prefix.to_string(), serde_json::to_string(v).expect("value serializes"))),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}
