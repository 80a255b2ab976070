use std::io::Write;
use std::path::Path;

use serde_json::{Map, Value};

/// One output cell. Numbers carry 17 significant digits in CSV.
#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Num(f64),
    Int(u64),
    Text(&'static str),
    Bool(bool),
}

impl Field {
    fn csv(&self) -> String {
        match self {
            Field::Num(x) => fmt_num(*x),
            Field::Int(n) => n.to_string(),
            Field::Text(s) => s.to_string(),
            Field::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Field::Num(x) => num_json(*x),
            Field::Int(n) => Value::from(*n),
            Field::Text(s) => Value::from(*s),
            Field::Bool(b) => Value::from(*b),
        }
    }
}

pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn num_json(x: f64) -> Value {
    // Non-finite values have no JSON number form.
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

#[derive(Debug, Clone)]
pub struct Table {
    pub header: &'static [&'static str],
    pub rows: Vec<Vec<Field>>,
}

impl Table {
    pub fn to_csv(&self) -> Vec<u8> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(self.header).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(Field::csv)).expect("in-memory write");
        }
        w.into_inner().expect("in-memory flush")
    }

    pub fn rows_json(&self) -> Value {
        let rows = self.rows.iter().map(|row| {
            let obj: Map<String, Value> = self
                .header
                .iter()
                .zip(row)
                .map(|(k, v)| (k.to_string(), v.json()))
                .collect();
            Value::Object(obj)
        });
        Value::Array(rows.collect())
    }
}

pub fn document(config: Value, summary: Value, rows: Value) -> Vec<u8> {
    let mut doc = Map::new();
    doc.insert("config".into(), config);
    doc.insert("summary".into(), summary);
    doc.insert("rows".into(), rows);
    let mut bytes = serde_json::to_vec_pretty(&Value::Object(doc)).expect("json values serialize");
    bytes.push(b'\n');
    bytes
}

/// Write to `path`, or to stdout when there is none.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, bytes),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()
        }
    }
}
