//! Report emission. JSON keys come out sorted because `serde_json::Map` is
//! a `BTreeMap` here; rationals stay `"p/q"` strings in JSON and become
//! decimals in CSV.

use hyperslice::rational::{decimal, format_decimal, parse_rational, Rational};
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone)]
pub enum Cell {
    Int(i64),
    Rat(Rational),
    Float(f64),
    Text(String),
}

impl Cell {
    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Rat(q) => Value::from(q.to_string()),
            Cell::Float(x) => Value::from(format_decimal(*x)),
            Cell::Text(s) => Value::from(s.clone()),
        }
    }

    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Rat(q) => decimal(q),
            Cell::Float(x) => format_decimal(*x),
            Cell::Text(s) => s.clone(),
        }
    }
}

#[derive(Debug, Clone)]
pub enum Report {
    Doc(Value),
    Table { header: Vec<&'static str>, rows: Vec<Vec<Cell>> },
}

impl Report {
    pub fn render(&self, format: Format, timestamp: Option<u64>) -> Result<Vec<u8>, csv::Error> {
        match (self, format) {
            (Report::Doc(v), Format::Json) => {
                let mut v = v.clone();
                if let (Some(ts), Value::Object(map)) = (timestamp, &mut v) {
                    map.insert("generated_at".into(), Value::from(ts));
                }
                Ok(json_bytes(&v))
            }
            (Report::Table { header, rows }, Format::Json) => {
                let items: Vec<Value> = rows
                    .iter()
                    .map(|row| {
                        let map: Map<String, Value> = header.iter().zip(row).map(|(h, c)| (h.to_string(), c.json())).collect();
                        Value::Object(map)
                    })
                    .collect();
                let mut doc = Map::new();
                doc.insert("rows".into(), Value::Array(items));
                if let Some(ts) = timestamp {
                    doc.insert("generated_at".into(), Value::from(ts));
                }
                Ok(json_bytes(&Value::Object(doc)))
            }
            (Report::Table { header, rows }, Format::Csv) => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(header)?;
                for row in rows {
                    w.write_record(row.iter().map(Cell::csv))?;
                }
                Ok(w.into_inner().map_err(|e| e.into_error())?)
            }
            (Report::Doc(v), Format::Csv) => {
                let mut pairs = Vec::new();
                flatten("", v, &mut pairs);
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(["key", "value"])?;
                for (k, v) in pairs {
                    w.write_record([k, v])?;
                }
                Ok(w.into_inner().map_err(|e| e.into_error())?)
            }
        }
    }
}

fn json_bytes(v: &Value) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(v).expect("values always serialize");
    out.push(b'\n');
    out
}

/// Leaf values keyed by dotted paths, in key order.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(map) => map.iter().for_each(|(k, v)| flatten(&join(k), v, out)),
        Value::Array(items) => items.iter().enumerate().for_each(|(i, v)| flatten(&join(&i.to_string()), v, out)),
        Value::Null => out.push((prefix.to_string(), String::new())),
        Value::String(s) => out.push((prefix.to_string(), csv_string(s))),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

fn csv_string(s: &str) -> String {
    if s.contains('/') {
        if let Ok(q) = parse_rational(s) {
            return decimal(&q);
        }
    }
    s.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use hyperslice::rational::ratio;
    use serde_json::json;

    #[test]
    fn rationals_per_format() {
        let doc = Report::Doc(json!({"weight": ratio(4, 3).to_string()}));
        assert_eq!(String::from_utf8(doc.render(Format::Json, None).unwrap()).unwrap(), "{\n  \"weight\": \"4/3\"\n}\n");
        assert_eq!(String::from_utf8(doc.render(Format::Csv, None).unwrap()).unwrap(), "key,value\nweight,1.333333333333\n");
        let table = Report::Table {
            header: vec!["w"],
            rows: vec![vec![Cell::Rat(ratio(4, 3))]],
        };
        assert_eq!(String::from_utf8(table.render(Format::Csv, None).unwrap()).unwrap(), "w\n1.333333333333\n");
    }

    #[test]
    fn empty_reports_are_valid() {
        let doc = Report::Doc(json!({}));
        assert_eq!(doc.render(Format::Json, None).unwrap(), b"{}\n");
        assert_eq!(doc.render(Format::Csv, None).unwrap(), b"key,value\n");
        let table = Report::Table { header: vec!["a", "b"], rows: vec![] };
        assert_eq!(table.render(Format::Csv, None).unwrap(), b"a,b\n");
        assert_eq!(table.render(Format::Json, None).unwrap(), b"{\n  \"rows\": []\n}\n");
    }

    #[test]
    fn keys_are_sorted() {
        let doc = Report::Doc(json!({"b": 1, "a": {"d": 2, "c": 3}}));
        let text = String::from_utf8(doc.render(Format::Csv, None).unwrap()).unwrap();
        assert_eq!(text, "key,value\na.c,3\na.d,2\nb,1\n");
    }
}
