use std::io::{self, Write};

use serde_json::{Map, Value};

use crate::args::Format;

/// Writes documents and rows in the selected format. CSV and pretty rows are
/// written as they arrive; JSON rows are collected into one array.
pub struct Emitter<W: Write> {
    format: Format,
    out: W,
    csv_header: Option<Vec<String>>,
    json_rows: Option<Vec<Value>>,
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

impl<W: Write> Emitter<W> {
    pub fn new(format: Format, out: W) -> Self {
        Emitter {
            format,
            out,
            csv_header: None,
            json_rows: None,
        }
    }

    pub fn document(&mut self, doc: Value) -> io::Result<()> {
        match self.format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut self.out, &doc)?;
                writeln!(self.out)
            }
            Format::Csv => match doc {
                Value::Object(map) => self.row(map),
                Value::Array(items) => {
                    for item in items {
                        let map = match item {
                            Value::Object(m) => m,
                            other => Map::from_iter([("value".to_string(), other)]),
                        };
                        self.row(map)?;
                    }
                    Ok(())
                }
                other => writeln!(self.out, "{}", cell(&other)),
            },
            Format::Pretty => match doc {
                Value::Object(map) => {
                    let width = map.keys().map(String::len).max().unwrap_or(0);
                    for (k, v) in &map {
                        writeln!(self.out, "{k:<width$}  {}", pretty_value(v))?;
                    }
                    Ok(())
                }
                other => writeln!(self.out, "{}", pretty_value(&other)),
            },
        }
    }

    pub fn row(&mut self, row: Map<String, Value>) -> io::Result<()> {
        match self.format {
            Format::Json => {
                self.json_rows.get_or_insert_with(Vec::new).push(Value::Object(row));
                Ok(())
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(&mut self.out);
                if self.csv_header.is_none() {
                    let header: Vec<String> = row.keys().cloned().collect();
                    w.write_record(&header)?;
                    self.csv_header = Some(header);
                }
                let header = self.csv_header.as_ref().expect("set above");
                w.write_record(header.iter().map(|k| row.get(k).map(cell).unwrap_or_default()))?;
                w.flush()
            }
            Format::Pretty => {
                let line: Vec<String> = row.iter().map(|(k, v)| format!("{k}={}", pretty_value(v))).collect();
                writeln!(self.out, "{}", line.join("  "))?;
                self.out.flush()
            }
        }
    }

    pub fn finish(mut self) -> io::Result<()> {
        if let Some(rows) = self.json_rows.take() {
            serde_json::to_writer_pretty(&mut self.out, &Value::Array(rows))?;
            writeln!(self.out)?;
        }
        self.out.flush()
    }
}

fn pretty_value(v: &Value) -> String {
    match v {
        Value::Array(items) => {
            let inner: Vec<String> = items.iter().map(pretty_value).collect();
            format!("[{}]", inner.join(", "))
        }
        other => cell(other),
    }
}
