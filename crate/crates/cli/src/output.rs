//! Tables written as CSV (floats with 17 significant digits) or as a JSON
//! array of objects keyed by the CSV header.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde_json::{Map, Number, Value};

use crate::args::Format;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    F(f64),
    I(i64),
    B(bool),
    S(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::F(x) => format!("{x:.16e}"),
            Cell::I(n) => n.to_string(),
            Cell::B(b) => b.to_string(),
            Cell::S(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::F(x) => Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::I(n) => Value::from(*n),
            Cell::B(b) => Value::Bool(*b),
            Cell::S(s) => Value::String(s.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Self { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write_to(&self, w: &mut dyn Write, format: Format) -> io::Result<()> {
        match format {
            Format::Csv => {
                let mut csv = csv::Writer::from_writer(w);
                csv.write_record(&self.header)?;
                for row in &self.rows {
                    csv.write_record(row.iter().map(Cell::csv))?;
                }
                csv.flush()
            }
            Format::Json => {
                let records: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> =
                            self.header.iter().zip(row).map(|(k, c)| (k.to_string(), c.json())).collect();
                        Value::Object(obj)
                    })
                    .collect();
                serde_json::to_writer_pretty(&mut *w, &records)?;
                writeln!(w)
            }
        }
    }
}

/// Opens the output file, or standard output when `path` is `None`.
pub fn sink(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}
