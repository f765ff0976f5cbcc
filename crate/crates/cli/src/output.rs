//! JSONL and CSV writers.

use std::fs::OpenOptions;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde_json::{Map, Value};

use crate::Failure;

pub const SCHEMA: &str = "polyfact/v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Jsonl,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        <Format as ValueEnum>::from_str(s, true)
    }
}

/// Tags a JSON object with the schema version and a line type.
pub fn tagged(kind: &str, body: Value) -> Value {
    let mut m = Map::new();
    m.insert("schema".into(), SCHEMA.into());
    m.insert("type".into(), kind.into());
    if let Value::Object(rest) = body {
        m.extend(rest);
    }
    Value::Object(m)
}

pub struct Sink {
    format: Format,
    path: Option<PathBuf>,
    json: Option<Box<dyn Write>>,
    csv: Option<csv::Writer<Box<dyn Write>>>,
}

fn io_failure(path: Option<&Path>, e: impl std::fmt::Display) -> Failure {
    match path {
        Some(p) => Failure::usage(format!("{}: {e}", p.display())),
        None => Failure::usage(format!("stdout: {e}")),
    }
}

impl Sink {
    /// Opens the output; with `keep` the file is cut back to that many bytes and appended to.
    pub fn open(path: Option<&Path>, format: Format, keep: Option<u64>) -> Result<Sink, Failure> {
        let writer: Box<dyn Write> = match path {
            None => Box::new(io::stdout()),
            Some(p) => {
                let file = match keep {
                    Some(len) => {
                        let f = OpenOptions::new().write(true).open(p).map_err(|e| io_failure(Some(p), e))?;
                        f.set_len(len).map_err(|e| io_failure(Some(p), e))?;
                        drop(f);
                        OpenOptions::new().append(true).open(p)
                    }
                    None => OpenOptions::new().write(true).create(true).truncate(true).open(p),
                }
                .map_err(|e| io_failure(Some(p), e))?;
                Box::new(BufWriter::new(file))
            }
        };
        let (json, csv) = match format {
            Format::Jsonl => (Some(writer), None),
            Format::Csv => (None, Some(csv::WriterBuilder::new().flexible(true).from_writer(writer))),
        };
        Ok(Sink { format, path: path.map(Path::to_path_buf), json, csv })
    }

    pub fn format(&self) -> Format {
        self.format
    }

    fn line(&mut self, v: &Value) -> Result<(), Failure> {
        let path = self.path.clone();
        let w = self.json.as_mut().expect("jsonl sink");
        serde_json::to_writer(&mut *w, v).map_err(|e| io_failure(path.as_deref(), e))?;
        w.write_all(b"\n").map_err(|e| io_failure(path.as_deref(), e))
    }

    fn row(&mut self, cells: &[String]) -> Result<(), Failure> {
        let path = self.path.clone();
        self.csv.as_mut().expect("csv sink").write_record(cells).map_err(|e| io_failure(path.as_deref(), e))
    }

    /// A JSON line, or a CSV row when writing CSV.
    pub fn emit(&mut self, json: &Value, cells: &[String]) -> Result<(), Failure> {
        match self.format {
            Format::Jsonl => self.line(json),
            Format::Csv => self.row(cells),
        }
    }

    /// A JSON line; CSV output sends it to stderr instead.
    pub fn note(&mut self, json: &Value) -> Result<(), Failure> {
        match self.format {
            Format::Jsonl => self.line(json),
            Format::Csv => {
                eprintln!("{json}");
                Ok(())
            }
        }
    }

    /// Flushes and returns the length of the output file, if there is one.
    pub fn flush(&mut self) -> Result<Option<u64>, Failure> {
        let path = self.path.clone();
        let r = match (&mut self.json, &mut self.csv) {
            (Some(w), _) => w.flush(),
            (_, Some(c)) => c.flush(),
            _ => Ok(()),
        };
        r.map_err(|e| io_failure(path.as_deref(), e))?;
        match &self.path {
            Some(p) => Ok(Some(std::fs::metadata(p).map_err(|e| io_failure(Some(p), e))?.len())),
            None => Ok(None),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncate_and_append() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out.jsonl");
        let mut s = Sink::open(Some(&p), Format::Jsonl, None).unwrap();
        s.emit(&serde_json::json!({"a": 1}), &[]).unwrap();
        let keep = s.flush().unwrap().unwrap();
        s.emit(&serde_json::json!({"b": 2}), &[]).unwrap();
        s.flush().unwrap();
        drop(s);
        let mut s = Sink::open(Some(&p), Format::Jsonl, Some(keep)).unwrap();
        s.emit(&serde_json::json!({"c": 3}), &[]).unwrap();
        s.flush().unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "{\"a\":1}\n{\"c\":3}\n");
    }

    #[test]
    fn tagged_lines_have_sorted_keys() {
        let v = tagged("summary", serde_json::json!({"found": 2}));
        assert_eq!(v.to_string(), "{\"found\":2,\"schema\":\"polyfact/v1\",\"type\":\"summary\"}");
    }
}
