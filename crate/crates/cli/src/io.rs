//! Sample files, G-tables and result tables.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{Map, Value};

use crate::error::{CliError, Result};

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

// Non-empty, non-comment lines with their 1-based line numbers.
fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn number(path: &Path, line: usize, t: &str) -> Result<f64> {
    t.trim().parse::<f64>().map_err(|_| CliError::Input {
        path: path.to_path_buf(),
        line,
        msg: format!("'{}' is not a number", t.trim()),
    })
}

/// One value per line; blank lines and lines starting with `#` are skipped.
pub fn read_sample_file(path: &Path) -> Result<Vec<f64>> {
    let text = read(path)?;
    data_lines(&text).map(|(n, l)| number(path, n, l)).collect()
}

/// Write `values` one per line under a `#` header line.
pub fn write_sample_file(path: &Path, header: &str, values: &[f64]) -> Result<()> {
    let mut out = String::with_capacity(values.len() * 24);
    for line in header.lines() {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    for v in values {
        out.push_str(&format_f64(*v));
        out.push('\n');
    }
    fs::write(path, out).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Knots `x,y` one pair per line, for tabulated `G` transforms.
pub fn read_table_file(path: &Path) -> Result<Vec<(f64, f64)>> {
    let text = read(path)?;
    data_lines(&text)
        .map(|(n, l)| {
            let (x, y) = l.split_once(',').ok_or_else(|| CliError::Input {
                path: path.to_path_buf(),
                line: n,
                msg: "expected 'x,y'".into(),
            })?;
            Ok((number(path, n, x)?, number(path, n, y)?))
        })
        .collect()
}

/// Shortest representation that parses back to the same `f64`.
pub fn format_f64(v: f64) -> String {
    format!("{v:?}")
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => format_f64(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Int(v) => Value::from(*v),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Empty => Value::Null,
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Cell::Num(v) => Some(v),
            Cell::Int(v) => Some(v as f64),
            _ => None,
        }
    }

    pub fn as_text(&self) -> Option<&str> {
        match self {
            Cell::Text(s) => Some(s),
            _ => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_owned())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

/// A rectangular result with named columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| *c == name)
    }

    /// Numeric values of column `name`, `None` for non-numeric cells.
    pub fn numbers(&self, name: &str) -> Vec<Option<f64>> {
        match self.column_index(name) {
            Some(i) => self.rows.iter().map(|r| r[i].as_f64()).collect(),
            None => Vec::new(),
        }
    }

    pub fn write<W: Write>(&self, format: Format, out: W) -> Result<()> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.columns)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::csv))?;
                }
                w.flush().map_err(csv::Error::from)?;
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> = self
                            .columns
                            .iter()
                            .zip(row)
                            .map(|(c, v)| ((*c).to_owned(), v.json()))
                            .collect();
                        Value::Object(obj)
                    })
                    .collect();
                let mut out = out;
                serde_json::to_writer_pretty(&mut out, &rows)?;
                writeln!(out).map_err(|source| CliError::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })?;
            }
        }
        Ok(())
    }

    /// Write to `path`, or to stdout when `path` is `None`.
    pub fn emit(&self, format: Format, path: Option<&Path>) -> Result<()> {
        match path {
            Some(p) => {
                let f = fs::File::create(p).map_err(|source| CliError::Io {
                    path: p.to_path_buf(),
                    source,
                })?;
                self.write(format, std::io::BufWriter::new(f))
            }
            None => self.write(format, std::io::stdout().lock()),
        }
    }

    pub fn to_string(&self, format: Format) -> Result<String> {
        let mut buf = Vec::new();
        self.write(format, &mut buf)?;
        Ok(String::from_utf8(buf).expect("tables are written as UTF-8"))
    }
}
