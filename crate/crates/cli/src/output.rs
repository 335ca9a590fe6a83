use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{Map, Value};

use crate::args::Format;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone)]
pub enum Cell {
    U(u64),
    F(f64),
    S(String),
    B(bool),
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::U(v)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::U(v as u64)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::U(v as u64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::F(v)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::S(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::B(v)
    }
}

/// Shortest round-trip decimal, switching to exponent form for very small or large magnitudes.
pub fn fmt_float(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::U(v) => v.to_string(),
            Cell::F(v) => fmt_float(*v),
            Cell::S(s) => s.clone(),
            Cell::B(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::U(v) => Value::from(*v),
            Cell::F(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::S(s) => Value::from(s.clone()),
            Cell::B(b) => Value::from(*b),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut s = format!("# schema={SCHEMA}\n{}\n", self.columns.join(","));
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                    writeln!(s, "{}", cells.join(",")).unwrap();
                }
                s
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let map: Map<String, Value> = self
                            .columns
                            .iter()
                            .zip(row)
                            .map(|(c, v)| (c.to_string(), v.json()))
                            .collect();
                        Value::Object(map)
                    })
                    .collect();
                let doc = serde_json::json!({ "schema": SCHEMA, "rows": rows });
                format!("{}\n", serde_json::to_string_pretty(&doc).unwrap())
            }
        }
    }
}

/// Where results go: files under `dir`, or stdout when there is none.
///
/// Files written so far are remembered so that a failing run can remove them.
pub struct Output {
    pub format: Format,
    dir: Option<PathBuf>,
    written: Vec<PathBuf>,
}

impl Output {
    pub fn new(format: Format, dir: Option<PathBuf>) -> Self {
        Self {
            format,
            dir,
            written: Vec::new(),
        }
    }

    /// The output directory, `.` when writing to stdout.
    pub fn dir(&self) -> PathBuf {
        self.dir.clone().unwrap_or_else(|| PathBuf::from("."))
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    fn extension(&self) -> &'static str {
        match self.format {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }

    pub fn write_file(&mut self, path: &Path, body: &str) -> Result<()> {
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            std::fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
        }
        self.written.push(path.to_path_buf());
        std::fs::write(path, body).with_context(|| format!("writing {}", path.display()))
    }

    /// Writes `table` as `<stem>.csv` / `<stem>.json`, or to stdout.
    pub fn table(&mut self, stem: &str, table: &Table) -> Result<()> {
        let body = table.render(self.format);
        match self.dir.clone() {
            Some(dir) => self.write_file(&dir.join(format!("{stem}.{}", self.extension())), &body),
            None => print_stdout(&body),
        }
    }

    /// Writes `value` as `<stem>.json`; without a directory it goes to
    /// stdout when `primary`, else to stderr.
    pub fn json<T: Serialize>(&mut self, stem: &str, value: &T, primary: bool) -> Result<()> {
        let body = format!("{}\n", serde_json::to_string_pretty(value)?);
        match self.dir.clone() {
            Some(dir) => self.write_file(&dir.join(format!("{stem}.json")), &body),
            None if primary => print_stdout(&body),
            None => {
                eprint!("{body}");
                Ok(())
            }
        }
    }

    /// Removes every file written by this run.
    pub fn discard(&mut self) {
        for path in self.written.drain(..) {
            let _ = std::fs::remove_file(path);
        }
    }
}

fn print_stdout(body: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(body.as_bytes())?;
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_schema_header() {
        let mut t = Table::new(&["k", "xi"]);
        t.push(vec![1u32.into(), 0.125.into()]);
        t.push(vec![2u32.into(), 1e-30.into()]);
        assert_eq!(t.render(Format::Csv), "# schema=1\nk,xi\n1,0.125\n2,1e-30\n");
    }

    #[test]
    fn json_rows_are_objects() {
        let mut t = Table::new(&["k", "ok"]);
        t.push(vec![3u32.into(), true.into()]);
        let v: Value = serde_json::from_str(&t.render(Format::Json)).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["rows"][0]["k"], 3);
        assert_eq!(v["rows"][0]["ok"], true);
    }

    #[test]
    fn floats_round_trip() {
        for x in [0.0, 1.5, 1e-7, 3.25e20, -0.3, 1.0 / 3.0] {
            assert_eq!(fmt_float(x).parse::<f64>().unwrap(), x);
        }
    }
}
