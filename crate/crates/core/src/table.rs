//! Minimal CSV tables with a fixed, byte-stable number format.
//!
//! Floats are written with Rust's shortest round-trip exponent form (`{:e}`),
//! missing values as empty cells, `\n` line endings, no quoting (cells never
//! contain commas).

use std::fmt::Write as _;
use std::io;
use std::path::Path;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Float)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl Cell {
    fn render(&self, out: &mut String) {
        match self {
            Cell::Float(v) => {
                let _ = write!(out, "{v:e}");
            }
            Cell::Int(v) => {
                let _ = write!(out, "{v}");
            }
            Cell::Text(s) => out.push_str(s),
            Cell::Empty => {}
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CsvTable {
    header: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl CsvTable {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    /// Panics if the row width differs from the header.
    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.header.len(), "row width does not match header");
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            for (k, cell) in row.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                cell.render(&mut out);
            }
            out.push('\n');
        }
        out
    }

    pub fn write(&self, path: &Path) -> io::Result<()> {
        std::fs::write(path, self.render())
    }

    /// Column `name` parsed as floats (empty cells become NaN).
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.header.iter().position(|h| h == name)?;
        Some(
            self.rows
                .iter()
                .map(|r| match &r[k] {
                    Cell::Float(v) => *v,
                    Cell::Int(v) => *v as f64,
                    _ => f64::NAN,
                })
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_stable_text() {
        let mut t = CsvTable::new(["a", "b", "c"]);
        t.push(vec![0.5.into(), Cell::Empty, "x".into()]);
        t.push(vec![1e-12.into(), 3i64.into(), 262144u64.into()]);
        assert_eq!(t.render(), "a,b,c\n5e-1,,x\n1e-12,3,262144\n");
        assert_eq!(t.column("a").unwrap(), vec![0.5, 1e-12]);
    }
}
