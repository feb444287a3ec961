//! Plain CSV with a `# key=value` header block.
//!
//! Numbers are written as `{:.12e}` so output is identical across runs and
//! thread counts.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use deltahom::{Field2D, UniformGrid};

use crate::config::num;
use crate::error::CliError;

pub struct Table {
    header: Vec<(String, String)>,
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[(String, String)], columns: &[&str]) -> Self {
        Self { header: header.to_vec(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn meta(mut self, key: &str, value: impl Into<String>) -> Self {
        self.header.push((key.into(), value.into()));
        self
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells.into_iter().map(Cell::render).collect());
    }

    pub fn write(&self, path: &Path) -> Result<PathBuf, CliError> {
        let mut w = create(path)?;
        write_header(&mut w, &self.header).map_err(|e| io(path, e))?;
        let mut body = || -> std::io::Result<()> {
            writeln!(w, "{}", self.columns.join(","))?;
            for r in &self.rows {
                writeln!(w, "{}", r.join(","))?;
            }
            w.flush()
        };
        body().map_err(|e| io(path, e))?;
        Ok(path.to_path_buf())
    }
}

pub enum Cell {
    Num(f64),
    Int(usize),
    Text(String),
}

impl Cell {
    fn render(self) -> String {
        match self {
            Cell::Num(x) => num(x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.into())
    }
}

/// Writes a matrix with row coordinates in the first column and column
/// coordinates in the first row; the corner holds `nan`.
pub fn write_matrix(
    path: &Path,
    header: &[(String, String)],
    rows: &[f64],
    cols: &[f64],
    value: impl Fn(usize, usize) -> f64,
) -> Result<PathBuf, CliError> {
    let mut w = create(path)?;
    let mut body = || -> std::io::Result<()> {
        write_header(&mut w, header)?;
        let mut line = String::from("nan");
        for &c in cols {
            line.push(',');
            line.push_str(&num(c));
        }
        writeln!(w, "{line}")?;
        for (i, &r) in rows.iter().enumerate() {
            line.clear();
            line.push_str(&num(r));
            for j in 0..cols.len() {
                line.push(',');
                line.push_str(&num(value(i, j)));
            }
            writeln!(w, "{line}")?;
        }
        w.flush()
    };
    body().map_err(|e| io(path, e))?;
    Ok(path.to_path_buf())
}

/// A joint density with `x1` along rows and `x2` along columns.
pub fn write_density(path: &Path, header: &[(String, String)], density: &Field2D<f64>) -> Result<PathBuf, CliError> {
    let axis: Vec<f64> = density.grid.axis.nodes().collect();
    write_matrix(path, header, &axis, &axis, |i, j| density.at(i, j))
}

pub fn nodes(grid: &UniformGrid<f64>) -> Vec<f64> {
    grid.nodes().collect()
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(|e| io(path, e))
}

fn write_header(w: &mut impl Write, header: &[(String, String)]) -> std::io::Result<()> {
    for (k, v) in header {
        writeln!(w, "# {k}={v}")?;
    }
    Ok(())
}

fn io(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}
