//! Report tables rendered as aligned text or CSV.
//!
//! Text output rounds each column to its display precision; CSV carries the
//! shortest representation that parses back to the same `f64`.

use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fmt {
    /// Fixed number of decimals.
    Fixed(usize),
    /// Scientific notation with this many mantissa decimals.
    Sci(usize),
    /// Shortest round-trip form, for inputs such as spots and rates.
    Plain,
}

pub const PRICE: Fmt = Fmt::Fixed(3);
pub const GREEK: Fmt = Fmt::Fixed(4);
pub const PCT: Fmt = Fmt::Fixed(2);

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    /// CSV header.
    pub key: String,
    /// Text header.
    pub label: String,
    pub fmt: Fmt,
}

impl Column {
    pub fn new(key: impl Into<String>, label: impl Into<String>, fmt: Fmt) -> Self {
        Column {
            key: key.into(),
            label: label.into(),
            fmt,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    /// One line per row under a header line.
    Rows,
    /// A single row printed as `label  value` lines.
    Record,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub title: String,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
    pub layout: Layout,
}

impl Table {
    pub fn new(title: impl Into<String>, columns: Vec<Column>) -> Self {
        Table {
            title: title.into(),
            columns,
            rows: Vec::new(),
            layout: Layout::Rows,
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width does not match columns");
        self.rows.push(row);
    }

    pub fn column(&self, key: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.key == key)
    }

    pub fn render_text(&self) -> String {
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|row| row.iter().zip(&self.columns).map(|(c, col)| text_cell(c, col.fmt)).collect())
            .collect();
        let mut out = String::new();
        if !self.title.is_empty() {
            out.push_str(&self.title);
            out.push('\n');
        }
        match self.layout {
            Layout::Record => {
                let width = self.columns.iter().map(|c| c.label.len()).max().unwrap_or(0);
                for row in &cells {
                    for (col, value) in self.columns.iter().zip(row) {
                        if !value.is_empty() {
                            let _ = writeln!(out, "{:<width$}  {value}", col.label);
                        }
                    }
                }
            }
            Layout::Rows => {
                let widths: Vec<usize> = self
                    .columns
                    .iter()
                    .enumerate()
                    .map(|(j, c)| cells.iter().map(|r| r[j].len()).fold(c.label.len(), usize::max))
                    .collect();
                // text columns are left-aligned, numeric ones right-aligned
                let left: Vec<bool> = (0..self.columns.len())
                    .map(|j| self.rows.iter().any(|r| matches!(r[j], Cell::Text(_))))
                    .collect();
                let line = |parts: Vec<&str>| {
                    let padded: Vec<String> = parts
                        .iter()
                        .zip(&widths)
                        .zip(&left)
                        .map(|((s, &w), &l)| if l { format!("{s:<w$}") } else { format!("{s:>w$}") })
                        .collect();
                    padded.join("  ").trim_end().to_string()
                };
                out.push_str(&line(self.columns.iter().map(|c| c.label.as_str()).collect()));
                out.push('\n');
                for row in &cells {
                    out.push_str(&line(row.iter().map(String::as_str).collect()));
                    out.push('\n');
                }
            }
        }
        out
    }

    pub fn render_csv(&self) -> csv::Result<String> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(self.columns.iter().map(|c| c.key.as_str()))?;
        for row in &self.rows {
            w.write_record(row.iter().map(csv_cell))?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

pub fn format_num(v: f64, fmt: Fmt) -> String {
    let s = match fmt {
        Fmt::Fixed(p) => format!("{v:.p$}"),
        Fmt::Sci(p) => format!("{v:.p$e}"),
        Fmt::Plain => format!("{v}"),
    };
    // avoid "-0.000"
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

fn text_cell(cell: &Cell, fmt: Fmt) -> String {
    match cell {
        Cell::Num(v) => format_num(*v, fmt),
        Cell::Text(s) => s.clone(),
        Cell::Empty => String::new(),
    }
}

fn csv_cell(cell: &Cell) -> String {
    match cell {
        Cell::Num(v) => format!("{v}"),
        Cell::Text(s) => s.clone(),
        Cell::Empty => String::new(),
    }
}
