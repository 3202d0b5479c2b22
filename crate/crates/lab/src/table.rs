//! Row sink for experiment output.

use std::io::Write;

use crate::error::LabResult;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Text(String),
}

impl Cell {
    /// Reals use 17 significant digits in scientific notation.
    pub fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Real(v) => format_real(*v),
            Cell::Text(s) => s.clone(),
        }
    }
}

pub fn format_real(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Int(i64::from(v))
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

#[macro_export]
macro_rules! row {
    ($($x:expr),* $(,)?) => { vec![$($crate::table::Cell::from($x)),*] };
}

/// Collects rows and, when backed by a writer, flushes each one as it
/// arrives so an interrupted run leaves a readable prefix.
pub struct RowSink {
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
    writer: Option<csv::Writer<Box<dyn Write>>>,
}

impl RowSink {
    pub fn in_memory(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new(), writer: None }
    }

    pub fn to_writer(columns: &[&str], out: Box<dyn Write>) -> LabResult<Self> {
        let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        writer.write_record(columns)?;
        writer.flush()?;
        let mut sink = Self::in_memory(columns);
        sink.writer = Some(writer);
        Ok(sink)
    }

    pub fn push(&mut self, row: Vec<Cell>) -> LabResult<()> {
        assert_eq!(row.len(), self.columns.len(), "row width does not match the header");
        if let Some(w) = &mut self.writer {
            w.write_record(row.iter().map(Cell::render))?;
            w.flush()?;
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<Vec<Cell>> {
        self.rows
    }

    /// The CSV text the sink has produced (or would produce).
    pub fn render_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r.iter().map(Cell::render)).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("cells are UTF-8")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_keep_seventeen_digits() {
        assert_eq!(format_real(0.1), "1.0000000000000001e-1");
        assert_eq!(format_real(1.0), "1.0000000000000000e0");
        let x = 0.123_456_789_012_345_68;
        assert_eq!(format_real(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn sink_renders_header_and_rows() {
        let mut s = RowSink::in_memory(&["k", "w"]);
        s.push(row![1usize, 0.5]).unwrap();
        assert_eq!(s.render_csv(), "k,w\n1,5.0000000000000000e-1\n");
    }
}
