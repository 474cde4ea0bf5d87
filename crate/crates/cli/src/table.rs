//! CSV output: '#'-prefixed metadata lines, a header row, and numeric rows
//! in scientific notation with 12 significant digits. Non-finite values are
//! written as empty cells.

use std::io::{self, Write};

#[derive(Debug, Clone, Default)]
pub struct CsvTable {
    /// Comment lines, written with a leading `"# "`.
    pub metadata: Vec<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl CsvTable {
    pub fn new(header: Vec<String>) -> Self {
        Self {
            metadata: Vec::new(),
            header,
            rows: Vec::new(),
        }
    }

    pub fn comment(&mut self, line: impl Into<String>) {
        self.metadata.push(line.into());
    }

    pub fn push_row(&mut self, row: Vec<Option<f64>>) {
        assert_eq!(row.len(), self.header.len(), "rows must be rectangular");
        self.rows.push(row);
    }

    pub fn write<W: Write>(&self, out: &mut W) -> io::Result<()> {
        for line in &self.metadata {
            writeln!(out, "# {line}")?;
        }
        writeln!(out, "{}", self.header.join(","))?;
        for row in &self.rows {
            let mut first = true;
            for value in row {
                if !first {
                    write!(out, ",")?;
                }
                first = false;
                if let Some(v) = value {
                    write!(out, "{v:.11e}")?;
                }
            }
            writeln!(out)?;
        }
        Ok(())
    }

    pub fn render(&self) -> String {
        let mut buf = Vec::new();
        self.write(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("output is UTF-8")
    }
}

/// Finite values pass through; NaN and infinities become empty cells.
pub fn cell(value: f64) -> Option<f64> {
    value.is_finite().then_some(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_comments_blanks_and_scientific_cells() {
        let mut t = CsvTable::new(vec!["x".into(), "y".into()]);
        t.comment("run = test");
        t.push_row(vec![Some(1.0), None]);
        t.push_row(vec![cell(f64::NEG_INFINITY), Some(-0.25)]);
        let text = t.render();
        assert_eq!(
            text,
            "# run = test\nx,y\n1.00000000000e0,\n,-2.50000000000e-1\n"
        );
    }

    #[test]
    #[should_panic(expected = "rectangular")]
    fn rejects_ragged_rows() {
        let mut t = CsvTable::new(vec!["x".into(), "y".into()]);
        t.push_row(vec![Some(1.0)]);
    }
}
