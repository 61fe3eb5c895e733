//! CSV tables with a header row.

use std::io::Write;
use std::path::Path;

use super::FormatError;

/// A header plus rectangular rows of already-formatted cells.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Parses every cell of column `name` as a real.
    pub fn reals(&self, name: &str) -> Result<Vec<f64>, String> {
        let idx = self
            .column(name)
            .ok_or_else(|| format!("missing column {name:?}"))?;
        self.rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                r.get(idx)
                    .and_then(|c| c.trim().parse().ok())
                    .ok_or_else(|| format!("row {}: bad value in column {name:?}", i + 1))
            })
            .collect()
    }

    pub fn to_writer<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn from_reader<R: std::io::Read>(input: R) -> csv::Result<Self> {
        let mut r = csv::Reader::from_reader(input);
        let header = r.headers()?.iter().map(str::to_owned).collect();
        let rows = r
            .records()
            .map(|rec| rec.map(|r| r.iter().map(str::to_owned).collect()))
            .collect::<csv::Result<_>>()?;
        Ok(Table { header, rows })
    }
}

pub fn write_table(table: &Table, path: &Path) -> Result<(), FormatError> {
    let file = std::fs::File::create(path).map_err(|e| FormatError::io(path, e))?;
    table.to_writer(file).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(source) => FormatError::io(path, source),
        other => FormatError::parse(path, format!("{other:?}")),
    })
}

pub fn read_table(path: &Path) -> Result<Table, FormatError> {
    let file = std::fs::File::open(path).map_err(|e| FormatError::io(path, e))?;
    Table::from_reader(file).map_err(|e| FormatError::parse(path, e.to_string()))
}

/// Shortest of fixed or exponent notation with 12 significant digits,
/// trailing zeros removed (like C's `%.12g`).
pub fn fmt_real(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.11e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim_zeros(mantissa.to_string()), exp)
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}
