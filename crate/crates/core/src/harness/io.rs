//! Flat-file formats.
//!
//! Matrix files are plain text. The first line is `<n> <kind>` with kind
//! `tridiagonal` or `dense`. A tridiagonal matrix follows with one line of
//! `n` diagonal entries and one line of `n − 1` off-diagonal entries (empty
//! when `n = 1`); a dense matrix follows with `n` rows of `n` entries.
//! Entries carry 17 significant digits.
//!
//! Result tables are CSV with a leading block of `# key: value` metadata
//! lines, then a header row and the data rows. No field is quoted.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

use super::recipe::Matrix;
use crate::adversary::{fmt_row, parse_reals};
use crate::error::{Error, Result};
use crate::linalg::{DenseSymmetric, SymTridiagonal};

pub fn matrix_to_string(m: &Matrix) -> String {
    let mut out = format!("{} {}\n", m.order(), m.kind_name());
    match m {
        Matrix::Tridiagonal(t) => {
            out.push_str(&fmt_row(t.diag()));
            out.push('\n');
            out.push_str(&fmt_row(t.offdiag()));
            out.push('\n');
        }
        Matrix::Dense(a) => {
            for i in 0..a.order() {
                out.push_str(&fmt_row(a.row(i)));
                out.push('\n');
            }
        }
    }
    out
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

pub fn parse_matrix(text: &str) -> Result<Matrix> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut next = |what: &str| {
        let last = text.lines().count();
        lines
            .next()
            .ok_or_else(|| parse_error(last + 1, format!("missing {what}")))
    };
    let (hline, header) = match text.lines().next() {
        None => return Err(parse_error(1, "empty matrix file")),
        Some(_) => next("header")?,
    };
    let toks: Vec<&str> = header.split_whitespace().collect();
    let (n, kind) = match toks.as_slice() {
        [n, kind] => (
            n.parse::<usize>()
                .map_err(|_| parse_error(hline, format!("bad order {n:?}")))?,
            *kind,
        ),
        _ => return Err(parse_error(hline, "expected \"<n> <kind>\"")),
    };
    if n == 0 {
        return Err(parse_error(hline, "order must be positive"));
    }
    let mut row = |what: &str, len: usize| -> Result<Vec<f64>> {
        let (l, text) = next(what)?;
        let v = parse_reals(l, text)?;
        if v.len() != len {
            return Err(parse_error(l, format!("expected {len} entries, found {}", v.len())));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(parse_error(l, "non-finite entry"));
        }
        Ok(v)
    };
    let m = match kind {
        "tridiagonal" => {
            let d = row("diagonal", n)?;
            let e = row("off-diagonal", n - 1)?;
            Matrix::Tridiagonal(SymTridiagonal::new(d, e).map_err(|e| parse_error(hline, e.to_string()))?)
        }
        "dense" => {
            let start = hline + 1;
            let rows = (0..n).map(|_| row("row", n)).collect::<Result<Vec<_>>>()?;
            Matrix::Dense(DenseSymmetric::from_rows(&rows).map_err(|e| match e {
                Error::NotSymmetric { row, col } => {
                    parse_error(start + row.max(col), format!("matrix is not symmetric: {e}"))
                }
                other => parse_error(hline, other.to_string()),
            })?)
        }
        other => return Err(parse_error(hline, format!("unknown matrix kind {other:?}"))),
    };
    for (l, rest) in lines {
        if !rest.trim().is_empty() {
            return Err(parse_error(l, "trailing content"));
        }
    }
    Ok(m)
}

pub fn write_matrix(path: &Path, m: &Matrix) -> Result<()> {
    fs::write(path, matrix_to_string(m))?;
    Ok(())
}

pub fn read_matrix(path: &Path) -> Result<Matrix> {
    parse_matrix(&fs::read_to_string(path)?)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Text(String),
    /// Printed as an empty field.
    Missing,
}

impl Cell {
    pub fn is_finite(&self) -> bool {
        match self {
            Cell::Real(x) => x.is_finite(),
            _ => true,
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Int(i) => Some(*i as f64),
            Cell::Real(x) => Some(*x),
            _ => None,
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(i) => write!(f, "{i}"),
            Cell::Real(x) => write!(f, "{x:e}"),
            Cell::Text(s) => f.write_str(s),
            Cell::Missing => Ok(()),
        }
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<Option<usize>> for Cell {
    fn from(v: Option<usize>) -> Self {
        v.map_or(Cell::Missing, Cell::from)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub metadata: Vec<(String, String)>,
}

impl ResultTable {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            metadata: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl fmt::Display) -> &mut Self {
        self.metadata.push((key.to_string(), value.to_string()));
        self
    }

    pub fn meta_value(&self, key: &str) -> Option<&str> {
        self.metadata
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn all_finite(&self) -> bool {
        self.rows.iter().flatten().all(Cell::is_finite)
    }

    /// Serializes to CSV. Text cells must not contain commas, quotes or
    /// newlines, and metadata must fit on one line.
    pub fn to_csv(&self) -> Result<String> {
        if !self.all_finite() {
            return Err(Error::InvalidParameter("table has a non-finite cell".into()));
        }
        let mut out = String::new();
        for (k, v) in &self.metadata {
            if k.contains([':', '\n']) || v.contains('\n') {
                return Err(Error::InvalidParameter(format!("bad metadata entry {k:?}")));
            }
            out.push_str(&format!("# {k}: {v}\n"));
        }
        let mut w = csv::WriterBuilder::new()
            .quote_style(csv::QuoteStyle::Never)
            .from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            let fields: Vec<String> = row.iter().map(Cell::to_string).collect();
            if fields.iter().any(|f| f.contains([',', '"', '\n', '\r'])) {
                return Err(Error::InvalidParameter("cell needs quoting".into()));
            }
            w.write_record(&fields)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        out.push_str(&String::from_utf8(bytes).expect("ascii output"));
        Ok(out)
    }

    /// Parses CSV produced by [`ResultTable::to_csv`]. Numeric-looking
    /// fields become [`Cell::Int`] or [`Cell::Real`].
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut metadata = Vec::new();
        let mut body_start = 0;
        for line in text.lines() {
            let Some(rest) = line.strip_prefix('#') else { break };
            let (k, v) = rest
                .split_once(':')
                .ok_or_else(|| parse_error(metadata.len() + 1, "metadata line without ':'"))?;
            metadata.push((k.trim().to_string(), v.trim().to_string()));
            body_start += line.len() + 1;
        }
        let body = text.get(body_start..).unwrap_or("");
        let mut r = csv::ReaderBuilder::new().from_reader(body.as_bytes());
        let columns: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
        let mut rows = Vec::new();
        for rec in r.records() {
            let rec = rec?;
            rows.push(rec.iter().map(parse_cell).collect());
        }
        Ok(Self {
            columns,
            rows,
            metadata,
        })
    }
}

fn parse_cell(s: &str) -> Cell {
    if s.is_empty() {
        Cell::Missing
    } else if let Ok(i) = s.parse::<i64>() {
        Cell::Int(i)
    } else if let Ok(x) = s.parse::<f64>() {
        Cell::Real(x)
    } else {
        Cell::Text(s.to_string())
    }
}

/// Writes `table` to `path`, or to standard output when `path` is `None`.
pub fn write_table(table: &ResultTable, path: Option<&Path>) -> Result<()> {
    let text = table.to_csv()?;
    match path {
        Some(p) => fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{generate_matrix, MatrixRecipe};

    fn line_of(e: Error) -> usize {
        match e {
            Error::Parse { line, .. } => line,
            other => panic!("expected a parse error, got {other}"),
        }
    }

    #[test]
    fn matrix_round_trip() {
        for recipe in ["random_tridiag:n=7", "random_symmetric:n=5", "scott_like:n=1"] {
            let m = generate_matrix(&MatrixRecipe::parse(recipe).unwrap().with_seed(9)).unwrap();
            let text = matrix_to_string(&m);
            let back = parse_matrix(&text).unwrap();
            assert_eq!(back, m);
            assert_eq!(matrix_to_string(&back), text);
        }
    }

    #[test]
    fn malformed_matrices_report_lines() {
        assert_eq!(line_of(parse_matrix("").unwrap_err()), 1);
        assert_eq!(line_of(parse_matrix("3\n").unwrap_err()), 1);
        assert_eq!(line_of(parse_matrix("2 banded\n1 2\n3\n").unwrap_err()), 1);
        assert_eq!(line_of(parse_matrix("2 tridiagonal\n1 2\n").unwrap_err()), 3);
        assert_eq!(line_of(parse_matrix("2 tridiagonal\n1 x\n0\n").unwrap_err()), 2);
        assert_eq!(line_of(parse_matrix("2 dense\n1 2\n3 1\n").unwrap_err()), 3);
        assert_eq!(line_of(parse_matrix("2 dense\n1 2\n2 1\n\n5\n").unwrap_err()), 5);
        assert_eq!(line_of(parse_matrix("1 dense\nnan\n").unwrap_err()), 2);
    }

    #[test]
    fn table_round_trip() {
        let mut t = ResultTable::new(&["step", "value", "note"]);
        t.meta("seed", 3).meta("recipe", "random_tridiag:n=4");
        t.push(vec![1usize.into(), 0.25.into(), "ok".into()]);
        t.push(vec![Cell::Missing, 1e-300.into(), "x".into()]);
        let csv = t.to_csv().unwrap();
        assert!(csv.starts_with("# seed: 3\n# recipe: random_tridiag:n=4\nstep,value,note\n"));
        let back = ResultTable::from_csv(&csv).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn table_rejects_bad_cells() {
        let mut t = ResultTable::new(&["a"]);
        t.push(vec![f64::NAN.into()]);
        assert!(t.to_csv().is_err());
        let mut t = ResultTable::new(&["a"]);
        t.push(vec!["x,y".into()]);
        assert!(t.to_csv().is_err());
    }
}
