//! Plain-text certificate records.
//!
//! ```text
//! record <kind>
//! <name> <value>               scalar or integer
//! <name> <len>                 vector header, entries on the next line
//! <name> <n> x <n>             matrix header, then n rows (row-major)
//! end
//! ```
//!
//! Reals are written with 17 significant digits, so reading a record back
//! reproduces every value exactly.

use crate::error::{Error, Result};
use crate::linalg::DenseSymmetric;
use std::fmt::Write as _;

pub(crate) fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

pub(crate) fn fmt_row(v: &[f64]) -> String {
    v.iter().map(|x| fmt_real(*x)).collect::<Vec<_>>().join(" ")
}

pub(crate) struct Record {
    out: String,
}

impl Record {
    pub fn new(kind: &str) -> Self {
        Self {
            out: format!("record {kind}\n"),
        }
    }

    pub fn usize(&mut self, name: &str, v: usize) -> &mut Self {
        let _ = writeln!(self.out, "{name} {v}");
        self
    }

    pub fn scalar(&mut self, name: &str, v: f64) -> &mut Self {
        let _ = writeln!(self.out, "{name} {}", fmt_real(v));
        self
    }

    pub fn vector(&mut self, name: &str, v: &[f64]) -> &mut Self {
        let _ = writeln!(self.out, "{name} {}\n{}", v.len(), fmt_row(v));
        self
    }

    pub fn matrix(&mut self, name: &str, a: &DenseSymmetric) -> &mut Self {
        let n = a.order();
        let _ = writeln!(self.out, "{name} {n} x {n}");
        for i in 0..n {
            let _ = writeln!(self.out, "{}", fmt_row(a.row(i)));
        }
        self
    }

    pub fn finish(&mut self) -> String {
        let mut out = std::mem::take(&mut self.out);
        out.push_str("end\n");
        out
    }
}

pub(crate) struct RecordReader<'a> {
    lines: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
    last_line: usize,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

pub(crate) fn parse_reals(line: usize, text: &str) -> Result<Vec<f64>> {
    text.split_whitespace()
        .map(|tok| {
            tok.parse::<f64>()
                .map_err(|e| parse_err(line, format!("bad number {tok:?}: {e}")))
        })
        .collect()
}

impl<'a> RecordReader<'a> {
    pub fn new(text: &'a str, kind: &str) -> Result<Self> {
        let mut r = Self {
            lines: text.lines().enumerate().peekable(),
            last_line: 0,
        };
        let (line, head) = r.next_line()?;
        if head.trim() != format!("record {kind}") {
            return Err(parse_err(line, format!("expected \"record {kind}\"")));
        }
        Ok(r)
    }

    fn next_line(&mut self) -> Result<(usize, &'a str)> {
        match self.lines.next() {
            Some((i, l)) => {
                self.last_line = i + 1;
                Ok((i + 1, l))
            }
            None => Err(parse_err(self.last_line + 1, "unexpected end of record")),
        }
    }

    fn field(&mut self, name: &str) -> Result<(usize, Vec<&'a str>)> {
        let (line, text) = self.next_line()?;
        let mut toks = text.split_whitespace();
        match toks.next() {
            Some(tok) if tok == name => Ok((line, toks.collect())),
            other => Err(parse_err(
                line,
                format!("expected field {name:?}, found {:?}", other.unwrap_or("")),
            )),
        }
    }

    fn single<T: std::str::FromStr>(&mut self, name: &str) -> Result<T> {
        let (line, toks) = self.field(name)?;
        match toks.as_slice() {
            [v] => v
                .parse()
                .map_err(|_| parse_err(line, format!("bad value for {name}"))),
            _ => Err(parse_err(line, format!("expected one value for {name}"))),
        }
    }

    pub fn usize(&mut self, name: &str) -> Result<usize> {
        self.single(name)
    }

    pub fn scalar(&mut self, name: &str) -> Result<f64> {
        self.single(name)
    }

    pub fn flag(&mut self, name: &str) -> Result<bool> {
        Ok(self.usize(name)? != 0)
    }

    pub fn vector(&mut self, name: &str) -> Result<Vec<f64>> {
        let len: usize = self.single(name)?;
        let (line, text) = self.next_line()?;
        let v = parse_reals(line, text)?;
        if v.len() != len {
            return Err(parse_err(line, format!("expected {len} entries, found {}", v.len())));
        }
        Ok(v)
    }

    pub fn matrix(&mut self, name: &str) -> Result<DenseSymmetric> {
        let (line, toks) = self.field(name)?;
        let n: usize = match toks.as_slice() {
            [a, "x", b] if a == b => a
                .parse()
                .map_err(|_| parse_err(line, "bad matrix order"))?,
            _ => return Err(parse_err(line, "expected \"<n> x <n>\"")),
        };
        let mut rows = Vec::with_capacity(n);
        for _ in 0..n {
            let (l, text) = self.next_line()?;
            let row = parse_reals(l, text)?;
            if row.len() != n {
                return Err(parse_err(l, format!("expected {n} entries, found {}", row.len())));
            }
            rows.push(row);
        }
        DenseSymmetric::from_rows(&rows).map_err(|e| parse_err(line, e.to_string()))
    }

    pub fn end(&mut self) -> Result<()> {
        let (line, text) = self.next_line()?;
        if text.trim() != "end" {
            return Err(parse_err(line, "expected \"end\""));
        }
        Ok(())
    }
}
