//! Plain-text problem files.
//!
//! A matrix is written as a header line `rows cols nnz` followed by `nnz`
//! lines `row col value` in COO order (sorted, zero-based). A vector is one
//! value per line; its length is implied by the surrounding matrices.
//! Infinite bounds are spelled `inf` / `-inf`.
//!
//! A problem file is the concatenation, in this order, of the upper triangle
//! of `P` (matrix), `q` (`n` values), `A` (matrix), `l` and `u` (`m` values
//! each). Blank lines and lines starting with `#` are ignored.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::problem::QpProblem;
use crate::scalar::Scalar;
use crate::sparse::{CooMatrix, CsrMatrix};

/// Line-oriented tokenizer that remembers line numbers for error messages.
struct Lines<R> {
    inner: std::io::Lines<R>,
    line: usize,
}

impl<R: BufRead> Lines<R> {
    fn new(r: R) -> Self {
        Self {
            inner: r.lines(),
            line: 0,
        }
    }

    fn next_content(&mut self) -> Result<Option<String>> {
        for l in self.inner.by_ref() {
            self.line += 1;
            let l = l?;
            let t = l.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            return Ok(Some(t.to_string()));
        }
        Ok(None)
    }

    fn expect_line(&mut self, what: &str) -> Result<String> {
        self.next_content()?.ok_or_else(|| Error::Parse {
            line: self.line,
            message: format!("unexpected end of input while reading {what}"),
        })
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            message: message.into(),
        }
    }

    fn parse_index(&self, tok: &str) -> Result<usize> {
        tok.parse().map_err(|_| self.err(format!("invalid index '{tok}'")))
    }

    fn parse_value<T: Scalar>(&self, tok: &str) -> Result<T> {
        let v: T = tok.parse().map_err(|_| self.err(format!("invalid number '{tok}'")))?;
        if v.is_nan() {
            return Err(self.err("NaN is not allowed"));
        }
        Ok(v)
    }

    fn read_matrix<T: Scalar>(&mut self) -> Result<CsrMatrix<T>> {
        let header = self.expect_line("matrix header")?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 3 {
            return Err(self.err("matrix header must be 'rows cols nnz'"));
        }
        let rows = self.parse_index(h[0])?;
        let cols = self.parse_index(h[1])?;
        let nnz = self.parse_index(h[2])?;
        let mut ri = Vec::with_capacity(nnz);
        let mut ci = Vec::with_capacity(nnz);
        let mut vals = Vec::with_capacity(nnz);
        for _ in 0..nnz {
            let l = self.expect_line("matrix entry")?;
            let t: Vec<&str> = l.split_whitespace().collect();
            if t.len() != 3 {
                return Err(self.err("matrix entry must be 'row col value'"));
            }
            ri.push(self.parse_index(t[0])?);
            ci.push(self.parse_index(t[1])?);
            vals.push(self.parse_value(t[2])?);
        }
        let coo = CooMatrix::new(rows, cols, ri, ci, vals).map_err(|e| self.err(e.to_string()))?;
        Ok(coo.into_csr())
    }

    fn read_vector<T: Scalar>(&mut self, len: usize) -> Result<Vec<T>> {
        (0..len)
            .map(|_| {
                let l = self.expect_line("vector entry")?;
                self.parse_value(&l)
            })
            .collect()
    }
}

pub fn write_matrix<T: Scalar, W: Write>(w: &mut W, m: &CsrMatrix<T>) -> Result<()> {
    writeln!(w, "{} {} {}", m.rows(), m.cols(), m.nnz())?;
    for i in 0..m.rows() {
        let (c, v) = m.row(i);
        for (&j, &x) in c.iter().zip(v) {
            writeln!(w, "{i} {j} {x}")?;
        }
    }
    Ok(())
}

pub fn write_vector<T: Scalar, W: Write>(w: &mut W, v: &[T]) -> Result<()> {
    for x in v {
        writeln!(w, "{x}")?;
    }
    Ok(())
}

pub fn read_matrix<T: Scalar, R: Read>(r: R) -> Result<CsrMatrix<T>> {
    let mut lines = Lines::new(BufReader::new(r));
    let m = lines.read_matrix()?;
    if lines.next_content()?.is_some() {
        return Err(lines.err("trailing content after matrix"));
    }
    Ok(m)
}

/// Reads a whole-file vector of unknown length.
pub fn read_vector<T: Scalar, R: Read>(r: R) -> Result<Vec<T>> {
    let mut lines = Lines::new(BufReader::new(r));
    let mut out = Vec::new();
    while let Some(l) = lines.next_content()? {
        out.push(lines.parse_value(&l)?);
    }
    Ok(out)
}

pub fn write_problem<T: Scalar, W: Write>(w: &mut W, p: &QpProblem<T>) -> Result<()> {
    write_matrix(w, p.p_upper())?;
    write_vector(w, p.q())?;
    write_matrix(w, p.a())?;
    write_vector(w, p.l())?;
    write_vector(w, p.u())?;
    Ok(())
}

pub fn read_problem<T: Scalar, R: Read>(r: R) -> Result<QpProblem<T>> {
    let mut lines = Lines::new(BufReader::new(r));
    let p = lines.read_matrix()?;
    let q = lines.read_vector(p.cols())?;
    let a = lines.read_matrix()?;
    let l = lines.read_vector(a.rows())?;
    let u = lines.read_vector(a.rows())?;
    if lines.next_content()?.is_some() {
        return Err(lines.err("trailing content after problem"));
    }
    QpProblem::new(p, q, a, l, u)
}

pub fn save_problem<T: Scalar>(path: impl AsRef<Path>, p: &QpProblem<T>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_problem(&mut w, p)?;
    w.flush()?;
    Ok(())
}

pub fn load_problem<T: Scalar>(path: impl AsRef<Path>) -> Result<QpProblem<T>> {
    read_problem(File::open(path)?)
}
