use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::CsrMatrix;

/// Coordinate-format sparse matrix.
///
/// Entries are sorted by row, then by column, with no repeated coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct CooMatrix<T> {
    rows: usize,
    cols: usize,
    values: Vec<T>,
    row_indices: Vec<usize>,
    col_indices: Vec<usize>,
}

impl<T: Scalar> CooMatrix<T> {
    /// Builds a COO matrix from already sorted triplet arrays.
    ///
    /// Unsorted input, duplicated coordinates and out-of-range indices are
    /// rejected with [`Error::Format`]; duplicates are never summed.
    pub fn new(
        rows: usize,
        cols: usize,
        row_indices: Vec<usize>,
        col_indices: Vec<usize>,
        values: Vec<T>,
    ) -> Result<Self> {
        let nnz = values.len();
        if row_indices.len() != nnz || col_indices.len() != nnz {
            return Err(Error::Format(format!(
                "triplet arrays differ in length: {} values, {} row indices, {} column indices",
                nnz,
                row_indices.len(),
                col_indices.len()
            )));
        }
        for k in 0..nnz {
            let (r, c) = (row_indices[k], col_indices[k]);
            if r >= rows || c >= cols {
                return Err(Error::Format(format!(
                    "entry {k} at ({r}, {c}) is outside a {rows}x{cols} matrix"
                )));
            }
            if k > 0 {
                let prev = (row_indices[k - 1], col_indices[k - 1]);
                if prev == (r, c) {
                    return Err(Error::Format(format!("duplicate entry at ({r}, {c})")));
                }
                if prev > (r, c) {
                    return Err(Error::Format(format!(
                        "entry {k} at ({r}, {c}) is not sorted by row then column"
                    )));
                }
            }
        }
        Ok(Self {
            rows,
            cols,
            values,
            row_indices,
            col_indices,
        })
    }

    /// Sorts arbitrary-order triplets and builds the matrix. Duplicates are still an error.
    pub fn from_triplets(rows: usize, cols: usize, mut triplets: Vec<(usize, usize, T)>) -> Result<Self> {
        triplets.sort_by_key(|&(r, c, _)| (r, c));
        let mut ri = Vec::with_capacity(triplets.len());
        let mut ci = Vec::with_capacity(triplets.len());
        let mut vals = Vec::with_capacity(triplets.len());
        for (r, c, v) in triplets {
            ri.push(r);
            ci.push(c);
            vals.push(v);
        }
        Self::new(rows, cols, ri, ci, vals)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn row_indices(&self) -> &[usize] {
        &self.row_indices
    }

    pub fn col_indices(&self) -> &[usize] {
        &self.col_indices
    }

    /// Iterates over `(row, col, value)` in storage order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        self.row_indices
            .iter()
            .zip(&self.col_indices)
            .zip(&self.values)
            .map(|((&r, &c), &v)| (r, c, v))
    }

    /// Compresses the row indices into a row pointer.
    ///
    /// Counts entries per row, then takes the zero-prefixed running sum, so
    /// `row_pointer[rows] == nnz`. Value and column arrays carry over as-is.
    pub fn to_csr(&self) -> CsrMatrix<T> {
        let mut row_pointer = vec![0usize; self.rows + 1];
        for &r in &self.row_indices {
            row_pointer[r + 1] += 1;
        }
        for i in 0..self.rows {
            row_pointer[i + 1] += row_pointer[i];
        }
        CsrMatrix::from_parts_unchecked(
            self.rows,
            self.cols,
            row_pointer,
            self.col_indices.clone(),
            self.values.clone(),
        )
    }

    pub fn into_csr(self) -> CsrMatrix<T> {
        self.to_csr()
    }
}
