use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::{check_pointer, check_segments, CsrMatrix};

/// Compressed sparse column matrix.
///
/// Used only for interchange: a CSC matrix of `A` has exactly the arrays of
/// the CSR matrix of `Aᵀ`, so conversion is a relabelling.
#[derive(Debug, Clone, PartialEq)]
pub struct CscMatrix<T> {
    rows: usize,
    cols: usize,
    col_pointer: Vec<usize>,
    row_indices: Vec<usize>,
    values: Vec<T>,
}

impl<T: Scalar> CscMatrix<T> {
    pub fn from_parts(
        rows: usize,
        cols: usize,
        col_pointer: Vec<usize>,
        row_indices: Vec<usize>,
        values: Vec<T>,
    ) -> Result<Self> {
        if row_indices.len() != values.len() {
            return Err(Error::Format(format!(
                "{} row indices for {} values",
                row_indices.len(),
                values.len()
            )));
        }
        check_pointer(&col_pointer, cols, values.len(), "column pointer")?;
        check_segments(&col_pointer, &row_indices, rows)?;
        Ok(Self {
            rows,
            cols,
            col_pointer,
            row_indices,
            values,
        })
    }

    /// CSC form of a CSR matrix.
    pub fn from_csr(m: &CsrMatrix<T>) -> Self {
        let t = m.transpose();
        Self {
            rows: m.rows(),
            cols: m.cols(),
            col_pointer: t.row_pointer().to_vec(),
            row_indices: t.col_indices().to_vec(),
            values: t.values().to_vec(),
        }
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

    pub fn col_pointer(&self) -> &[usize] {
        &self.col_pointer
    }

    pub fn row_indices(&self) -> &[usize] {
        &self.row_indices
    }

    /// Reinterprets the arrays as the CSR matrix of the transpose:
    /// column pointer → row pointer, row indices → column indices, values unchanged.
    pub fn into_csr_transpose(self) -> CsrMatrix<T> {
        CsrMatrix::from_parts_unchecked(self.cols, self.rows, self.col_pointer, self.row_indices, self.values)
    }

    /// CSR form of the same (untransposed) matrix.
    pub fn to_csr(&self) -> CsrMatrix<T> {
        self.clone().into_csr_transpose().transpose()
    }
}
