use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::{check_pointer, check_segments, CooMatrix};

/// Compressed sparse row matrix, the canonical storage for all kernels.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix<T> {
    rows: usize,
    cols: usize,
    row_pointer: Vec<usize>,
    col_indices: Vec<usize>,
    values: Vec<T>,
}

/// Row index of every stored value, expanded from a CSR row pointer.
///
/// Lets row scaling run as a flat loop over the value array instead of a
/// loop over rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowIndexCache {
    row_of_entry: Vec<usize>,
}

impl RowIndexCache {
    pub fn row_of_entry(&self) -> &[usize] {
        &self.row_of_entry
    }

    fn check<T>(&self, m: &CsrMatrix<T>) -> Result<()> {
        if self.row_of_entry.len() != m.values.len() {
            return Err(Error::StaleCache);
        }
        for (r, w) in m.row_pointer.windows(2).enumerate() {
            if self.row_of_entry[w[0]..w[1]].iter().any(|&x| x != r) {
                return Err(Error::StaleCache);
            }
        }
        Ok(())
    }
}

/// Reduces each segment `values[pointer[i]..pointer[i+1]]` with `op`, starting from `identity`.
///
/// Empty segments yield `identity`. `op(acc, value)` need not be symmetric, which
/// lets one kernel compute max-abs, sum and sum-of-squares reductions.
pub fn segmented_reduce<T: Scalar, F>(pointer: &[usize], values: &[T], identity: T, op: F) -> Vec<T>
where
    F: Fn(T, T) -> T,
{
    pointer
        .windows(2)
        .map(|w| values[w[0]..w[1]].iter().fold(identity, |acc, &v| op(acc, v)))
        .collect()
}

impl<T: Scalar> CsrMatrix<T> {
    /// Builds a CSR matrix from raw arrays, validating every format invariant.
    pub fn from_parts(
        rows: usize,
        cols: usize,
        row_pointer: Vec<usize>,
        col_indices: Vec<usize>,
        values: Vec<T>,
    ) -> Result<Self> {
        if col_indices.len() != values.len() {
            return Err(Error::Format(format!(
                "{} column indices for {} values",
                col_indices.len(),
                values.len()
            )));
        }
        check_pointer(&row_pointer, rows, values.len(), "row pointer")?;
        check_segments(&row_pointer, &col_indices, cols)?;
        Ok(Self::from_parts_unchecked(rows, cols, row_pointer, col_indices, values))
    }

    pub(crate) fn from_parts_unchecked(
        rows: usize,
        cols: usize,
        row_pointer: Vec<usize>,
        col_indices: Vec<usize>,
        values: Vec<T>,
    ) -> Self {
        debug_assert_eq!(row_pointer.len(), rows + 1);
        debug_assert_eq!(col_indices.len(), values.len());
        Self {
            rows,
            cols,
            row_pointer,
            col_indices,
            values,
        }
    }

    /// All-zero matrix with no stored entries.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_parts_unchecked(rows, cols, vec![0; rows + 1], Vec::new(), Vec::new())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diagonal(&vec![T::one(); n])
    }

    pub fn from_diagonal(d: &[T]) -> Self {
        let n = d.len();
        Self::from_parts_unchecked(n, n, (0..=n).collect(), (0..n).collect(), d.to_vec())
    }

    /// Builds from unordered triplets. Duplicated coordinates are rejected.
    pub fn from_triplets(rows: usize, cols: usize, triplets: Vec<(usize, usize, T)>) -> Result<Self> {
        Ok(CooMatrix::from_triplets(rows, cols, triplets)?.into_csr())
    }

    /// Builds from a row-major dense matrix, storing only nonzero entries.
    pub fn from_dense(rows: usize, cols: usize, dense: &[T]) -> Self {
        assert_eq!(dense.len(), rows * cols, "dense buffer has wrong size");
        let mut row_pointer = Vec::with_capacity(rows + 1);
        let mut col_indices = Vec::new();
        let mut values = Vec::new();
        row_pointer.push(0);
        for i in 0..rows {
            for j in 0..cols {
                let v = dense[i * cols + j];
                if v != T::zero() {
                    col_indices.push(j);
                    values.push(v);
                }
            }
            row_pointer.push(values.len());
        }
        Self::from_parts_unchecked(rows, cols, row_pointer, col_indices, values)
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<T> {
        let mut out = vec![T::zero(); self.rows * self.cols];
        for i in 0..self.rows {
            for k in self.row_pointer[i]..self.row_pointer[i + 1] {
                out[i * self.cols + self.col_indices[k]] = self.values[k];
            }
        }
        out
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

    /// Mutable access to stored values; the sparsity pattern stays fixed.
    pub fn values_mut(&mut self) -> &mut [T] {
        &mut self.values
    }

    pub fn row_pointer(&self) -> &[usize] {
        &self.row_pointer
    }

    pub fn col_indices(&self) -> &[usize] {
        &self.col_indices
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[T]) {
        let (s, e) = (self.row_pointer[i], self.row_pointer[i + 1]);
        (&self.col_indices[s..e], &self.values[s..e])
    }

    /// Value stored at `(i, j)`, if any.
    pub fn get(&self, i: usize, j: usize) -> Option<T> {
        let (cols, vals) = self.row(i);
        cols.binary_search(&j).ok().map(|k| vals[k])
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Expands the row pointer back into per-entry row indices.
    pub fn to_coo(&self) -> CooMatrix<T> {
        let rows = self.row_index_cache().row_of_entry;
        CooMatrix::new(
            self.rows,
            self.cols,
            rows,
            self.col_indices.clone(),
            self.values.clone(),
        )
        .expect("a valid CSR matrix always expands to a valid COO matrix")
    }

    pub fn row_index_cache(&self) -> RowIndexCache {
        let mut row_of_entry = Vec::with_capacity(self.nnz());
        for (r, w) in self.row_pointer.windows(2).enumerate() {
            row_of_entry.extend(std::iter::repeat_n(r, w[1] - w[0]));
        }
        RowIndexCache { row_of_entry }
    }

    /// CSR form of the transpose (counting sort on column indices).
    pub fn transpose(&self) -> Self {
        let mut pointer = vec![0usize; self.cols + 1];
        for &c in &self.col_indices {
            pointer[c + 1] += 1;
        }
        for j in 0..self.cols {
            pointer[j + 1] += pointer[j];
        }
        let mut next = pointer.clone();
        let mut col_indices = vec![0usize; self.nnz()];
        let mut values = vec![T::zero(); self.nnz()];
        for i in 0..self.rows {
            for k in self.row_pointer[i]..self.row_pointer[i + 1] {
                let c = self.col_indices[k];
                let dst = next[c];
                col_indices[dst] = i;
                values[dst] = self.values[k];
                next[c] += 1;
            }
        }
        Self::from_parts_unchecked(self.cols, self.rows, pointer, col_indices, values)
    }

    /// Expands an upper-triangular matrix into the full symmetric matrix.
    ///
    /// Entries strictly below the diagonal are a format error; diagonal
    /// entries appear once in the result.
    pub fn symmetrize_upper(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        for i in 0..self.rows {
            let (cols, _) = self.row(i);
            if let Some(&j) = cols.first().filter(|&&j| j < i) {
                return Err(Error::Format(format!(
                    "entry ({i}, {j}) lies below the diagonal of an upper-triangular matrix"
                )));
            }
        }
        // Strictly-upper part of the transpose is the strictly-lower part of the result.
        let lower = self.transpose();
        let n = self.rows;
        let mut row_pointer = Vec::with_capacity(n + 1);
        let mut col_indices = Vec::with_capacity(2 * self.nnz());
        let mut values = Vec::with_capacity(2 * self.nnz());
        row_pointer.push(0);
        for i in 0..n {
            let (lc, lv) = lower.row(i);
            for (&j, &v) in lc.iter().zip(lv) {
                if j < i {
                    col_indices.push(j);
                    values.push(v);
                }
            }
            let (uc, uv) = self.row(i);
            col_indices.extend_from_slice(uc);
            values.extend_from_slice(uv);
            row_pointer.push(values.len());
        }
        Ok(Self::from_parts_unchecked(n, n, row_pointer, col_indices, values))
    }

    /// Keeps only the entries on or above the diagonal.
    pub fn upper_triangle(&self) -> Self {
        let mut row_pointer = Vec::with_capacity(self.rows + 1);
        let mut col_indices = Vec::new();
        let mut values = Vec::new();
        row_pointer.push(0);
        for i in 0..self.rows {
            let (c, v) = self.row(i);
            for (&j, &x) in c.iter().zip(v) {
                if j >= i {
                    col_indices.push(j);
                    values.push(x);
                }
            }
            row_pointer.push(values.len());
        }
        Self::from_parts_unchecked(self.rows, self.cols, row_pointer, col_indices, values)
    }

    /// `y = M x`.
    pub fn spmv(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.cols {
            return Err(Error::dims("spmv input", self.cols, x.len()));
        }
        let mut y = vec![T::zero(); self.rows];
        self.spmv_into(x, &mut y);
        Ok(y)
    }

    /// `y = M x` into a caller-provided buffer.
    ///
    /// # Panics
    /// If the buffer lengths do not match the matrix shape.
    pub fn spmv_into(&self, x: &[T], y: &mut [T]) {
        assert_eq!(x.len(), self.cols, "spmv input length");
        assert_eq!(y.len(), self.rows, "spmv output length");
        for (i, yi) in y.iter_mut().enumerate() {
            let (s, e) = (self.row_pointer[i], self.row_pointer[i + 1]);
            let mut acc = T::zero();
            for k in s..e {
                acc = acc + self.values[k] * x[self.col_indices[k]];
            }
            *yi = acc;
        }
    }

    /// `y += M x`.
    ///
    /// # Panics
    /// If the buffer lengths do not match the matrix shape.
    pub fn spmv_add_into(&self, x: &[T], y: &mut [T]) {
        assert_eq!(x.len(), self.cols, "spmv input length");
        assert_eq!(y.len(), self.rows, "spmv output length");
        for (i, yi) in y.iter_mut().enumerate() {
            let (s, e) = (self.row_pointer[i], self.row_pointer[i + 1]);
            let mut acc = T::zero();
            for k in s..e {
                acc = acc + self.values[k] * x[self.col_indices[k]];
            }
            *yi = *yi + acc;
        }
    }

    /// `y = Mᵀ x` by scattering rows, without forming the transpose.
    pub fn spmv_transpose(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.rows {
            return Err(Error::dims("transposed spmv input", self.rows, x.len()));
        }
        let mut y = vec![T::zero(); self.cols];
        for (i, &xi) in x.iter().enumerate() {
            let (c, v) = self.row(i);
            for (&j, &a) in c.iter().zip(v) {
                y[j] = y[j] + a * xi;
            }
        }
        Ok(y)
    }

    /// `y = (U + Uᵀ − diag U) x` for an upper-triangular `U`, i.e. the product with
    /// the symmetric matrix whose upper triangle is stored.
    pub fn spmv_symmetric_upper(&self, x: &[T]) -> Result<Vec<T>> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if x.len() != self.cols {
            return Err(Error::dims("symmetric spmv input", self.cols, x.len()));
        }
        let mut y = vec![T::zero(); self.rows];
        for i in 0..self.rows {
            let (c, v) = self.row(i);
            for (&j, &a) in c.iter().zip(v) {
                y[i] = y[i] + a * x[j];
                if j != i {
                    y[j] = y[j] + a * x[i];
                }
            }
        }
        Ok(y)
    }

    /// Per-row maximum absolute value, computed as a segmented reduction with
    /// `x₁ ⊕ x₂ = max(|x₁|, |x₂|)`. Empty rows give 0.
    pub fn row_inf_norms(&self) -> Vec<T> {
        segmented_reduce(&self.row_pointer, &self.values, T::zero(), |a, b| a.abs().max(b.abs()))
    }

    /// Per-row squared Euclidean norm.
    pub fn row_sq_norms(&self) -> Vec<T> {
        segmented_reduce(&self.row_pointer, &self.values, T::zero(), |a, b| a + b * b)
    }

    /// Post-multiplication `M ← M diag(d)`: each value is scaled by the entry of `d`
    /// at its column index.
    pub fn scale_columns_inplace(&mut self, d: &[T]) -> Result<()> {
        if d.len() != self.cols {
            return Err(Error::dims("column scaling vector", self.cols, d.len()));
        }
        for (v, &c) in self.values.iter_mut().zip(&self.col_indices) {
            *v = *v * d[c];
        }
        Ok(())
    }

    /// Pre-multiplication `M ← diag(d) M` using a precomputed row index per value.
    pub fn scale_rows_inplace(&mut self, cache: &RowIndexCache, d: &[T]) -> Result<()> {
        if d.len() != self.rows {
            return Err(Error::dims("row scaling vector", self.rows, d.len()));
        }
        cache.check(self)?;
        for (v, &r) in self.values.iter_mut().zip(&cache.row_of_entry) {
            *v = *v * d[r];
        }
        Ok(())
    }

    /// `M ← diag(left) M diag(right)` with each value multiplied by the single
    /// product `left[row]·right[col]`.
    ///
    /// Because that product commutes, scaling a symmetric matrix with
    /// `left == right`, or a matrix and its transpose with swapped vectors,
    /// yields bit-identical mirrored values.
    pub fn scale_two_sided_inplace(&mut self, cache: &RowIndexCache, left: &[T], right: &[T]) -> Result<()> {
        if left.len() != self.rows {
            return Err(Error::dims("row scaling vector", self.rows, left.len()));
        }
        if right.len() != self.cols {
            return Err(Error::dims("column scaling vector", self.cols, right.len()));
        }
        cache.check(self)?;
        for ((v, &r), &c) in self.values.iter_mut().zip(&cache.row_of_entry).zip(&self.col_indices) {
            *v = *v * (left[r] * right[c]);
        }
        Ok(())
    }

    pub fn scale_inplace(&mut self, s: T) {
        for v in &mut self.values {
            *v = *v * s;
        }
    }

    /// Stored diagonal, with 0 where no `(i, i)` entry exists.
    pub fn extract_diagonal(&self) -> Result<Vec<T>> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok((0..self.rows).map(|i| self.get(i, i).unwrap_or_else(T::zero)).collect())
    }

    /// Diagonal of `AᵀA`, i.e. the squared 2-norm of every column, accumulated
    /// by column index without forming the product.
    pub fn diag_ata(&self) -> Vec<T> {
        let mut out = vec![T::zero(); self.cols];
        for (&c, &v) in self.col_indices.iter().zip(&self.values) {
            out[c] = out[c] + v * v;
        }
        out
    }

    /// True when any stored value is NaN or infinite.
    pub fn has_non_finite(&self) -> bool {
        self.values.iter().any(|v| !v.is_finite())
    }

    /// Converts values to another scalar type, keeping the pattern.
    pub fn cast<U: Scalar>(&self) -> CsrMatrix<U> {
        CsrMatrix::from_parts_unchecked(
            self.rows,
            self.cols,
            self.row_pointer.clone(),
            self.col_indices.clone(),
            self.values.iter().map(|v| U::lit(v.as_f64())).collect(),
        )
    }
}
