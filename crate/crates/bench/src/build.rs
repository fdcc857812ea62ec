//! Random sparse data and block assembly used by the generators.

use pcgqp::{CsrMatrix, Result};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// Accumulates entries of a block matrix, dropping exact zeros.
#[derive(Debug, Clone)]
pub struct TripletBuilder {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, f64)>,
}

impl TripletBuilder {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: Vec::new(),
        }
    }

    pub fn push(&mut self, r: usize, c: usize, v: f64) {
        debug_assert!(
            r < self.rows && c < self.cols,
            "({r}, {c}) outside {}x{}",
            self.rows,
            self.cols
        );
        if v != 0.0 {
            self.entries.push((r, c, v));
        }
    }

    /// Adds `scale · block` with its top-left corner at `(r0, c0)`.
    pub fn push_block(&mut self, r0: usize, c0: usize, block: &CsrMatrix<f64>, scale: f64) {
        for i in 0..block.rows() {
            let (cols, vals) = block.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                self.push(r0 + i, c0 + j, scale * v);
            }
        }
    }

    /// Adds `scale · Bᵀ` with its top-left corner at `(r0, c0)`.
    pub fn push_block_transposed(&mut self, r0: usize, c0: usize, block: &CsrMatrix<f64>, scale: f64) {
        for i in 0..block.rows() {
            let (cols, vals) = block.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                self.push(r0 + j, c0 + i, scale * v);
            }
        }
    }

    /// Adds `diag(d)` starting at `(r0, c0)`.
    pub fn push_diagonal(&mut self, r0: usize, c0: usize, d: &[f64]) {
        for (k, &v) in d.iter().enumerate() {
            self.push(r0 + k, c0 + k, v);
        }
    }

    /// Adds `scale · I_len` starting at `(r0, c0)`.
    pub fn push_identity(&mut self, r0: usize, c0: usize, len: usize, scale: f64) {
        for k in 0..len {
            self.push(r0 + k, c0 + k, scale);
        }
    }

    pub fn finish(self) -> Result<CsrMatrix<f64>> {
        CsrMatrix::from_triplets(self.rows, self.cols, self.entries)
    }
}

pub fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

pub fn normal_vec<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Vec<f64> {
    (0..len).map(|_| normal(rng)).collect()
}

pub fn uniform_vec<R: Rng + ?Sized>(rng: &mut R, len: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..len).map(|_| rng.random_range(lo..hi)).collect()
}

/// `rows × cols` matrix whose entries are independently nonzero with
/// probability `density`, with values drawn from `value`.
pub fn sparse_random<R, F>(rng: &mut R, rows: usize, cols: usize, density: f64, mut value: F) -> CsrMatrix<f64>
where
    R: Rng + ?Sized,
    F: FnMut(&mut R, usize) -> f64,
{
    let mut row_pointer = Vec::with_capacity(rows + 1);
    let mut col_indices = Vec::new();
    let mut values = Vec::new();
    row_pointer.push(0);
    for i in 0..rows {
        for j in 0..cols {
            if rng.random_bool(density) {
                let v = value(rng, i);
                if v != 0.0 {
                    col_indices.push(j);
                    values.push(v);
                }
            }
        }
        row_pointer.push(col_indices.len());
    }
    CsrMatrix::from_parts(rows, cols, row_pointer, col_indices, values).expect("rows are built in order")
}

/// Sparse matrix with standard normal nonzeros.
pub fn sparse_normal<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, density: f64) -> CsrMatrix<f64> {
    sparse_random(rng, rows, cols, density, |r, _| normal(r))
}

/// Upper triangle of `GᵀG + shift·I`.
pub fn gram_upper(g: &CsrMatrix<f64>, shift: f64) -> CsrMatrix<f64> {
    let n = g.cols();
    let mut dense = vec![0.0; n * n];
    for k in 0..g.rows() {
        let (cols, vals) = g.row(k);
        for (a, (&i, &vi)) in cols.iter().zip(vals).enumerate() {
            for (&j, &vj) in cols[a..].iter().zip(&vals[a..]) {
                dense[i * n + j] += vi * vj;
            }
        }
    }
    for i in 0..n {
        dense[i * n + i] += shift;
    }
    CsrMatrix::from_dense(n, n, &dense)
}

/// Expected number of nonzeros in the upper triangle of `GᵀG + shift·I` for an
/// `rows × n` factor of the given density (diagonal always present).
pub fn expected_gram_upper_nnz(rows: usize, n: usize, density: f64) -> f64 {
    let n = n as f64;
    let off = 1.0 - (1.0 - density * density).powf(rows as f64);
    n + 0.5 * n * (n - 1.0) * off
}

/// Smallest dimension `d ≥ min` whose expected size reaches `target`, or its
/// predecessor when that is closer on a log scale.
pub fn fit_dimension(target: f64, min: usize, expected: impl Fn(usize) -> f64) -> usize {
    let mut d = min;
    while expected(d) < target {
        d += 1;
    }
    if d > min && (target / expected(d - 1)).ln() < (expected(d) / target).ln() {
        d - 1
    } else {
        d
    }
}
