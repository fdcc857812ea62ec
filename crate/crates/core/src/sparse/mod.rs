//! Sparse matrix storage and the data-parallel kernels built on it.
//!
//! CSR is the canonical in-memory format: every kernel the solver runs
//! (SpMV, row norms, diagonal scaling) operates on [`CsrMatrix`]. COO is the
//! ingestion and on-disk format, CSC exists for interchange and is read as
//! the CSR form of the transpose.
//!
//! All three formats use zero-based indices, keep entries sorted, and never
//! contain duplicate coordinates. Explicitly stored zeros are kept.

mod coo;
mod csc;
mod csr;

pub use coo::CooMatrix;
pub use csc::CscMatrix;
pub use csr::{segmented_reduce, CsrMatrix, RowIndexCache};

use crate::error::{Error, Result};

/// Validates a compressed pointer array of length `outer + 1` ending at `nnz`.
pub(crate) fn check_pointer(pointer: &[usize], outer: usize, nnz: usize, name: &str) -> Result<()> {
    if pointer.len() != outer + 1 {
        return Err(Error::Format(format!(
            "{name} has length {}, expected {}",
            pointer.len(),
            outer + 1
        )));
    }
    if pointer[0] != 0 {
        return Err(Error::Format(format!("{name}[0] = {}, expected 0", pointer[0])));
    }
    if pointer[outer] != nnz {
        return Err(Error::Format(format!(
            "{name}[{outer}] = {}, expected nnz = {nnz}",
            pointer[outer]
        )));
    }
    if let Some(k) = pointer.windows(2).position(|w| w[0] > w[1]) {
        return Err(Error::Format(format!("{name} decreases at position {k}")));
    }
    Ok(())
}

/// Validates that each compressed segment holds strictly increasing inner indices below `bound`.
pub(crate) fn check_segments(pointer: &[usize], inner: &[usize], bound: usize) -> Result<()> {
    for (seg, w) in pointer.windows(2).enumerate() {
        let idx = &inner[w[0]..w[1]];
        if let Some(&bad) = idx.iter().find(|&&i| i >= bound) {
            return Err(Error::Format(format!(
                "index {bad} in segment {seg} is out of bounds (limit {bound})"
            )));
        }
        if let Some(k) = idx.windows(2).position(|p| p[0] >= p[1]) {
            return Err(Error::Format(format!(
                "indices in segment {seg} are not strictly increasing at offset {k}"
            )));
        }
    }
    Ok(())
}
