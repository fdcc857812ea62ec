use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sparse::CsrMatrix;

/// Matrix-free `K = P̄ + σI + ρ̄ĀᵀĀ`.
///
/// Borrows the scaled problem matrices and caches `diag(P̄)` and `diag(ĀᵀĀ)`
/// so that a change of `ρ̄` only touches O(n) data.
#[derive(Debug, Clone)]
pub struct ReducedKktOperator<'a, T> {
    p: &'a CsrMatrix<T>,
    a: &'a CsrMatrix<T>,
    a_t: &'a CsrMatrix<T>,
    sigma: T,
    rho_bar: T,
    diag_p: Vec<T>,
    diag_ata: Vec<T>,
    scratch: Vec<T>,
}

/// Diagonal preconditioner `diag(M) = diag(P̄) + σ1 + ρ̄ diag(ĀᵀĀ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiPreconditioner<T> {
    diag: Vec<T>,
    inv_diag: Vec<T>,
}

fn check_positive<T: Scalar>(name: &str, v: T) -> Result<()> {
    if v > T::zero() && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidSettings(format!(
            "{name} must be positive and finite, got {v}"
        )))
    }
}

impl<'a, T: Scalar> ReducedKktOperator<'a, T> {
    /// `p` is the full symmetric `P̄`; `a_t` must be exactly the transpose of `a`.
    pub fn new(p: &'a CsrMatrix<T>, a: &'a CsrMatrix<T>, a_t: &'a CsrMatrix<T>, sigma: T, rho_bar: T) -> Result<Self> {
        let n = p.rows();
        if !p.is_square() {
            return Err(Error::NotSquare {
                rows: p.rows(),
                cols: p.cols(),
            });
        }
        if a.cols() != n {
            return Err(Error::dims("columns of A", n, a.cols()));
        }
        if a_t.rows() != n || a_t.cols() != a.rows() || *a_t != a.transpose() {
            return Err(Error::InvalidInput("stored Aᵀ is not the transpose of A".into()));
        }
        check_positive("sigma", sigma)?;
        check_positive("rho_bar", rho_bar)?;
        Ok(Self {
            p,
            a,
            a_t,
            sigma,
            rho_bar,
            diag_p: p.extract_diagonal()?,
            diag_ata: a.diag_ata(),
            scratch: vec![T::zero(); a.rows()],
        })
    }

    pub fn n(&self) -> usize {
        self.p.rows()
    }

    pub fn sigma(&self) -> T {
        self.sigma
    }

    pub fn rho_bar(&self) -> T {
        self.rho_bar
    }

    pub fn diag_p(&self) -> &[T] {
        &self.diag_p
    }

    pub fn diag_ata(&self) -> &[T] {
        &self.diag_ata
    }

    /// `out = K x`, evaluated as `w = ρ̄Āx`, then `out = P̄x + σx + Āᵀw`.
    ///
    /// # Panics
    /// If `x` or `out` do not have length `n`.
    pub fn apply_into(&mut self, x: &[T], out: &mut [T]) {
        self.a.spmv_into(x, &mut self.scratch);
        for w in &mut self.scratch {
            *w = *w * self.rho_bar;
        }
        self.p.spmv_into(x, out);
        for (o, &xi) in out.iter_mut().zip(x) {
            *o = *o + self.sigma * xi;
        }
        self.a_t.spmv_add_into(&self.scratch, out);
    }

    pub fn apply(&mut self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.n() {
            return Err(Error::dims("operator input", self.n(), x.len()));
        }
        let mut out = vec![T::zero(); self.n()];
        self.apply_into(x, &mut out);
        Ok(out)
    }

    pub fn build_preconditioner(&self) -> JacobiPreconditioner<T> {
        let diag: Vec<T> = self
            .diag_p
            .iter()
            .zip(&self.diag_ata)
            .map(|(&dp, &da)| dp + self.sigma + self.rho_bar * da)
            .collect();
        let inv_diag = diag.iter().map(|&d| d.recip()).collect();
        JacobiPreconditioner { diag, inv_diag }
    }

    /// Changes `ρ̄` and rebuilds `precond` from the cached diagonals.
    pub fn update_rho(&mut self, precond: &mut JacobiPreconditioner<T>, new_rho: T) -> Result<()> {
        check_positive("rho_bar", new_rho)?;
        if new_rho != self.rho_bar {
            self.rho_bar = new_rho;
            *precond = self.build_preconditioner();
        }
        Ok(())
    }
}

impl<T: Scalar> JacobiPreconditioner<T> {
    /// Preconditioner from an explicit diagonal; entries must be positive.
    pub fn from_diagonal(diag: Vec<T>) -> Result<Self> {
        if let Some(d) = diag.iter().find(|d| !(**d > T::zero())) {
            return Err(Error::InvalidInput(format!("preconditioner entry {d} is not positive")));
        }
        let inv_diag = diag.iter().map(|&d| d.recip()).collect();
        Ok(Self { diag, inv_diag })
    }

    /// `M = I`, which turns PCG into plain CG.
    pub fn identity(n: usize) -> Self {
        Self {
            diag: vec![T::one(); n],
            inv_diag: vec![T::one(); n],
        }
    }

    pub fn diag(&self) -> &[T] {
        &self.diag
    }

    pub fn inv_diag(&self) -> &[T] {
        &self.inv_diag
    }

    /// `y = M⁻¹ r`.
    pub fn apply_into(&self, r: &[T], y: &mut [T]) {
        for ((yi, &ri), &m) in y.iter_mut().zip(r).zip(&self.inv_diag) {
            *yi = ri * m;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn identity_constraints_double_the_input() {
        let p = CsrMatrix::zeros(3, 3);
        let a = CsrMatrix::identity(3);
        let at = a.transpose();
        let mut op = ReducedKktOperator::new(&p, &a, &at, 1.0, 1.0).unwrap();
        assert_eq!(op.apply(&[1.0, -2.0, 3.0]).unwrap(), vec![2.0, -4.0, 6.0]);
    }

    #[test]
    fn small_dense_example() {
        let p = CsrMatrix::from_diagonal(&[1.0, 2.0]);
        let a = CsrMatrix::from_dense(1, 2, &[1.0, 1.0]);
        let at = a.transpose();
        let mut op = ReducedKktOperator::new(&p, &a, &at, 0.001, 0.5).unwrap();
        let y = op.apply(&[1.0, 0.0]).unwrap();
        assert_relative_eq!(y[0], 1.501, max_relative = 1e-15);
        assert_relative_eq!(y[1], 0.5, max_relative = 1e-15);
    }

    #[test]
    fn jacobi_diagonal() {
        let p = CsrMatrix::from_diagonal(&[1.0, 2.0]);
        let a = CsrMatrix::from_dense(1, 2, &[1.0, 1.0]);
        let at = a.transpose();
        let mut op = ReducedKktOperator::new(&p, &a, &at, 1e-6, 0.1).unwrap();
        let mut m = op.build_preconditioner();
        assert_relative_eq!(m.diag()[0], 1.100001, max_relative = 1e-14);
        assert_relative_eq!(m.diag()[1], 2.100001, max_relative = 1e-14);

        let before = m.clone();
        op.update_rho(&mut m, 0.1).unwrap();
        assert_eq!(m, before);
        op.update_rho(&mut m, 1.0).unwrap();
        for i in 0..2 {
            // diag(ĀᵀĀ) = (1, 1)
            assert_relative_eq!(m.diag()[i] - before.diag()[i], 0.9, max_relative = 1e-12);
        }
        assert!(op.update_rho(&mut m, 0.0).is_err());
        assert!(op.update_rho(&mut m, -1.0).is_err());
    }

    #[test]
    fn degenerate_preconditioner_is_sigma() {
        let p = CsrMatrix::zeros(2, 2);
        let a = CsrMatrix::zeros(0, 2);
        let at = a.transpose();
        let op = ReducedKktOperator::new(&p, &a, &at, 0.25, 1.0).unwrap();
        assert_eq!(op.build_preconditioner().diag(), &[0.25, 0.25]);
    }

    #[test]
    fn rejects_inconsistent_transpose() {
        let p = CsrMatrix::zeros(2, 2);
        let a = CsrMatrix::from_dense(1, 2, &[1.0, 2.0]);
        let wrong = CsrMatrix::from_dense(2, 1, &[2.0, 1.0]);
        assert!(ReducedKktOperator::new(&p, &a, &wrong, 1.0, 1.0).is_err());
        let at = a.transpose();
        assert!(ReducedKktOperator::new(&p, &a, &at, 0.0, 1.0).is_err());
    }
}
