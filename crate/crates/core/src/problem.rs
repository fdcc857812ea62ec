use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sparse::CsrMatrix;

/// Convex QP data: minimize ½xᵀPx + qᵀx subject to l ≤ Ax ≤ u.
///
/// `P` is stored as its upper triangle and is assumed positive semidefinite
/// (not verified). Bounds may be infinite; `m = 0` is allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct QpProblem<T> {
    p_upper: CsrMatrix<T>,
    q: Vec<T>,
    a: CsrMatrix<T>,
    l: Vec<T>,
    u: Vec<T>,
}

impl<T: Scalar> QpProblem<T> {
    pub fn new(p_upper: CsrMatrix<T>, q: Vec<T>, a: CsrMatrix<T>, l: Vec<T>, u: Vec<T>) -> Result<Self> {
        let n = q.len();
        if p_upper.rows() != n || p_upper.cols() != n {
            return Err(Error::InvalidInput(format!(
                "P is {}x{} but q has length {n}",
                p_upper.rows(),
                p_upper.cols()
            )));
        }
        if a.cols() != n {
            return Err(Error::dims("columns of A", n, a.cols()));
        }
        let m = a.rows();
        if l.len() != m {
            return Err(Error::dims("lower bound", m, l.len()));
        }
        if u.len() != m {
            return Err(Error::dims("upper bound", m, u.len()));
        }
        for i in 0..p_upper.rows() {
            let (cols, _) = p_upper.row(i);
            if cols.first().is_some_and(|&j| j < i) {
                return Err(Error::InvalidInput(format!(
                    "P must be upper triangular; row {i} has an entry below the diagonal"
                )));
            }
        }
        if p_upper.has_non_finite() || a.has_non_finite() {
            return Err(Error::InvalidInput("matrix data must be finite".into()));
        }
        if q.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("q must be finite".into()));
        }
        for i in 0..m {
            let (lo, hi) = (l[i], u[i]);
            if lo.is_nan() || hi.is_nan() || lo == T::infinity() || hi == T::neg_infinity() {
                return Err(Error::InvalidInput(format!("invalid bounds [{lo}, {hi}] on row {i}")));
            }
            if lo > hi {
                return Err(Error::InvalidInput(format!("l > u on row {i}: {lo} > {hi}")));
            }
        }
        Ok(Self { p_upper, q, a, l, u })
    }

    pub fn n(&self) -> usize {
        self.q.len()
    }

    pub fn m(&self) -> usize {
        self.l.len()
    }

    pub fn p_upper(&self) -> &CsrMatrix<T> {
        &self.p_upper
    }

    pub fn q(&self) -> &[T] {
        &self.q
    }

    pub fn a(&self) -> &CsrMatrix<T> {
        &self.a
    }

    pub fn l(&self) -> &[T] {
        &self.l
    }

    pub fn u(&self) -> &[T] {
        &self.u
    }

    /// Problem size `N = nnz(P) + nnz(A)` with `P` counted as stored (upper triangle).
    pub fn size_n(&self) -> usize {
        self.p_upper.nnz() + self.a.nnz()
    }

    /// ½xᵀPx + qᵀx.
    pub fn objective(&self, x: &[T]) -> Result<T> {
        let px = self.p_upper.spmv_symmetric_upper(x)?;
        let half = T::lit(0.5);
        Ok(x.iter()
            .zip(&px)
            .zip(&self.q)
            .fold(T::zero(), |acc, ((&xi, &pxi), &qi)| acc + half * xi * pxi + qi * xi))
    }

    pub fn cast<U: Scalar>(&self) -> QpProblem<U> {
        let conv = |v: &[T]| v.iter().map(|x| U::lit(x.as_f64())).collect::<Vec<U>>();
        QpProblem {
            p_upper: self.p_upper.cast(),
            q: conv(&self.q),
            a: self.a.cast(),
            l: conv(&self.l),
            u: conv(&self.u),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_by_one(l: f64, u: f64) -> Result<QpProblem<f64>> {
        QpProblem::new(
            CsrMatrix::identity(1),
            vec![0.0],
            CsrMatrix::identity(1),
            vec![l],
            vec![u],
        )
    }

    #[test]
    fn validates_bounds() {
        assert!(one_by_one(0.0, 1.0).is_ok());
        assert!(one_by_one(f64::NEG_INFINITY, f64::INFINITY).is_ok());
        assert!(one_by_one(1.0, 0.0).is_err());
        assert!(one_by_one(f64::INFINITY, f64::INFINITY).is_err());
        assert!(one_by_one(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn rejects_lower_triangle_and_bad_dims() {
        let full = CsrMatrix::from_triplets(2, 2, vec![(0, 0, 1.0), (1, 0, 1.0), (1, 1, 1.0)]).unwrap();
        let a = CsrMatrix::zeros(0, 2);
        assert!(QpProblem::new(full, vec![0.0; 2], a.clone(), vec![], vec![]).is_err());
        assert!(QpProblem::new(CsrMatrix::identity(2), vec![0.0; 3], a, vec![], vec![]).is_err());
        let q_inf = QpProblem::new(
            CsrMatrix::identity(1),
            vec![f64::INFINITY],
            CsrMatrix::zeros(0, 1),
            vec![],
            vec![],
        );
        assert!(q_inf.is_err());
    }

    #[test]
    fn objective_uses_full_symmetric_p() {
        let p = CsrMatrix::from_triplets(2, 2, vec![(0, 0, 2.0), (0, 1, 1.0), (1, 1, 3.0)]).unwrap();
        let qp = QpProblem::new(p, vec![1.0, -1.0], CsrMatrix::zeros(0, 2), vec![], vec![]).unwrap();
        // ½ [1 1] [[2 1][1 3]] [1 1]ᵀ + 0 = ½·7
        assert_eq!(qp.objective(&[1.0, 1.0]).unwrap(), 3.5);
        assert_eq!(qp.size_n(), 3);
    }
}
