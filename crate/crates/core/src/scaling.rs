//! Modified Ruiz equilibration.
//!
//! Finds a cost scaling `c > 0` and positive diagonal matrices `D`, `E` such
//! that the problem with data
//!
//! ```text
//! P̄ = cDPD,  q̄ = cDq,  Ā = EAD,  l̄ = El,  ū = Eu
//! ```
//!
//! has a stacked matrix `M = [[P̄, Āᵀ], [Ā, 0]]` whose columns all have unit
//! ∞-norm. Iterates map as `x̄ = D⁻¹x`, `z̄ = Ez`, `ȳ = cE⁻¹y`.

use crate::error::{Error, Result};
use crate::problem::QpProblem;
use crate::scalar::{norm_inf, Scalar};
use crate::sparse::CsrMatrix;

pub const DEFAULT_EPS_EQUIL: f64 = 1e-3;
pub const DEFAULT_MAX_PASSES: usize = 10;

/// Diagonal scalings `D`, `E` and cost scaling `c`, with reciprocals.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingData<T> {
    pub d: Vec<T>,
    pub e: Vec<T>,
    pub c: T,
    pub d_inv: Vec<T>,
    pub e_inv: Vec<T>,
    pub c_inv: T,
}

/// How the equilibration loop ended.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibrationInfo {
    /// Scaling passes applied.
    pub passes: usize,
    /// ‖1 − δ‖∞ of the column scalings the final data would receive.
    pub final_deviation: f64,
    pub converged: bool,
}

/// Equilibrated problem data in the form the solver iterates on.
///
/// `P̄` is stored in full (both triangles) and `Ā` together with its transpose.
#[derive(Debug, Clone)]
pub struct ScaledProblem<T> {
    pub p: CsrMatrix<T>,
    pub q: Vec<T>,
    pub a: CsrMatrix<T>,
    pub a_t: CsrMatrix<T>,
    pub l: Vec<T>,
    pub u: Vec<T>,
    pub scaling: ScalingData<T>,
    pub info: EquilibrationInfo,
}

impl<T: Scalar> ScalingData<T> {
    pub fn identity(n: usize, m: usize) -> Self {
        Self {
            d: vec![T::one(); n],
            e: vec![T::one(); m],
            c: T::one(),
            d_inv: vec![T::one(); n],
            e_inv: vec![T::one(); m],
            c_inv: T::one(),
        }
    }

    pub fn n(&self) -> usize {
        self.d.len()
    }

    pub fn m(&self) -> usize {
        self.e.len()
    }

    fn refresh_inverses(&mut self) {
        self.d_inv = self.d.iter().map(|&v| v.recip()).collect();
        self.e_inv = self.e.iter().map(|&v| v.recip()).collect();
        self.c_inv = self.c.recip();
    }

    fn check_dims(&self, nx: usize, nz: usize, ny: usize) -> Result<()> {
        if nx != self.n() {
            return Err(Error::dims("x", self.n(), nx));
        }
        if nz != self.m() {
            return Err(Error::dims("z", self.m(), nz));
        }
        if ny != self.m() {
            return Err(Error::dims("y", self.m(), ny));
        }
        Ok(())
    }

    /// Maps scaled iterates back: `x = Dx̄`, `z = E⁻¹z̄`, `y = c⁻¹Eȳ`.
    pub fn unscale_solution(&self, x: &[T], z: &[T], y: &[T]) -> Result<(Vec<T>, Vec<T>, Vec<T>)> {
        self.check_dims(x.len(), z.len(), y.len())?;
        Ok((
            mul(&self.d, x),
            mul(&self.e_inv, z),
            y.iter().zip(&self.e).map(|(&v, &e)| e * v * self.c_inv).collect(),
        ))
    }

    /// Maps original iterates into scaled space: `x̄ = D⁻¹x`, `z̄ = Ez`, `ȳ = cE⁻¹y`.
    pub fn scale_solution(&self, x: &[T], z: &[T], y: &[T]) -> Result<(Vec<T>, Vec<T>, Vec<T>)> {
        self.check_dims(x.len(), z.len(), y.len())?;
        Ok((
            mul(&self.d_inv, x),
            mul(&self.e, z),
            y.iter().zip(&self.e_inv).map(|(&v, &ei)| ei * v * self.c).collect(),
        ))
    }

    /// Scaled residuals `r̄_prim = E r_prim`, `r̄_dual = cD r_dual` mapped back to
    /// the original problem: `r_prim = E⁻¹r̄_prim`, `r_dual = c⁻¹D⁻¹r̄_dual`.
    pub fn unscale_residuals(&self, r_prim: &[T], r_dual: &[T]) -> Result<(Vec<T>, Vec<T>)> {
        if r_prim.len() != self.m() {
            return Err(Error::dims("primal residual", self.m(), r_prim.len()));
        }
        if r_dual.len() != self.n() {
            return Err(Error::dims("dual residual", self.n(), r_dual.len()));
        }
        Ok((
            mul(&self.e_inv, r_prim),
            r_dual
                .iter()
                .zip(&self.d_inv)
                .map(|(&r, &di)| di * r * self.c_inv)
                .collect(),
        ))
    }
}

fn mul<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(&x, &y)| x * y).collect()
}

/// `1/√norm`, or 1 for an empty (zero-norm) column.
fn inv_sqrt_or_one<T: Scalar>(norm: T) -> T {
    if norm > T::zero() {
        norm.sqrt().recip()
    } else {
        T::one()
    }
}

impl<T: Scalar> ScaledProblem<T> {
    /// Unequilibrated copy of the problem (`D = I`, `E = I`, `c = 1`).
    pub fn identity(problem: &QpProblem<T>) -> Result<Self> {
        let p = problem.p_upper().symmetrize_upper()?;
        let a = problem.a().clone();
        let a_t = a.transpose();
        Ok(Self {
            p,
            q: problem.q().to_vec(),
            a,
            a_t,
            l: problem.l().to_vec(),
            u: problem.u().to_vec(),
            scaling: ScalingData::identity(problem.n(), problem.m()),
            info: EquilibrationInfo {
                passes: 0,
                final_deviation: 0.0,
                converged: true,
            },
        })
    }

    pub fn n(&self) -> usize {
        self.q.len()
    }

    pub fn m(&self) -> usize {
        self.l.len()
    }

    /// ∞-norms of the `n + m` columns of `M = [[P̄, Āᵀ], [Ā, 0]]`.
    ///
    /// `P̄` is symmetric, so its column norms are its row norms; the column
    /// norms of `Ā` are the row norms of the stored transpose.
    pub fn stacked_column_norms(&self) -> Vec<T> {
        let p_norms = self.p.row_inf_norms();
        let at_norms = self.a_t.row_inf_norms();
        let mut out: Vec<T> = p_norms.iter().zip(&at_norms).map(|(&a, &b)| a.max(b)).collect();
        out.extend(self.a.row_inf_norms());
        out
    }
}

/// Runs modified Ruiz equilibration on `problem`.
///
/// Each pass computes `δᵢ = 1/√‖Mᵢ‖∞` over the columns of the current stacked
/// matrix, folds `δ` into `D`/`E`, rescales `P̄`, `q̄`, `Ā` in place, then
/// applies the cost scaling `γ = 1/max(mean‖P̄ᵢ‖∞, ‖q̄‖∞)`. The first pass
/// always runs. Afterwards the loop stops as soon as the column scalings of
/// the current data satisfy `‖1 − δ‖∞ ≤ eps_equil`, or after `max_passes`.
pub fn ruiz_equilibrate<T: Scalar>(
    problem: &QpProblem<T>,
    eps_equil: f64,
    max_passes: usize,
) -> Result<ScaledProblem<T>> {
    if !(eps_equil > 0.0) {
        return Err(Error::InvalidSettings(format!(
            "eps_equil must be positive, got {eps_equil}"
        )));
    }
    if max_passes == 0 {
        return Err(Error::InvalidSettings("equilibration needs at least one pass".into()));
    }
    let mut sp = ScaledProblem::identity(problem)?;
    let (n, m) = (sp.n(), sp.m());
    let eps = T::lit(eps_equil);

    let p_cache = sp.p.row_index_cache();
    let a_cache = sp.a.row_index_cache();
    let at_cache = sp.a_t.row_index_cache();
    let mut passes = 0;
    let mut converged = false;
    let deviation = loop {
        let norms = sp.stacked_column_norms();
        let delta: Vec<T> = norms.into_iter().map(inv_sqrt_or_one).collect();
        let deviation = delta.iter().fold(T::zero(), |acc, &d| acc.max((T::one() - d).abs()));
        if passes > 0 && deviation <= eps {
            converged = true;
            break deviation;
        }
        if passes == max_passes {
            break deviation;
        }
        let (dd, de) = delta.split_at(n);
        sp.p.scale_two_sided_inplace(&p_cache, dd, dd)?;
        sp.a.scale_two_sided_inplace(&a_cache, de, dd)?;
        sp.a_t.scale_two_sided_inplace(&at_cache, dd, de)?;
        for (q, &d) in sp.q.iter_mut().zip(dd) {
            *q = *q * d;
        }
        for (s, &d) in sp.scaling.d.iter_mut().zip(dd) {
            *s = *s * d;
        }
        for (s, &d) in sp.scaling.e.iter_mut().zip(de) {
            *s = *s * d;
        }

        let p_norms = sp.p.row_inf_norms();
        let mean = if n > 0 {
            p_norms.iter().copied().sum::<T>() / T::lit(n as f64)
        } else {
            T::zero()
        };
        let denom = mean.max(norm_inf(&sp.q));
        let gamma = if denom > T::zero() { denom.recip() } else { T::one() };
        sp.p.scale_inplace(gamma);
        for q in &mut sp.q {
            *q = *q * gamma;
        }
        sp.scaling.c = sp.scaling.c * gamma;
        passes += 1;
    };

    for i in 0..m {
        sp.l[i] = sp.scaling.e[i] * sp.l[i];
        sp.u[i] = sp.scaling.e[i] * sp.u[i];
    }
    sp.scaling.refresh_inverses();
    sp.info = EquilibrationInfo {
        passes,
        final_deviation: deviation.as_f64(),
        converged,
    };
    Ok(sp)
}
