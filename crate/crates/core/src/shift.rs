//! The multiplication operator `T_z` on a truncated space.
//!
//! `M` lives in a window of `D` coefficients, so `z·f` only stays inside the
//! window when the top coefficient of `f` vanishes. The operator is stored
//! as the compressed shift `A` (the image of each basis vector with the
//! coefficient that leaves the window dropped) and every norm estimate is
//! taken on the domain
//!
//! ```text
//! Dom_n = { f ∈ M : the top n coefficients of f vanish },
//! ```
//!
//! where `T_z^n f = A^n f` holds exactly. Computations happen in whitened
//! coordinates `u = Lᴴ c` (`G = L Lᴴ`), where the `M` inner product is the
//! Euclidean one and the metric adjoint is the conjugate transpose.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::coeff::CoeffVector;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector};
use crate::space::{DiagonalSpace, GramSpace};

/// Default relative residual allowed when checking `z·M ⊆ M`.
pub const INVARIANCE_TOL: f64 = 1e-10;

/// Relative threshold for numerical rank decisions.
pub const RANK_TOL: f64 = 1e-10;

/// `T_z` on a [`GramSpace`], optionally remembering a diagonal origin so
/// that closed-form fast paths are available.
#[derive(Debug, Clone)]
pub struct OperatorOnSpace {
    space: GramSpace,
    diagonal: Option<DiagonalSpace>,
    matrix: CMatrix,
    whitened: CMatrix,
    // L^{-H}: whitened -> stored coordinates
    unwhiten: CMatrix,
    invariance_residual: f64,
    max_power: usize,
}

/// Extreme values of `‖T f‖_M / ‖f‖_M` over a domain, with maximizing and
/// minimizing coordinate vectors (unit `M`-norm).
#[derive(Debug, Clone)]
pub struct SingularRange {
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub argmin: DVector<Complex64>,
    pub argmax: DVector<Complex64>,
}

impl OperatorOnSpace {
    pub fn new(space: GramSpace) -> Result<Self> {
        Self::with_tolerance(space, INVARIANCE_TOL)
    }

    /// Build the operator, failing with [`Error::NotInvariant`] when `z·f`
    /// leaves the span for some `f ∈ Dom_1` by more than `tol` (relative to
    /// its coefficient norm). Columns of basis vectors outside `Dom_1` are
    /// least-squares fits; they never enter a domain computation.
    pub fn with_tolerance(space: GramSpace, tol: f64) -> Result<Self> {
        let m = space.dim();
        let d = space.ambient_dim();
        let mut matrix = DMatrix::zeros(m, m);
        for (j, v) in space.basis().iter().enumerate() {
            let image = CoeffVector::new(truncated_shift(v.coeffs()))?;
            let (coords, _) = space.coordinates_with_residual(&image)?;
            matrix.set_column(j, &coords);
        }

        let l = space.cholesky_factor();
        let unwhiten = l
            .ad_solve_lower_triangular(&DMatrix::identity(m, m))
            .ok_or(Error::Solver("singular Cholesky factor"))?;
        let whitened = l.adjoint() * &matrix * &unwhiten;
        let mut op = Self { space, diagonal: None, matrix, whitened, unwhiten, invariance_residual: 0.0, max_power: 0 };
        let mut worst: f64 = 0.0;
        let dom = op.unwhitened_matrix(&op.domain_whitened(1));
        for (index, c) in dom.column_iter().enumerate() {
            let f = op.space.function(&c.into_owned())?;
            let image = CoeffVector::new(truncated_shift(f.coeffs()))?;
            let (_, residual) = op.space.coordinates_with_residual(&image)?;
            if residual > tol {
                return Err(Error::NotInvariant { index, residual });
            }
            worst = worst.max(residual);
        }
        op.invariance_residual = worst;
        // dim Dom_n is non-increasing in n
        let (mut lo, mut hi) = (0, d);
        while lo < hi {
            let mid = (lo + hi).div_ceil(2);
            if op.domain_dim(mid) > 0 {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        op.max_power = lo;
        Ok(op)
    }

    /// `T_z` on `H²(β)`, keeping the closed-form fast paths.
    pub fn from_diagonal(space: &DiagonalSpace) -> Result<Self> {
        let mut op = Self::new(GramSpace::from_diagonal(space)?)?;
        op.diagonal = Some(space.clone());
        Ok(op)
    }

    pub fn space(&self) -> &GramSpace {
        &self.space
    }

    pub fn diagonal(&self) -> Option<&DiagonalSpace> {
        self.diagonal.as_ref()
    }

    /// Same operator without the diagonal fast paths.
    pub fn generic(&self) -> Self {
        Self { diagonal: None, ..self.clone() }
    }

    /// Matrix of the compressed shift in the stored basis.
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn invariance_residual(&self) -> f64 {
        self.invariance_residual
    }

    /// Dimension `m` of the space.
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Metric adjoint `G⁻¹ Aᴴ G`, so that `⟨A x, y⟩_M = ⟨x, A* y⟩_M`.
    pub fn adjoint(&self) -> DMatrix<Complex64> {
        let rhs = self.matrix.adjoint() * self.space.gram();
        self.space.cholesky().solve(&rhs)
    }

    pub(crate) fn whitened(&self) -> &CMatrix {
        &self.whitened
    }

    pub(crate) fn to_whitened(&self, coords: &CVector) -> CVector {
        self.space.cholesky_factor().adjoint() * coords
    }

    pub(crate) fn unwhitened(&self, u: &CVector) -> CVector {
        &self.unwhiten * u
    }

    pub(crate) fn unwhitened_matrix(&self, u: &CMatrix) -> CMatrix {
        &self.unwhiten * u
    }

    /// Whitened rows expressing "the top `n` coefficients vanish".
    pub(crate) fn top_rows_whitened(&self, n: usize) -> CMatrix {
        let d = self.space.ambient_dim();
        let n = n.min(d);
        let rows = self.space.basis_matrix().rows(d - n, n).into_owned();
        let mut out = rows * &self.unwhiten;
        // each row is one constraint; unit rows keep the null space well conditioned
        for mut row in out.row_iter_mut() {
            let norm = row.norm();
            if norm > 0.0 {
                row /= Complex64::new(norm, 0.0);
            }
        }
        out
    }

    /// Orthonormal (whitened) basis of `Dom_n`.
    pub(crate) fn domain_whitened(&self, n: usize) -> CMatrix {
        if n == 0 {
            let m = self.dim();
            return CMatrix::identity(m, m);
        }
        linalg::null_space(&self.top_rows_whitened(n), RANK_TOL)
    }

    /// Orthogonal projection of whitened vectors onto `Dom_n`.
    pub(crate) fn project_domain(&self, n: usize, u: &CMatrix) -> CMatrix {
        let q = self.domain_whitened(n);
        &q * (q.adjoint() * u)
    }

    /// `dim Dom_n`.
    pub fn domain_dim(&self, n: usize) -> usize {
        self.domain_whitened(n).ncols()
    }

    /// Largest `n` with `Dom_n ≠ {0}`: the shift budget of this window.
    pub fn max_power(&self) -> usize {
        self.max_power
    }

    pub(crate) fn check_budget(&self, n: usize) -> Result<()> {
        let available = self.max_power();
        if n > available {
            Err(Error::BudgetExceeded { requested: n, available })
        } else {
            Ok(())
        }
    }

    pub(crate) fn whitened_power(&self, n: usize) -> CMatrix {
        let m = self.dim();
        (0..n).fold(CMatrix::identity(m, m), |acc, _| &self.whitened * acc)
    }

    /// Stored-basis coordinates of `T_z f` for `f` given by coordinates.
    /// Fails if `f` has mass in the top coefficient.
    pub fn apply(&self, coords: &DVector<Complex64>) -> Result<DVector<Complex64>> {
        let f = self.space.function(coords)?;
        let top = f[f.dim() - 1].norm();
        if top > RANK_TOL * f.h2_norm() {
            return Err(Error::BudgetExceeded { requested: f.dim() + 1, available: f.dim() });
        }
        Ok(&self.matrix * coords)
    }

    /// Extreme values of `‖T_z f‖_M / ‖f‖_M` over `Dom_1`.
    pub fn metric_singular_values(&self) -> Result<SingularRange> {
        self.power_singular_values(1)
    }

    /// Extreme values of `‖T_z^n f‖_M / ‖f‖_M` over `Dom_n`. Uses the
    /// closed form `β_{n+k}/β_k` when the operator came from a diagonal space.
    pub fn power_singular_values(&self, n: usize) -> Result<SingularRange> {
        self.check_budget(n)?;
        match &self.diagonal {
            Some(diag) => Ok(diagonal_power_range(diag, n)),
            None => Ok(self.generic_power_range(n)),
        }
    }

    fn generic_power_range(&self, n: usize) -> SingularRange {
        let q = self.domain_whitened(n);
        let image = self.whitened_power(n) * &q;
        let (smin, vmin, smax, vmax) = linalg::singular_extremes(&image);
        SingularRange {
            sigma_min: smin,
            sigma_max: smax,
            argmin: self.unwhitened(&(&q * vmin)),
            argmax: self.unwhitened(&(&q * vmax)),
        }
    }

    /// Coordinate matrix whose columns span `T_z^n(M)` (the image of `Dom_n`).
    pub fn power_image(&self, n: usize) -> Result<DMatrix<Complex64>> {
        self.check_budget(n)?;
        let m = self.dim();
        if n == 0 {
            return Ok(DMatrix::identity(m, m));
        }
        let q = self.domain_whitened(n);
        let image = self.whitened_power(n) * q;
        Ok(self.unwhitened_matrix(&image))
    }
}

fn truncated_shift(c: &[Complex64]) -> Vec<Complex64> {
    let d = c.len();
    let mut out = vec![linalg::zero(); d];
    out[1..].copy_from_slice(&c[..d - 1]);
    out
}

fn diagonal_power_range(diag: &DiagonalSpace, n: usize) -> SingularRange {
    let beta = diag.beta();
    let d = beta.len();
    let (mut kmin, mut kmax) = (0, 0);
    let ratio = |k: usize| beta[k + n] / beta[k];
    for k in 0..d - n {
        if ratio(k) < ratio(kmin) {
            kmin = k;
        }
        if ratio(k) > ratio(kmax) {
            kmax = k;
        }
    }
    let unit = |k: usize| {
        let mut v = DVector::zeros(d);
        v[k] = Complex64::new(1.0 / beta[k], 0.0);
        v
    };
    SingularRange { sigma_min: ratio(kmin), sigma_max: ratio(kmax), argmin: unit(kmin), argmax: unit(kmax) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::GeneratorMetric;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn alternating(d: usize) -> DiagonalSpace {
        DiagonalSpace::from_beta((0..d).map(|n| 0.5f64.powi((n / 2) as i32)).collect()).unwrap()
    }

    #[test]
    fn model_space_gives_subdiagonal_matrix() {
        let one = CoeffVector::monomial(0, 1).unwrap();
        let s = GramSpace::from_generator(&one, 3, GeneratorMetric::Model).unwrap();
        let op = OperatorOnSpace::new(s).unwrap();
        let mut expected = DMatrix::zeros(3, 3);
        expected[(1, 0)] = c(1.0);
        expected[(2, 1)] = c(1.0);
        assert_eq!(op.matrix(), &expected);
    }

    #[test]
    fn non_invariant_span() {
        let basis = vec![CoeffVector::from_real(&[1.0, 1.0, 0.0, 0.0]).unwrap()];
        let s = GramSpace::new(4, basis, DMatrix::identity(1, 1)).unwrap();
        assert!(matches!(OperatorOnSpace::new(s), Err(Error::NotInvariant { index: 0, .. })));
    }

    #[test]
    fn diagonal_adjoint_formula() {
        let alt = alternating(6);
        let op = OperatorOnSpace::from_diagonal(&alt).unwrap();
        let adj = op.adjoint();
        let beta = alt.beta();
        for n in 0..6 {
            for r in 0..6 {
                let expected = if n >= 1 && r == n - 1 { beta[n] * beta[n] / (beta[n - 1] * beta[n - 1]) } else { 0.0 };
                assert!((adj[(r, n)] - c(expected)).norm() < 1e-14, "entry ({r},{n})");
            }
        }
        // T* z^2 = (1/4) z
        assert!((adj[(1, 2)] - c(0.25)).norm() < 1e-15);
    }

    #[test]
    fn unweighted_adjoint_is_backward_shift() {
        let h2 = DiagonalSpace::from_beta(vec![1.0; 5]).unwrap();
        let op = OperatorOnSpace::from_diagonal(&h2).unwrap();
        assert!((op.adjoint() - op.matrix().adjoint()).norm() < 1e-15);
    }

    #[test]
    fn singular_values_diagonal_and_generic_agree() {
        let alt = alternating(8);
        let op = OperatorOnSpace::from_diagonal(&alt).unwrap();
        let fast = op.metric_singular_values().unwrap();
        let slow = op.generic().metric_singular_values().unwrap();
        assert_eq!((fast.sigma_min, fast.sigma_max), (0.5, 1.0));
        assert!((slow.sigma_min - 0.5).abs() < 1e-12 && (slow.sigma_max - 1.0).abs() < 1e-12);
    }

    #[test]
    fn power_images() {
        let h2 = DiagonalSpace::from_beta(vec![1.0; 4]).unwrap();
        let op = OperatorOnSpace::from_diagonal(&h2).unwrap();
        assert_eq!(op.power_image(0).unwrap(), DMatrix::identity(4, 4));
        let img = op.power_image(1).unwrap();
        assert_eq!(img.ncols(), 3);
        // the image has no constant term
        assert!(img.row(0).norm() < 1e-15);
        assert!(matches!(op.power_image(4), Err(Error::BudgetExceeded { .. })));
        assert_eq!(op.max_power(), 3);
    }

    #[test]
    fn apply_refuses_top_coefficient() {
        let h2 = DiagonalSpace::from_beta(vec![1.0; 3]).unwrap();
        let op = OperatorOnSpace::from_diagonal(&h2).unwrap();
        let x = DVector::from_vec(vec![c(2.0), c(3.0), c(0.0)]);
        assert_eq!(op.apply(&x).unwrap(), DVector::from_vec(vec![c(0.0), c(2.0), c(3.0)]));
        let top = DVector::from_vec(vec![c(0.0), c(0.0), c(1.0)]);
        assert!(op.apply(&top).is_err());
    }
}
