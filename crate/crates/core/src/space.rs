//! The two models of a truncated sub-Hardy space `M`.
//!
//! * [`DiagonalSpace`]: the weighted Hardy space `H²(β)` with
//!   `⟨f, g⟩ = Σ α_n conj(γ_n) β_n²`, in which the monomials are orthogonal.
//! * [`GramSpace`]: an arbitrary subspace of coefficient space spanned by an
//!   explicit basis, with a Hermitian positive-definite Gram matrix
//!   `G[i][j] = ⟨basis_j, basis_i⟩_M`.
//!
//! Inner products are linear in the first argument. For coordinates `c_f`,
//! `c_g` in a Gram space, `⟨f, g⟩_M = c_gᴴ G c_f`.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use num_complex::Complex64;

use crate::coeff::CoeffVector;
use crate::error::{Error, Result};
use crate::linalg;
use crate::weights::WeightSequence;

/// Relative residual accepted when solving for coordinates in a basis.
pub const COORDINATE_TOL: f64 = 1e-10;

const HERMITIAN_TOL: f64 = 1e-12;
const RANK_TOL: f64 = 1e-10;

/// A space of truncated power series with an inner product.
pub trait InnerProductSpace {
    fn ambient_dim(&self) -> usize;

    fn inner(&self, f: &CoeffVector, g: &CoeffVector) -> Result<Complex64>;

    /// `‖f‖_M = sqrt(⟨f, f⟩_M)`.
    fn norm(&self, f: &CoeffVector) -> Result<f64> {
        Ok(self.inner(f, f)?.re.max(0.0).sqrt())
    }
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// `H²(β)` truncated to `D = β.len()` coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalSpace {
    weights: WeightSequence,
}

impl DiagonalSpace {
    pub fn new(weights: WeightSequence) -> Self {
        Self { weights }
    }

    pub fn from_beta(beta: Vec<f64>) -> Result<Self> {
        Ok(Self::new(WeightSequence::new(beta)?))
    }

    pub fn weights(&self) -> &WeightSequence {
        &self.weights
    }

    pub fn beta(&self) -> &[f64] {
        self.weights.beta()
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }
}

impl InnerProductSpace for DiagonalSpace {
    fn ambient_dim(&self) -> usize {
        self.dim()
    }

    fn inner(&self, f: &CoeffVector, g: &CoeffVector) -> Result<Complex64> {
        check_dim(self.dim(), f.dim())?;
        check_dim(self.dim(), g.dim())?;
        Ok(f.coeffs()
            .iter()
            .zip(g.coeffs())
            .zip(self.beta())
            .map(|((a, c), b)| a * c.conj() * (b * b))
            .sum())
    }
}

/// How to equip the span of `{b z^k}` with an inner product.
#[derive(Debug, Clone, Copy)]
pub enum GeneratorMetric<'a> {
    /// `G = I`, i.e. `‖b f‖_M = ‖f‖₂`.
    Model,
    /// Inner product inherited from `H²(β)` on the ambient window.
    Weighted(&'a WeightSequence),
}

/// A finite-dimensional subspace of coefficient space with its own metric.
#[derive(Debug, Clone)]
pub struct GramSpace {
    ambient_dim: usize,
    basis: Vec<CoeffVector>,
    basis_matrix: DMatrix<Complex64>,
    pseudo_inverse: DMatrix<Complex64>,
    gram: DMatrix<Complex64>,
    factor: Cholesky<Complex64, Dyn>,
}

impl GramSpace {
    pub fn new(ambient_dim: usize, basis: Vec<CoeffVector>, gram: DMatrix<Complex64>) -> Result<Self> {
        let m = basis.len();
        if m == 0 || ambient_dim == 0 {
            return Err(Error::Empty);
        }
        for v in &basis {
            check_dim(ambient_dim, v.dim())?;
        }
        check_dim(m, gram.nrows())?;
        check_dim(m, gram.ncols())?;
        if let Some(index) = gram.iter().position(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        let scale = gram.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let asymmetry = (&gram - gram.adjoint()).iter().map(|c| c.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            return Err(Error::NotPositiveDefinite);
        }
        if asymmetry > HERMITIAN_TOL * scale {
            return Err(Error::NotHermitian { asymmetry: asymmetry / scale });
        }
        let gram = (&gram + gram.adjoint()) * Complex64::new(0.5, 0.0);
        let factor = Cholesky::new(gram.clone()).ok_or(Error::NotPositiveDefinite)?;
        // complex Cholesky takes complex square roots instead of failing
        if factor.l_dirty().diagonal().iter().any(|d| !(d.re > 0.0 && d.im.abs() <= HERMITIAN_TOL * d.re)) {
            return Err(Error::NotPositiveDefinite);
        }

        let mut basis_matrix = DMatrix::zeros(ambient_dim, m);
        for (j, v) in basis.iter().enumerate() {
            basis_matrix.column_mut(j).copy_from_slice(v.coeffs());
        }
        let rank = linalg::rank(&basis_matrix, RANK_TOL);
        if rank < m {
            return Err(Error::RankDeficient { rank, count: m });
        }
        let pseudo_inverse = linalg::pseudo_inverse(&basis_matrix, RANK_TOL);
        Ok(Self { ambient_dim, basis, basis_matrix, pseudo_inverse, gram, factor })
    }

    /// Monomial basis with `G = diag(β²)`; the generic-pipeline view of a
    /// diagonal space.
    pub fn from_diagonal(space: &DiagonalSpace) -> Result<Self> {
        let d = space.dim();
        let basis = (0..d).map(|k| CoeffVector::monomial(k, d)).collect::<Result<Vec<_>>>()?;
        let gram = DMatrix::from_diagonal(&DVector::from_iterator(
            d,
            space.beta().iter().map(|b| Complex64::new(b * b, 0.0)),
        ));
        Self::new(d, basis, gram)
    }

    /// The span of `{b z^k : deg b + k < D}` in a window of dimension
    /// `ambient_dim`.
    pub fn from_generator(b: &CoeffVector, ambient_dim: usize, metric: GeneratorMetric<'_>) -> Result<Self> {
        let deg = b.degree().ok_or(Error::ZeroGenerator)?;
        let b = b.resized(ambient_dim)?;
        let count = ambient_dim - deg;
        let basis = (0..count).map(|k| b.shift_by(k)).collect::<Result<Vec<_>>>()?;
        let gram = match metric {
            GeneratorMetric::Model => DMatrix::identity(count, count),
            GeneratorMetric::Weighted(beta) => {
                let space = DiagonalSpace::new(beta.clone());
                check_dim(ambient_dim, space.dim())?;
                let mut g = DMatrix::zeros(count, count);
                for i in 0..count {
                    for j in 0..count {
                        g[(i, j)] = space.inner(&basis[j], &basis[i])?;
                    }
                }
                g
            }
        };
        Self::new(ambient_dim, basis, gram)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Number of basis vectors `m`.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[CoeffVector] {
        &self.basis
    }

    pub fn gram(&self) -> &DMatrix<Complex64> {
        &self.gram
    }

    /// `D × m` matrix whose columns are the basis coefficient vectors.
    pub fn basis_matrix(&self) -> &DMatrix<Complex64> {
        &self.basis_matrix
    }

    /// Lower Cholesky factor `L` with `G = L Lᴴ`.
    pub fn cholesky_factor(&self) -> DMatrix<Complex64> {
        self.factor.l()
    }

    pub(crate) fn cholesky(&self) -> &Cholesky<Complex64, Dyn> {
        &self.factor
    }

    /// Coordinates of `f` in the basis together with the relative residual
    /// of the least-squares fit.
    pub fn coordinates_with_residual(&self, f: &CoeffVector) -> Result<(DVector<Complex64>, f64)> {
        check_dim(self.ambient_dim, f.dim())?;
        let fv = f.to_vector();
        let c = &self.pseudo_inverse * &fv;
        let fnorm = fv.norm();
        let residual = if fnorm == 0.0 { 0.0 } else { (&self.basis_matrix * &c - &fv).norm() / fnorm };
        Ok((c, residual))
    }

    /// Coordinates of `f`; fails if `f` is not in the span.
    pub fn coordinates(&self, f: &CoeffVector) -> Result<DVector<Complex64>> {
        let (c, residual) = self.coordinates_with_residual(f)?;
        if residual > COORDINATE_TOL {
            return Err(Error::NotInSpace { residual });
        }
        Ok(c)
    }

    /// The function with the given coordinates.
    pub fn function(&self, coords: &DVector<Complex64>) -> Result<CoeffVector> {
        check_dim(self.dim(), coords.len())?;
        CoeffVector::from_vector(&(&self.basis_matrix * coords))
    }

    /// `⟨x, y⟩_M` for coordinate vectors.
    pub fn inner_coords(&self, x: &DVector<Complex64>, y: &DVector<Complex64>) -> Complex64 {
        (y.adjoint() * &self.gram * x)[(0, 0)]
    }

    pub fn norm_coords(&self, x: &DVector<Complex64>) -> f64 {
        self.inner_coords(x, x).re.max(0.0).sqrt()
    }
}

impl InnerProductSpace for GramSpace {
    fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    fn inner(&self, f: &CoeffVector, g: &CoeffVector) -> Result<Complex64> {
        let cf = self.coordinates(f)?;
        let cg = self.coordinates(g)?;
        Ok(self.inner_coords(&cf, &cg))
    }
}
