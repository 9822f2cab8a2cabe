//! Truncated Taylor coefficient vectors.
//!
//! A [`CoeffVector`] holds `(α_0, …, α_{D-1})` for a polynomial
//! `f(z) = Σ α_n z^n` living in an ambient window of dimension `D`. All
//! operations refuse to silently drop mass off the top of the window.

use std::ops::Index;

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CoeffVector {
    coeffs: Vec<Complex64>,
}

impl CoeffVector {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Empty);
        }
        if let Some(index) = coeffs.iter().position(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Self::new(vec![Complex64::new(0.0, 0.0); dim])
    }

    /// `z^k` in a window of dimension `dim`.
    pub fn monomial(k: usize, dim: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::BudgetExceeded { requested: k + 1, available: dim });
        }
        let mut v = Self::zeros(dim)?;
        v.coeffs[k] = Complex64::new(1.0, 0.0);
        Ok(v)
    }

    pub(crate) fn from_vector(v: &DVector<Complex64>) -> Result<Self> {
        Self::new(v.iter().copied().collect())
    }

    /// Ambient dimension `D`.
    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_inner(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn to_vector(&self) -> DVector<Complex64> {
        DVector::from_column_slice(&self.coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == Complex64::new(0.0, 0.0))
    }

    /// Index of the highest nonzero coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| c.norm() > 0.0)
    }

    /// Index of the lowest nonzero coefficient (order of vanishing at 0).
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| c.norm() > 0.0)
    }

    /// Euclidean coefficient norm, i.e. the classical H² norm.
    pub fn h2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Multiplication by `z`. Fails if the top coefficient is nonzero.
    pub fn shift(&self) -> Result<Self> {
        self.shift_by(1)
    }

    /// Multiplication by `z^k` inside the same window.
    pub fn shift_by(&self, k: usize) -> Result<Self> {
        let d = self.dim();
        if k == 0 {
            return Ok(self.clone());
        }
        if let Some(deg) = self.degree() {
            if deg + k >= d {
                return Err(Error::BudgetExceeded { requested: deg + k + 1, available: d });
            }
        }
        let mut out = vec![Complex64::new(0.0, 0.0); d];
        out[k..].copy_from_slice(&self.coeffs[..d - k]);
        Ok(Self { coeffs: out })
    }

    /// Division by `z^k`, shrinking the window by `k`. The first `k`
    /// coefficients must already be zero.
    pub fn unshift_by(&self, k: usize) -> Result<Self> {
        if k >= self.dim() {
            return Err(Error::BudgetExceeded { requested: k + 1, available: self.dim() });
        }
        if let Some(index) = self.coeffs[..k].iter().position(|c| c.norm() > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "coefficient {index} is nonzero, cannot divide by z^{k}"
            )));
        }
        Self::new(self.coeffs[k..].to_vec())
    }

    /// Re-embed in a window of dimension `dim`, padding with zeros. Shrinking
    /// is only allowed when the dropped coefficients are zero.
    pub fn resized(&self, dim: usize) -> Result<Self> {
        if let Some(deg) = self.degree() {
            if deg >= dim {
                return Err(Error::BudgetExceeded { requested: deg + 1, available: dim });
            }
        }
        let mut out = vec![Complex64::new(0.0, 0.0); dim];
        let n = dim.min(self.dim());
        out[..n].copy_from_slice(&self.coeffs[..n]);
        Self::new(out)
    }

    /// Polynomial product, kept in `self`'s window. Fails if the product
    /// would not fit.
    pub fn product(&self, other: &Self) -> Result<Self> {
        let d = self.dim();
        let (Some(da), Some(db)) = (self.degree(), other.degree()) else {
            return Self::zeros(d);
        };
        if da + db >= d {
            return Err(Error::BudgetExceeded { requested: da + db + 1, available: d });
        }
        let mut out = vec![Complex64::new(0.0, 0.0); d];
        for (i, a) in self.coeffs[..=da].iter().enumerate() {
            for (j, b) in other.coeffs[..=db].iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c * factor).collect() }
    }

    /// Zero out entries below `rel_tol` times the largest modulus.
    pub fn chopped(&self, rel_tol: f64) -> Self {
        let max = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let cut = rel_tol * max;
        Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|&c| if c.norm() <= cut { Complex64::new(0.0, 0.0) } else { c })
                .collect(),
        }
    }

    /// Rotate so the lowest nonzero coefficient is real and positive.
    pub fn phase_normalized(&self) -> Self {
        match self.order() {
            Some(k) => {
                let c = self.coeffs[k];
                self.scaled(c.conj() / c.norm())
            }
            None => self.clone(),
        }
    }
}

impl Index<usize> for CoeffVector {
    type Output = Complex64;

    fn index(&self, index: usize) -> &Complex64 {
        &self.coeffs[index]
    }
}
