use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use subhardy::{CoeffVector, OperatorOnSpace};
use thiserror::Error;

use crate::dense::{self, Dense, Row};

/// Largest space dimension accepted by [`oracle_adjoint`] and [`oracle_cond_ii`].
pub const ADJOINT_DIM_CAP: usize = 12;
/// Largest space dimension accepted by [`oracle_quantifier`].
pub const QUANTIFIER_DIM_CAP: usize = 6;

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("space dimension {dim} exceeds the oracle cap {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("window of {available} coefficients cannot hold index {needed}")]
    Window { needed: usize, available: usize },
    #[error("function is not in the span of the basis")]
    NotInSpan,
    #[error("singular linear system")]
    Singular,
}

pub type Result<T> = std::result::Result<T, OracleError>;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

// The space as raw data: basis coefficient columns and Gram matrix.
struct Model {
    d: usize,
    basis: Vec<Row>,
    gram: Dense,
    normal: Dense,
}

impl Model {
    fn from_op(op: &OperatorOnSpace) -> Self {
        let space = op.space();
        let d = space.ambient_dim();
        let basis: Vec<Row> = space.basis().iter().map(|v| v.coeffs().to_vec()).collect();
        let m = basis.len();
        let g = space.gram();
        let gram = (0..m).map(|i| (0..m).map(|j| g[(i, j)]).collect()).collect();
        let normal = (0..m)
            .map(|i| (0..m).map(|j| (0..d).map(|k| basis[i][k].conj() * basis[j][k]).sum()).collect())
            .collect();
        Self { d, basis, gram, normal }
    }

    fn dim(&self) -> usize {
        self.basis.len()
    }

    fn function(&self, x: &[Complex64]) -> Row {
        let mut f = vec![dense::zero(); self.d];
        for (v, coef) in self.basis.iter().zip(x) {
            for (fk, vk) in f.iter_mut().zip(v) {
                *fk += coef * vk;
            }
        }
        f
    }

    // Least-squares coordinates through the normal equations.
    fn least_squares(&self, f: &[Complex64]) -> Result<Row> {
        let rhs: Row = self.basis.iter().map(|v| v.iter().zip(f).map(|(a, b)| a.conj() * b).sum()).collect();
        dense::solve(&self.normal, &rhs).ok_or(OracleError::Singular)
    }

    fn coords(&self, f: &[Complex64]) -> Result<Row> {
        let x = self.least_squares(f)?;
        let back = self.function(&x);
        let err: f64 = back.iter().zip(f).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
        let size: f64 = f.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if err > 1e-9 * size.max(1e-300) {
            return Err(OracleError::NotInSpan);
        }
        Ok(x)
    }

    fn inner(&self, x: &[Complex64], y: &[Complex64]) -> Complex64 {
        let gx = dense::mat_vec(&self.gram, x);
        y.iter().zip(&gx).map(|(a, b)| a.conj() * b).sum()
    }

    fn norm(&self, x: &[Complex64]) -> f64 {
        self.inner(x, x).re.max(0.0).sqrt()
    }

    // z·f in coordinates; f must have no mass in the top coefficient.
    fn shift(&self, x: &[Complex64]) -> Result<Row> {
        let f = self.function(x);
        let size: f64 = f.iter().map(|a| a.norm()).fold(0.0, f64::max);
        if f[self.d - 1].norm() > 1e-12 * size {
            return Err(OracleError::Window { needed: self.d, available: self.d });
        }
        let mut g = vec![dense::zero(); self.d];
        g[1..].copy_from_slice(&f[..self.d - 1]);
        self.coords(&g)
    }

    fn shift_matrix(&self) -> Result<Dense> {
        let m = self.dim();
        let mut a = dense::zeros(m, m);
        for (j, v) in self.basis.iter().enumerate() {
            let mut g = vec![dense::zero(); self.d];
            g[1..].copy_from_slice(&v[..self.d - 1]);
            let col = self.least_squares(&g)?;
            for i in 0..m {
                a[i][j] = col[i];
            }
        }
        Ok(a)
    }

    // Coordinates spanning the functions whose top n coefficients vanish.
    fn domain(&self, n: usize) -> Vec<Row> {
        let m = self.dim();
        let rows: Dense = (self.d - n.min(self.d)..self.d).map(|r| self.basis.iter().map(|v| v[r]).collect()).collect();
        if rows.is_empty() {
            return (0..m).map(|j| (0..m).map(|i| c(if i == j { 1.0 } else { 0.0 })).collect()).collect();
        }
        dense::null_space(&rows, m, 1e-12)
    }

    fn normalize(&self, x: &[Complex64]) -> Row {
        let n = self.norm(x);
        x.iter().map(|v| v / n).collect()
    }
}

fn check_cap(dim: usize, cap: usize) -> Result<()> {
    if dim > cap {
        Err(OracleError::DimensionCap { dim, cap })
    } else {
        Ok(())
    }
}

/// `T_z*` in the stored basis, from `⟨A e_i, e_j⟩_M = ⟨e_i, A* e_j⟩_M`
/// solved column by column. Row-major.
pub fn oracle_adjoint(op: &OperatorOnSpace) -> Result<Vec<Vec<Complex64>>> {
    let model = Model::from_op(op);
    let m = model.dim();
    check_cap(m, ADJOINT_DIM_CAP)?;
    let a = model.shift_matrix()?;
    let ga = dense::mat_mul(&model.gram, &a);
    let gt: Dense = (0..m).map(|i| (0..m).map(|k| model.gram[k][i]).collect()).collect();
    let mut out = dense::zeros(m, m);
    for j in 0..m {
        // Gᵀ conj(x) = (row j of G A)
        let rhs: Row = (0..m).map(|i| ga[j][i]).collect();
        let y = dense::solve(&gt, &rhs).ok_or(OracleError::Singular)?;
        for k in 0..m {
            out[k][j] = y[k].conj();
        }
    }
    Ok(out)
}

/// Relative distance of `T*ⁿ Tⁿ⁺¹ f` from `T(M)` over a basis of the
/// admissible `f`, for `n = 1..=n_max`.
pub fn oracle_cond_ii(op: &OperatorOnSpace, n_max: usize) -> Result<Vec<f64>> {
    let model = Model::from_op(op);
    let star = oracle_adjoint(op)?;

    // Gram-Schmidt on T(Dom_1) in the M inner product
    let mut onb: Vec<Row> = Vec::new();
    for q in model.domain(1) {
        let mut v = model.shift(&q)?;
        for e in &onb {
            let p = model.inner(&v, e);
            v.iter_mut().zip(e).for_each(|(a, b)| *a -= p * b);
        }
        let n = model.norm(&v);
        if n > 1e-10 {
            onb.push(v.iter().map(|a| a / n).collect());
        }
    }

    let mut out = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        if n + 1 >= model.d {
            return Err(OracleError::Window { needed: n + 1, available: model.d - 1 });
        }
        let mut worst: f64 = 0.0;
        for x in model.domain(n + 1) {
            let mut y = x;
            for _ in 0..=n {
                y = model.shift(&y)?;
            }
            for _ in 0..n {
                y = dense::mat_vec(&star, &y);
            }
            let size = model.norm(&y);
            if size == 0.0 {
                continue;
            }
            let mut r = y.clone();
            for e in &onb {
                let p = model.inner(&y, e);
                r.iter_mut().zip(e).for_each(|(a, b)| *a -= p * b);
            }
            worst = worst.max(model.norm(&r) / size);
        }
        out.push(worst);
    }
    Ok(out)
}

/// Inequalities that can be checked by sampling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Inequality {
    /// `δ‖f‖ ≤ ‖T f‖ ≤ ‖f‖` on `Dom_1`; without `δ` only a positive lower bound.
    ConditionI { delta: Option<f64> },
    /// `‖T²x‖² + ‖x‖² ≤ 2‖Tx‖²` on `Dom_2`.
    Shimorin1,
    /// `‖Tx + y‖² ≤ 2(‖x‖² + ‖Ty‖²)` on `Dom_1 × Dom_1`.
    Shimorin2,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplingPlan {
    /// Levels per coordinate of the real grid on `[-1, 1]`.
    pub grid_levels: usize,
    /// Upper bound on the number of grid points; levels shrink to fit.
    pub grid_cap: usize,
    pub random_samples: usize,
    pub seed: u64,
    /// Absolute slack for the normalized inequalities.
    pub tol: f64,
}

impl Default for SamplingPlan {
    fn default() -> Self {
        Self { grid_levels: 5, grid_cap: 60_000, random_samples: 10_000, seed: 0x0AC1E, tol: 1e-9 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantifierVerdict {
    pub holds: bool,
    pub samples: usize,
    /// Largest violation margin seen (negative when every sample satisfies the inequality).
    pub worst_margin: f64,
    /// Coefficients of the worst sample: `x`, or `x` and `y`.
    pub worst: Vec<Vec<Complex64>>,
}

// Margin of violation at the given coordinates; positive means violated.
fn margin(model: &Model, ineq: Inequality, parts: &[Row], tol: f64) -> Result<f64> {
    match ineq {
        Inequality::ConditionI { delta } => {
            let x = model.normalize(&parts[0]);
            let r = model.norm(&model.shift(&x)?);
            let lower = match delta {
                Some(d) => d - tol - r,
                None => tol - r,
            };
            Ok((r - 1.0 - tol).max(lower))
        }
        Inequality::Shimorin1 => {
            let x = model.normalize(&parts[0]);
            let tx = model.shift(&x)?;
            let t2x = model.shift(&tx)?;
            Ok(model.norm(&t2x).powi(2) + 1.0 - 2.0 * model.norm(&tx).powi(2) - tol)
        }
        Inequality::Shimorin2 => {
            let total = (model.norm(&parts[0]).powi(2) + model.norm(&parts[1]).powi(2)).sqrt();
            let x: Row = parts[0].iter().map(|v| v / total).collect();
            let y: Row = parts[1].iter().map(|v| v / total).collect();
            let tx = model.shift(&x)?;
            let ty = model.shift(&y)?;
            let sum: Row = tx.iter().zip(&y).map(|(a, b)| a + b).collect();
            Ok(model.norm(&sum).powi(2) - 2.0 * (model.norm(&x).powi(2) + model.norm(&ty).powi(2)) - tol)
        }
    }
}

fn domain_for(model: &Model, ineq: Inequality) -> (Vec<Row>, usize) {
    match ineq {
        Inequality::ConditionI { .. } => (model.domain(1), 1),
        Inequality::Shimorin1 => (model.domain(2), 1),
        Inequality::Shimorin2 => (model.domain(1), 2),
    }
}

/// Brute-force "for all" over a real coefficient grid on the domain basis
/// plus seeded random complex directions.
pub fn oracle_quantifier(ineq: Inequality, op: &OperatorOnSpace, plan: &SamplingPlan) -> Result<QuantifierVerdict> {
    let model = Model::from_op(op);
    let m = model.dim();
    check_cap(m, QUANTIFIER_DIM_CAP)?;
    let (dom, parts) = domain_for(&model, ineq);
    let k = dom.len();
    let vars = k * parts;
    if k == 0 {
        return Ok(QuantifierVerdict { holds: true, samples: 0, worst_margin: f64::NEG_INFINITY, worst: vec![] });
    }

    let assemble = |t: &[Complex64]| -> Vec<Row> {
        (0..parts)
            .map(|p| {
                let mut x = vec![dense::zero(); m];
                for (j, q) in dom.iter().enumerate() {
                    let coef = t[p * k + j];
                    x.iter_mut().zip(q).for_each(|(a, b)| *a += coef * b);
                }
                x
            })
            .collect()
    };

    let mut samples = 0;
    let mut worst_margin = f64::NEG_INFINITY;
    let mut worst = Vec::new();
    let mut consider = |t: &[Complex64]| -> Result<()> {
        let xs = assemble(t);
        if xs.iter().all(|x| model.norm(x) == 0.0) {
            return Ok(());
        }
        // a zero x or y is fine for the pair inequality, not for the others
        if parts == 1 && model.norm(&xs[0]) == 0.0 {
            return Ok(());
        }
        samples += 1;
        let g = margin(&model, ineq, &xs, plan.tol)?;
        if g > worst_margin {
            worst_margin = g;
            worst = xs.iter().map(|x| model.function(x)).collect();
        }
        Ok(())
    };

    let mut levels = plan.grid_levels.max(2);
    while levels > 2 && (levels as f64).powi(vars as i32) > plan.grid_cap as f64 {
        levels -= 1;
    }
    let grid: Vec<f64> = (0..levels).map(|i| -1.0 + 2.0 * i as f64 / (levels - 1) as f64).collect();
    let total = levels.checked_pow(vars as u32).unwrap_or(usize::MAX).min(plan.grid_cap);
    let mut t = vec![dense::zero(); vars];
    for index in 0..total {
        let mut rest = index;
        for slot in t.iter_mut() {
            *slot = c(grid[rest % levels]);
            rest /= levels;
        }
        consider(&t)?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    for _ in 0..plan.random_samples {
        for slot in t.iter_mut() {
            *slot = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        }
        consider(&t)?;
    }
    Ok(QuantifierVerdict { holds: worst_margin <= 0.0, samples, worst_margin, worst })
}

/// Violation margin of given functions under the oracle's own arithmetic;
/// used to confirm witnesses produced elsewhere.
pub fn oracle_margin(ineq: Inequality, op: &OperatorOnSpace, functions: &[CoeffVector], tol: f64) -> Result<f64> {
    let model = Model::from_op(op);
    let parts = functions.iter().map(|f| model.coords(f.coeffs())).collect::<Result<Vec<_>>>()?;
    margin(&model, ineq, &parts, tol)
}

/// Outcome of composing `T*ⁿ Tⁿ⁺¹` on `z^k` in `H²(β)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarIdentity {
    /// Coefficient found on `z^{k+1}`.
    pub coefficient: f64,
    /// `β_{n+k+1}² / β_{k+1}²`.
    pub expected: f64,
    /// Largest modulus on any other monomial.
    pub off_target: f64,
    /// The constant coefficient vanishes, so the result lies in `z·M`.
    pub in_shift_range: bool,
}

impl ScalarIdentity {
    pub fn agrees(&self, rel_tol: f64) -> bool {
        (self.coefficient - self.expected).abs() <= rel_tol * self.expected
            && self.off_target == 0.0
            && self.in_shift_range
    }
}

/// Apply the forward shift `n+1` times to `z^k` and the adjoint formula
/// `T* z^j = (β_j²/β_{j-1}²) z^{j-1}` `n` times.
pub fn oracle_cond_ii_scalar(beta: &[f64], n: usize, k: usize) -> Result<ScalarIdentity> {
    let d = beta.len();
    if n + k + 1 >= d {
        return Err(OracleError::Window { needed: n + k + 1, available: d });
    }
    let mut v = vec![0.0; d];
    v[k] = 1.0;
    for _ in 0..=n {
        let mut w = vec![0.0; d];
        w[1..].copy_from_slice(&v[..d - 1]);
        v = w;
    }
    for _ in 0..n {
        let mut w = vec![0.0; d];
        for j in 1..d {
            w[j - 1] = v[j] * beta[j] * beta[j] / (beta[j - 1] * beta[j - 1]);
        }
        v = w;
    }
    let off_target = v.iter().enumerate().filter(|(i, _)| *i != k + 1).map(|(_, x)| x.abs()).fold(0.0, f64::max);
    Ok(ScalarIdentity {
        coefficient: v[k + 1],
        expected: beta[n + k + 1].powi(2) / beta[k + 1].powi(2),
        off_target,
        in_shift_range: v[0] == 0.0,
    })
}
