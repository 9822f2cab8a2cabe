//! Verdicts for the hypotheses on `T_z`, each with a witness when it fails.
//!
//! * condition (i): `δ‖f‖ ≤ ‖T f‖ ≤ ‖f‖`;
//! * condition (ii): `T*ⁿ Tⁿ⁺¹ (M) ⊆ T(M)` for `1 ≤ n ≤ n_max`;
//! * power bounds: `δ‖f‖ ≤ ‖Tⁿ f‖ ≤ ‖f‖` for `1 ≤ n ≤ n_max`;
//! * the two Shimorin inequalities
//!   `‖T²x‖² + ‖x‖² ≤ 2‖Tx‖²` and `‖Tx + y‖² ≤ 2(‖x‖² + ‖Ty‖²)`.
//!
//! Verdicts come from exact (at truncation) spectral computations. Witnesses
//! are chosen for readability: the first stored basis vector (or pair of
//! basis vectors) violating the inequality, falling back to the extremal
//! eigenvector when the violation only shows up on a combination.

use num_complex::Complex64;

use crate::coeff::CoeffVector;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector};
use crate::options::{AnalysisOptions, Tolerances};
use crate::shift::{OperatorOnSpace, RANK_TOL};

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionI {
    pub holds: bool,
    /// Largest admissible `δ`, i.e. the minimal ratio `‖Tf‖/‖f‖`.
    pub delta_max: f64,
    /// Maximal ratio `‖Tf‖/‖f‖`.
    pub sup_ratio: f64,
    pub requested_delta: Option<f64>,
    pub witness: Option<CoeffVector>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionII {
    pub holds: bool,
    pub n_checked: usize,
    pub max_residual: f64,
    /// Residual for each `n = 1..=n_checked`.
    pub residuals: Vec<f64>,
    pub witness: Option<(usize, CoeffVector)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ine1 {
    pub holds: bool,
    pub delta_max: f64,
    pub sup_ratio: f64,
    pub n_checked: usize,
    /// Lower constant the verdict was measured against.
    pub threshold: f64,
    pub witness: Option<(usize, CoeffVector)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Shimorin1 {
    pub holds: bool,
    /// Minimal eigenvalue of `2T*T − T*²T² − I` on the domain.
    pub min_eigenvalue: f64,
    pub scale: f64,
    pub witness: Option<CoeffVector>,
    /// `‖T²x‖² + ‖x‖²` at the witness (or the minimizing direction).
    pub lhs: f64,
    /// `2‖Tx‖²` at the same vector.
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Shimorin2 {
    pub holds: bool,
    pub min_eigenvalue: f64,
    pub scale: f64,
    pub witness: Option<(CoeffVector, CoeffVector)>,
    /// `‖Tx + y‖²` at the witness (or the minimizing pair).
    pub lhs: f64,
    /// `2(‖x‖² + ‖Ty‖²)` at the same pair.
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisReport {
    pub cond_i: ConditionI,
    pub cond_ii: ConditionII,
    pub ine1: Ine1,
    pub shimorin_1: Shimorin1,
    pub shimorin_2: Shimorin2,
    pub n_max: usize,
    pub tolerances: Tolerances,
}

impl HypothesisReport {
    pub fn evaluate(op: &OperatorOnSpace, opts: &AnalysisOptions) -> Result<Self> {
        let cond_i = check_condition_i(op, opts.delta, &opts.tol)?;
        let cond_ii = check_condition_ii(op, opts.n_max, &opts.tol)?;
        let ine1 = check_ine1(op, opts.n_max, Some(opts.ine1_floor), &opts.tol)?;
        let (shimorin_1, shimorin_2) = check_shimorin(op, &opts.tol)?;
        Ok(Self { cond_i, cond_ii, ine1, shimorin_1, shimorin_2, n_max: opts.n_max, tolerances: opts.tol })
    }

    /// Both hypotheses of the structure theorem hold.
    pub fn theorem_hypotheses_hold(&self) -> bool {
        self.cond_i.holds && self.cond_ii.holds
    }
}

// Whitened unit vectors of the stored basis vectors lying in Dom_n.
fn probes(op: &OperatorOnSpace, n: usize) -> Vec<CVector> {
    let space = op.space();
    let d = space.ambient_dim();
    let lh = space.cholesky_factor().adjoint();
    space
        .basis()
        .iter()
        .enumerate()
        .filter(|(_, v)| {
            let top: f64 = v.coeffs()[d - n.min(d)..].iter().map(|c| c.norm_sqr()).sum();
            top.sqrt() <= RANK_TOL * v.h2_norm()
        })
        .map(|(j, _)| {
            let u = lh.column(j).into_owned();
            let norm = u.norm();
            u / Complex64::new(norm, 0.0)
        })
        .collect()
}

fn unit(u: CVector) -> CVector {
    let n = u.norm();
    if n == 0.0 {
        u
    } else {
        u / Complex64::new(n, 0.0)
    }
}

fn leading_phase(f: &CoeffVector) -> Complex64 {
    match f.order() {
        Some(k) => f[k].conj() / f[k].norm(),
        None => Complex64::new(1.0, 0.0),
    }
}

fn witness_function(op: &OperatorOnSpace, u: &CVector) -> Result<CoeffVector> {
    Ok(op.space().function(&op.unwhitened(u))?.phase_normalized())
}

fn witness_pair(op: &OperatorOnSpace, u: &CVector, v: &CVector) -> Result<(CoeffVector, CoeffVector)> {
    let x = op.space().function(&op.unwhitened(u))?;
    let y = op.space().function(&op.unwhitened(v))?;
    let phase = if x.is_zero() { leading_phase(&y) } else { leading_phase(&x) };
    Ok((x.scaled(phase), y.scaled(phase)))
}

/// Condition (i). With `delta = Some(δ)` the lower bound must reach `δ`;
/// otherwise any positive lower bound is accepted.
pub fn check_condition_i(op: &OperatorOnSpace, delta: Option<f64>, tol: &Tolerances) -> Result<ConditionI> {
    let range = op.metric_singular_values()?;
    let a = op.whitened();
    let ratio = |u: &CVector| (a * u).norm();
    let upper_ok = range.sigma_max <= 1.0 + tol.bound;
    let lower_violated = |r: f64| match delta {
        Some(d) => r < d - tol.bound,
        None => r <= tol.bound,
    };
    let lower_ok = !lower_violated(range.sigma_min);

    let witness = if !upper_ok {
        let u = probes(op, 1)
            .into_iter()
            .find(|u| ratio(u) > 1.0 + tol.bound)
            .unwrap_or_else(|| unit(op.to_whitened(&range.argmax)));
        Some(witness_function(op, &u)?)
    } else if !lower_ok {
        let u = probes(op, 1)
            .into_iter()
            .find(|u| lower_violated(ratio(u)))
            .unwrap_or_else(|| unit(op.to_whitened(&range.argmin)));
        Some(witness_function(op, &u)?)
    } else {
        None
    };

    Ok(ConditionI {
        holds: upper_ok && lower_ok,
        delta_max: range.sigma_min,
        sup_ratio: range.sigma_max,
        requested_delta: delta,
        witness,
    })
}

/// Condition (ii) for `1 ≤ n ≤ n_max`. The residual for each `n` is the sine
/// of the largest principal angle between the range of `T*ⁿTⁿ⁺¹` and `T(M)`.
pub fn check_condition_ii(op: &OperatorOnSpace, n_max: usize, tol: &Tolerances) -> Result<ConditionII> {
    if n_max == 0 {
        return Err(Error::InvalidParameter("n_max must be at least 1".into()));
    }
    op.check_budget(n_max + 1)?;
    let a = op.whitened();
    let adj = a.adjoint();
    let range_t = linalg::range_basis(&(a * op.domain_whitened(1)), RANK_TOL);
    let reject = |y: &CMatrix| y - &range_t * (range_t.adjoint() * y);

    let mut residuals = Vec::with_capacity(n_max);
    let mut witness = None;
    let mut chain = a.clone();
    for n in 1..=n_max {
        // chain = (T*)^n T^(n+1)
        chain = &adj * &chain * a;
        let q = op.domain_whitened(n + 1);
        let image = &chain * &q;
        let basis = linalg::range_basis(&image, RANK_TOL);
        let leftover = reject(&basis);
        let residual = linalg::spectral_norm(&leftover);
        residuals.push(residual);

        if residual >= tol.containment && witness.is_none() {
            let relative = |u: &CVector| {
                let y = &chain * u;
                let norm = y.norm();
                if norm == 0.0 {
                    0.0
                } else {
                    reject(&CMatrix::from_column_slice(y.len(), 1, y.as_slice())).norm() / norm
                }
            };
            let u = match probes(op, n + 1).into_iter().find(|u| relative(u) >= tol.containment) {
                Some(u) => u,
                None => {
                    let (_, _, _, s) = linalg::singular_extremes(&leftover);
                    let target = &basis * s;
                    let x = linalg::pseudo_inverse(&image, RANK_TOL) * target;
                    unit(&q * x)
                }
            };
            witness = Some((n, witness_function(op, &u)?));
        }
    }
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    Ok(ConditionII { holds: max_residual < tol.containment, n_checked: n_max, max_residual, residuals, witness })
}

/// Two-sided bounds for every power `Tⁿ`, `1 ≤ n ≤ n_max`, against the lower
/// constant `delta` (default [`crate::options::DEFAULT_INE1_FLOOR`]).
pub fn check_ine1(op: &OperatorOnSpace, n_max: usize, delta: Option<f64>, tol: &Tolerances) -> Result<Ine1> {
    if n_max == 0 {
        return Err(Error::InvalidParameter("n_max must be at least 1".into()));
    }
    op.check_budget(n_max)?;
    let threshold = delta.unwrap_or(crate::options::DEFAULT_INE1_FLOOR);
    let mut low = (f64::INFINITY, 0, CVector::zeros(0));
    let mut high = (0.0, 0, CVector::zeros(0));
    for n in 1..=n_max {
        let r = op.power_singular_values(n)?;
        if r.sigma_min < low.0 {
            low = (r.sigma_min, n, r.argmin);
        }
        if r.sigma_max > high.0 {
            high = (r.sigma_max, n, r.argmax);
        }
    }
    let upper_ok = high.0 <= 1.0 + tol.bound;
    let lower_ok = low.0 >= threshold - tol.bound;

    let pick = |n: usize, fallback: &CVector, bad: &dyn Fn(f64) -> bool| -> Result<(usize, CoeffVector)> {
        let an = op.whitened_power(n);
        let u = probes(op, n)
            .into_iter()
            .find(|u| bad((&an * u).norm()))
            .unwrap_or_else(|| unit(op.to_whitened(fallback)));
        Ok((n, witness_function(op, &u)?))
    };
    let witness = if !upper_ok {
        Some(pick(high.1, &high.2, &|r| r > 1.0 + tol.bound)?)
    } else if !lower_ok {
        Some(pick(low.1, &low.2, &|r| r < threshold - tol.bound)?)
    } else {
        None
    };
    Ok(Ine1 { holds: upper_ok && lower_ok, delta_max: low.0, sup_ratio: high.0, n_checked: n_max, threshold, witness })
}

/// Both Shimorin inequalities, each reduced to one Hermitian eigenproblem.
pub fn check_shimorin(op: &OperatorOnSpace, tol: &Tolerances) -> Result<(Shimorin1, Shimorin2)> {
    op.check_budget(2)?;
    Ok((shimorin_1(op, tol)?, shimorin_2(op, tol)?))
}

fn shimorin_1(op: &OperatorOnSpace, tol: &Tolerances) -> Result<Shimorin1> {
    let a = op.whitened();
    let a2 = a * a;
    let form = |u: &CVector| 2.0 * (a * u).norm_squared() - (&a2 * u).norm_squared() - u.norm_squared();

    let (min_eigenvalue, minimizer, scale) = match op.diagonal() {
        Some(diag) => {
            let w = diag.weights().shift_weights();
            let m = op.dim();
            let values: Vec<f64> =
                (0..m - 2).map(|k| 2.0 * w[k] * w[k] - w[k] * w[k] * w[k + 1] * w[k + 1] - 1.0).collect();
            let kmin = argmin(&values);
            let mut u = CVector::zeros(m);
            u[kmin] = Complex64::new(1.0, 0.0);
            let w1 = w[..m - 2].iter().copied().fold(0.0, f64::max);
            let w2 = (0..m - 2).map(|k| w[k] * w[k + 1]).fold(0.0, f64::max);
            (values[kmin], u, 1.0 + 2.0 * w1 * w1 + w2 * w2)
        }
        None => {
            let q = op.domain_whitened(2);
            let t1 = a * &q;
            let t2 = &a2 * &q;
            let r = q.ncols();
            let h = (t1.adjoint() * &t1) * Complex64::new(2.0, 0.0) - t2.adjoint() * &t2 - CMatrix::identity(r, r);
            let (lmin, v, _, _) = linalg::hermitian_extremes(&h);
            let n1 = linalg::spectral_norm(&t1);
            let n2 = linalg::spectral_norm(&t2);
            (lmin, unit(&q * v), 1.0 + 2.0 * n1 * n1 + n2 * n2)
        }
    };
    let holds = min_eigenvalue >= -tol.semidefinite * scale;
    let u = if holds {
        minimizer
    } else {
        probes(op, 2)
            .into_iter()
            .find(|u| form(u) < -tol.semidefinite * scale)
            .unwrap_or(minimizer)
    };
    let witness = if holds { None } else { Some(witness_function(op, &u)?) };
    Ok(Shimorin1 {
        holds,
        min_eigenvalue,
        scale,
        witness,
        lhs: (&a2 * &u).norm_squared() + u.norm_squared(),
        rhs: 2.0 * (a * &u).norm_squared(),
    })
}

fn shimorin_2(op: &OperatorOnSpace, tol: &Tolerances) -> Result<Shimorin2> {
    let a = op.whitened();
    let form = |u: &CVector, v: &CVector| {
        let tu = a * u;
        2.0 * u.norm_squared() - tu.norm_squared() + 2.0 * (a * v).norm_squared()
            - v.norm_squared()
            - 2.0 * v.dotc(&tu).re
    };

    let m = op.dim();
    let (min_eigenvalue, (mu, mv), scale) = match op.diagonal() {
        Some(diag) => {
            let w = diag.weights().shift_weights();
            // pairs (x = e_k, y = e_{k+1}) decouple; e_0 in y and e_{m-2} in x stand alone
            let mut best = (2.0 * w[0] * w[0] - 1.0, (None, Some((0, 1.0))));
            let lone_x = 2.0 - w[m - 2] * w[m - 2];
            if lone_x < best.0 {
                best = (lone_x, (Some((m - 2, 1.0)), None));
            }
            for k in 0..m.saturating_sub(2) {
                let (p, off, s) = (2.0 - w[k] * w[k], -w[k], 2.0 * w[k + 1] * w[k + 1] - 1.0);
                let (lam, (cx, cy)) = sym2_min(p, off, s);
                if lam < best.0 {
                    best = (lam, (Some((k, cx)), Some((k + 1, cy))));
                }
            }
            let mut u = CVector::zeros(m);
            let mut v = CVector::zeros(m);
            if let Some((k, c)) = best.1 .0 {
                u[k] = Complex64::new(c, 0.0);
            }
            if let Some((k, c)) = best.1 .1 {
                v[k] = Complex64::new(c, 0.0);
            }
            let wmax = w[..m - 1].iter().copied().fold(0.0, f64::max);
            (best.0, (u, v), 3.0 + 3.0 * wmax * wmax + 2.0 * wmax)
        }
        None => {
            let q = op.domain_whitened(1);
            let r = q.ncols();
            let t = a * &q;
            let tt = t.adjoint() * &t;
            let cross = q.adjoint() * &t;
            let eye = CMatrix::identity(r, r);
            let mut h = CMatrix::zeros(2 * r, 2 * r);
            h.view_mut((0, 0), (r, r)).copy_from(&(&eye * Complex64::new(2.0, 0.0) - &tt));
            h.view_mut((0, r), (r, r)).copy_from(&(-cross.adjoint()));
            h.view_mut((r, 0), (r, r)).copy_from(&(-&cross));
            h.view_mut((r, r), (r, r)).copy_from(&(&tt * Complex64::new(2.0, 0.0) - &eye));
            let (lmin, vec, _, _) = linalg::hermitian_extremes(&h);
            let u = &q * vec.rows(0, r);
            let v = &q * vec.rows(r, r);
            let tn = linalg::spectral_norm(&t);
            (lmin, (u, v), 3.0 + 3.0 * tn * tn + 2.0 * tn)
        }
    };
    let holds = min_eigenvalue >= -tol.semidefinite * scale;
    let (u, v) = if holds {
        (mu, mv)
    } else {
        let p = probes(op, 1);
        let mut found = None;
        'outer: for x in &p {
            for y in &p {
                if form(x, y) < -tol.semidefinite * scale {
                    found = Some((x.clone(), y.clone()));
                    break 'outer;
                }
            }
        }
        found.unwrap_or((mu, mv))
    };
    let witness = if holds { None } else { Some(witness_pair(op, &u, &v)?) };
    Ok(Shimorin2 {
        holds,
        min_eigenvalue,
        scale,
        witness,
        lhs: (a * &u + &v).norm_squared(),
        rhs: 2.0 * (u.norm_squared() + (a * &v).norm_squared()),
    })
}

fn argmin(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v < values[best] {
            best = i;
        }
    }
    best
}

// Smallest eigenpair of the real symmetric matrix [[p, b], [b, s]].
fn sym2_min(p: f64, b: f64, s: f64) -> (f64, (f64, f64)) {
    let mean = 0.5 * (p + s);
    let rad = (0.25 * (p - s) * (p - s) + b * b).sqrt();
    let lam = mean - rad;
    let c1 = (b, lam - p);
    let c2 = (lam - s, b);
    let n1 = c1.0.hypot(c1.1);
    let n2 = c2.0.hypot(c2.1);
    let v = if n1 == 0.0 && n2 == 0.0 {
        if p <= s {
            (1.0, 0.0)
        } else {
            (0.0, 1.0)
        }
    } else if n1 >= n2 {
        (c1.0 / n1, c1.1 / n1)
    } else {
        (c2.0 / n2, c2.1 / n2)
    };
    let sign = if v.0 < 0.0 || (v.0 == 0.0 && v.1 < 0.0) { -1.0 } else { 1.0 };
    (lam, (sign * v.0, sign * v.1))
}
