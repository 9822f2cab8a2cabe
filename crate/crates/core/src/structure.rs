//! Wandering subspace, generator extraction and the checks that the space
//! is `b·H²` with `‖b g‖_M ≤ ‖g‖₂`.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coeff::CoeffVector;
use crate::error::{Error, Result};
use crate::hypothesis::{check_ine1, HypothesisReport};
use crate::linalg::{self, CMatrix, CVector};
use crate::options::{AnalysisOptions, Tolerances};
use crate::shift::{OperatorOnSpace, RANK_TOL};
use crate::space::GramSpace;

/// Coefficients below this fraction of the largest one are dropped from `b`.
pub const GENERATOR_CHOP: f64 = 1e-13;

/// `N = M ⊖ T_z M`, as an orthonormal basis.
#[derive(Debug, Clone)]
pub struct WanderingSubspace {
    whitened: CMatrix,
    /// Stored-basis coordinates of an `M`-orthonormal basis of `N`.
    pub coords: CMatrix,
}

impl WanderingSubspace {
    pub fn dim(&self) -> usize {
        self.coords.ncols()
    }
}

pub fn wandering_subspace(op: &OperatorOnSpace) -> Result<WanderingSubspace> {
    op.check_budget(1)?;
    let image = op.whitened() * op.domain_whitened(1);
    let range = linalg::range_basis(&image, RANK_TOL);
    let whitened = linalg::complement(&range);
    let coords = op.unwhitened_matrix(&whitened);
    Ok(WanderingSubspace { whitened, coords })
}

/// Largest `k` such that every function in the space is divisible by `z^k`.
pub fn detect_vanishing_order(space: &GramSpace) -> usize {
    space
        .basis()
        .iter()
        .map(|v| {
            let cut = RANK_TOL * v.h2_norm();
            v.coeffs().iter().position(|c| c.norm() > cut).unwrap_or(v.dim())
        })
        .min()
        .unwrap_or(0)
}

/// `z^{-order} M` in a window shorter by `order`, with the same Gram matrix.
pub fn deflate(space: &GramSpace, order: usize) -> Result<GramSpace> {
    if order == 0 {
        return Err(Error::NothingToDeflate);
    }
    let d = space.ambient_dim();
    if order >= d {
        return Err(Error::BudgetExceeded { requested: order, available: d - 1 });
    }
    let basis = space
        .basis()
        .iter()
        .map(|v| CoeffVector::new(v.coeffs()[order..].to_vec()))
        .collect::<Result<Vec<_>>>()?;
    GramSpace::new(d - order, basis, space.gram().clone())
}

// Coordinates of b z^k for every k keeping b z^k inside the window.
fn generator_orbit(space: &GramSpace, b: &CoeffVector) -> Result<Vec<DVector<Complex64>>> {
    let d = space.ambient_dim();
    let b = b.resized(d)?;
    let deg = b.degree().ok_or(Error::ZeroGenerator)?;
    (0..d - deg)
        .map(|k| {
            let f = b.shift_by(k)?;
            let (c, residual) = space.coordinates_with_residual(&f)?;
            if residual > 1e-8 {
                return Err(Error::NotInSpace { residual });
            }
            Ok(c)
        })
        .collect()
}

fn whiten_all(op: &OperatorOnSpace, coords: &[DVector<Complex64>]) -> CMatrix {
    let mut out = CMatrix::zeros(op.dim(), coords.len());
    for (j, c) in coords.iter().enumerate() {
        out.set_column(j, &op.to_whitened(c));
    }
    out
}

/// One level of `M = N ⊕ T N ⊕ … ⊕ Tⁿ N ⊕ Tⁿ⁺¹ M`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionCheck {
    pub n: usize,
    /// Largest cosine between two different summands.
    pub orthogonality: f64,
    /// `m` minus the dimension of the sum.
    pub rank_deficiency: usize,
    /// `max(orthogonality, rank_deficiency)`.
    pub residual: f64,
}

pub fn verify_decomposition(op: &OperatorOnSpace, n: usize, tol: &Tolerances) -> Result<DecompositionCheck> {
    op.check_budget(n + 1)?;
    let wander = wandering_subspace(op)?;
    let nw = &wander.whitened;
    let outside = (nw - op.project_domain(n, nw)).norm();
    if outside > tol.structure.max(1e-12) * nw.ncols().max(1) as f64 {
        return Err(Error::GeneratorOutsideWindow { residual: outside });
    }

    let a = op.whitened();
    let mut blocks = Vec::with_capacity(n + 2);
    let mut current = nw.clone();
    for _ in 0..=n {
        blocks.push(linalg::range_basis(&current, RANK_TOL));
        current = a * current;
    }
    let tail = op.whitened_power(n + 1) * op.domain_whitened(n + 1);
    blocks.push(linalg::range_basis(&tail, RANK_TOL));

    let mut orthogonality: f64 = 0.0;
    for i in 0..blocks.len() {
        for j in i + 1..blocks.len() {
            orthogonality = orthogonality.max(linalg::max_overlap(&blocks[i], &blocks[j]));
        }
    }
    let m = op.dim();
    let total: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut all = CMatrix::zeros(m, total);
    let mut col = 0;
    for b in &blocks {
        all.view_mut((0, col), (m, b.ncols())).copy_from(b);
        col += b.ncols();
    }
    let rank_deficiency = m.saturating_sub(linalg::rank(&all, tol.structure.max(RANK_TOL)));
    Ok(DecompositionCheck { n, orthogonality, rank_deficiency, residual: orthogonality.max(rank_deficiency as f64) })
}

/// Randomized check of `‖b g‖²_M = Σ|γ_k|²‖b z^k‖²_M` and `‖b g‖_M ≤ ‖g‖₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContractionCheck {
    pub trials: usize,
    /// Degree bound of the random polynomials `g`.
    pub degree: usize,
    /// Largest relative gap between the two sides of the norm identity.
    pub identity_residual: f64,
    /// Smallest ratio `‖b g‖_M / ‖g‖₂` observed.
    pub min_ratio: f64,
    /// Largest ratio `‖b g‖_M / ‖g‖₂` observed.
    pub max_ratio: f64,
    pub holds: bool,
}

pub fn verify_contraction(
    op: &OperatorOnSpace,
    b: &CoeffVector,
    trials: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<ContractionCheck> {
    let space = op.space();
    let d = space.ambient_dim();
    let b = b.resized(d)?;
    let orbit = generator_orbit(space, &b)?;
    let norms: Vec<f64> = orbit.iter().map(|c| space.norm_coords(c)).collect();
    let degree = orbit.len() - 1;

    let mut identity_residual: f64 = 0.0;
    let mut max_ratio: f64 = 0.0;
    let mut min_ratio = f64::INFINITY;
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial as u64);
        let mut g = vec![Complex64::new(0.0, 0.0); d];
        for c in g.iter_mut().take(degree + 1) {
            *c = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        }
        let g = CoeffVector::new(g)?;
        let bg = b.product(&g)?;
        let lhs = space.norm_coords(&space.coordinates(&bg)?);
        let rhs_sq: f64 = (0..=degree).map(|k| g[k].norm_sqr() * norms[k] * norms[k]).sum();
        if rhs_sq > 0.0 {
            identity_residual = identity_residual.max((lhs * lhs - rhs_sq).abs() / rhs_sq);
        }
        let gnorm = g.h2_norm();
        if gnorm > 0.0 {
            max_ratio = max_ratio.max(lhs / gnorm);
            min_ratio = min_ratio.min(lhs / gnorm);
        }
    }
    let holds = identity_residual <= tol.structure && max_ratio <= 1.0 + tol.bound;
    Ok(ContractionCheck { trials, degree, identity_residual, min_ratio, max_ratio, holds })
}

/// Lower bound of `‖b g‖_M / ‖g‖₂` on the window, compared with the power
/// bounds on `T_z`; both describe whether `M` is closed in `H²`.
#[derive(Debug, Clone, PartialEq)]
pub struct Closedness {
    /// `min_k ‖b z^k‖_M` over `k ≤ n_checked`.
    pub c_low: f64,
    /// `max_k ‖b z^k‖_M` over the same range.
    pub c_high: f64,
    pub n_checked: usize,
    pub floor: f64,
    pub generator_side: bool,
    pub ine1_side: bool,
    pub ine1_delta: f64,
    /// Both sides reach the same verdict.
    pub consistent: bool,
}

pub fn check_closedness(
    op: &OperatorOnSpace,
    b: &CoeffVector,
    n_max: usize,
    floor: f64,
    tol: &Tolerances,
) -> Result<Closedness> {
    let space = op.space();
    let orbit = generator_orbit(space, b)?;
    let n_checked = n_max.min(orbit.len() - 1);
    let norms: Vec<f64> = orbit[..=n_checked].iter().map(|c| space.norm_coords(c)).collect();
    let c_low = norms.iter().copied().fold(f64::INFINITY, f64::min);
    let c_high = norms.iter().copied().fold(0.0, f64::max);
    let generator_side = c_low >= floor - tol.bound && c_high <= 1.0 + tol.bound;
    let ine1 = check_ine1(op, n_checked.min(op.max_power()).max(1), Some(floor), tol)?;
    Ok(Closedness {
        c_low,
        c_high,
        n_checked,
        floor,
        generator_side,
        ine1_side: ine1.holds,
        ine1_delta: ine1.delta_max,
        consistent: generator_side == ine1.holds,
    })
}

/// Everything learned about `M = b·H²` once the hypotheses hold.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureReport {
    /// Common order of vanishing at the origin.
    pub vanishing_order: usize,
    pub wandering_dim: usize,
    /// Unit-norm generator, lowest nonzero coefficient real and positive.
    pub b: CoeffVector,
    /// `‖b z^k‖_M` for every `k` keeping `b z^k` inside the window.
    pub generator_norms: Vec<f64>,
    /// `‖b z^{k+1}‖_M / ‖b z^k‖_M`.
    pub shift_weights: Vec<f64>,
    /// Largest cosine between two distinct `b z^k`.
    pub orthogonality_residual: f64,
    pub span_rank: usize,
    /// `{b z^k}` spans `M`.
    pub density_holds: bool,
    pub decomposition_depth: usize,
    pub decomposition_residual: f64,
    /// `max_k ‖b z^k‖_M − 1`; non-positive for a contractive multiplier.
    pub contraction_margin: f64,
    pub contraction: ContractionCheck,
    pub closedness: Closedness,
}

/// Extract `b` spanning the wandering subspace and run the structure checks.
/// Refuses to run unless conditions (i) and (ii) were verified.
pub fn extract_generator(
    op: &OperatorOnSpace,
    hypotheses: &HypothesisReport,
    opts: &AnalysisOptions,
) -> Result<StructureReport> {
    if !hypotheses.theorem_hypotheses_hold() {
        return Err(Error::HypothesesNotVerified);
    }
    let tol = &opts.tol;
    let order = detect_vanishing_order(op.space());
    let deflated;
    let work = if order > 0 {
        deflated = OperatorOnSpace::new(deflate(op.space(), order)?)?;
        &deflated
    } else {
        op
    };

    let wander = wandering_subspace(work)?;
    if wander.dim() != 1 {
        return Err(Error::WanderingDimNotOne { dim: wander.dim() });
    }
    // b must survive m - 1 shifts; projecting onto that domain strips
    // rounding noise that the metric cannot see
    let m = work.dim();
    let u = wander.whitened.clone();
    let cleaned = work.project_domain(m - 1, &u);
    let outside = (&u - &cleaned).norm();
    if outside > tol.structure.max(1e-12) {
        return Err(Error::GeneratorOutsideWindow { residual: outside });
    }
    let cleaned: CVector = cleaned.column(0).into_owned();
    let d_fn = work.space().function(&work.unwhitened(&cleaned))?.chopped(GENERATOR_CHOP);
    let d_fn = d_fn.phase_normalized();
    let norm = work.space().norm_coords(&work.space().coordinates(&d_fn)?);
    let d_fn = d_fn.scaled(Complex64::new(1.0 / norm, 0.0));
    let b = d_fn.resized(op.space().ambient_dim())?.shift_by(order)?;

    let space = op.space();
    let orbit = generator_orbit(space, &b)?;
    let generator_norms: Vec<f64> = orbit.iter().map(|c| space.norm_coords(c)).collect();
    let shift_weights = generator_norms.windows(2).map(|w| w[1] / w[0]).collect();
    let whitened = whiten_all(op, &orbit);
    let mut orthogonality_residual: f64 = 0.0;
    for i in 0..whitened.ncols() {
        for j in i + 1..whitened.ncols() {
            let (x, y) = (whitened.column(i), whitened.column(j));
            let cos = x.dotc(&y).norm() / (x.norm() * y.norm());
            orthogonality_residual = orthogonality_residual.max(cos);
        }
    }
    let span_rank = linalg::rank(&whitened, tol.structure.max(RANK_TOL));
    let density_holds = span_rank == op.dim();

    let depth = opts.decomposition_depth.min(op.max_power().saturating_sub(1));
    let mut decomposition_residual: f64 = 0.0;
    for n in 0..=depth {
        decomposition_residual = decomposition_residual.max(verify_decomposition(op, n, tol)?.residual);
    }
    let contraction_margin = generator_norms.iter().copied().fold(f64::NEG_INFINITY, f64::max) - 1.0;
    let contraction = verify_contraction(op, &b, opts.trials, opts.seed, tol)?;
    let closedness = check_closedness(op, &b, opts.n_max, opts.ine1_floor, tol)?;

    Ok(StructureReport {
        vanishing_order: order,
        wandering_dim: wander.dim(),
        b,
        generator_norms,
        shift_weights,
        orthogonality_residual,
        span_rank,
        density_holds,
        decomposition_depth: depth,
        decomposition_residual,
        contraction_margin,
        contraction,
        closedness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{DiagonalSpace, GeneratorMetric};
    use crate::weights::WeightSequence;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn alternating(d: usize) -> DiagonalSpace {
        DiagonalSpace::from_beta((0..d).map(|n| 0.5f64.powi((n / 2) as i32)).collect()).unwrap()
    }

    fn analyze(op: &OperatorOnSpace) -> StructureReport {
        let opts = AnalysisOptions::default();
        let hyp = HypothesisReport::evaluate(op, &opts).unwrap();
        extract_generator(op, &hyp, &opts).unwrap()
    }

    #[test]
    fn alternating_generator_is_one() {
        let op = OperatorOnSpace::from_diagonal(&alternating(64)).unwrap();
        let r = analyze(&op);
        assert_eq!(r.vanishing_order, 0);
        assert_eq!(r.wandering_dim, 1);
        assert_eq!(r.b.degree(), Some(0));
        assert!((r.b[0] - c(1.0)).norm() < 1e-14);
        assert!((r.shift_weights[0] - 1.0).abs() < 1e-14);
        assert!((r.shift_weights[1] - 0.5).abs() < 1e-14);
        assert!(r.orthogonality_residual < 1e-12);
        assert!(r.density_holds);
        assert!(r.decomposition_residual < 1e-10);
        assert!(r.contraction.holds);
        assert!(r.contraction_margin.abs() < 1e-14);
    }

    #[test]
    fn model_space_generator_recovered() {
        let b = CoeffVector::from_real(&[0.6, 0.8]).unwrap();
        let space = GramSpace::from_generator(&b, 16, GeneratorMetric::Model).unwrap();
        let op = OperatorOnSpace::new(space).unwrap();
        let r = analyze(&op);
        assert!((r.b[0] - c(0.6)).norm() < 1e-12 && (r.b[1] - c(0.8)).norm() < 1e-12);
        assert_eq!(r.b.degree(), Some(1));
        assert!(r.generator_norms.iter().all(|n| (n - 1.0).abs() < 1e-12));
    }

    #[test]
    fn deflation_restores_generator() {
        let beta = WeightSequence::new((0..12).map(|n| 1.0 / (1.0 + n as f64).sqrt()).collect()).unwrap();
        let z2 = CoeffVector::monomial(2, 3).unwrap();
        let space = GramSpace::from_generator(&z2, 12, GeneratorMetric::Weighted(&beta)).unwrap();
        assert_eq!(detect_vanishing_order(&space), 2);
        let inner = deflate(&space, 2).unwrap();
        assert_eq!(inner.ambient_dim(), 10);
        assert!(matches!(deflate(&space, 0), Err(Error::NothingToDeflate)));
        let op = OperatorOnSpace::new(space).unwrap();
        let r = analyze(&op);
        assert_eq!(r.vanishing_order, 2);
        assert_eq!(r.b.order(), Some(2));
        assert_eq!(r.b.degree(), Some(2));
    }

    #[test]
    fn refuses_unverified_hypotheses() {
        let grow = DiagonalSpace::from_beta((0..6).map(|n| 2f64.powi(n)).collect()).unwrap();
        let op = OperatorOnSpace::from_diagonal(&grow).unwrap();
        let opts = AnalysisOptions { n_max: 4, ..Default::default() };
        let hyp = HypothesisReport::evaluate(&op, &opts).unwrap();
        assert!(matches!(extract_generator(&op, &hyp, &opts), Err(Error::HypothesesNotVerified)));
    }

    #[test]
    fn contraction_is_deterministic() {
        let op = OperatorOnSpace::from_diagonal(&alternating(16)).unwrap();
        let one = CoeffVector::monomial(0, 16).unwrap();
        let tol = Tolerances::default();
        let a = verify_contraction(&op, &one, 20, 7, &tol).unwrap();
        let b = verify_contraction(&op, &one, 20, 7, &tol).unwrap();
        assert_eq!(a, b);
        assert!(a.holds && a.identity_residual < 1e-13 && a.max_ratio <= 1.0);
    }

    #[test]
    fn closedness_sides_agree() {
        let op = OperatorOnSpace::from_diagonal(&alternating(48)).unwrap();
        let one = CoeffVector::monomial(0, 48).unwrap();
        let tol = Tolerances::default();
        let short = check_closedness(&op, &one, 8, 1e-2, &tol).unwrap();
        assert!(short.generator_side && short.ine1_side && short.consistent);
        assert_eq!(short.c_low, 0.0625);
        let long = check_closedness(&op, &one, 20, 1e-2, &tol).unwrap();
        assert!(!long.generator_side && !long.ine1_side && long.consistent);
    }

    #[test]
    fn decomposition_on_isometry() {
        let h2 = DiagonalSpace::from_beta(vec![1.0; 10]).unwrap();
        let op = OperatorOnSpace::from_diagonal(&h2).unwrap();
        for n in 0..4 {
            let r = verify_decomposition(&op, n, &Tolerances::default()).unwrap();
            assert_eq!(r.rank_deficiency, 0);
            assert!(r.orthogonality < 1e-14);
        }
        assert!(verify_decomposition(&op, 9, &Tolerances::default()).is_err());
    }
}
