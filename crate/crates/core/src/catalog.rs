//! Named example spaces with the facts they are known to satisfy.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coeff::CoeffVector;
use crate::error::{Error, Result};
use crate::hypothesis::{check_ine1, HypothesisReport};
use crate::options::AnalysisOptions;
use crate::shift::OperatorOnSpace;
use crate::space::{DiagonalSpace, GeneratorMetric, GramSpace};
use crate::structure::{check_closedness, extract_generator, StructureReport};
use crate::weights::WeightSequence;

/// Largest window accepted by [`builtin`].
pub const MAX_DIM: usize = 512;

/// Largest squared tail mass tolerated when truncating a Blaschke product.
pub const BLASCHKE_TAIL: f64 = 1e-9;

/// Off-diagonal Gram perturbation of `cond2-breaker`.
pub const BREAKER_EPSILON: f64 = 0.3;
/// Geometric weight decay `β_k = r^k` underlying `cond2-breaker`.
pub const BREAKER_DECAY: f64 = 0.8;
/// Condition (ii) residual of `cond2-breaker` at its default window.
pub const BREAKER_RESIDUAL: f64 = 0.3;

pub const NAMES: [&str; 6] =
    ["blaschke-model", "classical-h2", "cond2-breaker", "paper-alternating", "paper-n3", "vanishing-order"];

/// A catalog space: either `H²(β)` or a subspace with its own Gram matrix.
#[derive(Debug, Clone)]
pub enum Space {
    Diagonal(DiagonalSpace),
    Gram(GramSpace),
}

impl Space {
    pub fn operator(&self) -> Result<OperatorOnSpace> {
        match self {
            Space::Diagonal(d) => OperatorOnSpace::from_diagonal(d),
            Space::Gram(g) => OperatorOnSpace::new(g.clone()),
        }
    }

    pub fn kind(&self) -> SpaceKind {
        match self {
            Space::Diagonal(_) => SpaceKind::Diagonal,
            Space::Gram(_) => SpaceKind::Gram,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        match self {
            Space::Diagonal(d) => d.dim(),
            Space::Gram(g) => g.ambient_dim(),
        }
    }

    /// Dimension `m` of the space itself.
    pub fn dim(&self) -> usize {
        match self {
            Space::Diagonal(d) => d.dim(),
            Space::Gram(g) => g.dim(),
        }
    }

    pub fn beta(&self) -> Option<&[f64]> {
        match self {
            Space::Diagonal(d) => Some(d.beta()),
            Space::Gram(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceKind {
    Diagonal,
    Gram,
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpaceKind::Diagonal => "diagonal",
            SpaceKind::Gram => "gram",
        })
    }
}

/// Where an expected fact comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactOrigin {
    /// Stated for this example in the literature.
    Published,
    /// Follows from a short computation with the closed form.
    Computed,
    /// Holds by the way the entry was built.
    Constructed,
}

impl fmt::Display for FactOrigin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FactOrigin::Published => "published",
            FactOrigin::Computed => "computed",
            FactOrigin::Constructed => "constructed",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Fact {
    ConditionI(bool),
    DeltaMax { value: f64, tol: f64 },
    ConditionII(bool),
    Shimorin1(bool),
    Shimorin2(bool),
    /// Power bounds with the given `n_max` and the default floor.
    Ine1 { n_max: usize, holds: bool },
    /// Generator and power-bound sides of the closedness test agree.
    ClosednessConsistent { n_max: usize },
    WanderingDim(usize),
    VanishingOrder(usize),
    /// `b` has exactly this many leading zero coefficients.
    LeadingZeros(usize),
    /// Every `‖b z^{k+1}‖/‖b z^k‖` equals 1.
    IsometricWeights,
    ContractionMargin { at_most: f64 },
    /// Generator extraction refuses to run.
    StructureRefused,
}

impl Fact {
    // Power needed beyond the default n_max clamp, if any.
    fn required_budget(&self) -> usize {
        match self {
            Fact::Ine1 { n_max, .. } | Fact::ClosednessConsistent { n_max } => *n_max,
            _ => 0,
        }
    }
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fact::ConditionI(h) => write!(f, "condition (i) holds = {h}"),
            Fact::DeltaMax { value, tol } => write!(f, "delta_max = {value} ± {tol:e}"),
            Fact::ConditionII(h) => write!(f, "condition (ii) holds = {h}"),
            Fact::Shimorin1(h) => write!(f, "first Shimorin inequality holds = {h}"),
            Fact::Shimorin2(h) => write!(f, "second Shimorin inequality holds = {h}"),
            Fact::Ine1 { n_max, holds } => write!(f, "power bounds up to n = {n_max} hold = {holds}"),
            Fact::ClosednessConsistent { n_max } => write!(f, "closedness sides agree up to n = {n_max}"),
            Fact::WanderingDim(d) => write!(f, "wandering dimension = {d}"),
            Fact::VanishingOrder(k) => write!(f, "vanishing order = {k}"),
            Fact::LeadingZeros(k) => write!(f, "generator has {k} leading zeros"),
            Fact::IsometricWeights => f.write_str("recovered weights are all 1"),
            Fact::ContractionMargin { at_most } => write!(f, "contraction margin ≤ {at_most:e}"),
            Fact::StructureRefused => f.write_str("structure stage refused"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpectedFact {
    pub fact: Fact,
    pub origin: FactOrigin,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub kind: SpaceKind,
    pub description: &'static str,
    pub default_dim: usize,
    /// Window whose space has dimension at most 6, for brute-force checks.
    pub small_dim: usize,
    pub params: Vec<(&'static str, f64)>,
    pub expected: Vec<ExpectedFact>,
}

fn fact(fact: Fact, origin: FactOrigin) -> ExpectedFact {
    ExpectedFact { fact, origin }
}

pub fn entries() -> Vec<CatalogEntry> {
    NAMES.iter().map(|n| entry(n).expect("listed name")).collect()
}

pub fn entry(name: &str) -> Result<CatalogEntry> {
    use Fact::*;
    use FactOrigin::*;
    let e = match name {
        "classical-h2" => CatalogEntry {
            name: "classical-h2",
            kind: SpaceKind::Diagonal,
            description: "unweighted Hardy space, β ≡ 1",
            default_dim: 64,
            small_dim: 6,
            params: vec![],
            expected: vec![
                fact(ConditionI(true), Computed),
                fact(DeltaMax { value: 1.0, tol: 1e-12 }, Computed),
                fact(ConditionII(true), Computed),
                fact(Shimorin1(true), Computed),
                fact(Shimorin2(true), Computed),
                fact(Ine1 { n_max: 8, holds: true }, Computed),
                fact(VanishingOrder(0), Computed),
                fact(WanderingDim(1), Computed),
                fact(LeadingZeros(0), Computed),
                fact(IsometricWeights, Computed),
                fact(ContractionMargin { at_most: 1e-10 }, Computed),
            ],
        },
        "paper-alternating" => CatalogEntry {
            name: "paper-alternating",
            kind: SpaceKind::Diagonal,
            description: "β_n = 2^(-floor(n/2)): weights alternate between 1 and 1/2",
            default_dim: 64,
            small_dim: 6,
            params: vec![],
            expected: vec![
                fact(ConditionI(true), Published),
                fact(DeltaMax { value: 0.5, tol: 1e-12 }, Computed),
                fact(ConditionII(true), Published),
                fact(Shimorin1(false), Published),
                fact(Shimorin2(false), Published),
                fact(Ine1 { n_max: 8, holds: true }, Computed),
                fact(Ine1 { n_max: 20, holds: false }, Computed),
                fact(ClosednessConsistent { n_max: 20 }, Computed),
                fact(WanderingDim(1), Published),
                fact(LeadingZeros(0), Computed),
                fact(ContractionMargin { at_most: 1e-10 }, Published),
            ],
        },
        "paper-n3" => CatalogEntry {
            name: "paper-n3",
            kind: SpaceKind::Diagonal,
            description: "β_n = (n+3)^(1/(n+3)): decreasing weights bounded away from zero",
            default_dim: 64,
            small_dim: 6,
            params: vec![],
            expected: vec![
                fact(ConditionI(true), Computed),
                fact(DeltaMax { value: 5f64.powf(0.2) / 4f64.powf(0.25), tol: 1e-12 }, Computed),
                fact(ConditionII(true), Computed),
                fact(Ine1 { n_max: 8, holds: true }, Published),
                fact(ClosednessConsistent { n_max: 8 }, Published),
                fact(WanderingDim(1), Computed),
                fact(LeadingZeros(0), Computed),
                fact(ContractionMargin { at_most: 1e-10 }, Published),
            ],
        },
        "blaschke-model" => CatalogEntry {
            name: "blaschke-model",
            kind: SpaceKind::Gram,
            description: "span of b z^k with G = I, b the single-zero Blaschke factor at 1/2",
            default_dim: 32,
            small_dim: 20,
            params: vec![("zero", 0.5), ("generator_length", blaschke_length(&[Complex64::new(0.5, 0.0)]) as f64)],
            expected: vec![
                fact(ConditionI(true), Computed),
                fact(DeltaMax { value: 1.0, tol: 1e-10 }, Computed),
                fact(ConditionII(true), Published),
                fact(Shimorin1(true), Computed),
                fact(Shimorin2(true), Computed),
                fact(WanderingDim(1), Published),
                fact(LeadingZeros(0), Constructed),
                fact(IsometricWeights, Published),
                fact(ContractionMargin { at_most: 1e-10 }, Published),
            ],
        },
        "cond2-breaker" => CatalogEntry {
            name: "cond2-breaker",
            kind: SpaceKind::Gram,
            description: "monomials with a Gram matrix coupling 1 and z; condition (ii) fails",
            default_dim: 12,
            small_dim: 6,
            params: vec![("epsilon", BREAKER_EPSILON), ("decay", BREAKER_DECAY), ("residual", BREAKER_RESIDUAL)],
            expected: vec![
                fact(ConditionI(true), Constructed),
                fact(ConditionII(false), Constructed),
                fact(StructureRefused, Constructed),
            ],
        },
        "vanishing-order" => CatalogEntry {
            name: "vanishing-order",
            kind: SpaceKind::Gram,
            description: "z² H²(β) with β_n = (n+3)^(1/(n+3)): every function vanishes to order 2",
            default_dim: 32,
            small_dim: 8,
            params: vec![("order", 2.0)],
            expected: vec![
                fact(VanishingOrder(2), Constructed),
                fact(ConditionI(true), Computed),
                fact(ConditionII(true), Computed),
                fact(WanderingDim(1), Published),
                fact(LeadingZeros(2), Published),
                fact(ContractionMargin { at_most: 1e-10 }, Published),
            ],
        },
        other => return Err(Error::UnknownEntry(other.to_string())),
    };
    Ok(e)
}

pub fn alternating_beta(dim: usize) -> Vec<f64> {
    (0..dim).map(|n| 0.5f64.powi((n / 2) as i32)).collect()
}

pub fn n3_beta(dim: usize) -> Vec<f64> {
    (0..dim)
        .map(|n| {
            let x = (n + 3) as f64;
            x.powf(1.0 / x)
        })
        .collect()
}

/// Instantiate a catalog space in a window of `dim` coefficients.
pub fn builtin(name: &str, dim: usize) -> Result<Space> {
    let e = entry(name)?;
    let min_dim = match name {
        "blaschke-model" => blaschke_length(&[Complex64::new(0.5, 0.0)]) + 1,
        "vanishing-order" => 4,
        _ => 2,
    };
    if dim < min_dim || dim > MAX_DIM {
        return Err(Error::InvalidParameter(format!("{} needs a window between {min_dim} and {MAX_DIM}", e.name)));
    }
    match name {
        "classical-h2" => Ok(Space::Diagonal(DiagonalSpace::from_beta(vec![1.0; dim])?)),
        "paper-alternating" => Ok(Space::Diagonal(DiagonalSpace::from_beta(alternating_beta(dim))?)),
        "paper-n3" => Ok(Space::Diagonal(DiagonalSpace::from_beta(n3_beta(dim))?)),
        "blaschke-model" => {
            let zero = Complex64::new(0.5, 0.0);
            let b = blaschke_coeffs(&[zero], blaschke_length(&[zero]))?;
            Ok(Space::Gram(GramSpace::from_generator(&b, dim, GeneratorMetric::Model)?))
        }
        "cond2-breaker" => Ok(Space::Gram(cond2_breaker(dim)?)),
        "vanishing-order" => {
            let beta = n3_beta(dim);
            let basis = (2..dim).map(|k| CoeffVector::monomial(k, dim)).collect::<Result<Vec<_>>>()?;
            let gram = DMatrix::from_diagonal(&DVector::from_iterator(
                dim - 2,
                beta[2..].iter().map(|b| Complex64::new(b * b, 0.0)),
            ));
            Ok(Space::Gram(GramSpace::new(dim, basis, gram)?))
        }
        _ => unreachable!("entry() accepted the name"),
    }
}

/// Monomials with `G = D (I + ε(E₀₁ + E₁₀)) D`, `D = diag(r^k)`.
pub fn cond2_breaker(dim: usize) -> Result<GramSpace> {
    let basis = (0..dim).map(|k| CoeffVector::monomial(k, dim)).collect::<Result<Vec<_>>>()?;
    let mut gram = DMatrix::identity(dim, dim);
    gram[(0, 1)] = Complex64::new(BREAKER_EPSILON, 0.0);
    gram[(1, 0)] = Complex64::new(BREAKER_EPSILON, 0.0);
    let scale =
        DMatrix::from_diagonal(&DVector::from_iterator(dim, (0..dim).map(|k| Complex64::new(BREAKER_DECAY.powi(k as i32), 0.0))));
    GramSpace::new(dim, basis, &scale * gram * &scale)
}

/// Taylor coefficients `c_0, …, c_{dim-1}` of `∏ (|a|/a)(a − z)/(1 − ā z)`,
/// a factor with `a = 0` being `z`. Fails when the squared tail mass beyond
/// the window reaches [`BLASCHKE_TAIL`].
pub fn blaschke_coeffs(zeros: &[Complex64], dim: usize) -> Result<CoeffVector> {
    if dim == 0 {
        return Err(Error::Empty);
    }
    for (index, a) in zeros.iter().enumerate() {
        if !(a.re.is_finite() && a.im.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        if a.norm() >= 1.0 {
            return Err(Error::ZeroOutsideDisk { index, modulus: a.norm() });
        }
    }
    let mut acc = vec![Complex64::new(0.0, 0.0); dim];
    acc[0] = Complex64::new(1.0, 0.0);
    for a in zeros {
        let factor = blaschke_factor(*a, dim);
        let mut next = vec![Complex64::new(0.0, 0.0); dim];
        for (i, x) in acc.iter().enumerate() {
            for (j, y) in factor.iter().enumerate().take(dim - i) {
                next[i + j] += x * y;
            }
        }
        acc = next;
    }
    let mass: f64 = acc.iter().map(|c| c.norm_sqr()).sum();
    let tail = (1.0 - mass).max(0.0);
    if tail >= BLASCHKE_TAIL {
        return Err(Error::TailTooLarge { tail, limit: BLASCHKE_TAIL });
    }
    CoeffVector::new(acc)
}

fn blaschke_factor(a: Complex64, dim: usize) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(0.0, 0.0); dim];
    if a.norm() == 0.0 {
        if dim > 1 {
            c[1] = Complex64::new(1.0, 0.0);
        }
        return c;
    }
    let r = a.norm();
    let unit = Complex64::new(r, 0.0) / a;
    c[0] = Complex64::new(r, 0.0);
    let mut power = Complex64::new(1.0, 0.0);
    for coeff in c.iter_mut().skip(1) {
        *coeff = unit * power * (r * r - 1.0);
        power *= a.conj();
    }
    c
}

/// Shortest window holding the product with tail below [`BLASCHKE_TAIL`].
pub fn blaschke_length(zeros: &[Complex64]) -> usize {
    (1..=MAX_DIM).find(|&d| blaschke_coeffs(zeros, d).is_ok()).unwrap_or(MAX_DIM)
}

/// Seeded nonincreasing weights with `β_0 = 1` and every `β_n ≥ delta`.
pub fn random_monotone_beta(seed: u64, dim: usize, delta: f64) -> Result<WeightSequence> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidParameter(format!("delta must lie in (0, 1], got {delta}")));
    }
    if dim == 0 {
        return Err(Error::Empty);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut beta = Vec::with_capacity(dim);
    let mut current = 1.0f64;
    beta.push(current);
    for _ in 1..dim {
        let u: f64 = rng.random();
        current -= u * (current - delta) / 2.0;
        beta.push(current);
    }
    WeightSequence::new(beta)
}

/// Status of one expected fact.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactStatus {
    Pass,
    Fail,
    /// The window is too short for the powers the fact needs.
    Skipped,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FactOutcome {
    pub fact: ExpectedFact,
    pub status: FactStatus,
    pub observed: String,
}

/// Everything computed while checking an entry.
#[derive(Debug, Clone)]
pub struct EntryCheck {
    pub name: &'static str,
    pub dim: usize,
    pub hypotheses: HypothesisReport,
    pub structure: Result<StructureReport>,
    pub outcomes: Vec<FactOutcome>,
}

impl EntryCheck {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.status != FactStatus::Fail)
    }
}

/// Run the hypothesis and structure pipelines on an entry and compare with
/// its expected facts. `n_max` is clamped to what the window allows.
pub fn check_entry(entry: &CatalogEntry, dim: usize, opts: &AnalysisOptions) -> Result<EntryCheck> {
    let space = builtin(entry.name, dim)?;
    let op = space.operator()?;
    let budget = op.max_power().saturating_sub(1);
    let opts = AnalysisOptions { n_max: opts.n_max.min(budget).max(1), ..opts.clone() };
    let hypotheses = HypothesisReport::evaluate(&op, &opts)?;
    let structure = extract_generator(&op, &hypotheses, &opts);

    let mut outcomes = Vec::with_capacity(entry.expected.len());
    for expected in &entry.expected {
        let need = expected.fact.required_budget();
        if need > 0 && need > budget {
            outcomes.push(FactOutcome {
                fact: expected.clone(),
                status: FactStatus::Skipped,
                observed: format!("window allows n ≤ {budget}"),
            });
            continue;
        }
        let (ok, observed) = evaluate_fact(&expected.fact, &op, &opts, &hypotheses, &structure)?;
        outcomes.push(FactOutcome {
            fact: expected.clone(),
            status: if ok { FactStatus::Pass } else { FactStatus::Fail },
            observed,
        });
    }
    Ok(EntryCheck { name: entry.name, dim, hypotheses, structure, outcomes })
}

fn evaluate_fact(
    fact: &Fact,
    op: &OperatorOnSpace,
    opts: &AnalysisOptions,
    hyp: &HypothesisReport,
    structure: &Result<StructureReport>,
) -> Result<(bool, String)> {
    let needs_structure = |f: &dyn Fn(&StructureReport) -> (bool, String)| match structure {
        Ok(s) => f(s),
        Err(e) => (false, format!("structure stage failed: {e}")),
    };
    Ok(match fact {
        Fact::ConditionI(h) => (hyp.cond_i.holds == *h, hyp.cond_i.holds.to_string()),
        Fact::DeltaMax { value, tol } => {
            let d = hyp.cond_i.delta_max;
            ((d - value).abs() <= *tol, format!("{d:.17e}"))
        }
        Fact::ConditionII(h) => (hyp.cond_ii.holds == *h, format!("residual {:.3e}", hyp.cond_ii.max_residual)),
        Fact::Shimorin1(h) => (hyp.shimorin_1.holds == *h, hyp.shimorin_1.holds.to_string()),
        Fact::Shimorin2(h) => (hyp.shimorin_2.holds == *h, hyp.shimorin_2.holds.to_string()),
        Fact::Ine1 { n_max, holds } => {
            let r = check_ine1(op, *n_max, Some(opts.ine1_floor), &opts.tol)?;
            (r.holds == *holds, format!("delta_max {:.6e}", r.delta_max))
        }
        Fact::ClosednessConsistent { n_max } => match structure {
            Ok(s) => {
                let c = check_closedness(op, &s.b, *n_max, opts.ine1_floor, &opts.tol)?;
                (c.consistent, format!("generator side {}, power side {}", c.generator_side, c.ine1_side))
            }
            Err(e) => (false, format!("structure stage failed: {e}")),
        },
        Fact::WanderingDim(d) => needs_structure(&|s| (s.wandering_dim == *d, s.wandering_dim.to_string())),
        Fact::VanishingOrder(k) => {
            let order = crate::structure::detect_vanishing_order(op.space());
            (order == *k, order.to_string())
        }
        Fact::LeadingZeros(k) => {
            needs_structure(&|s| (s.b.order() == Some(*k), format!("{:?}", s.b.order())))
        }
        Fact::IsometricWeights => needs_structure(&|s| {
            let worst = s.shift_weights.iter().map(|w| (w - 1.0).abs()).fold(0.0, f64::max);
            (worst <= 1e-10, format!("max |w - 1| = {worst:.3e}"))
        }),
        Fact::ContractionMargin { at_most } => {
            needs_structure(&|s| (s.contraction_margin <= *at_most, format!("{:.3e}", s.contraction_margin)))
        }
        Fact::StructureRefused => match structure {
            Err(Error::HypothesesNotVerified) => (true, "refused".into()),
            Err(e) => (false, format!("failed differently: {e}")),
            Ok(_) => (false, "structure stage ran".into()),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn closed_forms() {
        assert_eq!(builtin("classical-h2", 8).unwrap().beta().unwrap(), &[1.0; 8]);
        assert_eq!(builtin("paper-alternating", 6).unwrap().beta().unwrap(), &[1.0, 1.0, 0.5, 0.5, 0.25, 0.25]);
        let n3 = builtin("paper-n3", 4).unwrap();
        let beta = n3.beta().unwrap();
        assert_eq!(beta[0], 3f64.powf(1.0 / 3.0));
        assert_eq!(beta[1], 4f64.powf(0.25));
        assert_eq!(beta[3], 6f64.powf(1.0 / 6.0));
        assert!(matches!(builtin("nope", 8), Err(Error::UnknownEntry(_))));
    }

    #[test]
    fn blaschke_single_zero() {
        let z = blaschke_coeffs(&[c(0.0)], 4).unwrap();
        assert_eq!(z.coeffs(), &[c(0.0), c(1.0), c(0.0), c(0.0)]);
        let b = blaschke_coeffs(&[c(0.5)], 32).unwrap();
        assert_eq!(b[0], c(0.5));
        for n in 1..32 {
            assert!((b[n] - c(-3.0 * 2f64.powi(-(n as i32 + 1)))).norm() < 1e-16);
        }
        let mass: f64 = b.coeffs().iter().map(|x| x.norm_sqr()).sum();
        assert!((mass - 1.0).abs() < 2f64.powi(-20));
        assert_eq!(blaschke_length(&[c(0.5)]), 16);
    }

    #[test]
    fn blaschke_errors() {
        assert!(matches!(blaschke_coeffs(&[c(1.0)], 8), Err(Error::ZeroOutsideDisk { index: 0, .. })));
        assert!(matches!(blaschke_coeffs(&[c(0.5)], 8), Err(Error::TailTooLarge { .. })));
    }

    #[test]
    fn blaschke_is_inner_at_truncation() {
        let b = blaschke_coeffs(&[Complex64::new(0.3, 0.4), c(-0.2)], 48).unwrap();
        let cs = b.coeffs();
        for k in 1..10 {
            let s: Complex64 = (0..48 - k).map(|n| cs[n] * cs[n + k].conj()).sum();
            assert!(s.norm() < 1e-8, "shift {k}");
        }
    }

    #[test]
    fn random_beta_properties() {
        let a = random_monotone_beta(3, 40, 0.9).unwrap();
        assert_eq!(a, random_monotone_beta(3, 40, 0.9).unwrap());
        assert!(a.shift_weights().iter().all(|w| (0.9..=1.0).contains(w)));
        assert!(a.beta().iter().all(|b| *b >= 0.9));
        assert_eq!(random_monotone_beta(5, 10, 1.0).unwrap().beta(), &[1.0; 10]);
        assert!(random_monotone_beta(5, 10, 0.0).is_err());
    }

    #[test]
    fn every_entry_passes_its_facts() {
        let opts = AnalysisOptions::default();
        for e in entries() {
            for dim in [e.default_dim, e.small_dim] {
                let check = check_entry(&e, dim, &opts).unwrap();
                for o in &check.outcomes {
                    assert_ne!(o.status, FactStatus::Fail, "{} at {dim}: {} observed {}", e.name, o.fact.fact, o.observed);
                }
            }
        }
    }

    #[test]
    fn small_dims_are_small() {
        for e in entries() {
            let s = builtin(e.name, e.small_dim).unwrap();
            assert!(s.dim() <= 6, "{}", e.name);
        }
    }

    #[test]
    fn breaker_residual_is_frozen() {
        let op = OperatorOnSpace::new(cond2_breaker(12).unwrap()).unwrap();
        let r = crate::hypothesis::check_condition_ii(&op, 8, &Default::default()).unwrap();
        assert!((r.max_residual - BREAKER_RESIDUAL).abs() < 1e-12);
        assert_eq!(r.witness.unwrap().0, 1);
    }
}
