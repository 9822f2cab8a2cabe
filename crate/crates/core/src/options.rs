/// Numerical thresholds used by the hypothesis and structure checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Slack on norm bounds such as `‖T f‖ ≤ (1 + bound)‖f‖`.
    pub bound: f64,
    /// Largest accepted relative residual for range containment.
    pub containment: f64,
    /// Relative slack on the minimal eigenvalue of a quadratic form.
    pub semidefinite: f64,
    /// Orthogonality and rank tolerance in the structure checks.
    pub structure: f64,
}

impl Tolerances {
    pub fn uniform(tol: f64) -> Self {
        Self { bound: tol, containment: tol, semidefinite: tol, structure: tol }
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::uniform(1e-10)
    }
}

/// Threshold below which a lower bound counts as "not bounded away from
/// zero" in the power-bound and closedness checks.
pub const DEFAULT_INE1_FLOOR: f64 = 1e-2;

/// Seed for randomized checks unless overridden.
pub const DEFAULT_SEED: u64 = 0x5EED;

/// Knobs shared by the hypothesis and structure pipelines.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisOptions {
    /// Largest power `n` examined by condition (ii) and the power bounds.
    pub n_max: usize,
    /// Required lower constant for condition (i); `None` only asks for some
    /// positive constant.
    pub delta: Option<f64>,
    /// Lower constant required by the power bounds and the closedness test.
    pub ine1_floor: f64,
    /// Number of summands `n` checked in the orthogonal decomposition.
    pub decomposition_depth: usize,
    /// Random trials for the contraction check.
    pub trials: usize,
    pub seed: u64,
    pub tol: Tolerances,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            n_max: 8,
            delta: None,
            ine1_floor: DEFAULT_INE1_FLOOR,
            decomposition_depth: 6,
            trials: 100,
            seed: DEFAULT_SEED,
            tol: Tolerances::default(),
        }
    }
}
