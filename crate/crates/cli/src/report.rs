//! Serializable mirrors of the library reports.
//!
//! Reals travel as decimal strings with 17 significant digits, which is
//! enough to reproduce every `f64` bit for bit. Complex numbers are
//! `[re, im]` pairs.

use std::fmt;

use num_complex::Complex64;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use subhardy::catalog::{EntryCheck, FactStatus};
use subhardy::hypothesis::{ConditionI, ConditionII, Ine1, Shimorin1, Shimorin2};
use subhardy::structure::{Closedness, ContractionCheck};
use subhardy::{CoeffVector, HypothesisReport, StructureReport};

pub const SCHEMA: u32 = 1;

/// Render a real with 17 significant digits.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

/// A real number compared bit for bit.
#[derive(Debug, Clone, Copy)]
pub struct Real(pub f64);

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.0.to_bits() == other.0.to_bits()
    }
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_real(self.0))
    }
}

struct RealVisitor;

impl Visitor<'_> for RealVisitor {
    type Value = Real;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a decimal string or a number")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Real, E> {
        v.trim().parse::<f64>().map(Real).map_err(|_| E::custom(format!("not a number: {v:?}")))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<Real, E> {
        Ok(Real(v))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Real, E> {
        Ok(Real(v as f64))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Real, E> {
        Ok(Real(v as f64))
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(RealVisitor)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cplx(pub Real, pub Real);

impl From<Complex64> for Cplx {
    fn from(c: Complex64) -> Self {
        Cplx(Real(c.re), Real(c.im))
    }
}

impl From<Cplx> for Complex64 {
    fn from(c: Cplx) -> Self {
        Complex64::new(c.0 .0, c.1 .0)
    }
}

pub fn reals(xs: &[f64]) -> Vec<Real> {
    xs.iter().copied().map(Real).collect()
}

pub fn coeffs(f: &CoeffVector) -> Vec<Cplx> {
    f.coeffs().iter().copied().map(Cplx::from).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionIOut {
    pub holds: bool,
    pub delta_max: Real,
    pub sup_ratio: Real,
    pub requested_delta: Option<Real>,
    pub witness: Option<Vec<Cplx>>,
}

impl From<&ConditionI> for ConditionIOut {
    fn from(c: &ConditionI) -> Self {
        Self {
            holds: c.holds,
            delta_max: Real(c.delta_max),
            sup_ratio: Real(c.sup_ratio),
            requested_delta: c.requested_delta.map(Real),
            witness: c.witness.as_ref().map(coeffs),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerWitness {
    pub n: usize,
    pub f: Vec<Cplx>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionIIOut {
    pub holds: bool,
    pub n_checked: usize,
    pub max_residual: Real,
    pub residuals: Vec<Real>,
    pub witness: Option<PowerWitness>,
}

impl From<&ConditionII> for ConditionIIOut {
    fn from(c: &ConditionII) -> Self {
        Self {
            holds: c.holds,
            n_checked: c.n_checked,
            max_residual: Real(c.max_residual),
            residuals: reals(&c.residuals),
            witness: c.witness.as_ref().map(|(n, f)| PowerWitness { n: *n, f: coeffs(f) }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ine1Out {
    pub holds: bool,
    pub delta_max: Real,
    pub sup_ratio: Real,
    pub n_checked: usize,
    pub threshold: Real,
    pub witness: Option<PowerWitness>,
}

impl From<&Ine1> for Ine1Out {
    fn from(c: &Ine1) -> Self {
        Self {
            holds: c.holds,
            delta_max: Real(c.delta_max),
            sup_ratio: Real(c.sup_ratio),
            n_checked: c.n_checked,
            threshold: Real(c.threshold),
            witness: c.witness.as_ref().map(|(n, f)| PowerWitness { n: *n, f: coeffs(f) }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShimorinOut {
    pub holds: bool,
    pub min_eigenvalue: Real,
    pub scale: Real,
    pub lhs: Real,
    pub rhs: Real,
    /// One function for the first inequality, a pair for the second.
    pub witness: Option<Vec<Vec<Cplx>>>,
}

impl From<&Shimorin1> for ShimorinOut {
    fn from(s: &Shimorin1) -> Self {
        Self {
            holds: s.holds,
            min_eigenvalue: Real(s.min_eigenvalue),
            scale: Real(s.scale),
            lhs: Real(s.lhs),
            rhs: Real(s.rhs),
            witness: s.witness.as_ref().map(|x| vec![coeffs(x)]),
        }
    }
}

impl From<&Shimorin2> for ShimorinOut {
    fn from(s: &Shimorin2) -> Self {
        Self {
            holds: s.holds,
            min_eigenvalue: Real(s.min_eigenvalue),
            scale: Real(s.scale),
            lhs: Real(s.lhs),
            rhs: Real(s.rhs),
            witness: s.witness.as_ref().map(|(x, y)| vec![coeffs(x), coeffs(y)]),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesesOut {
    pub n_max: usize,
    pub cond_i: ConditionIOut,
    pub cond_ii: ConditionIIOut,
    pub ine1: Ine1Out,
    pub shimorin_1: ShimorinOut,
    pub shimorin_2: ShimorinOut,
}

impl From<&HypothesisReport> for HypothesesOut {
    fn from(h: &HypothesisReport) -> Self {
        Self {
            n_max: h.n_max,
            cond_i: (&h.cond_i).into(),
            cond_ii: (&h.cond_ii).into(),
            ine1: (&h.ine1).into(),
            shimorin_1: (&h.shimorin_1).into(),
            shimorin_2: (&h.shimorin_2).into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContractionOut {
    pub trials: usize,
    pub degree: usize,
    pub identity_residual: Real,
    pub min_ratio: Real,
    pub max_ratio: Real,
    pub holds: bool,
}

impl From<&ContractionCheck> for ContractionOut {
    fn from(c: &ContractionCheck) -> Self {
        Self {
            trials: c.trials,
            degree: c.degree,
            identity_residual: Real(c.identity_residual),
            min_ratio: Real(c.min_ratio),
            max_ratio: Real(c.max_ratio),
            holds: c.holds,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosednessOut {
    pub c_low: Real,
    pub c_high: Real,
    pub n_checked: usize,
    pub floor: Real,
    pub generator_side: bool,
    pub ine1_side: bool,
    pub ine1_delta: Real,
    pub consistent: bool,
}

impl From<&Closedness> for ClosednessOut {
    fn from(c: &Closedness) -> Self {
        Self {
            c_low: Real(c.c_low),
            c_high: Real(c.c_high),
            n_checked: c.n_checked,
            floor: Real(c.floor),
            generator_side: c.generator_side,
            ine1_side: c.ine1_side,
            ine1_delta: Real(c.ine1_delta),
            consistent: c.consistent,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructureOut {
    pub vanishing_order: usize,
    pub wandering_dim: usize,
    pub b: Vec<Cplx>,
    pub generator_norms: Vec<Real>,
    pub shift_weights: Vec<Real>,
    pub orthogonality_residual: Real,
    pub span_rank: usize,
    pub density_holds: bool,
    pub decomposition_depth: usize,
    pub decomposition_residual: Real,
    pub contraction_margin: Real,
    pub contraction: ContractionOut,
    pub closedness: ClosednessOut,
}

impl From<&StructureReport> for StructureOut {
    fn from(s: &StructureReport) -> Self {
        Self {
            vanishing_order: s.vanishing_order,
            wandering_dim: s.wandering_dim,
            b: coeffs(&s.b),
            generator_norms: reals(&s.generator_norms),
            shift_weights: reals(&s.shift_weights),
            orthogonality_residual: Real(s.orthogonality_residual),
            span_rank: s.span_rank,
            density_holds: s.density_holds,
            decomposition_depth: s.decomposition_depth,
            decomposition_residual: Real(s.decomposition_residual),
            contraction_margin: Real(s.contraction_margin),
            contraction: (&s.contraction).into(),
            closedness: (&s.closedness).into(),
        }
    }
}

/// Outcome of the structure stage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Stage {
    Completed(Box<StructureOut>),
    /// Hypotheses failed, so the stage did not run.
    Skipped { reason: String },
    /// The stage ran and could not produce a generator.
    Failed { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Settings {
    pub n_max: usize,
    pub tol: Real,
    pub seed: u64,
    pub strict: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub theorem_hypotheses: bool,
    pub strict_checks: bool,
    pub exit_code: u8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema: u32,
    pub source: String,
    pub kind: String,
    pub ambient_dim: usize,
    pub dim: usize,
    pub settings: Settings,
    pub hypotheses: HypothesesOut,
    pub structure: Stage,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactOut {
    pub fact: String,
    pub origin: String,
    pub status: String,
    pub observed: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntryOut {
    pub name: String,
    pub dim: usize,
    pub passed: bool,
    pub facts: Vec<FactOut>,
}

impl From<&EntryCheck> for EntryOut {
    fn from(e: &EntryCheck) -> Self {
        Self {
            name: e.name.to_string(),
            dim: e.dim,
            passed: e.passed(),
            facts: e
                .outcomes
                .iter()
                .map(|o| FactOut {
                    fact: o.fact.fact.to_string(),
                    origin: o.fact.origin.to_string(),
                    status: match o.status {
                        FactStatus::Pass => "pass",
                        FactStatus::Fail => "fail",
                        FactStatus::Skipped => "skipped",
                    }
                    .to_string(),
                    observed: o.observed.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema: u32,
    pub passed: bool,
    pub entries: Vec<EntryOut>,
}
