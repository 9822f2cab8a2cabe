//! Weighted Hardy spaces, the shift operator `T_z` on subspaces of `H²`,
//! and a constructive check of when such a subspace is `b·H²` for a single
//! generator `b`.
//!
//! A space lives in a window of `D` Taylor coefficients. [`DiagonalSpace`]
//! is `H²(β)` with `⟨f, g⟩ = Σ α_n γ̄_n β_n²`; [`GramSpace`] is a span of
//! coefficient vectors with an arbitrary positive-definite Gram matrix.
//!
//! ```
//! use subhardy::catalog;
//! use subhardy::{AnalysisOptions, HypothesisReport};
//!
//! let op = catalog::builtin("paper-alternating", 32)?.operator()?;
//! let report = HypothesisReport::evaluate(&op, &AnalysisOptions::default())?;
//! assert!(report.theorem_hypotheses_hold());
//! assert!(!report.shimorin_1.holds);
//! # Ok::<(), subhardy::Error>(())
//! ```

pub mod catalog;
pub mod coeff;
pub mod error;
pub mod hypothesis;
mod linalg;
pub mod options;
pub mod shift;
pub mod space;
pub mod structure;
pub mod weights;

pub use coeff::CoeffVector;
pub use error::{Error, Result};
pub use hypothesis::HypothesisReport;
pub use options::{AnalysisOptions, Tolerances};
pub use shift::OperatorOnSpace;
pub use space::{DiagonalSpace, GeneratorMetric, GramSpace, InnerProductSpace};
pub use structure::{extract_generator, StructureReport};
pub use weights::{beta_from_weights, weights_from_beta, WeightSequence};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/spaces.md")]
    mod spaces {}
    #[doc = include_str!("../../../book/src/hypotheses.md")]
    mod hypotheses {}
    #[doc = include_str!("../../../book/src/structure.md")]
    mod structure {}
    #[doc = include_str!("../../../book/src/vanishing.md")]
    mod vanishing {}
    #[doc = include_str!("../../../book/src/catalog.md")]
    mod catalog {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../book/src/testing.md")]
    mod testing {}
}

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}
