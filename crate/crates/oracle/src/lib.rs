//! Slow, independent reference computations for small spaces.
//!
//! Nothing here calls into the decompositions used by `subhardy`. Only the
//! raw data of a space is read: basis coefficients and the Gram matrix.
//! The shift matrix is rebuilt from the normal equations and the adjoint
//! from a dense solve. Quantified inequalities are checked by sampling.

mod dense;
mod model;

pub use model::{
    oracle_adjoint, oracle_cond_ii, oracle_cond_ii_scalar, oracle_margin, oracle_quantifier, Inequality, OracleError,
    QuantifierVerdict, SamplingPlan, ScalarIdentity, ADJOINT_DIM_CAP, QUANTIFIER_DIM_CAP,
};
