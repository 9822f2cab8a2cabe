//! Weight sequences `β_n` and the shift weights `w_n = β_{n+1}/β_n` they induce.
//!
//! The two views are interchangeable: `β_0 = 1, β_n = w_0 ⋯ w_{n-1}`.
//! Inputs are not required to be normalized; [`WeightSequence::from_shift_weights`]
//! always produces `β_0 = 1`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct WeightSequence {
    beta: Vec<f64>,
}

impl WeightSequence {
    pub fn new(beta: Vec<f64>) -> Result<Self> {
        if beta.is_empty() {
            return Err(Error::Empty);
        }
        check_positive(&beta)?;
        Ok(Self { beta })
    }

    /// `β ≡ value` of length `dim`.
    pub fn constant(value: f64, dim: usize) -> Result<Self> {
        Self::new(vec![value; dim])
    }

    /// Build `β` from shift weights with `β_0 = 1`. The result has one more
    /// entry than `weights`.
    pub fn from_shift_weights(weights: &[f64]) -> Result<Self> {
        check_positive(weights)?;
        let mut beta = Vec::with_capacity(weights.len() + 1);
        let mut acc = 1.0;
        beta.push(acc);
        for w in weights {
            acc *= w;
            beta.push(acc);
        }
        Self::new(beta)
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    pub fn len(&self) -> usize {
        self.beta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.beta.is_empty()
    }

    /// `w_n = β_{n+1}/β_n` for `0 ≤ n ≤ D-2`.
    pub fn shift_weights(&self) -> Vec<f64> {
        self.beta.windows(2).map(|p| p[1] / p[0]).collect()
    }

    /// Rescale so that `β_0 = 1`.
    pub fn normalized(&self) -> Self {
        let b0 = self.beta[0];
        Self { beta: self.beta.iter().map(|b| b / b0).collect() }
    }
}

/// Shift weights of `beta`.
pub fn weights_from_beta(beta: &WeightSequence) -> Vec<f64> {
    beta.shift_weights()
}

/// `β_0 = 1, β_n = w_0 ⋯ w_{n-1}`.
pub fn beta_from_weights(weights: &[f64]) -> Result<WeightSequence> {
    WeightSequence::from_shift_weights(weights)
}

fn check_positive(values: &[f64]) -> Result<()> {
    match values.iter().position(|&b| !(b.is_finite() && b > 0.0)) {
        Some(index) => Err(Error::NonPositiveWeight { index, value: values[index] }),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_weights() {
        let b = WeightSequence::constant(1.0, 5).unwrap();
        assert_eq!(b.shift_weights(), vec![1.0; 4]);
        let back = WeightSequence::from_shift_weights(&[1.0; 4]).unwrap();
        assert_eq!(back.beta(), &[1.0; 5]);
    }

    #[test]
    fn alternating_weights() {
        let b = WeightSequence::new(vec![1.0, 1.0, 0.5, 0.5, 0.25]).unwrap();
        assert_eq!(b.shift_weights(), vec![1.0, 0.5, 1.0, 0.5]);
        let back = WeightSequence::from_shift_weights(&[1.0, 0.5, 1.0, 0.5]).unwrap();
        assert_eq!(back.beta(), &[1.0, 1.0, 0.5, 0.5, 0.25]);
    }

    #[test]
    fn cumulative_product() {
        let b = WeightSequence::from_shift_weights(&[2.0, 2.0]).unwrap();
        assert_eq!(b.beta(), &[1.0, 2.0, 4.0]);
    }

    #[test]
    fn first_weight_of_the_n3_sequence() {
        let beta: Vec<f64> = (0..4).map(|n| ((n + 3) as f64).powf(1.0 / (n + 3) as f64)).collect();
        let w = WeightSequence::new(beta).unwrap().shift_weights();
        let expected = 4f64.powf(0.25) / 3f64.powf(1.0 / 3.0);
        assert!((w[0] - expected).abs() < 1e-15);
        assert!((w[0] - 0.98056).abs() < 1e-5);
    }

    #[test]
    fn rejects_non_positive() {
        assert_eq!(
            WeightSequence::new(vec![1.0, 0.0]),
            Err(Error::NonPositiveWeight { index: 1, value: 0.0 })
        );
        assert!(WeightSequence::from_shift_weights(&[1.0, -2.0]).is_err());
        assert!(WeightSequence::new(vec![f64::INFINITY]).is_err());
    }
}
