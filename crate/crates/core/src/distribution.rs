//! Exact weight vectors over an enumerated state space.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Nonnegative rational weights over an ordered state space.
///
/// `normalization` is the total the weights are meant to sum to; for steady
/// states of a sector `m` it is `#B(m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distribution<S> {
    space: Vec<S>,
    weights: Vec<BigRational>,
    normalization: BigInt,
}

impl<S: PartialEq> Distribution<S> {
    /// Fails if the lengths differ or some weight is negative.
    pub fn new(space: Vec<S>, weights: Vec<BigRational>, normalization: BigInt) -> Result<Self> {
        if space.len() != weights.len() {
            return Err(Error::LengthMismatch { left: space.len(), right: weights.len() });
        }
        if weights.iter().any(Signed::is_negative) {
            return Err(Error::Unsupported("negative weight".into()));
        }
        Ok(Distribution { space, weights, normalization })
    }

    /// Integer weights; the normalization is their sum.
    #[must_use]
    pub fn from_integers(space: Vec<S>, weights: Vec<BigInt>) -> Self {
        assert_eq!(space.len(), weights.len());
        let normalization = weights.iter().sum();
        let weights = weights.into_iter().map(BigRational::from_integer).collect();
        Distribution { space, weights, normalization }
    }

    #[must_use]
    pub fn space(&self) -> &[S] {
        &self.space
    }

    #[must_use]
    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    #[must_use]
    pub fn normalization(&self) -> &BigInt {
        &self.normalization
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.space.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }

    #[must_use]
    pub fn total(&self) -> BigRational {
        self.weights.iter().sum()
    }

    /// Weight of a state (linear search).
    #[must_use]
    pub fn weight_of(&self, s: &S) -> Option<&BigRational> {
        self.space.iter().position(|t| t == s).map(|i| &self.weights[i])
    }

    /// Weights as integers, if they all are.
    #[must_use]
    pub fn integer_weights(&self) -> Option<Vec<BigInt>> {
        self.weights
            .iter()
            .map(|w| w.is_integer().then(|| w.to_integer()))
            .collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&S, &BigRational)> {
        self.space.iter().zip(&self.weights)
    }
}

/// Total-variation distance `½ Σ |p_i − q_i|` after normalizing both to 1.
pub fn tv_distance<S: PartialEq>(d1: &Distribution<S>, d2: &Distribution<S>) -> Result<BigRational> {
    if d1.space != d2.space {
        return Err(Error::LengthMismatch { left: d1.len(), right: d2.len() });
    }
    let (t1, t2) = (d1.total(), d2.total());
    if t1.is_zero() || t2.is_zero() {
        return Err(Error::Unsupported("distribution with zero total".into()));
    }
    let sum: BigRational = d1
        .weights
        .iter()
        .zip(&d2.weights)
        .map(|(p, q)| (p / &t1 - q / &t2).abs())
        .sum();
    Ok(sum / BigRational::from_integer(2.into()))
}
