use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ExtractError;

/// Exact probabilities over the `2^m` values of an `m`-bit string, indexed by
/// integer value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactDistribution {
    bits: usize,
    probs: Vec<BigRational>,
}

/// Outcome spaces above this size are refused.
pub const MAX_OUTCOME_BITS: usize = 20;

impl ExactDistribution {
    pub fn from_probs(bits: usize, probs: Vec<BigRational>) -> Result<Self, ExtractError> {
        if bits > MAX_OUTCOME_BITS {
            return Err(ExtractError::EnumerationBudget {
                bits,
                max: MAX_OUTCOME_BITS,
            });
        }
        if probs.len() != 1 << bits {
            return Err(ExtractError::NotADistribution(format!(
                "{} probabilities for a {bits}-bit space",
                probs.len()
            )));
        }
        if probs.iter().any(|p| p.is_negative()) {
            return Err(ExtractError::NotADistribution("negative probability".into()));
        }
        let total: BigRational = probs.iter().sum();
        if !total.is_one() {
            return Err(ExtractError::NotADistribution(format!("total mass {total}")));
        }
        Ok(Self { bits, probs })
    }

    /// Normalizes outcome counts.
    pub fn from_counts(bits: usize, counts: &[u64]) -> Result<Self, ExtractError> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(ExtractError::NotADistribution("no mass".into()));
        }
        let total = BigInt::from(total);
        Self::from_probs(
            bits,
            counts
                .iter()
                .map(|&c| BigRational::new(BigInt::from(c), total.clone()))
                .collect(),
        )
    }

    pub fn uniform(bits: usize) -> Self {
        Self::from_counts(bits, &vec![1; 1 << bits]).expect("valid uniform")
    }

    pub fn point_mass(bits: usize, outcome: usize) -> Self {
        let mut counts = vec![0; 1 << bits];
        counts[outcome] = 1;
        Self::from_counts(bits, &counts).expect("valid point mass")
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn prob(&self, outcome: usize) -> &BigRational {
        &self.probs[outcome]
    }

    pub fn probs(&self) -> &[BigRational] {
        &self.probs
    }

    /// `-log2 max_x p(x)`.
    pub fn min_entropy(&self) -> f64 {
        let max = self.probs.iter().max().expect("nonempty");
        -max.to_f64().expect("finite").log2()
    }
}

/// Half the L1 distance, exactly.
pub fn statistical_distance(
    a: &ExactDistribution,
    b: &ExactDistribution,
) -> Result<BigRational, ExtractError> {
    if a.bits != b.bits {
        return Err(ExtractError::SpaceMismatch {
            left: a.bits,
            right: b.bits,
        });
    }
    let sum: BigRational = a
        .probs
        .iter()
        .zip(&b.probs)
        .map(|(x, y)| (x - y).abs())
        .sum();
    Ok(sum / BigRational::from_integer(BigInt::from(2)))
}

/// Distance of `counts / total` from uniform on `2^m` outcomes as the pair
/// `(numerator, denominator)`, numerator `sum |c * 2^m - total|` and
/// denominator `2 * total * 2^m`.
pub(crate) fn distance_from_uniform_counts(counts: &[u64], total: u64) -> (u128, u128) {
    let outcomes = counts.len() as u128;
    let num = counts
        .iter()
        .map(|&c| (c as u128 * outcomes).abs_diff(total as u128))
        .sum();
    (num, 2 * total as u128 * outcomes)
}

pub(crate) fn ratio(num: u128, den: u128) -> BigRational {
    if num.is_zero() {
        return BigRational::zero();
    }
    BigRational::new(BigInt::from(num), BigInt::from(den))
}
