//! Randomized equality of expressions by residues modulo random primes.
//!
//! If `lhs != rhs` the difference `D` is a nonzero integer below `2^B`, so at
//! most `B` primes divide it. Drawing the modulus uniformly from the primes up
//! to `R`, where `R` is the smallest value with `pi(R) >= 10 * B` certified by
//! [`prime_count_lower_bound`], makes a single trial miss with probability at
//! most 1/10. An `Unequal` verdict is never wrong.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;

use super::ast::{Expr, SizeBound};
use super::eval::eval_mod;
use super::ExprError;
use crate::numtheory::{prime_count_lower_bound, random_prime};

/// Miss probability of one trial.
pub fn per_trial_error() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(10))
}

/// Bad moduli per prime in range: `pi(R) >= MODULI_PER_BAD_PRIME * B`.
const MODULI_PER_BAD_PRIME: u128 = 10;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EqVerdict {
    /// Certified: the residues modulo `witness_modulus` differ.
    Unequal {
        witness_modulus: u64,
        lhs_residue: u64,
        rhs_residue: u64,
    },
    ProbablyEqual {
        #[serde(serialize_with = "crate::serde_ratio")]
        error_bound: BigRational,
        trials: u32,
    },
}

impl EqVerdict {
    pub fn is_unequal(&self) -> bool {
        matches!(self, EqVerdict::Unequal { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EqReport {
    pub verdict: EqVerdict,
    /// Random prime trials performed; the parity check is not counted.
    pub trials_run: u32,
    /// Upper end `R` of the modulus range.
    pub modulus_range: u64,
    pub size_bound_bits: u128,
    pub decided_by_parity: bool,
}

/// `p^k`, exactly.
pub fn amplified_error(p: &BigRational, k: u32) -> Result<BigRational, ExprError> {
    if p <= &BigRational::zero() || p >= &BigRational::one() {
        return Err(ExprError::InvalidParameter(format!(
            "per-trial error must lie in (0, 1), got {p}"
        )));
    }
    if k == 0 {
        return Err(ExprError::InvalidParameter("k must be at least 1".into()));
    }
    Ok(Pow::pow(p, k))
}

/// Certified `Unequal` when the two sides have different parity.
pub fn parity_precheck(lhs: &Expr, rhs: &Expr) -> Option<EqVerdict> {
    let (l, r) = (eval_mod(lhs, 2), eval_mod(rhs, 2));
    (l != r).then_some(EqVerdict::Unequal {
        witness_modulus: 2,
        lhs_residue: l,
        rhs_residue: r,
    })
}

/// Smallest `R >= 17` whose certified prime count covers `10 * bound.bits`.
pub fn modulus_range(bound: SizeBound) -> Result<u64, ExprError> {
    let need = bound.bits.max(1).saturating_mul(MODULI_PER_BAD_PRIME);
    let enough = |r: u64| prime_count_lower_bound(r).map(|c| c as u128 >= need).unwrap_or(false);
    if !enough(u64::MAX) {
        return Err(ExprError::ModulusRangeTooLarge { bound_bits: bound.bits });
    }
    let mut hi = 17u64;
    while !enough(hi) {
        hi = hi.saturating_mul(2);
    }
    let mut lo = hi / 2;
    if lo < 17 {
        return Ok(hi);
    }
    // enough(lo) is false, enough(hi) is true
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if enough(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// One fingerprint comparison at a prime drawn uniformly from `[2, range]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Trial {
    pub modulus: u64,
    pub lhs_residue: u64,
    pub rhs_residue: u64,
}

impl Trial {
    pub fn agrees(&self) -> bool {
        self.lhs_residue == self.rhs_residue
    }
}

pub fn single_trial<R: Rng + ?Sized>(
    lhs: &Expr,
    rhs: &Expr,
    range: u64,
    rng: &mut R,
) -> Result<Trial, ExprError> {
    let p = random_prime(&BigUint::from(2u8), &BigUint::from(range), rng)?
        .to_u64()
        .expect("prime within u64 range");
    Ok(Trial {
        modulus: p,
        lhs_residue: eval_mod(lhs, p),
        rhs_residue: eval_mod(rhs, p),
    })
}

/// Configurable equality test.
///
/// At least `trials` random prime trials are run; if the accumulated bound
/// `(1/10)^trials` is still above `target_error`, trials continue up to
/// `max_trials`, after which the test reports failure instead of a verdict.
#[derive(Debug, Clone)]
pub struct EqualityTest {
    pub trials: u32,
    pub target_error: f64,
    pub max_trials: u32,
    pub parity_precheck: bool,
}

impl Default for EqualityTest {
    fn default() -> Self {
        Self {
            trials: 10,
            target_error: 1e-9,
            max_trials: 1000,
            parity_precheck: true,
        }
    }
}

impl EqualityTest {
    pub fn new(trials: u32, target_error: f64) -> Self {
        Self {
            trials,
            target_error,
            ..Self::default()
        }
    }

    pub fn with_parity_precheck(mut self, on: bool) -> Self {
        self.parity_precheck = on;
        self
    }

    pub fn with_max_trials(mut self, max_trials: u32) -> Self {
        self.max_trials = max_trials;
        self
    }

    pub fn run<R: Rng + ?Sized>(
        &self,
        lhs: &Expr,
        rhs: &Expr,
        rng: &mut R,
    ) -> Result<EqReport, ExprError> {
        if self.trials == 0 {
            return Err(ExprError::InvalidParameter("trials must be at least 1".into()));
        }
        if !(self.target_error > 0.0 && self.target_error < 1.0) {
            return Err(ExprError::InvalidParameter(format!(
                "target error must lie in (0, 1), got {}",
                self.target_error
            )));
        }
        let target = BigRational::from_float(self.target_error).expect("finite target");
        let bound = SizeBound::of_difference(lhs, rhs);
        let range = modulus_range(bound)?;
        let report = |verdict, trials_run, by_parity| EqReport {
            verdict,
            trials_run,
            modulus_range: range,
            size_bound_bits: bound.bits,
            decided_by_parity: by_parity,
        };

        if self.parity_precheck {
            if let Some(v) = parity_precheck(lhs, rhs) {
                return Ok(report(v, 0, true));
            }
        }

        let per_trial = per_trial_error();
        let mut error_bound = BigRational::one();
        let mut run = 0u32;
        while run < self.trials.max(1) || error_bound > target {
            if run >= self.max_trials.max(self.trials) {
                return Err(ExprError::TrialBudgetExhausted {
                    trials_run: run,
                    error_bound: error_bound.to_f64().unwrap_or(0.0),
                    target_error: self.target_error,
                });
            }
            let t = single_trial(lhs, rhs, range, rng)?;
            run += 1;
            if !t.agrees() {
                return Ok(report(
                    EqVerdict::Unequal {
                        witness_modulus: t.modulus,
                        lhs_residue: t.lhs_residue,
                        rhs_residue: t.rhs_residue,
                    },
                    run,
                    false,
                ));
            }
            error_bound *= &per_trial;
        }
        Ok(report(
            EqVerdict::ProbablyEqual {
                error_bound,
                trials: run,
            },
            run,
            false,
        ))
    }
}

/// [`EqualityTest`] with the parity pre-check on and a 1000-trial budget.
pub fn equality_test<R: Rng + ?Sized>(
    lhs: &Expr,
    rhs: &Expr,
    trials: u32,
    target_error: f64,
    rng: &mut R,
) -> Result<EqReport, ExprError> {
    EqualityTest::new(trials, target_error).run(lhs, rhs, rng)
}
