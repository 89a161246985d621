//! Randomized primality, random primes and trial-division factoring.
//!
//! [`miller_rabin`] reports a re-checkable [`CompositeWitness`] or a
//! `4^-rounds` error bound. [`random_prime`] feeds the fingerprint moduli used
//! by [`crate::exprlang`]. [`trial_division_factor`] is the slow baseline:
//! it is instant on small inputs and times out on products of large primes.

mod factor;
mod primality;
pub mod sieve;

use thiserror::Error;

pub use factor::{trial_division_factor, Timeout};
pub use primality::{
    miller_rabin, prime_count_lower_bound, random_prime, rounds_error_bound, CompositeWitness,
    PrimalityVerdict, DEFAULT_ROUNDS, SMALL_PRIMES,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumError {
    #[error("expected an integer >= 2, got {0}")]
    BelowTwo(String),
    #[error("at least one round is required")]
    ZeroRounds,
    #[error("no prime in [{lo}, {hi}]")]
    NoPrimeInRange { lo: String, hi: String },
    #[error("prime count bound needs R >= 17, got {0}")]
    BoundDomain(u64),
    #[error(
        "trial division budget exhausted after {} candidates; cofactor {} remains",
        .0.candidates_tried,
        .0.remaining
    )]
    Timeout(Box<Timeout>),
}
