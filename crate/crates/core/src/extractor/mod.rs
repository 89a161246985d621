//! Randomness extraction from bit-fixing sources with Toeplitz hashing.
//!
//! * [`ToeplitzExtractor`]: a GF(2)-linear map from `n` source bits to `m`
//!   output bits, keyed by `n + m - 1` seed bits.
//! * [`BitFixingSource`]: the weak source; min-entropy is the number of free
//!   positions.
//! * [`exact_output_distribution`] and [`statistical_distance`]: the exact
//!   oracle, by enumerating every source value.
//! * [`seed_averaged_distance`]: average and worst-case distance from uniform
//!   over seeds, compared against [`leftover_hash_bound`];
//!   [`seed_averaged_distance_by_rank`] gets the same numbers from the rank
//!   of the free columns.
//! * [`enumerate_prg`]: one source sample, every seed, one output per seed.
//! * [`key_recover`]: the leaked-key scenario.
//!
//! The seed here is longer than the source. Short-seed constructions are not
//! implemented.
//!
//! Bits versus digits: one decimal digit carries `log2 10 ≈ 3.32` bits.

mod analysis;
mod distribution;
mod key;
mod source;
mod toeplitz;

use thiserror::Error;

pub use analysis::{
    enumerate_prg, exact_output_distribution, leftover_hash_bound,
    push_forward, seed_averaged_distance, seed_averaged_distance_by_rank, SeedAverage, SeedSet,
    MAX_ENUMERATION_BITS,
};
pub use distribution::{statistical_distance, ExactDistribution, MAX_OUTCOME_BITS};
pub use key::{
    achievable_output, adversary_source, adversary_view, adversary_view_for_seed, key_recover,
    KEY_SLACK_BITS,
};
pub use source::{sample_source, BitFixingSource};
pub use toeplitz::{extract, ToeplitzExtractor};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtractError {
    #[error("expected {expected} input bits, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("need 1 <= m <= n, got n={n} m={m}")]
    InvalidShape { n: usize, m: usize },
    #[error("expected a {expected}-bit seed, got {got} bits")]
    SeedLength { expected: usize, got: usize },
    #[error("enumerating {bits} bits exceeds the {max}-bit budget")]
    EnumerationBudget { bits: usize, max: usize },
    #[error("position {pos} outside a {n}-bit string")]
    PositionOutOfRange { pos: usize, n: usize },
    #[error("outcome spaces differ: {left} vs {right} bits")]
    SpaceMismatch { left: usize, right: usize },
    #[error("not a probability distribution: {0}")]
    NotADistribution(String),
    #[error("{requested} output bits requested but at most {achievable} are safe for this leakage")]
    OutputTooLong { requested: usize, achievable: usize },
}
