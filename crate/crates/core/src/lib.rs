//! # coinkit
//!
//! Randomized algorithms, each paired with an exact brute-force oracle so
//! that its probabilistic guarantee can be checked directly at small scale.
//!
//! | module | procedure | oracle |
//! |---|---|---|
//! | [`exprlang`] | equality of huge expressions by residues at random primes | exact big-integer evaluation |
//! | [`numtheory`] | Miller–Rabin, random primes, trial division | sieve, trial division |
//! | [`pairwise`] | `k` seed bits to `2^k - 1` pairwise independent bits | enumeration of all seeds |
//! | [`extractor`] | Toeplitz hashing of weak sources, seed-enumeration generator | exact output distributions |
//! | [`sampling`] | Monte Carlo area, polling, sample-size calculators | repeated-run coverage |
//! | [`loadbalance`] | random task placement | exact load conservation |
//!
//! Every randomized entry point takes `&mut impl Rng`; [`seed::SeedStream`]
//! derives independent reproducible streams from one hex seed.
//!
//! ## Running the examples
//!
//! ```bash
//! cargo run --release --example expression_equality
//! cargo run --release --example primality
//! cargo run --release --example pairwise_bits
//! cargo run --release --example extractor
//! cargo run --release --example seed_enumeration
//! cargo run --release --example leaked_key
//! cargo run --release --example area_estimate
//! cargo run --release --example polling
//! cargo run --release --example load_balance
//! ```
//!
//! The `coinkit` binary exposes the same procedures as subcommands; see
//! [`cli`].

pub mod bits;
pub mod cli;
pub mod exprlang;
pub mod extractor;
pub mod loadbalance;
pub mod numtheory;
pub mod pairwise;
pub mod sampling;
pub mod seed;

pub use bits::BitString;
pub use seed::SeedStream;

/// Serializes an exact rational as `"num/den"`.
pub(crate) fn serde_ratio<S: serde::Serializer>(
    r: &num_rational::BigRational,
    s: S,
) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}
