use num_bigint::{BigInt, BigUint, RandBigInt};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use super::NumError;

/// Rounds used when a caller does not choose.
pub const DEFAULT_ROUNDS: u32 = 40;

/// Primes below 100, tried as divisors before any random base.
pub const SMALL_PRIMES: [u32; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
    97,
];

/// Evidence that a number is composite. Either form can be re-checked with
/// [`CompositeWitness::certifies`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CompositeWitness {
    /// A nontrivial divisor.
    Divisor(BigUint),
    /// A base for which the strong probable-prime test fails.
    Base(BigUint),
}

impl CompositeWitness {
    pub fn certifies(&self, n: &BigUint) -> bool {
        match self {
            CompositeWitness::Divisor(d) => d > &BigUint::one() && d < n && (n % d).is_zero(),
            CompositeWitness::Base(a) => {
                n > &BigUint::from(4u8)
                    && n.is_odd()
                    && a >= &BigUint::from(2u8)
                    && a < &(n - 1u8)
                    && !is_strong_probable_prime(n, a)
            }
        }
    }

    pub fn value(&self) -> &BigUint {
        match self {
            CompositeWitness::Divisor(v) | CompositeWitness::Base(v) => v,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrimalityVerdict {
    Composite { witness: CompositeWitness },
    ProbablyPrime { error_bound: BigRational, rounds: u32 },
}

impl PrimalityVerdict {
    pub fn is_probably_prime(&self) -> bool {
        matches!(self, PrimalityVerdict::ProbablyPrime { .. })
    }
}

/// `4^-rounds`.
pub fn rounds_error_bound(rounds: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(4u8).pow(rounds))
}

/// Strong probable-prime test of odd `n > 3` to base `a`.
pub(crate) fn is_strong_probable_prime(n: &BigUint, a: &BigUint) -> bool {
    let n_minus_1 = n - 1u8;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let mut x = a.modpow(&d, n);
    if x.is_one() || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = x.modpow(&BigUint::from(2u8), n);
        if x == n_minus_1 {
            return true;
        }
        if x.is_one() {
            return false;
        }
    }
    false
}

/// Miller–Rabin with `rounds` uniformly random bases from `[2, n - 2]`.
///
/// Primes are never reported composite. A composite passes all rounds with
/// probability at most `4^-rounds`, which is the reported error bound.
pub fn miller_rabin<R: Rng + ?Sized>(
    n: &BigUint,
    rounds: u32,
    rng: &mut R,
) -> Result<PrimalityVerdict, NumError> {
    if n < &BigUint::from(2u8) {
        return Err(NumError::BelowTwo(n.to_string()));
    }
    if rounds == 0 {
        return Err(NumError::ZeroRounds);
    }
    let probably_prime = PrimalityVerdict::ProbablyPrime {
        error_bound: rounds_error_bound(rounds),
        rounds,
    };
    for &p in &SMALL_PRIMES {
        let p = BigUint::from(p);
        if n == &p {
            return Ok(probably_prime);
        }
        if (n % &p).is_zero() {
            return Ok(PrimalityVerdict::Composite {
                witness: CompositeWitness::Divisor(p),
            });
        }
    }
    // Every composite below 100^2 has a factor below 100.
    if n < &BigUint::from(10_000u32) {
        return Ok(probably_prime);
    }
    Ok(match random_base_rounds(n, rounds, rng) {
        Some(a) => PrimalityVerdict::Composite {
            witness: CompositeWitness::Base(a),
        },
        None => probably_prime,
    })
}

/// The randomized core: up to `rounds` strong tests of odd `n > 4`, returning
/// the first failing base.
fn random_base_rounds<R: Rng + ?Sized>(n: &BigUint, rounds: u32, rng: &mut R) -> Option<BigUint> {
    let lo = BigUint::from(2u8);
    let hi = n - 1u8;
    (0..rounds)
        .map(|_| rng.gen_biguint_range(&lo, &hi))
        .find(|a| !is_strong_probable_prime(n, a))
}

pub(crate) fn is_probable_prime<R: Rng + ?Sized>(n: &BigUint, rounds: u32, rng: &mut R) -> bool {
    n >= &BigUint::from(2u8)
        && miller_rabin(n, rounds, rng)
            .map(|v| v.is_probably_prime())
            .unwrap_or(false)
}

const SCAN_LIMIT: u64 = 1 << 20;

/// A prime drawn uniformly (up to Miller–Rabin error) from the primes in
/// `[lo, hi]` by rejection sampling with 40-round tests.
///
/// After a retry budget of `64 * (bits(hi) + 1)` draws the range is scanned
/// deterministically: short ranges are enumerated and a prime is picked
/// uniformly from the full list; long ranges are walked from a random start.
pub fn random_prime<R: Rng + ?Sized>(
    lo: &BigUint,
    hi: &BigUint,
    rng: &mut R,
) -> Result<BigUint, NumError> {
    let lo = lo.max(&BigUint::from(2u8)).clone();
    if &lo > hi {
        return Err(NumError::NoPrimeInRange {
            lo: lo.to_string(),
            hi: hi.to_string(),
        });
    }
    let upper = hi + 1u8;
    let budget = 64 * (hi.bits() + 1);
    for _ in 0..budget {
        let candidate = rng.gen_biguint_range(&lo, &upper);
        if is_probable_prime(&candidate, DEFAULT_ROUNDS, rng) {
            return Ok(candidate);
        }
    }
    scan_for_prime(&lo, hi, rng)
}

fn scan_for_prime<R: Rng + ?Sized>(
    lo: &BigUint,
    hi: &BigUint,
    rng: &mut R,
) -> Result<BigUint, NumError> {
    let width = hi - lo + 1u8;
    let none = || NumError::NoPrimeInRange {
        lo: lo.to_string(),
        hi: hi.to_string(),
    };
    if width.to_u64().is_some_and(|w| w <= SCAN_LIMIT) {
        let mut found = Vec::new();
        let mut k = lo.clone();
        while &k <= hi {
            if is_probable_prime(&k, DEFAULT_ROUNDS, rng) {
                found.push(k.clone());
            }
            k += 1u8;
        }
        if found.is_empty() {
            return Err(none());
        }
        let pick = rng.gen_range(0..found.len());
        return Ok(found.swap_remove(pick));
    }
    let start = rng.gen_biguint_range(lo, &(hi + 1u8));
    let mut k = start.clone();
    loop {
        if is_probable_prime(&k, DEFAULT_ROUNDS, rng) {
            return Ok(k);
        }
        k = if &k == hi { lo.clone() } else { k + 1u8 };
        if k == start {
            return Err(none());
        }
    }
}

/// Certified lower bound on the number of primes `<= r`, from
/// `pi(x) > x / ln x` for `x >= 17`. The logarithm is rounded up so the
/// floating-point quotient never overshoots.
pub fn prime_count_lower_bound(r: u64) -> Result<u64, NumError> {
    if r < 17 {
        return Err(NumError::BoundDomain(r));
    }
    let x = r as f64;
    let ln = x.ln() * (1.0 + 1e-12);
    Ok((x / ln).floor() as u64)
}
