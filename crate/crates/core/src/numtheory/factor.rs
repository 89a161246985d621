use super::sieve::Primes;
use super::NumError;

/// Outcome of trial division when the candidate budget runs out first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Timeout {
    /// Prime factors found so far, ascending.
    pub partial: Vec<u128>,
    /// Cofactor still to be split.
    pub remaining: u128,
    pub candidates_tried: u64,
}

/// Divide successive primes 2, 3, 5, 7, ... into `n`.
///
/// `budget` bounds the number of prime candidates divided in. Returns the
/// complete factorization with multiplicity in ascending order, or the
/// partial result if the budget runs out first.
pub fn trial_division_factor(n: u128, budget: u64) -> Result<Vec<u128>, NumError> {
    if n < 2 {
        return Err(NumError::BelowTwo(n.to_string()));
    }
    let mut remaining = n;
    let mut factors = Vec::new();
    let mut tried = 0u64;
    for p in Primes::new() {
        let p = p as u128;
        if p * p > remaining {
            break;
        }
        if tried == budget {
            return Err(NumError::Timeout(Box::new(Timeout {
                partial: factors,
                remaining,
                candidates_tried: tried,
            })));
        }
        tried += 1;
        while remaining % p == 0 {
            factors.push(p);
            remaining /= p;
        }
    }
    if remaining > 1 {
        factors.push(remaining);
    }
    Ok(factors)
}
