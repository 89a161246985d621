//! Turning a partly leaked shared key into a shorter key the eavesdropper
//! knows almost nothing about.
//!
//! From the eavesdropper's side the key is a bit-fixing source: leaked
//! positions are known, the rest uniform. Both parties hash the key with the
//! same public Toeplitz seed. Keeping the output [`KEY_SLACK_BITS`] below the
//! unleaked length caps the seed-averaged distance from uniform at
//! `0.5 * 2^-2 = 0.125`.

use std::collections::BTreeSet;

use num_rational::BigRational;

use crate::bits::BitString;

use super::analysis::{
    exact_output_distribution, seed_averaged_distance_by_rank, SeedAverage, SeedSet,
};
use super::{BitFixingSource, ExactDistribution, ExtractError, ToeplitzExtractor};

pub const KEY_SLACK_BITS: usize = 4;

fn leaked_set(key_len: usize, leaked: &[usize]) -> Result<BTreeSet<usize>, ExtractError> {
    let set: BTreeSet<usize> = leaked.iter().copied().collect();
    if let Some(&pos) = set.iter().find(|&&p| p >= key_len) {
        return Err(ExtractError::PositionOutOfRange { pos, n: key_len });
    }
    Ok(set)
}

/// Longest output accepted for a key of `key_len` bits with these leaks.
pub fn achievable_output(key_len: usize, leaked: &[usize]) -> Result<usize, ExtractError> {
    let set = leaked_set(key_len, leaked)?;
    Ok((key_len - set.len()).saturating_sub(KEY_SLACK_BITS))
}

/// The eavesdropper's view of the key.
pub fn adversary_source(shared_key: &BitString, leaked: &[usize]) -> Result<BitFixingSource, ExtractError> {
    let set = leaked_set(shared_key.len(), leaked)?;
    BitFixingSource::new(
        (0..shared_key.len()).filter(|p| !set.contains(p)),
        shared_key.clone(),
    )
}

fn check_request(key_len: usize, leaked: &[usize], m: usize) -> Result<(), ExtractError> {
    let achievable = achievable_output(key_len, leaked)?;
    if m == 0 || m > achievable {
        return Err(ExtractError::OutputTooLong {
            requested: m,
            achievable,
        });
    }
    Ok(())
}

/// `m` bits extracted from `shared_key` with Toeplitz diagonals `seed`
/// (length `key_len + m - 1`). Refuses outputs longer than
/// [`achievable_output`].
pub fn key_recover(
    shared_key: &BitString,
    leaked: &[usize],
    m: usize,
    seed: &BitString,
) -> Result<BitString, ExtractError> {
    check_request(shared_key.len(), leaked, m)?;
    ToeplitzExtractor::new(shared_key.len(), m, seed.clone())?.extract(shared_key)
}

/// Seed-averaged and worst-case closeness to uniform of the extracted key as
/// the eavesdropper sees it.
pub fn adversary_view(
    shared_key: &BitString,
    leaked: &[usize],
    m: usize,
) -> Result<SeedAverage, ExtractError> {
    check_request(shared_key.len(), leaked, m)?;
    let src = adversary_source(shared_key, leaked)?;
    seed_averaged_distance_by_rank(m, &src, SeedSet::Relevant)
}

/// Closeness to uniform for one particular seed.
pub fn adversary_view_for_seed(
    shared_key: &BitString,
    leaked: &[usize],
    seed: &BitString,
    m: usize,
) -> Result<BigRational, ExtractError> {
    let src = adversary_source(shared_key, leaked)?;
    let ext = ToeplitzExtractor::new(shared_key.len(), m, seed.clone())?;
    super::statistical_distance(
        &exact_output_distribution(&ext, &src)?,
        &ExactDistribution::uniform(m),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_bits<R: Rng>(rng: &mut R, n: usize) -> BitString {
        BitString::from_bits((0..n).map(|_| rng.gen::<bool>()))
    }

    #[test]
    fn twenty_bit_key_ten_leaked() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let key = random_bits(&mut rng, 20);
        let leaked: Vec<usize> = (0..20).step_by(2).collect();
        assert_eq!(achievable_output(20, &leaked).unwrap(), 6);
        let seed = random_bits(&mut rng, 23);
        let out = key_recover(&key, &leaked, 4, &seed).unwrap();
        assert_eq!(out.len(), 4);
        let view = adversary_view(&key, &leaked, 4).unwrap();
        assert!(view.average_distance.to_f64().unwrap() <= 0.125);
        assert_eq!(view.leftover_hash_bound, 0.0625);
    }

    #[test]
    fn everything_leaked_refuses() {
        let key = BitString::zeros(20);
        let all: Vec<usize> = (0..20).collect();
        for m in 1..5 {
            assert_eq!(
                key_recover(&key, &all, m, &BitString::zeros(19 + m)),
                Err(ExtractError::OutputTooLong {
                    requested: m,
                    achievable: 0
                })
            );
        }
    }

    #[test]
    fn nothing_leaked_allows_length_minus_slack() {
        let key = BitString::parse_bits("1011001110001011").unwrap();
        let m = 16 - KEY_SLACK_BITS;
        assert!(key_recover(&key, &[], m, &BitString::zeros(16 + m - 1)).is_ok());
        assert!(key_recover(&key, &[], m + 1, &BitString::zeros(16 + m)).is_err());
    }

    #[test]
    fn input_validation() {
        let key = BitString::zeros(8);
        assert_eq!(
            key_recover(&key, &[8], 1, &BitString::zeros(8)),
            Err(ExtractError::PositionOutOfRange { pos: 8, n: 8 })
        );
        assert_eq!(
            key_recover(&key, &[], 2, &BitString::zeros(8)),
            Err(ExtractError::SeedLength { expected: 9, got: 8 })
        );
        // duplicates count once
        assert_eq!(achievable_output(8, &[1, 1, 1]).unwrap(), 3);
    }

    #[test]
    fn per_seed_view_averages_to_the_report() {
        let key = BitString::parse_bits("110100101").unwrap();
        let leaked = [0, 4, 5];
        let m = 2;
        let seeds = 1u64 << (9 + m - 1);
        let mut sum = BigRational::from_integer(0.into());
        for t in 0..seeds {
            sum += adversary_view_for_seed(&key, &leaked, &BitString::from_u64(t, 10), m).unwrap();
        }
        let avg = sum / BigRational::from_integer(seeds.into());
        assert_eq!(adversary_view(&key, &leaked, m).unwrap().average_distance, avg);
    }
}
