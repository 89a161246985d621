//! Exact output distributions, seed-averaged closeness to uniform, and the
//! seed-enumeration generator.

use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::bits::BitString;

use super::distribution::{distance_from_uniform_counts, ratio, MAX_OUTCOME_BITS};
use super::source::BitFixingSource;
use super::toeplitz::{apply, check_shape, column, low_mask, ToeplitzExtractor};
use super::{ExactDistribution, ExtractError};

/// Largest number of bits enumerated exhaustively (sources or seeds).
pub const MAX_ENUMERATION_BITS: usize = 24;

fn budget(bits: usize) -> Result<(), ExtractError> {
    if bits > MAX_ENUMERATION_BITS {
        return Err(ExtractError::EnumerationBudget {
            bits,
            max: MAX_ENUMERATION_BITS,
        });
    }
    Ok(())
}

/// Leftover-hash closeness for `m` output bits from `u` bits of min-entropy:
/// `0.5 * 2^((m - u) / 2)`.
pub fn leftover_hash_bound(m: usize, u: usize) -> f64 {
    0.5 * 2f64.powf((m as f64 - u as f64) / 2.0)
}

/// Distribution of `ext(X)` for `X` drawn from `src`, by running the
/// extractor on every one of the `2^|free|` source values.
pub fn exact_output_distribution(
    ext: &ToeplitzExtractor,
    src: &BitFixingSource,
) -> Result<ExactDistribution, ExtractError> {
    if src.len() != ext.input_len() {
        return Err(ExtractError::LengthMismatch {
            expected: ext.input_len(),
            got: src.len(),
        });
    }
    budget(src.min_entropy())?;
    outcome_budget(ext.output_len())?;
    let mut counts = vec![0u64; 1 << ext.output_len()];
    for t in 0..1u64 << src.min_entropy() {
        let y = ext.extract(&src.value(t))?;
        counts[y.to_u64().expect("m <= 20") as usize] += 1;
    }
    ExactDistribution::from_counts(ext.output_len(), &counts)
}

/// Distribution of `ext(X)` for an arbitrary input distribution on `n <= 20`
/// bits.
pub fn push_forward(
    ext: &ToeplitzExtractor,
    input: &ExactDistribution,
) -> Result<ExactDistribution, ExtractError> {
    if input.bits() != ext.input_len() {
        return Err(ExtractError::LengthMismatch {
            expected: ext.input_len(),
            got: input.bits(),
        });
    }
    outcome_budget(ext.output_len())?;
    let mut probs = vec![BigRational::from_integer(0.into()); 1 << ext.output_len()];
    for (x, p) in input.probs().iter().enumerate() {
        let y = ext.extract(&BitString::from_u64(x as u64, ext.input_len()))?;
        probs[y.to_u64().expect("m <= 20") as usize] += p;
    }
    ExactDistribution::from_probs(ext.output_len(), probs)
}

fn outcome_budget(m: usize) -> Result<(), ExtractError> {
    if m > MAX_OUTCOME_BITS {
        return Err(ExtractError::EnumerationBudget {
            bits: m,
            max: MAX_OUTCOME_BITS,
        });
    }
    Ok(())
}

/// Which extractor seeds to average over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeedSet {
    /// Every one of the `2^(n+m-1)` diagonals.
    All,
    /// Only the diagonals that meet a free column. The rest never touch the
    /// random part of the source, so the average and the worst case are the
    /// same as over all seeds.
    Relevant,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeedAverage {
    pub n: usize,
    pub m: usize,
    pub free_bits: usize,
    pub seeds_enumerated: u64,
    #[serde(serialize_with = "crate::serde_ratio")]
    pub average_distance: BigRational,
    #[serde(serialize_with = "crate::serde_ratio")]
    pub worst_distance: BigRational,
    pub average_distance_f64: f64,
    pub worst_distance_f64: f64,
    pub leftover_hash_bound: f64,
}

impl SeedAverage {
    pub fn within_bound(&self) -> bool {
        use num_traits::ToPrimitive;
        self.average_distance.to_f64().unwrap() <= self.leftover_hash_bound
    }
}

/// Exact statistical distance from uniform of `ext(X)`, averaged over seeds
/// and maximized over seeds, for `X` drawn from `src`.
///
/// Each seed is handled by walking all `2^|free|` source values in Gray-code
/// order, updating the output by one matrix column per step.
pub fn seed_averaged_distance(
    m: usize,
    src: &BitFixingSource,
    seeds: SeedSet,
) -> Result<SeedAverage, ExtractError> {
    let n = src.len();
    check_shape(n, m)?;
    outcome_budget(m)?;
    let u = src.min_entropy();
    budget(u)?;
    let positions = seed_positions(n, m, src, seeds)?;
    budget(positions.len())?;
    let base = src.base().to_u64().expect("n <= 64");
    let free = src.free();
    let count = 1u64 << positions.len();

    let (sum, worst) = (0..count)
        .into_par_iter()
        .map_init(
            || vec![0u64; 1 << m],
            |counts, a| {
                let diag = positions
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| a >> k & 1 == 1)
                    .fold(0u64, |d, (_, &p)| d | 1 << p);
                counts.iter_mut().for_each(|c| *c = 0);
                let cols: Vec<u64> = free.iter().map(|&j| column(diag, n, m, j)).collect();
                let mut y = apply(diag, n, m, base) & low_mask(m);
                counts[y as usize] += 1;
                for t in 1..1u64 << u {
                    y ^= cols[t.trailing_zeros() as usize];
                    counts[y as usize] += 1;
                }
                distance_from_uniform_counts(counts, 1 << u).0
            },
        )
        .fold(|| (0u128, 0u128), |(s, w), d| (s + d, w.max(d)))
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1.max(b.1)));

    let den = 2u128 << (u + m);
    let average_distance = ratio(sum, den * count as u128);
    let worst_distance = ratio(worst, den);
    Ok(SeedAverage {
        n,
        m,
        free_bits: u,
        seeds_enumerated: count,
        average_distance_f64: sum as f64 / (den as f64 * count as f64),
        worst_distance_f64: worst as f64 / den as f64,
        average_distance,
        worst_distance,
        leftover_hash_bound: leftover_hash_bound(m, u),
    })
}

/// Diagonal positions enumerated for `seeds`.
fn seed_positions(
    n: usize,
    m: usize,
    src: &BitFixingSource,
    seeds: SeedSet,
) -> Result<Vec<usize>, ExtractError> {
    let seed_len = n + m - 1;
    if seed_len > 64 {
        return Err(ExtractError::EnumerationBudget { bits: seed_len, max: 64 });
    }
    Ok(match seeds {
        SeedSet::All => (0..seed_len).collect(),
        SeedSet::Relevant => {
            let mut p: Vec<usize> = src
                .free()
                .iter()
                .flat_map(|&j| (0..m).map(move |i| n - 1 - j + i))
                .collect();
            p.sort_unstable();
            p.dedup();
            p
        }
    })
}

/// Rank over GF(2) of a set of `m`-bit columns.
fn rank(cols: impl IntoIterator<Item = u64>) -> u32 {
    let mut basis = [0u64; 64];
    let mut r = 0;
    for mut c in cols {
        while c != 0 {
            let top = 63 - c.leading_zeros() as usize;
            if basis[top] == 0 {
                basis[top] = c;
                r += 1;
                break;
            }
            c ^= basis[top];
        }
    }
    r
}

/// Same report as [`seed_averaged_distance`] without walking the source.
///
/// The output of a bit-fixing source is uniform on a coset of the span of the
/// free columns, so with `r` the rank of those columns its distance from
/// uniform is `1 - 2^(r - m)`. Cost is linear in the number of seeds.
pub fn seed_averaged_distance_by_rank(
    m: usize,
    src: &BitFixingSource,
    seeds: SeedSet,
) -> Result<SeedAverage, ExtractError> {
    let n = src.len();
    check_shape(n, m)?;
    outcome_budget(m)?;
    let positions = seed_positions(n, m, src, seeds)?;
    budget(positions.len())?;
    let free = src.free();
    let count = 1u64 << positions.len();
    // distance of each seed in units of 2^-m
    let (sum, worst) = (0..count)
        .into_par_iter()
        .map(|a| {
            let diag = positions
                .iter()
                .enumerate()
                .filter(|(k, _)| a >> k & 1 == 1)
                .fold(0u64, |d, (_, &p)| d | 1 << p);
            let r = rank(free.iter().map(|&j| column(diag, n, m, j)));
            (1u128 << m) - (1u128 << r)
        })
        .fold(|| (0u128, 0u128), |(s, w), d| (s + d, w.max(d)))
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1.max(b.1)));
    let den = 1u128 << m;
    Ok(SeedAverage {
        n,
        m,
        free_bits: free.len(),
        seeds_enumerated: count,
        average_distance_f64: sum as f64 / (den as f64 * count as f64),
        worst_distance_f64: worst as f64 / den as f64,
        average_distance: ratio(sum, den * count as u128),
        worst_distance: ratio(worst, den),
        leftover_hash_bound: leftover_hash_bound(m, free.len()),
    })
}

/// Runs the extractor on one input under every seed, in seed order: element
/// `t` uses the diagonals given by the bits of `t`.
pub fn enumerate_prg(n: usize, m: usize, x: &BitString) -> Result<Vec<BitString>, ExtractError> {
    check_shape(n, m)?;
    if x.len() != n {
        return Err(ExtractError::LengthMismatch {
            expected: n,
            got: x.len(),
        });
    }
    budget(n + m - 1)?;
    let input = x.to_u64().expect("n <= 24");
    Ok((0..1u64 << (n + m - 1))
        .into_par_iter()
        .map(|t| BitString::from_u64(apply(t, n, m, input), m))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extractor::statistical_distance;
    use num_traits::ToPrimitive;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bits(s: &str) -> BitString {
        BitString::parse_bits(s).unwrap()
    }

    /// Per-seed distances through the BitString extractor and exact
    /// rationals, averaged over all seeds.
    fn oracle_average(m: usize, src: &BitFixingSource) -> (BigRational, BigRational) {
        let n = src.len();
        let uniform = ExactDistribution::uniform(m);
        let seeds = 1u64 << (n + m - 1);
        let mut sum = BigRational::from_integer(0.into());
        let mut worst = BigRational::from_integer(0.into());
        for t in 0..seeds {
            let ext = ToeplitzExtractor::new(n, m, BitString::from_u64(t, n + m - 1)).unwrap();
            let d = statistical_distance(&exact_output_distribution(&ext, src).unwrap(), &uniform)
                .unwrap();
            if d > worst {
                worst = d.clone();
            }
            sum += d;
        }
        (sum / BigRational::from_integer(seeds.into()), worst)
    }

    #[test]
    fn distribution_examples() {
        let full = BitFixingSource::uniform(3);
        let ext = ToeplitzExtractor::new(3, 1, bits("001")).unwrap();
        assert_eq!(
            exact_output_distribution(&ext, &full).unwrap(),
            ExactDistribution::uniform(1)
        );
        let zero = ToeplitzExtractor::new(3, 2, bits("0000")).unwrap();
        assert_eq!(
            exact_output_distribution(&zero, &full).unwrap(),
            ExactDistribution::point_mass(2, 0)
        );
    }

    #[test]
    fn kernel_matches_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let n = rng.gen_range(1..=7);
            let m = rng.gen_range(1..=n);
            let free: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.6)).collect();
            let fixed = BitString::from_bits((0..n).map(|_| rng.gen::<bool>()));
            let src = BitFixingSource::new(free, fixed).unwrap();
            let (avg, worst) = oracle_average(m, &src);
            let all = seed_averaged_distance(m, &src, SeedSet::All).unwrap();
            let rel = seed_averaged_distance(m, &src, SeedSet::Relevant).unwrap();
            assert_eq!(all.average_distance, avg);
            assert_eq!(all.worst_distance, worst);
            assert_eq!(rel.average_distance, avg);
            assert_eq!(rel.worst_distance, worst);
            for set in [SeedSet::All, SeedSet::Relevant] {
                let fast = seed_averaged_distance_by_rank(m, &src, set).unwrap();
                assert_eq!(fast.average_distance, avg);
                assert_eq!(fast.worst_distance, worst);
            }
        }
    }

    #[test]
    fn leftover_hash_holds_at_desk_scale() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for n in 1..=8usize {
            for u in 1..=n {
                for m in 1..=u {
                    let mut positions: Vec<usize> = (0..n).collect();
                    for i in 0..n {
                        positions.swap(i, rng.gen_range(i..n));
                    }
                    let fixed = BitString::from_bits((0..n).map(|_| rng.gen::<bool>()));
                    let src = BitFixingSource::new(positions[..u].to_vec(), fixed).unwrap();
                    let r = seed_averaged_distance(m, &src, SeedSet::All).unwrap();
                    assert!(r.within_bound(), "n={n} u={u} m={m}: {r:?}");
                }
            }
        }
    }

    #[test]
    fn eight_bit_source_six_free_two_out() {
        let src = BitFixingSource::new(0..6, bits("00000011")).unwrap();
        let r = seed_averaged_distance(2, &src, SeedSet::All).unwrap();
        assert_eq!(r.seeds_enumerated, 512);
        assert_eq!(r.leftover_hash_bound, 0.125);
        assert!(r.average_distance.to_f64().unwrap() <= 0.125);
    }

    #[test]
    fn push_forward_of_bit_fixing_matches_enumeration() {
        let src = BitFixingSource::new([0, 2, 3], bits("01001")).unwrap();
        let mut counts = vec![0u64; 32];
        for t in 0..8 {
            counts[src.value(t).to_u64().unwrap() as usize] += 1;
        }
        let input = ExactDistribution::from_counts(5, &counts).unwrap();
        let ext = ToeplitzExtractor::new(5, 2, bits("101100")).unwrap();
        assert_eq!(
            push_forward(&ext, &input).unwrap(),
            exact_output_distribution(&ext, &src).unwrap()
        );
    }

    #[test]
    fn prg_examples() {
        let x = bits("10");
        let outs = enumerate_prg(2, 1, &x).unwrap();
        // seeds 00, 01, 10, 11 give 0, x2, x1, x1 ^ x2
        let strs: Vec<String> = outs.iter().map(|b| b.to_string()).collect();
        assert_eq!(strs, ["0", "0", "1", "1"]);
        let outs = enumerate_prg(2, 1, &bits("01")).unwrap();
        let strs: Vec<String> = outs.iter().map(|b| b.to_string()).collect();
        assert_eq!(strs, ["0", "1", "0", "1"]);

        let x = bits("1101001110");
        let outs = enumerate_prg(10, 4, &x).unwrap();
        assert_eq!(outs.len(), 8192);
        for (t, out) in outs.iter().enumerate() {
            let ext = ToeplitzExtractor::new(10, 4, BitString::from_u64(t as u64, 13)).unwrap();
            assert_eq!(out, &ext.extract(&x).unwrap());
        }
        assert!(enumerate_prg(10, 4, &BitString::zeros(10))
            .unwrap()
            .iter()
            .all(|o| o.count_ones() == 0));
        assert!(matches!(
            enumerate_prg(20, 6, &BitString::zeros(20)),
            Err(ExtractError::EnumerationBudget { bits: 25, .. })
        ));
    }
}
