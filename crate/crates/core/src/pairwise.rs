//! Pairwise independent bits from a short seed.
//!
//! A seed `s_0 .. s_{k-1}` defines `2^k - 1` output bits. Output bit `i`
//! (1-based) is the XOR of the seed bits `s_j` for which bit `j` of `i` is set,
//! i.e. the parity of `i & seed`. Any two distinct outputs are jointly
//! uniform over a uniform seed; triples are not, since bit 3 is always
//! bit 1 XOR bit 2.
//!
//! For `k = 2` the four seeds give the rows `000`, `011`, `101`, `110`.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bits::BitString;
use rand::Rng;

/// Seeds longer than this cannot index their output with a `u64`.
pub const MAX_SEED_BITS: u32 = 63;
/// Exhaustive verification enumerates `2^k` seeds against every index pair.
pub const MAX_VERIFY_BITS: u32 = 12;
const MAX_REPORTED_VIOLATIONS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PairwiseError {
    #[error("seed length {0} outside 1..={MAX_SEED_BITS}")]
    SeedLength(u32),
    #[error("index {index} outside 1..={len}")]
    IndexOutOfRange { index: u64, len: u64 },
    #[error("exhaustive check needs {min} <= k <= {MAX_VERIFY_BITS}, got {k}")]
    VerifyRange { k: u32, min: u32 },
    #[error("generator too large to enumerate: {seed_bits} seed bits, {outputs} outputs")]
    TooLarge { seed_bits: u32, outputs: u64 },
    #[error("a triple of indices is required, got {0}")]
    NotATriple(usize),
}

/// `2^k - 1`.
pub fn output_length(k: u32) -> Result<u64, PairwiseError> {
    if !(1..=MAX_SEED_BITS).contains(&k) {
        return Err(PairwiseError::SeedLength(k));
    }
    Ok((1u64 << k) - 1)
}

#[inline]
fn parity(x: u64) -> bool {
    x.count_ones() & 1 == 1
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairwiseStream {
    seed: BitString,
    mask: u64,
}

impl PairwiseStream {
    pub fn new(seed: BitString) -> Result<Self, PairwiseError> {
        let k = seed.len() as u32;
        output_length(k)?;
        let mask = seed.to_u64().expect("k <= 63");
        Ok(Self { seed, mask })
    }

    pub fn random<R: Rng + ?Sized>(k: u32, rng: &mut R) -> Result<Self, PairwiseError> {
        output_length(k)?;
        Self::new(BitString::from_bits((0..k).map(|_| rng.gen::<bool>())))
    }

    pub fn k(&self) -> u32 {
        self.seed.len() as u32
    }

    pub fn seed(&self) -> &BitString {
        &self.seed
    }

    pub fn len(&self) -> u64 {
        (1u64 << self.k()) - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Output bit `index`, 1-based, computed directly from the seed.
    pub fn bit(&self, index: u64) -> Result<bool, PairwiseError> {
        if index == 0 || index > self.len() {
            return Err(PairwiseError::IndexOutOfRange {
                index,
                len: self.len(),
            });
        }
        Ok(parity(index & self.mask))
    }

    /// The first `count` output bits (indices `1..=count`), 64 at a time.
    pub fn emit(&self, count: u64) -> Result<BitString, PairwiseError> {
        if count > self.len() {
            return Err(PairwiseError::IndexOutOfRange {
                index: count,
                len: self.len(),
            });
        }
        // Within an aligned block of 64 indices only the low six bits vary.
        let low = (0..64u64).fold(0u64, |w, t| w | (parity(t & self.mask) as u64) << t);
        let blocks = (count + 1).div_ceil(64);
        let with_zero: Vec<u64> = (0..blocks)
            .map(|b| {
                if parity((b << 6) & self.mask) {
                    !low
                } else {
                    low
                }
            })
            .collect();
        // Drop index 0.
        let words = (0..(count as usize).div_ceil(64))
            .map(|w| with_zero[w] >> 1 | with_zero.get(w + 1).map_or(0, |x| x << 63))
            .collect();
        Ok(BitString::from_words(words, count as usize))
    }

    pub fn emit_all(&self) -> BitString {
        self.emit(self.len()).expect("full length")
    }
}

pub fn expand_bit(stream: &PairwiseStream, index: u64) -> Result<bool, PairwiseError> {
    stream.bit(index)
}

/// A deterministic map from a seed (as an integer, bit `j` = seed bit `j`) to
/// output bits, so that different constructions can be checked the same way.
pub trait SeededBits: Sync {
    fn seed_bits(&self) -> u32;
    fn output_len(&self) -> u64;
    /// `index` is 1-based.
    fn bit(&self, seed: u64, index: u64) -> bool;
}

/// The XOR-subset construction behind [`PairwiseStream`].
#[derive(Debug, Clone, Copy)]
pub struct XorSubset {
    pub k: u32,
}

impl SeededBits for XorSubset {
    fn seed_bits(&self) -> u32 {
        self.k
    }

    fn output_len(&self) -> u64 {
        (1u64 << self.k) - 1
    }

    fn bit(&self, seed: u64, index: u64) -> bool {
        parity(index & seed)
    }
}

/// Repeats the seed cyclically. Each output bit alone is uniform, but
/// outputs `i` and `i + seed_bits` are always equal.
#[derive(Debug, Clone, Copy)]
pub struct RepeatSeed {
    pub seed_bits: u32,
    pub len: u64,
}

impl SeededBits for RepeatSeed {
    fn seed_bits(&self) -> u32 {
        self.seed_bits
    }

    fn output_len(&self) -> u64 {
        self.len
    }

    fn bit(&self, seed: u64, index: u64) -> bool {
        seed >> ((index - 1) % self.seed_bits as u64) & 1 == 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairViolation {
    pub i: u64,
    pub j: u64,
    pub a: u8,
    pub b: u8,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairwiseReport {
    pub seed_bits: u32,
    pub output_len: u64,
    pub seeds: u64,
    pub pairs_checked: u64,
    /// Every `(i, j, a, b)` cell must hold `seeds / 4` seeds.
    pub expected_count: f64,
    pub violation_count: u64,
    /// The first violations in index order.
    pub violations: Vec<PairViolation>,
}

impl PairwiseReport {
    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }
}

/// Per-index bitsets over all seeds: bit `s` of column `i` is output `i`
/// under seed `s`.
fn columns<G: SeededBits + ?Sized>(g: &G) -> Result<Vec<Vec<u64>>, PairwiseError> {
    let (k, len) = (g.seed_bits(), g.output_len());
    if k > MAX_VERIFY_BITS || len > 1 << MAX_VERIFY_BITS {
        return Err(PairwiseError::TooLarge {
            seed_bits: k,
            outputs: len,
        });
    }
    let seeds = 1u64 << k;
    Ok((1..=len)
        .map(|i| {
            let mut col = vec![0u64; (seeds as usize).div_ceil(64)];
            for s in 0..seeds {
                if g.bit(s, i) {
                    col[(s / 64) as usize] |= 1 << (s % 64);
                }
            }
            col
        })
        .collect())
}

fn ones(words: &[u64]) -> u64 {
    words.iter().map(|w| w.count_ones() as u64).sum()
}

/// Exhaustive pairwise check of any seeded generator.
pub fn verify_pairwise_of<G: SeededBits + ?Sized>(g: &G) -> Result<PairwiseReport, PairwiseError> {
    let cols = columns(g)?;
    let seeds = 1u64 << g.seed_bits();
    let len = cols.len();
    let col_ones: Vec<u64> = cols.iter().map(|c| ones(c)).collect();
    let per_row: Vec<(u64, Vec<PairViolation>)> = (0..len)
        .into_par_iter()
        .map(|i| {
            let mut count = 0;
            let mut found = Vec::new();
            for j in i + 1..len {
                let n11 = cols[i]
                    .iter()
                    .zip(&cols[j])
                    .map(|(x, y)| (x & y).count_ones() as u64)
                    .sum::<u64>();
                let n10 = col_ones[i] - n11;
                let n01 = col_ones[j] - n11;
                let n00 = seeds - n11 - n10 - n01;
                for (a, b, c) in [(0, 0, n00), (0, 1, n01), (1, 0, n10), (1, 1, n11)] {
                    if 4 * c != seeds {
                        count += 1;
                        if found.len() < MAX_REPORTED_VIOLATIONS {
                            found.push(PairViolation {
                                i: i as u64 + 1,
                                j: j as u64 + 1,
                                a,
                                b,
                                count: c,
                            });
                        }
                    }
                }
            }
            (count, found)
        })
        .collect();
    let violation_count = per_row.iter().map(|r| r.0).sum();
    let violations = per_row
        .into_iter()
        .flat_map(|r| r.1)
        .take(MAX_REPORTED_VIOLATIONS)
        .collect();
    let len = len as u64;
    Ok(PairwiseReport {
        seed_bits: g.seed_bits(),
        output_len: len,
        seeds,
        pairs_checked: len * len.saturating_sub(1) / 2,
        expected_count: seeds as f64 / 4.0,
        violation_count,
        violations,
    })
}

/// Exhaustive check of the XOR-subset generator with a `k`-bit seed.
pub fn verify_pairwise(k: u32) -> Result<PairwiseReport, PairwiseError> {
    if !(1..=MAX_VERIFY_BITS).contains(&k) {
        return Err(PairwiseError::VerifyRange { k, min: 1 });
    }
    verify_pairwise_of(&XorSubset { k })
}

/// Joint distribution of three outputs over all seeds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TripleReport {
    pub indices: [u64; 3],
    /// Seeds per outcome; outcome `"b_i b_j b_l"` written as three characters.
    pub outcomes: Vec<(String, u64)>,
    pub uniform: bool,
}

impl TripleReport {
    /// Outcomes that occur for at least one seed.
    pub fn support(&self) -> Vec<&str> {
        self.outcomes
            .iter()
            .filter(|(_, c)| *c > 0)
            .map(|(o, _)| o.as_str())
            .collect()
    }
}

pub fn triple_distribution<G: SeededBits + ?Sized>(
    g: &G,
    indices: &[u64],
) -> Result<TripleReport, PairwiseError> {
    let &[i, j, l] = indices else {
        return Err(PairwiseError::NotATriple(indices.len()));
    };
    for &x in indices {
        if x == 0 || x > g.output_len() {
            return Err(PairwiseError::IndexOutOfRange {
                index: x,
                len: g.output_len(),
            });
        }
    }
    if g.seed_bits() > MAX_VERIFY_BITS {
        return Err(PairwiseError::TooLarge {
            seed_bits: g.seed_bits(),
            outputs: g.output_len(),
        });
    }
    let seeds = 1u64 << g.seed_bits();
    let mut counts = [0u64; 8];
    for s in 0..seeds {
        let o = (g.bit(s, i) as usize) << 2 | (g.bit(s, j) as usize) << 1 | g.bit(s, l) as usize;
        counts[o] += 1;
    }
    Ok(TripleReport {
        indices: [i, j, l],
        outcomes: (0..8)
            .map(|o| (format!("{:03b}", o), counts[o]))
            .collect(),
        uniform: counts.iter().all(|&c| 8 * c == seeds),
    })
}

/// Triple query against the XOR-subset generator.
pub fn check_triple(k: u32, indices: &[u64]) -> Result<TripleReport, PairwiseError> {
    if !(1..=MAX_VERIFY_BITS).contains(&k) {
        return Err(PairwiseError::VerifyRange { k, min: 1 });
    }
    triple_distribution(&XorSubset { k }, indices)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThreewiseReport {
    pub k: u32,
    pub witness: Option<TripleReport>,
}

impl ThreewiseReport {
    pub fn passed(&self) -> bool {
        self.witness.is_some()
    }
}

/// Searches index triples in lexicographic order for one whose joint
/// distribution is not uniform on all eight outcomes.
pub fn verify_not_threewise(k: u32) -> Result<ThreewiseReport, PairwiseError> {
    if !(2..=MAX_VERIFY_BITS).contains(&k) {
        return Err(PairwiseError::VerifyRange { k, min: 2 });
    }
    let g = XorSubset { k };
    let len = g.output_len();
    for i in 1..=len {
        for j in i + 1..=len {
            for l in j + 1..=len {
                let t = triple_distribution(&g, &[i, j, l])?;
                if !t.uniform {
                    return Ok(ThreewiseReport {
                        k,
                        witness: Some(t),
                    });
                }
            }
        }
    }
    Ok(ThreewiseReport { k, witness: None })
}
