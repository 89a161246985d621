use crate::bits::BitString;

use super::ExtractError;

/// An `m x n` Toeplitz matrix over GF(2) given by its `n + m - 1` diagonals.
///
/// Entry `(i, j)` is `diag[i - j + n - 1]`, so row 0 reads
/// `diag[n-1], diag[n-2], .., diag[0]` and each later row shifts by one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToeplitzExtractor {
    n: usize,
    m: usize,
    diag: BitString,
}

impl ToeplitzExtractor {
    pub fn new(n: usize, m: usize, diag: BitString) -> Result<Self, ExtractError> {
        check_shape(n, m)?;
        if diag.len() != n + m - 1 {
            return Err(ExtractError::SeedLength {
                expected: n + m - 1,
                got: diag.len(),
            });
        }
        Ok(Self { n, m, diag })
    }

    pub fn input_len(&self) -> usize {
        self.n
    }

    pub fn output_len(&self) -> usize {
        self.m
    }

    pub fn seed(&self) -> &BitString {
        &self.diag
    }

    pub fn entry(&self, i: usize, j: usize) -> bool {
        self.diag.get(i + self.n - 1 - j)
    }

    /// `M x` over GF(2).
    pub fn extract(&self, x: &BitString) -> Result<BitString, ExtractError> {
        if x.len() != self.n {
            return Err(ExtractError::LengthMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        // Row i dotted with x equals diag[i .. i + n] dotted with reversed x.
        let rev = BitString::from_bits((0..self.n).rev().map(|j| x.get(j)));
        let words = rev.words();
        Ok(BitString::from_bits((0..self.m).map(|i| {
            let ones: u32 = words
                .iter()
                .enumerate()
                .map(|(w, &r)| (self.diag.word_at(i + 64 * w) & r).count_ones())
                .sum();
            ones & 1 == 1
        })))
    }
}

pub(crate) fn check_shape(n: usize, m: usize) -> Result<(), ExtractError> {
    if n == 0 || m == 0 || m > n {
        return Err(ExtractError::InvalidShape { n, m });
    }
    Ok(())
}

pub fn extract(ext: &ToeplitzExtractor, x: &BitString) -> Result<BitString, ExtractError> {
    ext.extract(x)
}

/// Word-sized kernel: the output of the matrix with diagonals `diag` (as an
/// integer, `n + m - 1 <= 64`) on the unit vector at column `j`.
#[inline]
pub(crate) fn column(diag: u64, n: usize, m: usize, j: usize) -> u64 {
    // Column j holds diag[n-1-j .. n-1-j+m] top to bottom.
    (diag >> (n - 1 - j)) & low_mask(m)
}

#[inline]
pub(crate) fn low_mask(bits: usize) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

/// Output of the word-sized matrix on `x` (bit `j` = input bit `j`).
pub(crate) fn apply(diag: u64, n: usize, m: usize, x: u64) -> u64 {
    (0..n)
        .filter(|&j| x >> j & 1 == 1)
        .fold(0, |acc, j| acc ^ column(diag, n, m, j))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bits(s: &str) -> BitString {
        BitString::parse_bits(s).unwrap()
    }

    /// Straight from the entry definition.
    fn naive(ext: &ToeplitzExtractor, x: &BitString) -> BitString {
        BitString::from_bits((0..ext.output_len()).map(|i| {
            (0..ext.input_len()).fold(false, |acc, j| acc ^ (ext.entry(i, j) && x.get(j)))
        }))
    }

    #[test]
    fn hand_example() {
        let ext = ToeplitzExtractor::new(2, 1, bits("11")).unwrap();
        assert_eq!(ext.extract(&bits("10")).unwrap(), bits("1"));
        assert_eq!(ext.extract(&bits("00")).unwrap(), bits("0"));
    }

    #[test]
    fn shape_and_length_errors() {
        assert_eq!(
            ToeplitzExtractor::new(2, 3, bits("0000")),
            Err(ExtractError::InvalidShape { n: 2, m: 3 })
        );
        assert_eq!(
            ToeplitzExtractor::new(3, 2, bits("000")),
            Err(ExtractError::SeedLength { expected: 4, got: 3 })
        );
        let ext = ToeplitzExtractor::new(3, 2, bits("0000")).unwrap();
        assert_eq!(
            ext.extract(&bits("00")),
            Err(ExtractError::LengthMismatch { expected: 3, got: 2 })
        );
    }

    #[test]
    fn constant_along_diagonals() {
        let ext = ToeplitzExtractor::new(5, 3, bits("1011001")).unwrap();
        for i in 1..3 {
            for j in 1..5 {
                assert_eq!(ext.entry(i, j), ext.entry(i - 1, j - 1));
            }
        }
    }

    #[test]
    fn linearity_exhaustive_small() {
        for n in 1..=8usize {
            for m in 1..=n {
                let diag = BitString::from_u64(0x5a5a_1234u64 >> n, n + m - 1);
                let ext = ToeplitzExtractor::new(n, m, diag).unwrap();
                let outs: Vec<BitString> = (0..1u64 << n)
                    .map(|x| ext.extract(&BitString::from_u64(x, n)).unwrap())
                    .collect();
                assert!(outs[0].iter().all(|b| !b));
                for a in 0..1usize << n {
                    for b in 0..1usize << n {
                        assert_eq!(outs[a ^ b], outs[a].xor(&outs[b]).unwrap());
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn fast_paths_match_definition(
            n in 1usize..150,
            m_frac in 0.0f64..1.0,
            seed in any::<u64>(),
        ) {
            use rand::{Rng, SeedableRng};
            let m = 1 + ((n - 1) as f64 * m_frac) as usize;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let diag = BitString::from_bits((0..n + m - 1).map(|_| rng.gen::<bool>()));
            let x = BitString::from_bits((0..n).map(|_| rng.gen::<bool>()));
            let ext = ToeplitzExtractor::new(n, m, diag.clone()).unwrap();
            let out = ext.extract(&x).unwrap();
            prop_assert_eq!(&out, &naive(&ext, &x));
            if n + m - 1 <= 64 {
                let word = apply(diag.to_u64().unwrap(), n, m, x.to_u64().unwrap());
                prop_assert_eq!(BitString::from_u64(word, m), out);
            }
        }
    }
}
