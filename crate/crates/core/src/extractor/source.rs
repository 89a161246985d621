use std::collections::BTreeSet;

use rand::Rng;

use crate::bits::BitString;

use super::ExtractError;

/// Weak source on `n` bits: the `free` positions are independent uniform
/// bits, every other position is pinned to its value in `fixed`.
///
/// Min-entropy is `|free|` bits. An empty free set is a point mass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitFixingSource {
    free: Vec<usize>,
    fixed: BitString,
}

impl BitFixingSource {
    /// `fixed` must have length `n`; its bits at free positions are ignored.
    pub fn new(
        free: impl IntoIterator<Item = usize>,
        fixed: BitString,
    ) -> Result<Self, ExtractError> {
        let n = fixed.len();
        let free: BTreeSet<usize> = free.into_iter().collect();
        if let Some(&pos) = free.iter().find(|&&p| p >= n) {
            return Err(ExtractError::PositionOutOfRange { pos, n });
        }
        let mut fixed = fixed;
        for &p in &free {
            fixed.set(p, false);
        }
        Ok(Self {
            free: free.into_iter().collect(),
            fixed,
        })
    }

    /// All `n` positions free.
    pub fn uniform(n: usize) -> Self {
        Self {
            free: (0..n).collect(),
            fixed: BitString::zeros(n),
        }
    }

    pub fn len(&self) -> usize {
        self.fixed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fixed.is_empty()
    }

    pub fn free(&self) -> &[usize] {
        &self.free
    }

    /// Source value with every free bit zero.
    pub fn base(&self) -> &BitString {
        &self.fixed
    }

    pub fn min_entropy(&self) -> usize {
        self.free.len()
    }

    /// The value whose free bits, in position order, are the bits of `t`.
    pub fn value(&self, t: u64) -> BitString {
        let mut x = self.fixed.clone();
        for (k, &p) in self.free.iter().enumerate() {
            if t >> k & 1 == 1 {
                x.set(p, true);
            }
        }
        x
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> BitString {
        let mut x = self.fixed.clone();
        for &p in &self.free {
            x.set(p, rng.gen());
        }
        x
    }
}

pub fn sample_source<R: Rng + ?Sized>(src: &BitFixingSource, rng: &mut R) -> BitString {
    src.sample(rng)
}
