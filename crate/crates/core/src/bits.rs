//! Packed bit strings.
//!
//! A [`BitString`] of length `n` holds bits `b_0 .. b_{n-1}`. Its integer
//! value is `sum b_j * 2^j`, so bit 0 is the least significant bit. The text
//! form (`Display`, [`BitString::parse_bits`]) lists bits in index order,
//! `b_0` first. The wire form is the big-endian hex of the integer value
//! together with an explicit bit length.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BitsError {
    #[error("invalid character {ch:?} at offset {pos}")]
    InvalidChar { pos: usize, ch: char },
    #[error("value needs more than {len} bits")]
    TooWide { len: usize },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitString {
    words: Vec<u64>,
    len: usize,
}

impl BitString {
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut out = Self::zeros(0);
        for b in bits {
            out.push(b);
        }
        out
    }

    /// Low `len` bits of `value`; `len` may exceed 64 (high bits are zero).
    pub fn from_u64(value: u64, len: usize) -> Self {
        let mut out = Self::zeros(len);
        if len > 0 {
            out.words[0] = value;
            out.mask_tail();
        }
        out
    }

    pub fn from_u128(value: u128, len: usize) -> Self {
        let mut out = Self::zeros(len);
        if len > 0 {
            out.words[0] = value as u64;
            if out.words.len() > 1 {
                out.words[1] = (value >> 64) as u64;
            }
            out.mask_tail();
        }
        out
    }

    /// Parse `0`/`1` text, first character is bit 0. `_` and spaces are ignored.
    pub fn parse_bits(text: &str) -> Result<Self, BitsError> {
        let mut out = Self::zeros(0);
        for (pos, ch) in text.chars().enumerate() {
            match ch {
                '0' => out.push(false),
                '1' => out.push(true),
                '_' | ' ' => {}
                _ => return Err(BitsError::InvalidChar { pos, ch }),
            }
        }
        Ok(out)
    }

    /// Parse big-endian hex (optional `0x`) as the integer value of a string of
    /// `len` bits.
    pub fn from_hex(hex: &str, len: usize) -> Result<Self, BitsError> {
        let digits = hex
            .strip_prefix("0x")
            .or_else(|| hex.strip_prefix("0X"))
            .unwrap_or(hex);
        let mut out = Self::zeros(len);
        let offset = hex.len() - digits.len();
        for (nibble_index, (pos, ch)) in digits.char_indices().rev().enumerate() {
            let v = ch.to_digit(16).ok_or(BitsError::InvalidChar {
                pos: pos + offset,
                ch,
            })?;
            for b in 0..4 {
                if v >> b & 1 == 1 {
                    let idx = nibble_index * 4 + b;
                    if idx >= len {
                        return Err(BitsError::TooWide { len });
                    }
                    out.set(idx, true);
                }
            }
        }
        Ok(out)
    }

    /// Big-endian hex of the integer value, `ceil(len / 4)` digits.
    pub fn to_hex(&self) -> String {
        let digits = self.len.div_ceil(4);
        let mut s = String::with_capacity(digits);
        for d in (0..digits).rev() {
            let mut v = 0u32;
            for b in 0..4 {
                let idx = d * 4 + b;
                if idx < self.len && self.get(idx) {
                    v |= 1 << b;
                }
            }
            s.push(char::from_digit(v, 16).unwrap());
        }
        s
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: bool) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        let w = &mut self.words[i / 64];
        if v {
            *w |= 1 << (i % 64);
        } else {
            *w &= !(1 << (i % 64));
        }
    }

    pub fn push(&mut self, v: bool) {
        if self.len % 64 == 0 {
            self.words.push(0);
        }
        self.len += 1;
        self.set(self.len - 1, v);
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Integer value; `None` if a bit at index >= 64 is set.
    pub fn to_u64(&self) -> Option<u64> {
        if self.words.iter().skip(1).any(|&w| w != 0) {
            return None;
        }
        Some(self.words.first().copied().unwrap_or(0))
    }

    pub fn to_u128(&self) -> Option<u128> {
        if self.words.iter().skip(2).any(|&w| w != 0) {
            return None;
        }
        let lo = self.words.first().copied().unwrap_or(0) as u128;
        let hi = self.words.get(1).copied().unwrap_or(0) as u128;
        Some(lo | hi << 64)
    }

    pub fn xor(&self, other: &Self) -> Result<Self, BitsError> {
        self.check_len(other)?;
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a ^ b)
            .collect();
        Ok(Self {
            words,
            len: self.len,
        })
    }

    /// GF(2) inner product.
    pub fn dot(&self, other: &Self) -> Result<bool, BitsError> {
        self.check_len(other)?;
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        Ok(ones & 1 == 1)
    }

    /// 64 bits starting at `start`; bits past the end read as zero.
    pub(crate) fn word_at(&self, start: usize) -> u64 {
        if start >= self.len {
            return 0;
        }
        let (w, off) = (start / 64, start % 64);
        let lo = self.words[w] >> off;
        let hi = if off == 0 {
            0
        } else {
            self.words.get(w + 1).map_or(0, |x| x << (64 - off))
        };
        lo | hi
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    pub(crate) fn from_words(words: Vec<u64>, len: usize) -> Self {
        debug_assert_eq!(words.len(), len.div_ceil(64));
        let mut out = Self { words, len };
        out.mask_tail();
        out
    }

    fn check_len(&self, other: &Self) -> Result<(), BitsError> {
        if self.len != other.len {
            return Err(BitsError::LengthMismatch {
                left: self.len,
                right: other.len,
            });
        }
        Ok(())
    }

    fn mask_tail(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
        self.words.truncate(self.len.div_ceil(64));
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({})", self)
    }
}

/// JSON shape of a bit string: explicit length plus big-endian hex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WireBits {
    pub bits: usize,
    pub hex: String,
}

impl From<&BitString> for WireBits {
    fn from(b: &BitString) -> Self {
        Self {
            bits: b.len(),
            hex: b.to_hex(),
        }
    }
}

impl TryFrom<WireBits> for BitString {
    type Error = BitsError;

    fn try_from(w: WireBits) -> Result<Self, Self::Error> {
        BitString::from_hex(&w.hex, w.bits)
    }
}

impl Serialize for BitString {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        WireBits::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = WireBits::deserialize(d)?;
        BitString::try_from(w).map_err(serde::de::Error::custom)
    }
}
