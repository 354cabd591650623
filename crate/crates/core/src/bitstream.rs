//! Packed unary bitstreams.
//!
//! A [`Bitstream`] is the carrier of a stochastic number: a fixed-length time
//! series of bits where index 0 is the first clock cycle. Bits are packed into
//! `u64` words, least significant bit first, and any padding bits past the
//! logical length are kept at zero so whole-word popcounts stay exact.

use std::fmt;
use std::str::FromStr;

use crate::error::{check_len, Error, Result};

const WORD_BITS: usize = 64;

/// How the ones-fraction of a stream maps to a real value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Encoding {
    /// ones / N, in [0, 1].
    #[default]
    Unipolar,
    /// (2 ones - N) / N, in [-1, 1].
    Bipolar,
}

/// Fixed-length packed bitstream.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Bitstream {
    words: Vec<u64>,
    len: usize,
}

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

impl Bitstream {
    /// All-zero stream of `len` cycles.
    ///
    /// Panics if `len == 0`.
    pub fn zeros(len: usize) -> Self {
        assert!(len > 0, "bitstream length must be positive");
        Self {
            words: vec![0; words_for(len)],
            len,
        }
    }

    /// All-one stream of `len` cycles.
    pub fn ones_stream(len: usize) -> Self {
        Self::zeros(len).not()
    }

    /// Builds a stream by evaluating `bit` at every cycle index.
    pub fn from_fn(len: usize, mut bit: impl FnMut(usize) -> bool) -> Self {
        let mut s = Self::zeros(len);
        for t in 0..len {
            if bit(t) {
                s.words[t / WORD_BITS] |= 1 << (t % WORD_BITS);
            }
        }
        s
    }

    /// Wraps pre-packed words. Bits past `len` are cleared.
    pub fn from_words(words: Vec<u64>, len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::EmptyStream);
        }
        if words.len() != words_for(len) {
            return Err(Error::Config(format!(
                "{} words cannot hold exactly {len} bits",
                words.len()
            )));
        }
        let mut s = Self { words, len };
        s.clear_padding();
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    /// Always false; streams hold at least one bit.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, t: usize) -> bool {
        assert!(
            t < self.len,
            "cycle {t} out of range for length {}",
            self.len
        );
        (self.words[t / WORD_BITS] >> (t % WORD_BITS)) & 1 == 1
    }

    /// Number of 1 bits.
    pub fn ones(&self) -> u64 {
        self.words.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    /// True when every bit is equal (all zeros or all ones).
    pub fn is_constant(&self) -> bool {
        let ones = self.ones();
        ones == 0 || ones == self.len as u64
    }

    /// Decoded value under `enc`.
    pub fn value(&self, enc: Encoding) -> f64 {
        let n = self.len as f64;
        let ones = self.ones() as f64;
        match enc {
            Encoding::Unipolar => ones / n,
            Encoding::Bipolar => (2.0 * ones - n) / n,
        }
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = bool> + '_ {
        (0..self.len).map(move |t| self.get(t))
    }

    pub fn not(&self) -> Self {
        let mut s = Self {
            words: self.words.iter().map(|w| !w).collect(),
            len: self.len,
        };
        s.clear_padding();
        s
    }

    pub fn and(&self, other: &Self) -> Result<Self> {
        self.zip_words(other, |a, b| a & b)
    }

    pub fn or(&self, other: &Self) -> Result<Self> {
        self.zip_words(other, |a, b| a | b)
    }

    pub fn xor(&self, other: &Self) -> Result<Self> {
        self.zip_words(other, |a, b| a ^ b)
    }

    /// Ones of `self & other` without materializing the result.
    pub fn and_ones(&self, other: &Self) -> Result<u64> {
        check_len(self.len, other.len)?;
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| u64::from((a & b).count_ones()))
            .sum())
    }

    fn zip_words(&self, other: &Self, f: impl Fn(u64, u64) -> u64) -> Result<Self> {
        check_len(self.len, other.len)?;
        Ok(Self {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(&a, &b)| f(a, b))
                .collect(),
            len: self.len,
        })
    }

    fn clear_padding(&mut self) {
        let rem = self.len % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl FromIterator<bool> for Bitstream {
    /// Panics on an empty iterator.
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        let mut words = Vec::new();
        let mut len = 0usize;
        for bit in iter {
            if len.is_multiple_of(WORD_BITS) {
                words.push(0);
            }
            if bit {
                *words.last_mut().unwrap() |= 1 << (len % WORD_BITS);
            }
            len += 1;
        }
        assert!(len > 0, "bitstream length must be positive");
        Self { words, len }
    }
}

/// Text form: one ASCII `0`/`1` per cycle, cycle 0 first.
impl FromStr for Bitstream {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::EmptyStream);
        }
        let mut bits = Vec::with_capacity(s.len());
        for (pos, ch) in s.chars().enumerate() {
            match ch {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => return Err(Error::InvalidBit { ch, pos }),
            }
        }
        Ok(bits.into_iter().collect())
    }
}

impl fmt::Display for Bitstream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text: String = self.iter().map(|b| if b { '1' } else { '0' }).collect();
        f.write_str(&text)
    }
}

impl fmt::Debug for Bitstream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bitstream({self})")
    }
}
