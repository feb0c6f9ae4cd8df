//! Bitvectors with rank/select, 1-based.
//!
//! [`BitVector`] is a plain bitvector with a per-word rank directory;
//! [`SparseBits`] stores only the positions of 1s and answers `select_0`
//! by binary search over them, which is what the sparse source bitvectors
//! need. Both are immutable after construction.

use crate::{Error, Result};

/// Plain bitvector with constant-time rank and logarithmic select.
///
/// `rank_c(p)` counts `c`-bits in positions `1..=p`; `rank_c(0) = 0`.
/// `select_c(r)` is the position of the r-th `c`-bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitVector {
    len: u64,
    words: Vec<u64>,
    // ones in words[0..i]
    rank_samples: Vec<u64>,
}

impl BitVector {
    pub fn from_bools(bits: &[bool]) -> BitVector {
        let len = bits.len() as u64;
        let mut words = vec![0u64; bits.len().div_ceil(64)];
        for (i, &b) in bits.iter().enumerate() {
            if b {
                words[i / 64] |= 1 << (i % 64);
            }
        }
        Self::from_words(len, words)
    }

    fn from_words(len: u64, words: Vec<u64>) -> BitVector {
        let mut rank_samples = Vec::with_capacity(words.len() + 1);
        let mut acc = 0u64;
        rank_samples.push(0);
        for &w in &words {
            acc += w.count_ones() as u64;
            rank_samples.push(acc);
        }
        BitVector { len, words, rank_samples }
    }

    /// Reconstructs from a raw little-endian payload as written by the
    /// serializer; trailing bits past `len` must be zero.
    pub fn from_raw(len: u64, words: Vec<u64>) -> Result<BitVector> {
        if words.len() as u64 != len.div_ceil(64) {
            return Err(Error::Corrupt("bitvector payload length mismatch".into()));
        }
        if len % 64 != 0 {
            if let Some(&last) = words.last() {
                if last >> (len % 64) != 0 {
                    return Err(Error::Corrupt("bitvector has bits past its length".into()));
                }
            }
        }
        Ok(Self::from_words(len, words))
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Bit at 1-based position `p`.
    pub fn get(&self, p: u64) -> bool {
        assert!(p >= 1 && p <= self.len, "bit index {p} out of 1..={}", self.len);
        let i = (p - 1) as usize;
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    /// Number of `c`-bits in positions `1..=p`.
    pub fn rank(&self, c: bool, p: u64) -> Result<u64> {
        if p > self.len {
            return Err(Error::OutOfRange(format!("rank position {p} > length {}", self.len)));
        }
        Ok(self.rank_unchecked(c, p))
    }

    #[inline]
    pub(crate) fn rank_unchecked(&self, c: bool, p: u64) -> u64 {
        debug_assert!(p <= self.len);
        let ones = {
            let w = (p / 64) as usize;
            let rem = p % 64;
            let mut r = self.rank_samples[w];
            if rem != 0 {
                r += (self.words[w] & ((1u64 << rem) - 1)).count_ones() as u64;
            }
            r
        };
        if c {
            ones
        } else {
            p - ones
        }
    }

    pub fn count(&self, c: bool) -> u64 {
        self.rank_unchecked(c, self.len)
    }

    /// Position of the r-th `c`-bit, `1 <= r <= count(c)`.
    pub fn select(&self, c: bool, r: u64) -> Result<u64> {
        if r == 0 || r > self.count(c) {
            return Err(Error::OutOfRange(format!(
                "select rank {r} out of 1..={}",
                self.count(c)
            )));
        }
        // find the word containing the r-th c-bit
        let (mut lo, mut hi) = (0usize, self.words.len());
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            let cnt = if c {
                self.rank_samples[mid]
            } else {
                mid as u64 * 64 - self.rank_samples[mid]
            };
            if cnt < r {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let before = if c {
            self.rank_samples[lo]
        } else {
            lo as u64 * 64 - self.rank_samples[lo]
        };
        let mut need = r - before;
        let mut word = if c { self.words[lo] } else { !self.words[lo] };
        loop {
            let tz = word.trailing_zeros() as u64;
            need -= 1;
            if need == 0 {
                return Ok(lo as u64 * 64 + tz + 1);
            }
            word &= word - 1; // clear lowest set bit
        }
    }
}

/// Sparse bitvector: strictly increasing 1-positions over a universe.
///
/// `select_1` is a direct lookup; `select_0` is answered by binary search
/// over the stored 1-positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseBits {
    universe: u64,
    ones: Vec<u64>,
}

impl SparseBits {
    pub fn new(universe: u64, ones: Vec<u64>) -> Result<SparseBits> {
        let mut prev = 0u64;
        for &p in &ones {
            if p <= prev || p > universe {
                return Err(Error::InvalidArgument(
                    "one-positions must be strictly increasing within the universe".into(),
                ));
            }
            prev = p;
        }
        Ok(SparseBits { universe, ones })
    }

    pub fn len(&self) -> u64 {
        self.universe
    }

    pub fn is_empty(&self) -> bool {
        self.universe == 0
    }

    pub fn num_ones(&self) -> u64 {
        self.ones.len() as u64
    }

    pub fn num_zeros(&self) -> u64 {
        self.universe - self.num_ones()
    }

    pub fn one_positions(&self) -> &[u64] {
        &self.ones
    }

    pub fn get(&self, p: u64) -> bool {
        assert!(p >= 1 && p <= self.universe);
        self.ones.binary_search(&p).is_ok()
    }

    pub fn rank(&self, c: bool, p: u64) -> Result<u64> {
        if p > self.universe {
            return Err(Error::OutOfRange(format!("rank position {p} > length {}", self.universe)));
        }
        let ones = self.ones.partition_point(|&q| q <= p) as u64;
        Ok(if c { ones } else { p - ones })
    }

    pub fn select(&self, c: bool, r: u64) -> Result<u64> {
        if c {
            if r == 0 || r > self.num_ones() {
                return Err(Error::OutOfRange(format!("select_1 rank {r} out of 1..={}", self.num_ones())));
            }
            Ok(self.ones[(r - 1) as usize])
        } else {
            if r == 0 || r > self.num_zeros() {
                return Err(Error::OutOfRange(format!("select_0 rank {r} out of 1..={}", self.num_zeros())));
            }
            Ok(self.select0_unchecked(r))
        }
    }

    /// The r-th zero sits after every 1-position `q_i` with fewer than `r`
    /// zeros before it, i.e. with `q_i - i < r`; then `select_0(r) = r + t`
    /// for `t` such 1s. Also valid for `r = num_zeros() + 1`, where it
    /// yields `universe + 1` (the clamp the searcher relies on).
    #[inline]
    pub(crate) fn select0_unchecked(&self, r: u64) -> u64 {
        // q_i is ones[i-1] (1-based i); zeros before it = q_i - i.
        let t = partition_by_index(&self.ones, |i, q| q - (i as u64 + 1) < r) as u64;
        r + t
    }
}

fn partition_by_index<T: Copy>(v: &[T], pred: impl Fn(usize, T) -> bool) -> usize {
    let (mut lo, mut hi) = (0usize, v.len());
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if pred(mid, v[mid]) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    lo
}
