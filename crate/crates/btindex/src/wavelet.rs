//! Pointerless wavelet tree over a sequence of integers.
//!
//! Supports `access`, orthogonal range reporting (all positions in a column
//! range whose value falls in a row range), and range quantiles. Built once,
//! then read-only. Internally 0-based; the value domain is padded to a power
//! of two so every level bitvector has the full sequence length and node
//! intervals stay aligned.

use crate::bits::BitVector;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct WaveletTree {
    len: u64,
    depth: u32,
    levels: Vec<BitVector>,
}

impl WaveletTree {
    /// Builds over `seq`; every value must be `< seq.len()`.
    pub fn new(seq: &[u64]) -> WaveletTree {
        let len = seq.len() as u64;
        let depth = if len <= 1 { 0 } else { 64 - (len - 1).leading_zeros() };
        let mut levels = Vec::with_capacity(depth as usize);
        let mut cur: Vec<u64> = seq.to_vec();
        debug_assert!(seq.iter().all(|&v| v < len.max(1)));
        let mut next: Vec<u64> = Vec::with_capacity(seq.len());
        for d in 0..depth {
            let bit_shift = depth - 1 - d;
            let bits: Vec<bool> = cur.iter().map(|&v| v >> bit_shift & 1 == 1).collect();
            levels.push(BitVector::from_bools(&bits));
            // stable partition by the current bit within each node interval
            // (runs of equal value prefixes)
            next.clear();
            let mut i = 0;
            while i < cur.len() {
                let key = cur[i] >> (bit_shift + 1);
                let mut j = i;
                while j < cur.len() && cur[j] >> (bit_shift + 1) == key {
                    j += 1;
                }
                next.extend(cur[i..j].iter().copied().filter(|&v| v >> bit_shift & 1 == 0));
                next.extend(cur[i..j].iter().copied().filter(|&v| v >> bit_shift & 1 == 1));
                i = j;
            }
            std::mem::swap(&mut cur, &mut next);
        }
        WaveletTree { len, depth, levels }
    }

    pub fn from_levels(len: u64, levels: Vec<BitVector>) -> Result<WaveletTree> {
        let depth = if len <= 1 { 0 } else { 64 - (len - 1).leading_zeros() };
        if levels.len() != depth as usize || levels.iter().any(|l| l.len() != len) {
            return Err(Error::Corrupt("wavelet level shape mismatch".into()));
        }
        Ok(WaveletTree { len, depth, levels })
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn levels(&self) -> &[BitVector] {
        &self.levels
    }

    /// Value at 0-based position `pos`.
    pub fn access(&self, mut pos: u64) -> u64 {
        assert!(pos < self.len);
        let (mut il, mut ir) = (0u64, self.len);
        let mut value = 0u64;
        for level in &self.levels {
            let zeros = level.rank_unchecked(false, ir) - level.rank_unchecked(false, il);
            let z_before = level.rank_unchecked(false, pos) - level.rank_unchecked(false, il);
            if level.get(pos + 1) {
                value = value << 1 | 1;
                let ones_before = (pos - il) - z_before;
                pos = il + zeros + ones_before;
                il += zeros;
            } else {
                value <<= 1;
                pos = il + z_before;
                ir = il + zeros;
            }
        }
        value
    }

    /// k-th smallest value (0-based k) among positions `[lo, hi)`.
    pub fn quantile(&self, mut lo: u64, mut hi: u64, mut k: u64) -> u64 {
        assert!(lo < hi && hi <= self.len && k < hi - lo);
        let (mut il, mut ir) = (0u64, self.len);
        let mut value = 0u64;
        for level in &self.levels {
            let zeros = level.rank_unchecked(false, ir) - level.rank_unchecked(false, il);
            let z_lo = level.rank_unchecked(false, lo) - level.rank_unchecked(false, il);
            let z_hi = level.rank_unchecked(false, hi) - level.rank_unchecked(false, il);
            let in_left = z_hi - z_lo;
            if k < in_left {
                value <<= 1;
                lo = il + z_lo;
                hi = il + z_hi;
                ir = il + zeros;
            } else {
                value = value << 1 | 1;
                k -= in_left;
                lo = il + zeros + (lo - il - z_lo);
                hi = il + zeros + (hi - il - z_hi);
                il += zeros;
            }
        }
        value
    }

    /// All `(position, value)` pairs with position in `[x_lo, x_hi)` and
    /// value in `[y_lo, y_hi)`. Output order is the traversal order
    /// (deterministic, value-major).
    pub fn range_report(&self, x_lo: u64, x_hi: u64, y_lo: u64, y_hi: u64) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        if x_lo >= x_hi || y_lo >= y_hi || self.len == 0 {
            return out;
        }
        let x_hi = x_hi.min(self.len);
        self.report_node(0, 0, self.len, x_lo, x_hi, 0, y_lo, y_hi.min(self.len), &mut out);
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn report_node(
        &self,
        d: u32,
        il: u64,
        ir: u64,
        ql: u64,
        qr: u64,
        v_base: u64,
        y_lo: u64,
        y_hi: u64,
        out: &mut Vec<(u64, u64)>,
    ) {
        if ql >= qr {
            return;
        }
        let v_size = 1u64 << (self.depth - d);
        if v_base >= y_hi || v_base + v_size <= y_lo {
            return;
        }
        if d == self.depth {
            for p in ql..qr {
                out.push((p, v_base));
            }
            return;
        }
        let level = &self.levels[d as usize];
        let z_il = level.rank_unchecked(false, il);
        let zeros = level.rank_unchecked(false, ir) - z_il;
        let z_ql = level.rank_unchecked(false, ql) - z_il;
        let z_qr = level.rank_unchecked(false, qr) - z_il;

        // left child occupies [il, il+zeros) at the next depth
        let before = out.len();
        self.report_node(d + 1, il, il + zeros, il + z_ql, il + z_qr, v_base, y_lo, y_hi, out);
        for entry in &mut out[before..] {
            let k = entry.0 - il; // 0-based rank among the node's zeros
            entry.0 = level.select(false, z_il + k + 1).expect("zero rank in range") - 1;
        }

        let o_il = il - z_il; // ones before the node interval
        let before = out.len();
        self.report_node(
            d + 1,
            il + zeros,
            ir,
            il + zeros + (ql - il - z_ql),
            il + zeros + (qr - il - z_qr),
            v_base + (v_size >> 1),
            y_lo,
            y_hi,
            out,
        );
        for entry in &mut out[before..] {
            let k = entry.0 - (il + zeros);
            entry.0 = level.select(true, o_il + k + 1).expect("one rank in range") - 1;
        }
    }
}
