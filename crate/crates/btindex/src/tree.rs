//! The block tree over the padded text.
//!
//! The text gets a terminator symbol, is padded to `z_top` blocks of length
//! `b0` (a power of two), then split into halving levels. At each level a
//! block is kept explicit (marked) if it participates in a consecutive-block
//! pair whose content first occurs at the pair's own position; otherwise it
//! is replaced by a reference to the leftmost occurrence of its content in
//! the level sequence. Marked last-level blocks store their symbols.
//!
//! Per level, `D_l` marks explicit blocks, the sparse `F_l` records how many
//! sources start at each level position, and `pi_l` links each unmarked
//! block to its source's 1 in `F_l`.

use crate::bits::{BitVector, SparseBits};
use crate::grid::{self, OccurrenceGrid};
use crate::lz;
use crate::perm::Permutation;
use crate::{Error, Result, Symbol};

/// Block and padding geometry derived from the text length and phrase count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layout {
    pub n_original: u64,
    pub z: u64,
    /// Length including the terminator.
    pub n_prime: u64,
    /// Top-level block length: least power of two with `b0 * z >= n_prime`.
    pub b0: u64,
    pub z_top: u64,
    /// Padded length `z_top * b0`.
    pub n: u64,
    /// `log2(b0) + 1` levels, halving down to single symbols.
    pub num_levels: u64,
}

impl Layout {
    pub fn compute(n_original: u64, z: u64) -> Layout {
        assert!(n_original >= 1 && z >= 1 && z <= n_original);
        let n_prime = n_original + 1;
        let mut b0 = 1u64;
        while b0 * z < n_prime {
            b0 *= 2;
        }
        let z_top = n_prime.div_ceil(b0);
        Layout {
            n_original,
            z,
            n_prime,
            b0,
            z_top,
            n: z_top * b0,
            num_levels: b0.trailing_zeros() as u64 + 1,
        }
    }
}

/// One block-tree level.
#[derive(Debug)]
pub struct Level {
    pub(crate) b: u64,
    pub(crate) d: BitVector,
    pub(crate) f: SparseBits,
    pub(crate) pi: Permutation,
}

impl Level {
    pub fn block_len(&self) -> u64 {
        self.b
    }

    /// Marked-block bitvector over the level's explicit blocks.
    pub fn marked(&self) -> &BitVector {
        &self.d
    }

    pub fn source_bits(&self) -> &SparseBits {
        &self.f
    }

    pub fn source_perm(&self) -> &Permutation {
        &self.pi
    }

    /// Length of the explicit sequence.
    pub fn seq_len(&self) -> u64 {
        self.d.len() * self.b
    }

    pub fn num_unmarked(&self) -> u64 {
        self.d.count(false)
    }
}

pub struct BlockTree {
    pub(crate) sigma: Symbol,
    pub(crate) n_original: u64,
    pub(crate) n: u64,
    pub(crate) z: u64,
    pub(crate) z_top: u64,
    pub(crate) b0: u64,
    pub(crate) levels: Vec<Level>,
    pub(crate) leaf_symbols: Vec<Symbol>,
    pub(crate) grid: OccurrenceGrid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexStats {
    pub sigma: u64,
    pub n_original: u64,
    pub n: u64,
    pub z: u64,
    pub z_top: u64,
    pub b0: u64,
    pub num_levels: u64,
    pub marked_blocks: u64,
    pub unmarked_blocks: u64,
    /// Tree leaves: unmarked blocks plus the whole last level.
    pub w: u64,
    pub num_points: u64,
    /// `3 * w * ceil(log2 n)` bits, the size the grid-and-sources layout
    /// aims for; actual file size differs by encoding overheads.
    pub estimated_bits: u64,
}

impl BlockTree {
    /// Builds the full index: terminator, padding, levels, leaf symbols and
    /// the occurrence grid. `text` must be non-empty over `1..=sigma`.
    pub fn build(text: &[Symbol], sigma: Symbol) -> Result<BlockTree> {
        if text.is_empty() {
            return Err(Error::InvalidArgument("cannot index empty text".into()));
        }
        if sigma == 0 || sigma > Symbol::MAX - 2 {
            return Err(Error::InvalidArgument(format!("alphabet size {sigma} unsupported")));
        }
        if let Some(&bad) = text.iter().find(|&&s| s == 0 || s > sigma) {
            return Err(Error::InvalidArgument(format!("symbol {bad} outside 1..={sigma}")));
        }
        let z = lz::parse(text)?.z();
        let layout = Layout::compute(text.len() as u64, z);
        let terminator = sigma + 1;
        let padding = sigma + 2;

        let mut padded: Vec<Symbol> = Vec::with_capacity(layout.n as usize);
        padded.extend_from_slice(text);
        padded.push(terminator);
        padded.resize(layout.n as usize, padding);

        let mut levels = Vec::with_capacity(layout.num_levels as usize);
        let mut split_ts: Vec<u64> = Vec::new();
        let mut cur: Vec<Symbol> = padded.clone();
        let mut starts: Vec<u64> = (0..layout.z_top).map(|i| i * layout.b0 + 1).collect();
        let mut b = layout.b0;
        let leaf_symbols;
        loop {
            let (level, marked) = build_level(&cur, b)?;
            if b > 1 {
                for (j, &m) in marked.iter().enumerate() {
                    if m {
                        split_ts.push(starts[j] + b / 2);
                    }
                }
            }
            levels.push(level);
            if b == 1 {
                leaf_symbols = marked
                    .iter()
                    .enumerate()
                    .filter(|&(_, &m)| m)
                    .map(|(j, _)| cur[j])
                    .collect();
                break;
            }
            let mut next_seq = Vec::new();
            let mut next_starts = Vec::new();
            for (j, &m) in marked.iter().enumerate() {
                if m {
                    let lo = j * b as usize;
                    next_seq.extend_from_slice(&cur[lo..lo + b as usize]);
                    next_starts.push(starts[j]);
                    next_starts.push(starts[j] + b / 2);
                }
            }
            cur = next_seq;
            starts = next_starts;
            b /= 2;
        }

        let boundary_ts: Vec<u64> = (1..layout.z_top).map(|i| i * layout.b0 + 1).collect();
        let grid = grid::build_grid(&padded, layout.b0, layout.n, &split_ts, &boundary_ts);

        Ok(BlockTree {
            sigma,
            n_original: layout.n_original,
            n: layout.n,
            z,
            z_top: layout.z_top,
            b0: layout.b0,
            levels,
            leaf_symbols,
            grid,
        })
    }

    pub fn sigma(&self) -> Symbol {
        self.sigma
    }

    pub fn n_original(&self) -> u64 {
        self.n_original
    }

    /// Padded length.
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn z(&self) -> u64 {
        self.z
    }

    pub fn z_top(&self) -> u64 {
        self.z_top
    }

    pub fn b0(&self) -> u64 {
        self.b0
    }

    pub fn num_levels(&self) -> u64 {
        self.levels.len() as u64
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn leaf_symbols(&self) -> &[Symbol] {
        &self.leaf_symbols
    }

    pub fn grid(&self) -> &OccurrenceGrid {
        &self.grid
    }

    /// Leaves of the block tree seen as a forest: unmarked blocks at the
    /// halved levels plus every explicit block of the last level. The grid
    /// holds exactly `leaf_count() - 1` points.
    pub fn leaf_count(&self) -> u64 {
        let last = self.levels.last().expect("at least one level");
        let unmarked_above: u64 =
            self.levels[..self.levels.len() - 1].iter().map(|l| l.num_unmarked()).sum();
        unmarked_above + last.d.len()
    }

    pub fn stats(&self) -> IndexStats {
        let marked: u64 = self.levels.iter().map(|l| l.d.count(true)).sum();
        let unmarked: u64 = self.levels.iter().map(|l| l.num_unmarked()).sum();
        let w = self.leaf_count();
        let log_n = 64 - (self.n - 1).leading_zeros() as u64;
        IndexStats {
            sigma: self.sigma as u64,
            n_original: self.n_original,
            n: self.n,
            z: self.z,
            z_top: self.z_top,
            b0: self.b0,
            num_levels: self.num_levels(),
            marked_blocks: marked,
            unmarked_blocks: unmarked,
            w,
            num_points: self.grid.num_points(),
            estimated_bits: 3 * w * log_n,
        }
    }

    /// Extracts `len` symbols of the original text starting at 1-based `i`.
    pub fn extract(&self, i: u64, len: u64) -> Result<Vec<Symbol>> {
        if len == 0 {
            return Ok(Vec::new());
        }
        if i < 1 || i + len - 1 > self.n_original {
            return Err(Error::OutOfRange(format!(
                "extract range [{i}, {}] outside 1..={}",
                i + len - 1,
                self.n_original
            )));
        }
        Ok((i..i + len).map(|p| self.access_padded(p)).collect())
    }

    /// Single-symbol access over the padded text, one source jump and one
    /// rank projection per level.
    pub(crate) fn access_padded(&self, mut i: u64) -> Symbol {
        debug_assert!(i >= 1 && i <= self.n);
        for lev in &self.levels {
            let b = lev.b;
            let mut j = i.div_ceil(b);
            if !lev.d.get(j) {
                let r = lev.d.rank_unchecked(false, j);
                let t = lev.pi.apply_unchecked(r);
                let src = lev.f.one_positions()[(t - 1) as usize] - t;
                let block_start = (j - 1) * b + 1;
                i = src + (i - block_start);
                j = i.div_ceil(b);
                debug_assert!(lev.d.get(j), "source must land in a marked block");
            }
            i = project_down_formula(&lev.d, b, i);
        }
        self.leaf_symbols[(i - 1) as usize]
    }

    /// Maps a position in the level-`l` sequence to the next level's
    /// sequence. The containing block must be marked.
    pub fn project_down(&self, l: u64, i: u64) -> Result<u64> {
        let lev = self.level_checked(l)?;
        if i < 1 || i > lev.seq_len() {
            return Err(Error::OutOfRange(format!("position {i} outside 1..={}", lev.seq_len())));
        }
        if !lev.d.get(i.div_ceil(lev.b)) {
            return Err(Error::InvalidArgument(format!(
                "block {} at level {l} is not marked",
                i.div_ceil(lev.b)
            )));
        }
        Ok(project_down_formula(&lev.d, lev.b, i))
    }

    /// Maps a position in the level-`l` sequence back to level `l - 1`;
    /// inverse of [`Self::project_down`] on marked regions.
    pub fn project_up(&self, l: u64, i: u64) -> Result<u64> {
        if l == 0 {
            return Err(Error::InvalidArgument("level 0 has no parent".into()));
        }
        let lev = self.level_checked(l)?;
        if i < 1 || i > lev.seq_len() {
            return Err(Error::OutOfRange(format!("position {i} outside 1..={}", lev.seq_len())));
        }
        let prev = &self.levels[(l - 1) as usize];
        Ok(project_up_formula(&prev.d, prev.b, i))
    }

    /// Start of the r-th unmarked block's source in the level sequence.
    pub fn source_position(&self, l: u64, r: u64) -> Result<u64> {
        let lev = self.level_checked(l)?;
        if r < 1 || r > lev.num_unmarked() {
            return Err(Error::OutOfRange(format!(
                "unmarked rank {r} outside 1..={}",
                lev.num_unmarked()
            )));
        }
        let t = lev.pi.apply_unchecked(r);
        Ok(lev.f.one_positions()[(t - 1) as usize] - t)
    }

    fn level_checked(&self, l: u64) -> Result<&Level> {
        self.levels
            .get(l as usize)
            .ok_or_else(|| Error::OutOfRange(format!("level {l} outside 0..{}", self.levels.len())))
    }
}

#[inline]
pub(crate) fn project_down_formula(d: &BitVector, b: u64, i: u64) -> u64 {
    let j = i.div_ceil(b);
    (d.rank_unchecked(true, j) - 1) * b + (i - 1) % b + 1
}

#[inline]
pub(crate) fn project_up_formula(d_prev: &BitVector, b_prev: u64, i: u64) -> u64 {
    let j = i.div_ceil(b_prev);
    (d_prev.select(true, j).expect("pair index within marked count") - 1) * b_prev
        + (i - 1) % b_prev
        + 1
}

/// Builds one level over its explicit sequence: markings, then source
/// references for unmarked blocks, with the source invariants checked.
fn build_level(s: &[Symbol], b: u64) -> Result<(Level, Vec<bool>)> {
    let bu = b as usize;
    debug_assert!(!s.is_empty() && s.len() % bu == 0);
    let nblocks = s.len() / bu;

    let mut marked = vec![false; nblocks];
    if nblocks == 1 {
        // a single block has no pair; nothing earlier to copy from
        marked[0] = true;
    } else {
        let pairs = WindowIndex::build(s, 2 * bu);
        for j in 0..nblocks - 1 {
            let start = j * bu;
            if pairs.leftmost(s, start) == start {
                marked[j] = true;
                marked[j + 1] = true;
            }
        }
    }

    let unmarked_count = marked.iter().filter(|&&m| !m).count();
    let mut src_starts: Vec<u64> = Vec::with_capacity(unmarked_count);
    if unmarked_count > 0 {
        let blocks = WindowIndex::build(s, bu);
        for (j, &m) in marked.iter().enumerate() {
            if m {
                continue;
            }
            let start = j * bu;
            let src = blocks.leftmost(s, start);
            if src >= start {
                return Err(Error::Construction(format!(
                    "unmarked block {} of length {b} has no earlier occurrence",
                    j + 1
                )));
            }
            for c in src / bu..=(src + bu - 1) / bu {
                if !marked[c] {
                    return Err(Error::Construction(format!(
                        "source of block {} overlaps unmarked block {}",
                        j + 1,
                        c + 1
                    )));
                }
            }
            src_starts.push(src as u64);
        }
    }

    // order sources by start (stable on block index); the t-th 1 of F sits
    // after its start's 0, i.e. at position start + t
    let mut by_start: Vec<(u64, usize)> =
        src_starts.iter().enumerate().map(|(r, &st)| (st, r)).collect();
    by_start.sort_unstable();
    let mut ones = vec![0u64; by_start.len()];
    let mut forward = vec![0u64; by_start.len()];
    for (t0, &(st, r)) in by_start.iter().enumerate() {
        let t = t0 as u64 + 1;
        ones[t0] = (st + 1) + t;
        forward[r] = t;
    }
    let n_l = s.len() as u64;
    let f = SparseBits::new(n_l + ones.len() as u64, ones)?;
    let pi = Permutation::new(forward)?;

    Ok((Level { b, d: BitVector::from_bools(&marked), f, pi }, marked))
}

/// Rolling-fingerprint index over all windows of one length; lookups verify
/// content so collisions only cost time.
struct WindowIndex {
    w: usize,
    entries: Vec<(u64, u32)>,
}

const HASH_BASE: u64 = 6364136223846793005;

impl WindowIndex {
    fn build(s: &[Symbol], w: usize) -> WindowIndex {
        let mut entries = Vec::new();
        if w > 0 && s.len() >= w {
            let top = HASH_BASE.wrapping_pow(w as u32 - 1);
            let mut h = 0u64;
            for &sym in &s[..w] {
                h = h.wrapping_mul(HASH_BASE).wrapping_add(sym as u64);
            }
            entries.push((h, 0u32));
            for p in 1..=s.len() - w {
                h = h
                    .wrapping_sub((s[p - 1] as u64).wrapping_mul(top))
                    .wrapping_mul(HASH_BASE)
                    .wrapping_add(s[p + w - 1] as u64);
                entries.push((h, p as u32));
            }
            entries.sort_unstable();
        }
        WindowIndex { w, entries }
    }

    /// Leftmost position whose window content equals the window at `q`
    /// (0-based; `q` itself is always a candidate).
    fn leftmost(&self, s: &[Symbol], q: usize) -> usize {
        let mut h = 0u64;
        for &sym in &s[q..q + self.w] {
            h = h.wrapping_mul(HASH_BASE).wrapping_add(sym as u64);
        }
        let i0 = self.entries.partition_point(|&(eh, _)| eh < h);
        for &(eh, p) in &self.entries[i0..] {
            if eh != h {
                break;
            }
            let p = p as usize;
            if s[p..p + self.w] == s[q..q + self.w] {
                return p;
            }
        }
        debug_assert!(false, "query window must be found");
        q
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(s: &str) -> Vec<Symbol> {
        s.bytes().map(|b| (b - b'a' + 1) as Symbol).collect()
    }

    #[test]
    fn layout_arithmetic() {
        let l = Layout::compute(15, 4);
        assert_eq!((l.b0, l.z_top, l.n, l.num_levels), (4, 4, 16, 3));
        let l = Layout::compute(1, 1);
        assert_eq!((l.b0, l.z_top, l.n, l.num_levels), (2, 1, 2, 2));
        let l = Layout::compute(8, 4);
        assert_eq!((l.b0, l.z_top, l.n), (4, 3, 12));
    }

    #[test]
    fn build_validates_input() {
        assert!(BlockTree::build(&[], 2).is_err());
        assert!(BlockTree::build(&[3], 2).is_err());
        assert!(BlockTree::build(&[0], 2).is_err());
        assert!(BlockTree::build(&[1], 0).is_err());
    }

    #[test]
    fn all_equal_text() {
        let text = vec![1 as Symbol; 64];
        let t = BlockTree::build(&text, 1).unwrap();
        assert_eq!(t.extract(1, 64).unwrap(), text);
        // z = 7 for a^64, so b0 = 16 and z_top = 5. Repeated all-equal
        // blocks past the leftmost pair are unmarked; the blocks touching
        // the unique terminator/padding tail stay marked.
        assert_eq!((t.b0(), t.z_top(), t.n()), (16, 5, 80));
        let d0 = t.levels[0].marked();
        let got0: Vec<bool> = (1..=5).map(|j| d0.get(j)).collect();
        assert_eq!(got0, [true, true, false, true, true]);
        let d1 = t.levels[1].marked();
        let got1: Vec<bool> = (1..=8).map(|j| d1.get(j)).collect();
        assert_eq!(got1, [true, true, false, false, false, true, true, true]);
        // the one unmarked top-level block copies the leftmost run
        assert_eq!(t.source_position(0, 1).unwrap(), 1);
    }

    #[test]
    fn extract_whole_and_empty() {
        let text = sym("mississippibanana");
        let t = BlockTree::build(&text, 26).unwrap();
        assert_eq!(t.extract(1, text.len() as u64).unwrap(), text);
        assert_eq!(t.extract(5, 0).unwrap(), Vec::<Symbol>::new());
        assert!(t.extract(1, text.len() as u64 + 1).is_err());
        assert!(t.extract(0, 1).is_err());
        for i in 1..=text.len() as u64 {
            for len in [1u64, 2, 3, 7] {
                if i + len - 1 <= text.len() as u64 {
                    assert_eq!(
                        t.extract(i, len).unwrap(),
                        text[(i - 1) as usize..(i + len - 1) as usize]
                    );
                }
            }
        }
    }

    #[test]
    fn projection_formulas() {
        // all-marked level: projection is the identity
        let all = BitVector::from_bools(&[true; 4]);
        for i in 1..=16 {
            assert_eq!(project_down_formula(&all, 4, i), i);
        }
        let d = BitVector::from_bools(&[true, false, true, false]);
        assert_eq!(project_down_formula(&d, 4, 10), 6);
        let d_prev = BitVector::from_bools(&[false, true, true, false]);
        assert_eq!(project_up_formula(&d_prev, 4, 3), 7);
    }

    #[test]
    fn projection_round_trip() {
        let text = sym("abracadabraabracadabraabracadabra");
        let t = BlockTree::build(&text, 26).unwrap();
        for l in 0..t.num_levels() - 1 {
            let lev = &t.levels()[l as usize];
            for i in 1..=lev.seq_len() {
                if lev.marked().get(i.div_ceil(lev.block_len())) {
                    let down = t.project_down(l, i).unwrap();
                    assert_eq!(t.project_up(l + 1, down).unwrap(), i);
                }
            }
        }
    }

    #[test]
    fn source_position_bounds() {
        let t = BlockTree::build(&sym("abcdefgh"), 26).unwrap();
        for (l, lev) in t.levels().iter().enumerate() {
            if lev.num_unmarked() == 0 {
                assert!(t.source_position(l as u64, 1).is_err());
            } else {
                assert!(t.source_position(l as u64, lev.num_unmarked()).is_ok());
                assert!(t.source_position(l as u64, lev.num_unmarked() + 1).is_err());
            }
        }
    }
}
