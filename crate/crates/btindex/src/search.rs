//! The query engine.
//!
//! For every cut of the pattern, binary search the grid's Y axis for the
//! reversed prefix and the X axis for the suffix; every point in the
//! reported rectangle is a primary occurrence. Each primary occurrence is
//! tracked down the levels while its window stays inside marked blocks,
//! then walked back up, collecting every source interval that covers the
//! window: each such source marks a copy inside an unmarked block, which
//! recurses as a secondary occurrence. A single-symbol pattern runs as a
//! two-symbol search whose second symbol matches anything; the terminator
//! makes that work at the end of the text.

use crate::tree::{project_down_formula, project_up_formula, BlockTree};
use crate::{Error, Result, Symbol};
use std::cmp::Ordering;

/// Position of one grid string relative to the set of strings prefixed by
/// a query: strictly before them, within, or strictly after.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StringOrder {
    Before,
    Within,
    After,
}

impl BlockTree {
    /// All 1-based occurrence positions, sorted and deduplicated.
    pub fn search(&self, pattern: &[Symbol]) -> Result<Vec<u64>> {
        let mut occ = self.search_raw(pattern)?;
        occ.sort_unstable();
        debug_assert!(
            occ.windows(2).all(|w| w[0] != w[1]),
            "each occurrence must be emitted exactly once"
        );
        occ.dedup();
        let m = pattern.len() as u64;
        occ.retain(|&p| p + m - 1 <= self.n_original);
        Ok(occ)
    }

    /// The emissions before sorting and deduplication; the search emits
    /// every occurrence exactly once, which tests assert on this surface.
    pub fn search_raw(&self, pattern: &[Symbol]) -> Result<Vec<u64>> {
        let m = self.validate_pattern(pattern)?;
        let mut out = Vec::new();
        if m > self.n_original {
            return Ok(out);
        }
        let points = self.grid.num_points();
        if m == 1 {
            // P[1]* with the X axis unconstrained
            let (y1, y2) = self.find_y_range(&pattern[..1]);
            for (_, y) in self.grid.range_report(1, points, y1, y2) {
                let t = self.grid.t_values()[(y - 1) as usize];
                self.report_primary(t - 1, 2, &mut out);
            }
            return Ok(out);
        }
        for k in 1..m {
            let prefix_rev: Vec<Symbol> = pattern[..k as usize].iter().rev().copied().collect();
            let (y1, y2) = self.find_y_range(&prefix_rev);
            if y1 > y2 {
                continue;
            }
            let (x1, x2) = self.find_x_range(Some(&pattern[k as usize..]));
            for (_, y) in self.grid.range_report(x1, x2, y1, y2) {
                let t = self.grid.t_values()[(y - 1) as usize];
                self.report_primary(t - k, m, &mut out);
            }
        }
        Ok(out)
    }

    fn validate_pattern(&self, pattern: &[Symbol]) -> Result<u64> {
        if pattern.is_empty() {
            return Err(Error::InvalidArgument("empty pattern".into()));
        }
        if let Some(&bad) = pattern.iter().find(|&&s| s == 0 || s > self.sigma) {
            return Err(Error::InvalidArgument(format!(
                "pattern symbol {bad} outside 1..={}",
                self.sigma
            )));
        }
        Ok(pattern.len() as u64)
    }

    /// Maximal column-rank interval whose X strings have `q` as a prefix;
    /// `None` is the wildcard and spans every column. Empty intervals come
    /// back with `lo > hi`.
    pub fn find_x_range(&self, q: Option<&[Symbol]>) -> (u64, u64) {
        let points = self.grid.num_points();
        match q {
            None => (1, points),
            Some(q) => {
                let before = rank_partition(points, |x| {
                    self.compare_x_at(x, q) == StringOrder::Before
                });
                let not_after = rank_partition(points, |x| {
                    self.compare_x_at(x, q) != StringOrder::After
                });
                (before + 1, not_after)
            }
        }
    }

    /// Same over row ranks and reversed left contexts.
    pub fn find_y_range(&self, q_rev: &[Symbol]) -> (u64, u64) {
        let points = self.grid.num_points();
        let before =
            rank_partition(points, |y| self.compare_y_at(y, q_rev) == StringOrder::Before);
        let not_after =
            rank_partition(points, |y| self.compare_y_at(y, q_rev) != StringOrder::After);
        (before + 1, not_after)
    }

    /// Orders the X string of column `x` against `q`, reading forward from
    /// the point's position, capped at the string's implicit length. A
    /// string that runs out while matching is a proper prefix of `q` and
    /// sorts before it.
    pub fn compare_x(&self, x: u64, q: &[Symbol]) -> Result<StringOrder> {
        if x < 1 || x > self.grid.num_points() {
            return Err(Error::OutOfRange(format!(
                "column {x} outside 1..={}",
                self.grid.num_points()
            )));
        }
        Ok(self.compare_x_at(x, q))
    }

    /// Orders the Y string of row `y` (the reversed context left of the
    /// point) against a reversed query prefix.
    pub fn compare_y(&self, y: u64, q_rev: &[Symbol]) -> Result<StringOrder> {
        if y < 1 || y > self.grid.num_points() {
            return Err(Error::OutOfRange(format!(
                "row {y} outside 1..={}",
                self.grid.num_points()
            )));
        }
        Ok(self.compare_y_at(y, q_rev))
    }

    fn compare_x_at(&self, x: u64, q: &[Symbol]) -> StringOrder {
        let y = self.grid.wavelet().access(x - 1) + 1;
        let bounds = self.grid.x_string_bounds(y).expect("row in range");
        let take = bounds.x_max_len.min(q.len() as u64);
        for idx in 0..take {
            match self.access_padded(bounds.start + idx).cmp(&q[idx as usize]) {
                Ordering::Less => return StringOrder::Before,
                Ordering::Greater => return StringOrder::After,
                Ordering::Equal => {}
            }
        }
        if take == q.len() as u64 {
            StringOrder::Within
        } else {
            StringOrder::Before
        }
    }

    fn compare_y_at(&self, y: u64, q_rev: &[Symbol]) -> StringOrder {
        let bounds = self.grid.x_string_bounds(y).expect("row in range");
        let take = bounds.y_max_len.min(q_rev.len() as u64);
        for idx in 0..take {
            match self.access_padded(bounds.start - 1 - idx).cmp(&q_rev[idx as usize]) {
                Ordering::Less => return StringOrder::Before,
                Ordering::Greater => return StringOrder::After,
                Ordering::Equal => {}
            }
        }
        if take == q_rev.len() as u64 {
            StringOrder::Within
        } else {
            StringOrder::Before
        }
    }

    /// Tracks a verified occurrence window down while it stays inside
    /// marked blocks and blocks of the next level can still contain it,
    /// then scans back up for covering sources.
    fn report_primary(&self, mut i: u64, m: u64, out: &mut Vec<u64>) {
        let mut l = 0usize;
        loop {
            let lev = &self.levels[l];
            if lev.b / 2 < m {
                break;
            }
            let j1 = i.div_ceil(lev.b);
            let j2 = (i + m - 1).div_ceil(lev.b);
            if !(lev.d.get(j1) && lev.d.get(j2)) {
                break;
            }
            i = project_down_formula(&lev.d, lev.b, i);
            l += 1;
        }
        self.secondary_scan(l, i, m, out);
    }

    /// Walks the window from `start_level` up to level 0. At each level,
    /// sources covering the window must start within `[i+m-b, i]`; the
    /// zeros of `F` around that interval delimit their 1s. Every covering
    /// source is a copy of the window inside an unmarked block, recursed
    /// at the same level. At level 0 the position is emitted.
    fn secondary_scan(&self, start_level: usize, mut i: u64, m: u64, out: &mut Vec<u64>) {
        let mut l = start_level;
        loop {
            let lev = &self.levels[l];
            let b = lev.b;
            let n_l = lev.seq_len();
            debug_assert!(i >= 1 && i + m - 1 <= n_l, "window must lie inside the level");
            let k = (i + m).saturating_sub(b).max(1);
            let k2 = i.min(n_l - b + 1);
            if k <= k2 {
                let p = lev.f.select0_unchecked(k);
                let p2 = lev.f.select0_unchecked(k2 + 1);
                for t in (p - k + 1)..=(p2 - k2 - 1) {
                    let src = lev.f.one_positions()[(t - 1) as usize] - t;
                    // the window edges re-checked explicitly
                    if src <= i && src + b >= i + m {
                        let q = lev.pi.invert_unchecked(t);
                        let block_start = (lev.d.select(false, q).expect("unmarked rank") - 1) * b + 1;
                        self.secondary_scan(l, block_start + (i - src), m, out);
                    }
                }
            }
            if l == 0 {
                break;
            }
            let prev = &self.levels[l - 1];
            i = project_up_formula(&prev.d, prev.b, i);
            l -= 1;
        }
        out.push(i);
    }
}

/// Length of the prefix of ranks `1..=p` satisfying a monotone predicate.
fn rank_partition(p: u64, pred: impl Fn(u64) -> bool) -> u64 {
    let (mut lo, mut hi) = (0u64, p);
    while lo < hi {
        let mid = lo + (hi - lo + 1) / 2;
        if pred(mid) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::naive_search;

    fn sym(s: &str) -> Vec<Symbol> {
        s.bytes().map(|b| (b - b'a' + 1) as Symbol).collect()
    }

    fn build(s: &str) -> BlockTree {
        BlockTree::build(&sym(s), 26).unwrap()
    }

    #[test]
    fn whole_text_matches_once() {
        let t = build("abracadabra");
        assert_eq!(t.search(&sym("abracadabra")).unwrap(), vec![1]);
    }

    #[test]
    fn absent_pattern_is_empty() {
        let t = build("abracadabra");
        assert_eq!(t.search(&sym("zzz")).unwrap(), Vec::<u64>::new());
        assert_eq!(t.search(&sym("abq")).unwrap(), Vec::<u64>::new());
    }

    #[test]
    fn banana_single_symbol() {
        let t = build("banana");
        assert_eq!(t.search(&sym("a")).unwrap(), vec![2, 4, 6]);
        assert_eq!(t.search(&sym("b")).unwrap(), vec![1]);
        assert_eq!(t.search(&sym("n")).unwrap(), vec![3, 5]);
    }

    #[test]
    fn longer_than_text_is_empty() {
        let t = build("ab");
        assert_eq!(t.search(&sym("aba")).unwrap(), Vec::<u64>::new());
    }

    #[test]
    fn rejects_bad_patterns() {
        let t = build("banana");
        assert!(t.search(&[]).is_err());
        assert!(t.search(&[0]).is_err());
        assert!(t.search(&[27]).is_err()); // terminator value, not a pattern symbol
    }

    #[test]
    fn wildcard_range_spans_all_columns() {
        let t = build("banana");
        assert_eq!(t.find_x_range(None), (1, t.grid().num_points()));
    }

    #[test]
    fn greater_than_all_strings_is_empty() {
        let t = build("banana");
        // 'n' is the largest symbol present; a long all-'n'-and-above
        // query sorts after every capped X string that isn't an 'n' run
        let q = sym("nnnnnnnnnnnnnnnn");
        let (lo, hi) = t.find_x_range(Some(&q));
        assert!(lo > hi);
    }

    #[test]
    fn empty_query_covers_everything() {
        let t = build("banana");
        for x in 1..=t.grid().num_points() {
            assert_eq!(t.compare_x(x, &[]).unwrap(), StringOrder::Within);
        }
        for y in 1..=t.grid().num_points() {
            assert_eq!(t.compare_y(y, &[]).unwrap(), StringOrder::Within);
        }
    }

    #[test]
    fn agrees_with_oracle_on_small_texts() {
        for text in ["banana", "abracadabra", "aaaaaaaaaaaaaaaa", "abcabcabcabcabc"] {
            let symbols = sym(text);
            let t = build(text);
            for len in 1..=symbols.len().min(6) {
                for start in 0..=symbols.len() - len {
                    let pat = &symbols[start..start + len];
                    assert_eq!(
                        t.search(pat).unwrap(),
                        naive_search(&symbols, pat),
                        "text={text} pat={pat:?}"
                    );
                }
            }
        }
    }
}
