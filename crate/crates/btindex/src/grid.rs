//! The two-dimensional grid of block-boundary context pairs.
//!
//! Every marked block contributes one point when it splits (left half
//! reversed on the Y axis, right half on the X axis), and every top-level
//! block boundary contributes one (block reversed on Y, whole remaining
//! suffix on X). Both axes are sorted lexicographically; the strings are
//! never stored. A wavelet tree over the column-to-row permutation answers
//! range reporting, and `T` maps each row back to the text position where
//! its X string begins.

use crate::wavelet::WaveletTree;
use crate::{Error, Result, Symbol};
use std::cmp::Ordering;

#[derive(Debug)]
pub struct OccurrenceGrid {
    pub(crate) num_points: u64,
    pub(crate) b0: u64,
    /// Padded text length; caps the suffix strings of boundary points.
    pub(crate) n: u64,
    pub(crate) wt: WaveletTree,
    /// Text position of each point's X string, indexed by row rank.
    pub(crate) t: Vec<u64>,
}

/// Where a point's strings live and how far comparisons may read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StringBounds {
    /// 1-based padded-text position where the X string starts.
    pub start: u64,
    pub x_max_len: u64,
    pub y_max_len: u64,
}

/// String lengths are implicit in the position: a top-level boundary sits
/// at `t - 1` divisible by `b0` and its X string runs to the end of the
/// text; a split point's halves have the length of the largest power of
/// two dividing `t - 1`.
pub(crate) fn bounds_for(t: u64, b0: u64, n: u64) -> StringBounds {
    debug_assert!(t >= 2);
    if (t - 1) % b0 == 0 {
        StringBounds { start: t, x_max_len: n - t + 1, y_max_len: b0 }
    } else {
        let half = (t - 1) & (t - 1).wrapping_neg();
        StringBounds { start: t, x_max_len: half, y_max_len: half }
    }
}

/// Collects, sorts and ranks the points. Sort keys are materialized from
/// the padded text on demand; ties between equal strings break on the
/// point's text position.
pub(crate) fn build_grid(
    padded: &[Symbol],
    b0: u64,
    n: u64,
    split_ts: &[u64],
    boundary_ts: &[u64],
) -> OccurrenceGrid {
    let mut ts: Vec<u64> = Vec::with_capacity(split_ts.len() + boundary_ts.len());
    ts.extend_from_slice(split_ts);
    ts.extend_from_slice(boundary_ts);
    debug_assert!(
        {
            let mut seen = ts.clone();
            seen.sort_unstable();
            seen.windows(2).all(|w| w[0] != w[1])
        },
        "points must have distinct text positions"
    );
    let num_points = ts.len() as u64;

    let x_slice = |t: u64| -> &[Symbol] {
        let b = bounds_for(t, b0, n);
        &padded[(t - 1) as usize..(t - 1 + b.x_max_len) as usize]
    };
    let cmp_y = |&ta: &u64, &tb: &u64| -> Ordering {
        let (ba, bb) = (bounds_for(ta, b0, n), bounds_for(tb, b0, n));
        let take = ba.y_max_len.min(bb.y_max_len);
        for k in 0..take {
            let ord = padded[(ta - 2 - k) as usize].cmp(&padded[(tb - 2 - k) as usize]);
            if ord != Ordering::Equal {
                return ord;
            }
        }
        ba.y_max_len.cmp(&bb.y_max_len).then(ta.cmp(&tb))
    };

    let mut x_order = ts.clone();
    x_order.sort_unstable_by(|&ta, &tb| x_slice(ta).cmp(x_slice(tb)).then(ta.cmp(&tb)));
    let mut y_order = ts;
    y_order.sort_unstable_by(cmp_y);

    let mut y_rank_by_t: std::collections::HashMap<u64, u64> =
        std::collections::HashMap::with_capacity(y_order.len());
    for (y0, &t) in y_order.iter().enumerate() {
        y_rank_by_t.insert(t, y0 as u64);
    }
    let col_to_row: Vec<u64> = x_order.iter().map(|t| y_rank_by_t[t]).collect();

    OccurrenceGrid { num_points, b0, n, wt: WaveletTree::new(&col_to_row), t: y_order }
}

impl OccurrenceGrid {
    pub fn num_points(&self) -> u64 {
        self.num_points
    }

    pub fn b0(&self) -> u64 {
        self.b0
    }

    pub fn wavelet(&self) -> &WaveletTree {
        &self.wt
    }

    pub fn t_values(&self) -> &[u64] {
        &self.t
    }

    /// Row rank of the single point in column `x` (both 1-based).
    pub fn point_row(&self, x: u64) -> Result<u64> {
        self.check_rank(x)?;
        Ok(self.wt.access(x - 1) + 1)
    }

    /// Text position of the row's X string.
    pub fn point_position(&self, y: u64) -> Result<u64> {
        self.check_rank(y)?;
        Ok(self.t[(y - 1) as usize])
    }

    pub fn x_string_bounds(&self, y: u64) -> Result<StringBounds> {
        self.check_rank(y)?;
        Ok(bounds_for(self.t[(y - 1) as usize], self.b0, self.n))
    }

    /// All points `(x, y)` with both ranks inside the inclusive ranges;
    /// empty ranges (`x1 > x2`) allowed. Deterministic traversal order.
    pub fn range_report(&self, x1: u64, x2: u64, y1: u64, y2: u64) -> Vec<(u64, u64)> {
        if x1 > x2 || y1 > y2 || x1 < 1 || y1 < 1 {
            return Vec::new();
        }
        let x2 = x2.min(self.num_points);
        let y2 = y2.min(self.num_points);
        self.wt
            .range_report(x1 - 1, x2, y1 - 1, y2)
            .into_iter()
            .map(|(x0, y0)| (x0 + 1, y0 + 1))
            .collect()
    }

    fn check_rank(&self, r: u64) -> Result<()> {
        if r < 1 || r > self.num_points {
            return Err(Error::OutOfRange(format!("rank {r} outside 1..={}", self.num_points)));
        }
        Ok(())
    }

    pub(crate) fn from_parts(b0: u64, n: u64, wt: WaveletTree, t: Vec<u64>) -> Result<OccurrenceGrid> {
        if wt.len() != t.len() as u64 {
            return Err(Error::Corrupt("grid shape mismatch".into()));
        }
        Ok(OccurrenceGrid { num_points: t.len() as u64, b0, n, wt, t })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds_arithmetic() {
        // largest power of two dividing t-1 gives the half length
        let b = bounds_for(7, 8, 64);
        assert_eq!((b.start, b.x_max_len, b.y_max_len), (7, 2, 2));
        // multiples of b0 are top-level boundaries: suffix on X, block on Y
        let b = bounds_for(9, 8, 64);
        assert_eq!((b.start, b.x_max_len, b.y_max_len), (9, 56, 8));
        let b = bounds_for(13, 8, 64);
        assert_eq!((b.start, b.x_max_len, b.y_max_len), (13, 4, 4));
    }
}
