//! Greedy non-overlapping Lempel-Ziv factorization.
//!
//! Each phrase is the longest factor whose source (an earlier occurrence)
//! ends strictly before the phrase begins; a symbol never seen before
//! becomes a length-1 literal. Ties between equally long sources pick the
//! leftmost one. The phrase count `z` fixes the block tree's top-level
//! granularity.
//!
//! The parser binary-searches the phrase length per position: a length is
//! feasible iff the suffix-array interval of suffixes sharing that prefix
//! contains a start early enough not to overlap, which a wavelet tree over
//! the suffix array answers as a range minimum.

use crate::wavelet::WaveletTree;
use crate::{Error, Result, Symbol};
use std::cmp::Ordering;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Phrase {
    /// 1-based start in the text.
    pub start: u64,
    pub len: u64,
    /// 1-based source start; `None` for a literal.
    pub source: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhraseList {
    pub phrases: Vec<Phrase>,
    pub n: u64,
}

impl PhraseList {
    pub fn z(&self) -> u64 {
        self.phrases.len() as u64
    }

    /// Rebuilds the text by copying each phrase from its source (literal
    /// symbols are taken from `original`); equality with `original` is the
    /// correctness invariant of the parse.
    pub fn reconstruct(&self, original: &[Symbol]) -> Vec<Symbol> {
        let mut out: Vec<Symbol> = Vec::with_capacity(original.len());
        for ph in &self.phrases {
            match ph.source {
                None => out.push(original[(ph.start - 1) as usize]),
                Some(src) => {
                    for k in 0..ph.len {
                        out.push(out[(src - 1 + k) as usize]);
                    }
                }
            }
        }
        out
    }
}

/// Greedy left-to-right factorization of `text`.
pub fn parse(text: &[Symbol]) -> Result<PhraseList> {
    if text.is_empty() {
        return Err(Error::InvalidArgument("cannot parse empty text".into()));
    }
    let n = text.len();
    let sa = suffix_array(text);
    let starts = WaveletTree::new(&sa.iter().map(|&s| s as u64).collect::<Vec<_>>());

    // suffixes sharing a prefix of any fixed length form a rank interval;
    // a length is feasible iff the earliest start in that interval leaves
    // room for a non-overlapping source
    let interval = |i: usize, len: usize| -> (usize, usize) {
        let w = &text[i..i + len];
        let lo = partition(&sa, |s| prefix_cmp(&text[s..], w) == Ordering::Less);
        let hi = partition(&sa, |s| prefix_cmp(&text[s..], w) != Ordering::Greater);
        (lo, hi)
    };
    let leftmost_source = |i: usize, len: usize| -> Option<usize> {
        let (lo, hi) = interval(i, len);
        if lo >= hi {
            return None;
        }
        let min_start = starts.quantile(lo as u64, hi as u64, 0) as usize;
        (min_start + len <= i).then_some(min_start)
    };

    let mut phrases = Vec::new();
    let mut i = 0usize;
    while i < n {
        if leftmost_source(i, 1).is_none() {
            phrases.push(Phrase { start: i as u64 + 1, len: 1, source: None });
            i += 1;
            continue;
        }
        let max_len = i.min(n - i);
        let (mut lo, mut hi) = (1usize, max_len);
        while lo < hi {
            let mid = lo + (hi - lo + 1) / 2;
            if leftmost_source(i, mid).is_some() {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        let src = leftmost_source(i, lo).expect("feasible length has a source");
        phrases.push(Phrase { start: i as u64 + 1, len: lo as u64, source: Some(src as u64 + 1) });
        i += lo;
    }
    Ok(PhraseList { phrases, n: n as u64 })
}

/// Does the suffix start with `w`? `Less`/`Greater` orders the suffix
/// against the set of strings prefixed by `w`; a suffix shorter than `w`
/// that matches is `Less`.
fn prefix_cmp(suffix: &[Symbol], w: &[Symbol]) -> Ordering {
    let k = suffix.len().min(w.len());
    match suffix[..k].cmp(&w[..k]) {
        Ordering::Equal if suffix.len() < w.len() => Ordering::Less,
        Ordering::Equal => Ordering::Equal,
        other => other,
    }
}

fn partition(sa: &[usize], pred: impl Fn(usize) -> bool) -> usize {
    let (mut lo, mut hi) = (0usize, sa.len());
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if pred(sa[mid]) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Suffix array by prefix doubling.
fn suffix_array(text: &[Symbol]) -> Vec<usize> {
    let n = text.len();
    let mut sa: Vec<usize> = (0..n).collect();
    let mut rank: Vec<u64> = text.iter().map(|&s| s as u64).collect();
    let mut tmp = vec![0u64; n];
    let mut k = 1usize;
    loop {
        let key = |i: usize| (rank[i], if i + k < n { rank[i + k] + 1 } else { 0 });
        sa.sort_unstable_by_key(|&i| key(i));
        tmp[sa[0]] = 0;
        for w in 1..n {
            tmp[sa[w]] = tmp[sa[w - 1]] + u64::from(key(sa[w]) != key(sa[w - 1]));
        }
        std::mem::swap(&mut rank, &mut tmp);
        if rank[sa[n - 1]] as usize == n - 1 {
            break;
        }
        k *= 2;
    }
    sa
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::naive_lz_parse;
    use rand::{Rng, SeedableRng};

    fn sym(s: &str) -> Vec<Symbol> {
        s.bytes().map(|b| (b - b'a' + 1) as Symbol).collect()
    }

    #[test]
    fn rejects_empty() {
        assert!(parse(&[]).is_err());
    }

    #[test]
    fn single_literal() {
        let p = parse(&sym("a")).unwrap();
        assert_eq!(p.z(), 1);
        assert_eq!(p.phrases[0], Phrase { start: 1, len: 1, source: None });
    }

    #[test]
    fn doubling_runs() {
        let p = parse(&sym("aaaaaaaa")).unwrap();
        assert_eq!(p.z(), 4);
        assert_eq!(p.phrases.iter().map(|ph| ph.len).collect::<Vec<_>>(), vec![1, 1, 2, 4]);
        assert_eq!(p, naive_lz_parse(&sym("aaaaaaaa")));
    }

    #[test]
    fn abc_repeats() {
        let p = parse(&sym("abcabcabc")).unwrap();
        assert_eq!(p.z(), 5);
        assert_eq!(p, naive_lz_parse(&sym("abcabcabc")));
    }

    #[test]
    fn suffix_array_is_sorted() {
        let t = sym("mississippi");
        let sa = suffix_array(&t);
        for w in 1..sa.len() {
            assert!(t[sa[w - 1]..] < t[sa[w]..]);
        }
    }

    #[test]
    fn matches_oracle_on_random_texts() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for sigma in [1u16, 2, 3, 26] {
            for len in [1usize, 2, 3, 17, 120, 400] {
                let text: Vec<Symbol> = (0..len).map(|_| rng.gen_range(1..=sigma)).collect();
                let got = parse(&text).unwrap();
                let want = naive_lz_parse(&text);
                assert_eq!(got, want, "sigma={sigma} len={len}");
                assert_eq!(got.reconstruct(&text), text);
            }
        }
    }

    #[test]
    fn matches_oracle_at_4096() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let text: Vec<Symbol> = (0..4096).map(|_| rng.gen_range(1..=4)).collect();
        let got = parse(&text).unwrap();
        assert_eq!(got, naive_lz_parse(&text));
        assert_eq!(got.reconstruct(&text), text);
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(64))]
        #[test]
        fn parse_invariants(text in proptest::collection::vec(1u16..=4, 1..300)) {
            let p = parse(&text).unwrap();
            // phrases tile the text
            let mut pos = 1u64;
            for ph in &p.phrases {
                proptest::prop_assert_eq!(ph.start, pos);
                proptest::prop_assert!(ph.len >= 1);
                if let Some(src) = ph.source {
                    // sources end strictly before their phrase
                    proptest::prop_assert!(src + ph.len - 1 < ph.start);
                }
                pos += ph.len;
            }
            proptest::prop_assert_eq!(pos, text.len() as u64 + 1);
            proptest::prop_assert_eq!(p.reconstruct(&text), text.clone());
            proptest::prop_assert_eq!(p.phrases.clone(), naive_lz_parse(&text).phrases);

            let distinct = text.iter().collect::<std::collections::HashSet<_>>().len() as u64;
            proptest::prop_assert!(p.z() >= distinct);
            proptest::prop_assert_eq!(p.z() == 1, text.len() == 1);
        }
    }
}
