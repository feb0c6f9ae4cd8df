//! Brute-force reference implementations.
//!
//! Direct transcriptions of the definitions, quadratic or worse, sharing no
//! code with the index. The test suite measures the index against these, and
//! the CLI `verify` subcommand runs them on user corpora.

use crate::lz::{Phrase, PhraseList};
use crate::Symbol;

/// All 1-based positions where `pattern` occurs in `text`, by direct scan.
pub fn naive_search(text: &[Symbol], pattern: &[Symbol]) -> Vec<u64> {
    let mut out = Vec::new();
    if pattern.is_empty() || pattern.len() > text.len() {
        return out;
    }
    for start in 0..=text.len() - pattern.len() {
        if &text[start..start + pattern.len()] == pattern {
            out.push(start as u64 + 1);
        }
    }
    out
}

/// Leftmost 1-based `p < window_start` where the window's content occurs
/// (occurrences may overlap the window itself), or `None`.
pub fn naive_first_occurrence(seq: &[Symbol], window_start: u64, window_len: u64) -> Option<u64> {
    let start = (window_start - 1) as usize;
    let len = window_len as usize;
    debug_assert!(start + len <= seq.len());
    let window = &seq[start..start + len];
    (0..start).find(|&p| p + len <= seq.len() && &seq[p..p + len] == window).map(|p| p as u64 + 1)
}

/// Quadratic greedy parse: at each position the phrase is the longest
/// factor with a source ending strictly before it (leftmost source on
/// ties), or a length-1 literal when the symbol is new.
pub fn naive_lz_parse(text: &[Symbol]) -> PhraseList {
    let n = text.len();
    let mut phrases = Vec::new();
    let mut i = 0usize;
    while i < n {
        let mut best_len = 0usize;
        let mut best_src = 0usize;
        for s in 0..i {
            let cap = (i - s).min(n - i);
            let mut len = 0;
            while len < cap && text[s + len] == text[i + len] {
                len += 1;
            }
            if len > best_len {
                best_len = len;
                best_src = s;
            }
        }
        if best_len == 0 {
            phrases.push(Phrase { start: i as u64 + 1, len: 1, source: None });
            i += 1;
        } else {
            phrases.push(Phrase {
                start: i as u64 + 1,
                len: best_len as u64,
                source: Some(best_src as u64 + 1),
            });
            i += best_len;
        }
    }
    PhraseList { phrases, n: n as u64 }
}
