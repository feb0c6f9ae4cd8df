//! Shared test fixtures: corpus generators and a definitional re-build of
//! the level structure using only the brute-force oracle primitives.
#![allow(dead_code)]

use btindex::oracle::{naive_first_occurrence, naive_lz_parse};
use btindex::Symbol;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn to_symbols(bytes: &[u8], alphabet: &btindex::ByteAlphabet) -> Vec<Symbol> {
    bytes.iter().map(|&b| alphabet.encode(b).expect("byte in alphabet")).collect()
}

// ---------------------------------------------------------------- corpora

pub fn random_text(len: usize, sigma: u8, seed: u64) -> Vec<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| b'a' + rng.gen_range(0..sigma)).collect()
}

pub fn periodic_text(len: usize, period: &[u8]) -> Vec<u8> {
    period.iter().copied().cycle().take(len).collect()
}

pub fn fibonacci_word(max_len: usize) -> Vec<u8> {
    let (mut prev, mut cur) = (vec![b'a'], vec![b'a', b'b']);
    while cur.len() <= max_len {
        let next = [cur.clone(), prev].concat();
        prev = cur;
        cur = next;
        if cur.len() > max_len {
            return prev;
        }
    }
    cur
}

pub fn near_duplicate_halves(half_len: usize, mutations: usize, seed: u64) -> Vec<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let first = random_text(half_len, 4, seed ^ 0x5eed);
    let mut second = first.clone();
    for _ in 0..mutations {
        let at = rng.gen_range(0..half_len);
        second[at] = b'a' + rng.gen_range(0..26);
    }
    [first, second].concat()
}

/// 100 copies of a 1 KiB seed, every copied byte mutated with probability
/// 1% to a random letter.
pub fn mutated_copies_corpus(seed: u64) -> Vec<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let block = random_text(1024, 26, seed ^ 0xb10c);
    let mut out = Vec::with_capacity(102_400);
    for _ in 0..100 {
        for &b in &block {
            if rng.gen_bool(0.01) {
                out.push(b'a' + rng.gen_range(0..26));
            } else {
                out.push(b);
            }
        }
    }
    out
}

/// The exhaustive fixture set: every text is at most 256 bytes.
pub fn fixture_texts() -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<(String, Vec<u8>)> = Vec::new();
    out.push(("single".into(), b"a".to_vec()));
    out.push(("pair".into(), b"ab".to_vec()));
    out.push(("banana".into(), b"banana".to_vec()));
    for sigma in [2u8, 4, 26] {
        for len in [5usize, 64, 256] {
            out.push((format!("random-s{sigma}-l{len}"), random_text(len, sigma, 1000 + sigma as u64 + len as u64)));
        }
    }
    out.push(("periodic-abc".into(), periodic_text(240, b"abc")));
    out.push(("periodic-ab".into(), periodic_text(256, b"ab")));
    out.push(("all-equal-256".into(), vec![b'a'; 256]));
    out.push(("all-equal-33".into(), vec![b'z'; 33]));
    out.push(("fibonacci".into(), fibonacci_word(256)));
    out.push(("near-dup".into(), near_duplicate_halves(128, 3, 77)));
    out
}

// ------------------------------------------------- definitional rebuild

/// One level as the definitions state it: the explicit sequence itself,
/// markings from the pair rule, and the leftmost occurrence of each
/// unmarked block as its source.
pub struct OracleLevel {
    pub b: u64,
    pub seq: Vec<Symbol>,
    /// 1-based padded-text start of each explicit block.
    pub text_starts: Vec<u64>,
    pub marked: Vec<bool>,
    /// `(block_index_0based, source_start_1based)` per unmarked block.
    pub sources: Vec<(usize, u64)>,
}

pub struct OracleTree {
    pub sigma: Symbol,
    pub n_original: u64,
    pub z: u64,
    pub b0: u64,
    pub z_top: u64,
    pub n: u64,
    pub padded: Vec<Symbol>,
    pub levels: Vec<OracleLevel>,
    pub leaf_symbols: Vec<Symbol>,
}

pub fn oracle_tree(text: &[Symbol], sigma: Symbol) -> OracleTree {
    assert!(!text.is_empty());
    let z = naive_lz_parse(text).z();
    let n_prime = text.len() as u64 + 1;
    let mut b0 = 1u64;
    while b0 * z < n_prime {
        b0 *= 2;
    }
    let z_top = n_prime.div_ceil(b0);
    let n = z_top * b0;

    let mut padded = text.to_vec();
    padded.push(sigma + 1);
    padded.resize(n as usize, sigma + 2);

    let mut levels = Vec::new();
    let mut seq = padded.clone();
    let mut text_starts: Vec<u64> = (0..z_top).map(|i| i * b0 + 1).collect();
    let mut b = b0;
    loop {
        let bu = b as usize;
        let nblocks = seq.len() / bu;
        let mut marked = vec![false; nblocks];
        if nblocks == 1 {
            marked[0] = true;
        } else {
            for j in 0..nblocks - 1 {
                if naive_first_occurrence(&seq, (j * bu) as u64 + 1, 2 * b).is_none() {
                    marked[j] = true;
                    marked[j + 1] = true;
                }
            }
        }
        let mut sources = Vec::new();
        for (j, &m) in marked.iter().enumerate() {
            if !m {
                let src = naive_first_occurrence(&seq, (j * bu) as u64 + 1, b)
                    .expect("unmarked block must occur earlier");
                sources.push((j, src));
            }
        }
        let level = OracleLevel { b, seq: seq.clone(), text_starts: text_starts.clone(), marked: marked.clone(), sources };
        levels.push(level);
        if b == 1 {
            break;
        }
        let mut next_seq = Vec::new();
        let mut next_starts = Vec::new();
        for (j, &m) in marked.iter().enumerate() {
            if m {
                next_seq.extend_from_slice(&seq[j * bu..(j + 1) * bu]);
                next_starts.push(text_starts[j]);
                next_starts.push(text_starts[j] + b / 2);
            }
        }
        seq = next_seq;
        text_starts = next_starts;
        b /= 2;
    }
    let last = levels.last().unwrap();
    let leaf_symbols: Vec<Symbol> = last
        .marked
        .iter()
        .enumerate()
        .filter(|&(_, &m)| m)
        .map(|(j, _)| last.seq[j])
        .collect();

    OracleTree { sigma, n_original: text.len() as u64, z, b0, z_top, n, padded, levels, leaf_symbols }
}

/// Grid points with their strings materialized, ranked like the index
/// ranks them (lexicographic, ties on text position).
pub struct OraclePoint {
    pub t: u64,
    pub x_max: u64,
    pub y_max: u64,
    pub x_str: Vec<Symbol>,
    /// Left context read backwards.
    pub y_str: Vec<Symbol>,
}

pub fn oracle_points(ot: &OracleTree) -> Vec<OraclePoint> {
    let mut ts: Vec<(u64, u64)> = Vec::new(); // (t, half length; 0 = boundary)
    for level in &ot.levels {
        if level.b == 1 {
            continue;
        }
        for (j, &m) in level.marked.iter().enumerate() {
            if m {
                ts.push((level.text_starts[j] + level.b / 2, level.b / 2));
            }
        }
    }
    for i in 1..ot.z_top {
        ts.push((i * ot.b0 + 1, 0));
    }
    ts.iter()
        .map(|&(t, half)| {
            let (x_max, y_max) = if half == 0 { (ot.n - t + 1, ot.b0) } else { (half, half) };
            let x_str = ot.padded[(t - 1) as usize..(t - 1 + x_max) as usize].to_vec();
            let y_str: Vec<Symbol> =
                (0..y_max).map(|k| ot.padded[(t - 2 - k) as usize]).collect();
            OraclePoint { t, x_max, y_max, x_str, y_str }
        })
        .collect()
}

/// (x_order, y_order) as the point indexes sorted per axis.
pub fn oracle_grid_orders(points: &[OraclePoint]) -> (Vec<usize>, Vec<usize>) {
    let mut x_order: Vec<usize> = (0..points.len()).collect();
    x_order.sort_by(|&a, &b| points[a].x_str.cmp(&points[b].x_str).then(points[a].t.cmp(&points[b].t)));
    let mut y_order: Vec<usize> = (0..points.len()).collect();
    y_order.sort_by(|&a, &b| points[a].y_str.cmp(&points[b].y_str).then(points[a].t.cmp(&points[b].t)));
    (x_order, y_order)
}

/// Does the occurrence at `pos` (1-based, length `m >= 2`) cross two
/// explicit blocks at some level, or does it sit inside an unmarked block
/// at some level? Exactly one of the two happens.
pub enum OccurrenceKind {
    CrossesBlocks { level: usize },
    InsideUnmarked { level: usize },
}

pub fn classify_occurrence(ot: &OracleTree, pos: u64, m: u64) -> OccurrenceKind {
    assert!(m >= 2);
    let mut i = pos;
    for (l, level) in ot.levels.iter().enumerate() {
        let b = level.b;
        let j1 = i.div_ceil(b);
        let j2 = (i + m - 1).div_ceil(b);
        // the projected window must still hold the same symbols
        assert_eq!(
            level.seq[(i - 1) as usize..(i + m - 1) as usize],
            ot.padded[(pos - 1) as usize..(pos + m - 1) as usize],
            "projection must preserve the window"
        );
        if j1 != j2 {
            return OccurrenceKind::CrossesBlocks { level: l };
        }
        if !level.marked[(j1 - 1) as usize] {
            return OccurrenceKind::InsideUnmarked { level: l };
        }
        // rank projection into the next level
        let rank: u64 = level.marked[..(j1 - 1) as usize].iter().map(|&m| m as u64).sum();
        i = rank * b + (i - 1) % b + 1;
    }
    unreachable!("a window of length >= 2 always crosses blocks of length 1")
}
