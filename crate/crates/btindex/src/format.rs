//! Index file format.
//!
//! Little-endian throughout: magic `BTIX`, format version, a section table
//! (id, byte offset, byte length), the section payloads, and a trailing
//! CRC-32 of everything before it. Bitvectors are stored as a length plus
//! the raw bit payload padded to a byte boundary; sparse bitvectors as
//! delta-encoded one-positions; integer arrays bit-packed to the width of
//! their largest value.

use crate::alphabet::ByteAlphabet;
use crate::bits::{BitVector, SparseBits};
use crate::grid::OccurrenceGrid;
use crate::perm::Permutation;
use crate::tree::{BlockTree, Level};
use crate::wavelet::WaveletTree;
use crate::{Error, Result, Symbol, TextIndex};
use std::path::Path;

const MAGIC: &[u8; 4] = b"BTIX";
const VERSION: u32 = 1;

const SEC_HEADER: u32 = 1;
const SEC_ALPHABET: u32 = 2;
const SEC_LEVELS: u32 = 3;
const SEC_LEAVES: u32 = 4;
const SEC_GRID: u32 = 5;
const SEC_POSITIONS: u32 = 6;

pub fn serialize(index: &TextIndex) -> Vec<u8> {
    let tree = &index.tree;
    let mut header = Vec::new();
    for v in [
        tree.sigma as u64,
        tree.n_original,
        tree.n,
        tree.z,
        tree.z_top,
        tree.b0,
        tree.levels.len() as u64,
        tree.leaf_count(),
        tree.grid.num_points(),
    ] {
        put_u64(&mut header, v);
    }

    let alphabet = index.alphabet.symbol_bytes().to_vec();

    let mut levels = Vec::new();
    for lev in &tree.levels {
        put_u64(&mut levels, lev.b);
        put_bitvector(&mut levels, &lev.d);
        let ones = lev.f.one_positions();
        put_u64(&mut levels, ones.len() as u64);
        let mut prev = 0u64;
        for &p in ones {
            put_varint(&mut levels, p - prev);
            prev = p;
        }
        put_packed(&mut levels, lev.pi.forward_values());
    }

    let mut leaves = Vec::new();
    put_packed(&mut leaves, &tree.leaf_symbols.iter().map(|&s| s as u64).collect::<Vec<_>>());

    let mut grid = Vec::new();
    grid.push(tree.grid.wavelet().levels().len() as u8);
    for level in tree.grid.wavelet().levels() {
        put_bitvector(&mut grid, level);
    }

    let mut positions = Vec::new();
    put_packed(&mut positions, tree.grid.t_values());

    let sections: [(u32, Vec<u8>); 6] = [
        (SEC_HEADER, header),
        (SEC_ALPHABET, alphabet),
        (SEC_LEVELS, levels),
        (SEC_LEAVES, leaves),
        (SEC_GRID, grid),
        (SEC_POSITIONS, positions),
    ];

    let table_end = 4 + 4 + 4 + sections.len() * 20;
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    put_u32(&mut out, VERSION);
    put_u32(&mut out, sections.len() as u32);
    let mut offset = table_end as u64;
    for (id, payload) in &sections {
        put_u32(&mut out, *id);
        put_u64(&mut out, offset);
        put_u64(&mut out, payload.len() as u64);
        offset += payload.len() as u64;
    }
    for (_, payload) in &sections {
        out.extend_from_slice(payload);
    }
    let crc = crc32(&out);
    put_u32(&mut out, crc);
    out
}

pub fn deserialize(bytes: &[u8]) -> Result<TextIndex> {
    if bytes.len() < 16 || &bytes[..4] != MAGIC {
        return Err(Error::Corrupt("bad magic".into()));
    }
    let body = &bytes[..bytes.len() - 4];
    let stored_crc = u32::from_le_bytes(bytes[bytes.len() - 4..].try_into().unwrap());
    if crc32(body) != stored_crc {
        return Err(Error::Corrupt("checksum mismatch".into()));
    }
    let mut cur = Cursor { data: bytes, pos: 4 };
    let version = cur.take_u32()?;
    if version != VERSION {
        return Err(Error::Corrupt(format!("unsupported format version {version}")));
    }
    let count = cur.take_u32()? as usize;
    let mut table = Vec::with_capacity(count);
    for _ in 0..count {
        let id = cur.take_u32()?;
        let offset = cur.take_u64()? as usize;
        let len = cur.take_u64()? as usize;
        if offset.checked_add(len).map_or(true, |end| end > body.len()) {
            return Err(Error::Corrupt("section out of bounds".into()));
        }
        table.push((id, offset, len));
    }
    let section = |id: u32| -> Result<Cursor> {
        table
            .iter()
            .find(|&&(i, _, _)| i == id)
            .map(|&(_, off, len)| Cursor { data: &bytes[..off + len], pos: off })
            .ok_or_else(|| Error::Corrupt(format!("missing section {id}")))
    };

    let mut h = section(SEC_HEADER)?;
    let sigma = h.take_u64()?;
    let n_original = h.take_u64()?;
    let n = h.take_u64()?;
    let z = h.take_u64()?;
    let z_top = h.take_u64()?;
    let b0 = h.take_u64()?;
    let level_count = h.take_u64()?;
    let w = h.take_u64()?;
    let num_points = h.take_u64()?;
    if sigma == 0 || sigma > (Symbol::MAX - 2) as u64 || b0 == 0 || !b0.is_power_of_two() {
        return Err(Error::Corrupt("implausible header".into()));
    }
    if n != z_top * b0 || level_count != b0.trailing_zeros() as u64 + 1 {
        return Err(Error::Corrupt("inconsistent geometry".into()));
    }

    let mut a = section(SEC_ALPHABET)?;
    let alpha_bytes = a.take_bytes(sigma as usize)?.to_vec();
    if alpha_bytes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Corrupt("alphabet bytes must be strictly increasing".into()));
    }
    let alphabet = ByteAlphabet::from_present_bytes(&alpha_bytes);

    let mut lv = section(SEC_LEVELS)?;
    let mut levels = Vec::with_capacity(level_count as usize);
    let mut expect_b = b0;
    let mut expect_blocks = z_top;
    for _ in 0..level_count {
        let b = lv.take_u64()?;
        if b != expect_b {
            return Err(Error::Corrupt("level block length out of sequence".into()));
        }
        let d = take_bitvector(&mut lv)?;
        if d.len() != expect_blocks {
            return Err(Error::Corrupt("level width breaks the halving identity".into()));
        }
        let w_l = lv.take_u64()?;
        if w_l != d.count(false) {
            return Err(Error::Corrupt("stored unmarked count disagrees with bitvector".into()));
        }
        let mut ones = Vec::with_capacity(w_l as usize);
        let mut prev = 0u64;
        for _ in 0..w_l {
            let gap = lv.take_varint()?;
            if gap == 0 {
                return Err(Error::Corrupt("one-positions must be strictly increasing".into()));
            }
            prev += gap;
            ones.push(prev);
        }
        let n_l = d.len() * b;
        let f = SparseBits::new(n_l + w_l, ones).map_err(corrupt)?;
        let forward = take_packed(&mut lv)?;
        if forward.len() as u64 != w_l {
            return Err(Error::Corrupt("permutation size disagrees with unmarked count".into()));
        }
        let pi = Permutation::new(forward).map_err(corrupt)?;
        expect_blocks = 2 * d.count(true);
        expect_b = b / 2;
        levels.push(Level { b, d, f, pi });
    }

    let mut lf = section(SEC_LEAVES)?;
    let leaf_values = take_packed(&mut lf)?;
    let last = levels.last().ok_or_else(|| Error::Corrupt("no levels".into()))?;
    if last.b != 1 || leaf_values.len() as u64 != last.d.count(true) {
        return Err(Error::Corrupt("leaf symbols disagree with the last level".into()));
    }
    if leaf_values.iter().any(|&v| v == 0 || v > sigma + 2) {
        return Err(Error::Corrupt("leaf symbol out of range".into()));
    }
    let leaf_symbols: Vec<Symbol> = leaf_values.iter().map(|&v| v as Symbol).collect();

    let mut g = section(SEC_GRID)?;
    let depth = g.take_bytes(1)?[0] as usize;
    let mut wt_levels = Vec::with_capacity(depth);
    for _ in 0..depth {
        let level = take_bitvector(&mut g)?;
        wt_levels.push(level);
    }
    let wt = WaveletTree::from_levels(num_points, wt_levels)?;

    let mut pz = section(SEC_POSITIONS)?;
    let t = take_packed(&mut pz)?;
    if t.len() as u64 != num_points || t.iter().any(|&v| v < 2 || v > n) {
        return Err(Error::Corrupt("point positions out of range".into()));
    }
    let grid = OccurrenceGrid::from_parts(b0, n, wt, t)?;

    let tree = BlockTree {
        sigma: sigma as Symbol,
        n_original,
        n,
        z,
        z_top,
        b0,
        levels,
        leaf_symbols,
        grid,
    };
    if tree.leaf_count() != w {
        return Err(Error::Corrupt("leaf count disagrees with header".into()));
    }
    Ok(TextIndex { tree, alphabet })
}

fn corrupt(e: Error) -> Error {
    Error::Corrupt(e.to_string())
}

pub fn save_to_path(index: &TextIndex, path: &Path) -> Result<u64> {
    let bytes = serialize(index);
    std::fs::write(path, &bytes)?;
    Ok(bytes.len() as u64)
}

pub fn load_from_path(path: &Path) -> Result<TextIndex> {
    let bytes = std::fs::read(path)?;
    deserialize(&bytes)
}

fn put_u32(out: &mut Vec<u8>, v: u32) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn put_u64(out: &mut Vec<u8>, v: u64) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn put_varint(out: &mut Vec<u8>, mut v: u64) {
    loop {
        let byte = (v & 0x7f) as u8;
        v >>= 7;
        if v == 0 {
            out.push(byte);
            return;
        }
        out.push(byte | 0x80);
    }
}

fn put_bitvector(out: &mut Vec<u8>, bv: &BitVector) {
    put_u64(out, bv.len());
    let nbytes = bv.len().div_ceil(8) as usize;
    for j in 0..nbytes {
        let word = bv.words()[j / 8];
        out.push((word >> (8 * (j % 8))) as u8);
    }
}

fn put_packed(out: &mut Vec<u8>, values: &[u64]) {
    let width = values.iter().copied().max().map_or(1, bits_for);
    out.push(width as u8);
    put_u64(out, values.len() as u64);
    let nwords = (values.len() as u64 * width as u64).div_ceil(64) as usize;
    let mut words = vec![0u64; nwords];
    let mut bit = 0u64;
    for &v in values {
        let w = (bit / 64) as usize;
        let off = bit % 64;
        words[w] |= v << off;
        if off + width as u64 > 64 {
            words[w + 1] |= v >> (64 - off);
        }
        bit += width as u64;
    }
    for w in words {
        put_u64(out, w);
    }
}

fn bits_for(v: u64) -> u32 {
    (64 - v.leading_zeros()).max(1)
}

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take_bytes(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.pos + n > self.data.len() {
            return Err(Error::Corrupt("truncated section".into()));
        }
        let s = &self.data[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn take_u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take_bytes(4)?.try_into().unwrap()))
    }

    fn take_u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take_bytes(8)?.try_into().unwrap()))
    }

    fn take_varint(&mut self) -> Result<u64> {
        let mut v = 0u64;
        let mut shift = 0u32;
        loop {
            let byte = self.take_bytes(1)?[0];
            if shift >= 64 || (shift == 63 && byte > 1) {
                return Err(Error::Corrupt("varint overflow".into()));
            }
            v |= ((byte & 0x7f) as u64) << shift;
            if byte & 0x80 == 0 {
                return Ok(v);
            }
            shift += 7;
        }
    }
}

fn take_bitvector(cur: &mut Cursor) -> Result<BitVector> {
    let len = cur.take_u64()?;
    let nbytes = len.div_ceil(8) as usize;
    let bytes = cur.take_bytes(nbytes)?;
    let mut words = vec![0u64; len.div_ceil(64) as usize];
    for (j, &b) in bytes.iter().enumerate() {
        words[j / 8] |= (b as u64) << (8 * (j % 8));
    }
    BitVector::from_raw(len, words)
}

fn take_packed(cur: &mut Cursor) -> Result<Vec<u64>> {
    let width = cur.take_bytes(1)?[0] as u64;
    if width == 0 || width > 64 {
        return Err(Error::Corrupt("bad packed width".into()));
    }
    let len = cur.take_u64()?;
    let nwords = (len * width).div_ceil(64) as usize;
    let mut words = Vec::with_capacity(nwords);
    for _ in 0..nwords {
        words.push(cur.take_u64()?);
    }
    let mask = if width == 64 { u64::MAX } else { (1u64 << width) - 1 };
    let mut out = Vec::with_capacity(len as usize);
    let mut bit = 0u64;
    for _ in 0..len {
        let w = (bit / 64) as usize;
        let off = bit % 64;
        let mut v = words[w] >> off;
        if off + width > 64 {
            v |= words[w + 1] << (64 - off);
        }
        out.push(v & mask);
        bit += width;
    }
    Ok(out)
}

/// CRC-32 (IEEE 802.3, reflected, polynomial 0xEDB88320).
pub fn crc32(data: &[u8]) -> u32 {
    static TABLE: std::sync::OnceLock<[u32; 256]> = std::sync::OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut t = [0u32; 256];
        for (i, e) in t.iter_mut().enumerate() {
            let mut c = i as u32;
            for _ in 0..8 {
                c = if c & 1 == 1 { 0xEDB88320 ^ (c >> 1) } else { c >> 1 };
            }
            *e = c;
        }
        t
    });
    let mut crc = 0xFFFFFFFFu32;
    for &b in data {
        crc = table[((crc ^ b as u32) & 0xFF) as usize] ^ (crc >> 8);
    }
    !crc
}
