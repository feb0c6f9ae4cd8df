mod common;
use btindex::{format, TextIndex};

#[test]
fn probe_sizes() {
    let bytes = common::mutated_copies_corpus(0xBEEF);
    let index = TextIndex::from_bytes(&bytes).unwrap();
    let s = index.tree.stats();
    println!("stats: {s:?}");
    let file = format::serialize(&index);
    println!("file total: {}", file.len());
    // parse section table
    let count = u32::from_le_bytes(file[8..12].try_into().unwrap()) as usize;
    for e in 0..count {
        let o = 12 + e * 20;
        let id = u32::from_le_bytes(file[o..o + 4].try_into().unwrap());
        let len = u64::from_le_bytes(file[o + 12..o + 20].try_into().unwrap());
        println!("section {id}: {len} bytes");
    }
    for (l, lev) in index.tree.levels().iter().enumerate() {
        println!(
            "level {l}: b={} blocks={} marked={} unmarked={}",
            lev.block_len(),
            lev.marked().len(),
            lev.marked().count(true),
            lev.num_unmarked()
        );
    }
    println!("leaf symbols: {}", index.tree.leaf_symbols().len());
    println!(
        "wavelet: {} levels x {} points",
        index.tree.grid().wavelet().levels().len(),
        index.tree.grid().num_points()
    );
}
