//! A compressed self-index over block trees.
//!
//! The index stores a text in block-tree form (halving blocks, with blocks
//! whose content appeared earlier replaced by references to their first
//! occurrence) plus a grid of block-boundary context pairs. It answers
//! substring extraction and exact pattern matching (all occurrence
//! positions) without keeping the plain text around.
//!
//! Positions are 1-based throughout, matching the arithmetic of the level
//! projection and source-lookup formulas.

pub mod alphabet;
pub mod bits;
pub mod format;
pub mod grid;
pub mod lz;
pub mod oracle;
pub mod perm;
pub mod search;
pub mod tree;
pub mod wavelet;

pub use alphabet::ByteAlphabet;
pub use bits::{BitVector, SparseBits};
pub use grid::OccurrenceGrid;
pub use lz::{parse, Phrase, PhraseList};
pub use perm::Permutation;
pub use tree::{BlockTree, IndexStats, Layout};

/// Symbol type: dense codes `1..=sigma`, then two sentinels (terminator,
/// padding) that never occur in valid patterns.
pub type Symbol = u16;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("construction invariant violated: {0}")]
    Construction(String),
    #[error("corrupt index: {0}")]
    Corrupt(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// A built index together with the byte alphabet it was built from.
///
/// [`BlockTree`] works on dense symbols; this wrapper owns the byte
/// remapping so callers can query with raw byte strings.
pub struct TextIndex {
    pub tree: BlockTree,
    pub alphabet: ByteAlphabet,
}

impl TextIndex {
    /// Builds an index from raw bytes. The alphabet is the set of byte
    /// values present, remapped densely.
    pub fn from_bytes(input: &[u8]) -> Result<TextIndex> {
        if input.is_empty() {
            return Err(Error::InvalidArgument("empty input".into()));
        }
        let alphabet = ByteAlphabet::from_bytes(input);
        let text: Vec<Symbol> = input.iter().map(|&b| alphabet.encode(b).unwrap()).collect();
        let tree = BlockTree::build(&text, alphabet.sigma())?;
        Ok(TextIndex { tree, alphabet })
    }

    /// All 1-based occurrence positions of `pattern`, sorted ascending.
    /// A pattern containing a byte absent from the indexed alphabet cannot
    /// occur, so the result is empty.
    pub fn search_bytes(&self, pattern: &[u8]) -> Result<Vec<u64>> {
        if pattern.is_empty() {
            return Err(Error::InvalidArgument("empty pattern".into()));
        }
        let mut symbols = Vec::with_capacity(pattern.len());
        for &b in pattern {
            match self.alphabet.encode(b) {
                Some(s) => symbols.push(s),
                None => return Ok(Vec::new()),
            }
        }
        self.tree.search(&symbols)
    }

    /// Extracts `len` original bytes starting at 1-based position `from`.
    pub fn extract_bytes(&self, from: u64, len: u64) -> Result<Vec<u8>> {
        let symbols = self.tree.extract(from, len)?;
        Ok(symbols.iter().map(|&s| self.alphabet.decode(s)).collect())
    }
}
