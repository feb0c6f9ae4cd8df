//! Dense byte alphabet remapping.
//!
//! Byte values present in the input are mapped to codes `1..=sigma` in
//! increasing byte order, keeping sigma minimal and leaving room above it
//! for the terminator and padding sentinels.

use crate::Symbol;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ByteAlphabet {
    to_symbol: [Symbol; 256], // 0 = absent
    from_symbol: Vec<u8>,
}

impl ByteAlphabet {
    pub fn from_bytes(input: &[u8]) -> ByteAlphabet {
        let mut present = [false; 256];
        for &b in input {
            present[b as usize] = true;
        }
        Self::from_present(&present)
    }

    pub fn from_present_bytes(bytes: &[u8]) -> ByteAlphabet {
        let mut present = [false; 256];
        for &b in bytes {
            present[b as usize] = true;
        }
        Self::from_present(&present)
    }

    fn from_present(present: &[bool; 256]) -> ByteAlphabet {
        let mut to_symbol = [0 as Symbol; 256];
        let mut from_symbol = Vec::new();
        for (b, &p) in present.iter().enumerate() {
            if p {
                from_symbol.push(b as u8);
                to_symbol[b] = from_symbol.len() as Symbol;
            }
        }
        ByteAlphabet { to_symbol, from_symbol }
    }

    pub fn sigma(&self) -> Symbol {
        self.from_symbol.len() as Symbol
    }

    /// Code for a byte, or `None` if the byte is not in the alphabet.
    pub fn encode(&self, b: u8) -> Option<Symbol> {
        match self.to_symbol[b as usize] {
            0 => None,
            s => Some(s),
        }
    }

    /// Byte for a code in `1..=sigma`.
    pub fn decode(&self, s: Symbol) -> u8 {
        self.from_symbol[(s - 1) as usize]
    }

    pub fn symbol_bytes(&self) -> &[u8] {
        &self.from_symbol
    }
}
