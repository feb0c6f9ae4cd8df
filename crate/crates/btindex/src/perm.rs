//! Invertible permutations on `[1..size]`, with the full inverse stored.

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    forward: Vec<u64>,
    inverse: Vec<u64>,
}

impl Permutation {
    /// `forward[i-1]` is the image of `i`; must be a bijection on `[1..n]`.
    pub fn new(forward: Vec<u64>) -> Result<Permutation> {
        let n = forward.len() as u64;
        let mut inverse = vec![0u64; forward.len()];
        for (i, &j) in forward.iter().enumerate() {
            if j == 0 || j > n {
                return Err(Error::InvalidArgument(format!("permutation value {j} out of 1..={n}")));
            }
            if inverse[(j - 1) as usize] != 0 {
                return Err(Error::InvalidArgument(format!("permutation value {j} repeated")));
            }
            inverse[(j - 1) as usize] = i as u64 + 1;
        }
        Ok(Permutation { forward, inverse })
    }

    pub fn size(&self) -> u64 {
        self.forward.len() as u64
    }

    pub fn forward_values(&self) -> &[u64] {
        &self.forward
    }

    pub fn apply(&self, i: u64) -> Result<u64> {
        if i == 0 || i > self.size() {
            return Err(Error::OutOfRange(format!("index {i} out of 1..={}", self.size())));
        }
        Ok(self.forward[(i - 1) as usize])
    }

    pub fn invert(&self, j: u64) -> Result<u64> {
        if j == 0 || j > self.size() {
            return Err(Error::OutOfRange(format!("index {j} out of 1..={}", self.size())));
        }
        Ok(self.inverse[(j - 1) as usize])
    }

    #[inline]
    pub(crate) fn apply_unchecked(&self, i: u64) -> u64 {
        self.forward[(i - 1) as usize]
    }

    #[inline]
    pub(crate) fn invert_unchecked(&self, j: u64) -> u64 {
        self.inverse[(j - 1) as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    #[test]
    fn small_examples() {
        let p = Permutation::new(vec![3, 1, 2]).unwrap();
        assert_eq!(p.apply(1).unwrap(), 3);
        assert_eq!(p.invert(3).unwrap(), 1);
        assert!(p.apply(0).is_err());
        assert!(p.apply(4).is_err());
        assert!(p.invert(4).is_err());
    }

    #[test]
    fn rejects_non_bijection() {
        assert!(Permutation::new(vec![1, 1]).is_err());
        assert!(Permutation::new(vec![0]).is_err());
        assert!(Permutation::new(vec![2]).is_err());
    }

    #[test]
    fn random_inverse_identity() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut vals: Vec<u64> = (1..=1000).collect();
        vals.shuffle(&mut rng);
        let p = Permutation::new(vals).unwrap();
        for i in 1..=1000 {
            assert_eq!(p.invert(p.apply(i).unwrap()).unwrap(), i);
        }
    }
}
