use num_bigint::BigUint;
use num_traits::Zero;
use rand::Rng;

use crate::{Error, Result};

/// Ordered binary payload; each entry is `0` or `1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BitBlock(Vec<u8>);

impl BitBlock {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if let Some(pos) = bits.iter().position(|&b| b > 1) {
            return Err(Error::InvalidParameter(format!(
                "bit {pos} has value {}",
                bits[pos]
            )));
        }
        Ok(Self(bits))
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![0; len])
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        Self((0..len).map(|_| rng.random::<bool>() as u8).collect())
    }

    /// Big-endian `len`-bit representation of `index`.
    pub fn from_index(index: &BigUint, len: usize) -> Result<Self> {
        if index.bits() > len as u64 {
            return Err(Error::IndexOutOfRange { bits: len as u64 });
        }
        Ok(Self(
            (0..len as u64)
                .rev()
                .map(|i| index.bit(i) as u8)
                .collect(),
        ))
    }

    /// Reads the block as an unsigned integer, most-significant bit first.
    pub fn to_index(&self) -> BigUint {
        let mut index = BigUint::zero();
        for (i, &b) in self.0.iter().rev().enumerate() {
            if b == 1 {
                index.set_bit(i as u64, true);
            }
        }
        index
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn into_bits(self) -> Vec<u8> {
        self.0
    }

    pub fn split_at(&self, mid: usize) -> (BitBlock, BitBlock) {
        let (a, b) = self.0.split_at(mid);
        (Self(a.to_vec()), Self(b.to_vec()))
    }

    pub fn concat<'a>(blocks: impl IntoIterator<Item = &'a BitBlock>) -> BitBlock {
        Self(blocks.into_iter().flat_map(|b| b.0.iter().copied()).collect())
    }
}

impl From<Vec<bool>> for BitBlock {
    fn from(v: Vec<bool>) -> Self {
        Self(v.into_iter().map(u8::from).collect())
    }
}

/// A block of one-sided shaped amplitudes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct AmplitudeBlock(pub Vec<u32>);

impl AmplitudeBlock {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn energy(&self) -> u64 {
        self.0.iter().map(|&a| a as u64 * a as u64).sum()
    }
}

impl From<Vec<u32>> for AmplitudeBlock {
    fn from(v: Vec<u32>) -> Self {
        Self(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_is_msb_first() {
        let b = BitBlock::new(vec![1, 0, 1, 1]).unwrap();
        assert_eq!(b.to_index(), BigUint::from(11u32));
        assert_eq!(BitBlock::from_index(&BigUint::from(11u32), 4).unwrap(), b);
        assert_eq!(
            BitBlock::from_index(&BigUint::from(3u32), 4).unwrap().bits(),
            &[0, 0, 1, 1]
        );
    }

    #[test]
    fn index_too_wide() {
        assert!(BitBlock::from_index(&BigUint::from(16u32), 4).is_err());
        assert!(BitBlock::new(vec![0, 2]).is_err());
    }
}
