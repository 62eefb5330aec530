use crate::{Error, Result};

/// One-sided half of a 2^m-PAM constellation: the odd amplitudes `1, 3, …, 2^m − 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AmplitudeAlphabet {
    m: u32,
    amplitudes: Vec<u32>,
}

impl AmplitudeAlphabet {
    pub fn new(m: u32) -> Result<Self> {
        if !(2..=12).contains(&m) {
            return Err(Error::InvalidParameter(format!(
                "bit levels per PAM symbol must lie in [2, 12], got {m}"
            )));
        }
        let amplitudes = (0..1u32 << (m - 1)).map(|i| 2 * i + 1).collect();
        Ok(Self { m, amplitudes })
    }

    /// Bit levels per PAM symbol (sign included).
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn amplitudes(&self) -> &[u32] {
        &self.amplitudes
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn max_amplitude(&self) -> u32 {
        *self.amplitudes.last().expect("alphabet is never empty")
    }

    /// Position of `amplitude` in the alphabet, if it belongs to it.
    pub fn index_of(&self, amplitude: u32) -> Option<usize> {
        if amplitude % 2 == 1 && amplitude <= self.max_amplitude() {
            Some((amplitude as usize - 1) / 2)
        } else {
            None
        }
    }

    /// Energy increments `(a² − 1) / 8` on the compressed trellis grid.
    ///
    /// Odd squares are `1 mod 8`, so after `n` amplitudes every reachable
    /// energy sits at `n + 8j`.
    pub fn grid_steps(&self) -> Vec<usize> {
        self.amplitudes
            .iter()
            .map(|&a| ((a as u64 * a as u64 - 1) / 8) as usize)
            .collect()
    }

    pub fn energies(&self) -> Vec<u64> {
        self.amplitudes.iter().map(|&a| a as u64 * a as u64).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sixteen_pam_half() {
        let a = AmplitudeAlphabet::new(4).unwrap();
        assert_eq!(a.amplitudes(), &[1, 3, 5, 7, 9, 11, 13, 15]);
        assert_eq!(a.len(), 8);
        assert_eq!(a.index_of(9), Some(4));
        assert_eq!(a.index_of(4), None);
        assert_eq!(a.index_of(17), None);
        assert_eq!(a.grid_steps(), vec![0, 1, 3, 6, 10, 15, 21, 28]);
    }

    #[test]
    fn rejects_single_level() {
        assert!(AmplitudeAlphabet::new(1).is_err());
    }
}
