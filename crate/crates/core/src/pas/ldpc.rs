//! Binary LDPC codes loaded from alist files: systematic encoding through a
//! one-time Gaussian elimination of `H`, and normalized min-sum decoding.

use std::path::Path;

use crate::{Error, Result};

pub const DEFAULT_NORMALIZATION: f64 = 0.75;
pub const DEFAULT_MAX_ITERATIONS: usize = 50;
pub const LLR_CLIP: f64 = 40.0;

/// Sparse binary parity-check matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityCheckMatrix {
    n: usize,
    rows: Vec<Vec<usize>>,
    cols: Vec<Vec<usize>>,
}

impl ParityCheckMatrix {
    pub fn from_rows(n: usize, rows: Vec<Vec<usize>>) -> Result<Self> {
        let mut cols = vec![Vec::new(); n];
        for (r, row) in rows.iter().enumerate() {
            for &c in row {
                if c >= n {
                    return Err(Error::InvalidCode(format!("row {r} references column {c} >= {n}")));
                }
                cols[c].push(r);
            }
        }
        Ok(Self { n, rows, cols })
    }

    /// Parses the alist format: `n m`, max degrees, column and row degree
    /// lists, then 1-based index lists per column and per row (0 pads).
    pub fn from_alist(text: &str) -> Result<Self> {
        let mut nums = text.split_ascii_whitespace().map(|t| {
            t.parse::<usize>()
                .map_err(|_| Error::InvalidCode(format!("non-numeric alist token {t:?}")))
        });
        let mut next = || nums.next().unwrap_or_else(|| Err(Error::InvalidCode("truncated alist".into())));
        let n = next()?;
        let m = next()?;
        let max_col = next()?;
        let max_row = next()?;
        let col_deg = (0..n).map(|_| next()).collect::<Result<Vec<_>>>()?;
        let row_deg = (0..m).map(|_| next()).collect::<Result<Vec<_>>>()?;
        let mut col_lists = Vec::with_capacity(n);
        for &d in &col_deg {
            let entries = (0..max_col).map(|_| next()).collect::<Result<Vec<_>>>()?;
            col_lists.push(entries.into_iter().take(d).collect::<Vec<_>>());
        }
        let mut rows = Vec::with_capacity(m);
        for &d in &row_deg {
            let entries = (0..max_row).map(|_| next()).collect::<Result<Vec<_>>>()?;
            let row: Vec<usize> = entries.into_iter().take(d).collect();
            if row.iter().any(|&c| c == 0 || c > n) {
                return Err(Error::InvalidCode("row index list out of range".into()));
            }
            rows.push(row.into_iter().map(|c| c - 1).collect());
        }
        let h = Self::from_rows(n, rows)?;
        for (c, list) in col_lists.iter().enumerate() {
            let mut want: Vec<usize> = list.iter().map(|&r| r.wrapping_sub(1)).collect();
            want.sort_unstable();
            let mut have = h.cols[c].clone();
            have.sort_unstable();
            if want != have {
                return Err(Error::InvalidCode(format!("column {} lists disagree with rows", c + 1)));
            }
        }
        Ok(h)
    }

    pub fn read_alist(path: &Path) -> Result<Self> {
        Self::from_alist(&std::fs::read_to_string(path)?)
    }

    pub fn num_cols(&self) -> usize {
        self.n
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, r: usize) -> &[usize] {
        &self.rows[r]
    }

    pub fn is_codeword(&self, bits: &[u8]) -> bool {
        self.rows
            .iter()
            .all(|row| row.iter().fold(0u8, |acc, &c| acc ^ bits[c]) == 0)
    }
}

/// An LDPC code with its systematic encoder.
#[derive(Debug, Clone)]
pub struct LdpcCode {
    h: ParityCheckMatrix,
    info_positions: Vec<usize>,
    parity_positions: Vec<usize>,
    /// one bitset over the info bits per parity bit
    parity_eqs: Vec<Vec<u64>>,
}

impl LdpcCode {
    /// Reduces `H` to row-echelon form once; pivots (preferring the last
    /// columns) carry parity, the remaining columns carry information.
    pub fn new(h: ParityCheckMatrix) -> Result<Self> {
        let n = h.num_cols();
        let words = n.div_ceil(64);
        let mut dense: Vec<Vec<u64>> = (0..h.num_rows())
            .map(|r| {
                let mut row = vec![0u64; words];
                for &c in h.row(r) {
                    row[c / 64] ^= 1 << (c % 64);
                }
                row
            })
            .collect();
        let bit = |row: &[u64], c: usize| (row[c / 64] >> (c % 64)) & 1 == 1;
        let mut pivots = Vec::new();
        let mut rank = 0;
        for c in (0..n).rev() {
            let Some(p) = (rank..dense.len()).find(|&r| bit(&dense[r], c)) else { continue };
            dense.swap(rank, p);
            let pivot_row = dense[rank].clone();
            for (r, row) in dense.iter_mut().enumerate() {
                if r != rank && bit(row, c) {
                    row.iter_mut().zip(&pivot_row).for_each(|(a, b)| *a ^= b);
                }
            }
            pivots.push(c);
            rank += 1;
            if rank == dense.len() {
                break;
            }
        }
        if rank == n {
            return Err(Error::InvalidCode("parity-check matrix has full column rank".into()));
        }
        let mut is_pivot = vec![false; n];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let info_positions: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
        let info_words = info_positions.len().div_ceil(64);
        // order parity bits by codeword position
        let mut order: Vec<usize> = (0..rank).collect();
        order.sort_by_key(|&i| pivots[i]);
        let parity_positions: Vec<usize> = order.iter().map(|&i| pivots[i]).collect();
        let parity_eqs = order
            .iter()
            .map(|&i| {
                let mut eq = vec![0u64; info_words];
                for (t, &c) in info_positions.iter().enumerate() {
                    if bit(&dense[i], c) {
                        eq[t / 64] |= 1 << (t % 64);
                    }
                }
                eq
            })
            .collect();
        Ok(Self { h, info_positions, parity_positions, parity_eqs })
    }

    pub fn from_alist_file(path: &Path) -> Result<Self> {
        Self::new(ParityCheckMatrix::read_alist(path)?)
    }

    pub fn h(&self) -> &ParityCheckMatrix {
        &self.h
    }

    /// Codeword length `n_c`.
    pub fn length(&self) -> usize {
        self.h.num_cols()
    }

    /// Code dimension `k_c`.
    pub fn dimension(&self) -> usize {
        self.info_positions.len()
    }

    pub fn rate(&self) -> num_rational::Rational64 {
        num_rational::Rational64::new(self.dimension() as i64, self.length() as i64)
    }

    pub fn info_positions(&self) -> &[usize] {
        &self.info_positions
    }

    pub fn parity_positions(&self) -> &[usize] {
        &self.parity_positions
    }

    /// Parity bits for `info`, ordered by codeword position.
    pub fn parity(&self, info: &[u8]) -> Result<Vec<u8>> {
        if info.len() != self.dimension() {
            return Err(Error::LengthMismatch { expected: self.dimension(), actual: info.len() });
        }
        let mut packed = vec![0u64; info.len().div_ceil(64)];
        for (t, &b) in info.iter().enumerate() {
            packed[t / 64] |= (b as u64 & 1) << (t % 64);
        }
        Ok(self
            .parity_eqs
            .iter()
            .map(|eq| {
                let ones: u32 = eq.iter().zip(&packed).map(|(a, b)| (a & b).count_ones()).sum();
                (ones & 1) as u8
            })
            .collect())
    }

    /// Full codeword in `H` column order.
    pub fn encode(&self, info: &[u8]) -> Result<Vec<u8>> {
        let parity = self.parity(info)?;
        let mut cw = vec![0u8; self.length()];
        for (&pos, &b) in self.info_positions.iter().zip(info) {
            cw[pos] = b;
        }
        for (&pos, &b) in self.parity_positions.iter().zip(&parity) {
            cw[pos] = b;
        }
        Ok(cw)
    }

    pub fn extract_info(&self, codeword: &[u8]) -> Vec<u8> {
        self.info_positions.iter().map(|&p| codeword[p]).collect()
    }
}

/// Hard decisions plus syndrome status from [`MinSumDecoder::decode`].
#[derive(Debug, Clone, PartialEq)]
pub struct DecodeOutcome {
    pub codeword: Vec<u8>,
    pub converged: bool,
    pub iterations: usize,
}

/// Flooding-schedule normalized min-sum decoder. Positive LLR ⇒ bit 0.
#[derive(Debug, Clone, Copy)]
pub struct MinSumDecoder {
    pub normalization: f64,
    pub max_iterations: usize,
    pub clip: f64,
}

impl Default for MinSumDecoder {
    fn default() -> Self {
        Self {
            normalization: DEFAULT_NORMALIZATION,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            clip: LLR_CLIP,
        }
    }
}

impl MinSumDecoder {
    /// Runs until the hard decisions satisfy every check or the iteration
    /// budget is spent. A zero posterior LLR counts as undecided, so an
    /// uninformative input never reports convergence.
    pub fn decode(&self, h: &ParityCheckMatrix, llrs: &[f64]) -> Result<DecodeOutcome> {
        if llrs.len() != h.num_cols() {
            return Err(Error::LengthMismatch { expected: h.num_cols(), actual: llrs.len() });
        }
        let channel: Vec<f64> = llrs.iter().map(|&l| l.clamp(-self.clip, self.clip)).collect();
        // check-to-variable messages, edge-aligned with h.rows
        let mut c2v: Vec<Vec<f64>> = (0..h.num_rows()).map(|r| vec![0.0; h.row(r).len()]).collect();
        let mut posterior = channel.clone();
        let mut hard = vec![0u8; h.num_cols()];
        for iteration in 1..=self.max_iterations {
            for (r, msgs) in c2v.iter_mut().enumerate() {
                let row = h.row(r);
                let mut sign = 1.0f64;
                let (mut min1, mut min2, mut argmin) = (f64::INFINITY, f64::INFINITY, usize::MAX);
                let v2c: Vec<f64> = row.iter().zip(msgs.iter()).map(|(&c, &m)| posterior[c] - m).collect();
                for (e, &x) in v2c.iter().enumerate() {
                    if x < 0.0 {
                        sign = -sign;
                    }
                    let a = x.abs();
                    if a < min1 {
                        min2 = min1;
                        min1 = a;
                        argmin = e;
                    } else if a < min2 {
                        min2 = a;
                    }
                }
                for (e, m) in msgs.iter_mut().enumerate() {
                    let mag = if e == argmin { min2 } else { min1 };
                    let s = if v2c[e] < 0.0 { -sign } else { sign };
                    let new = (self.normalization * mag * s).clamp(-self.clip, self.clip);
                    *m = new;
                }
            }
            posterior.copy_from_slice(&channel);
            for (r, msgs) in c2v.iter().enumerate() {
                for (&c, &m) in h.row(r).iter().zip(msgs) {
                    posterior[c] += m;
                }
            }
            for (b, &p) in hard.iter_mut().zip(&posterior) {
                *b = u8::from(p < 0.0);
            }
            if posterior.iter().all(|&p| p != 0.0) && h.is_codeword(&hard) {
                return Ok(DecodeOutcome { codeword: hard, converged: true, iterations: iteration });
            }
        }
        Ok(DecodeOutcome { codeword: hard, converged: false, iterations: self.max_iterations })
    }
}

/// Maps bits to noiseless LLRs at the clip magnitude.
pub fn perfect_llrs(bits: &[u8]) -> Vec<f64> {
    bits.iter().map(|&b| if b == 0 { LLR_CLIP } else { -LLR_CLIP }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = include_str!("../../fixtures/ldpc_12x24.alist");

    #[test]
    fn alist_parse() {
        let h = ParityCheckMatrix::from_alist(SMALL).unwrap();
        assert_eq!((h.num_rows(), h.num_cols()), (12, 24));
        assert!(ParityCheckMatrix::from_alist("3 2\n1").is_err());
    }

    #[test]
    fn encoder_outputs_codewords() {
        let code = LdpcCode::new(ParityCheckMatrix::from_alist(SMALL).unwrap()).unwrap();
        assert_eq!(code.dimension(), 12);
        for seed in 0..64u32 {
            let info: Vec<u8> = (0..12).map(|i| ((seed >> (i % 6)) ^ i) as u8 & 1).collect();
            let cw = code.encode(&info).unwrap();
            assert!(code.h().is_codeword(&cw));
            assert_eq!(code.extract_info(&cw), info);
        }
    }

    #[test]
    fn noiseless_decodes_in_one_iteration() {
        let code = LdpcCode::new(ParityCheckMatrix::from_alist(SMALL).unwrap()).unwrap();
        let cw = code.encode(&[1, 0, 1, 1, 0, 0, 1, 0, 1, 1, 1, 0]).unwrap();
        let out = MinSumDecoder::default().decode(code.h(), &perfect_llrs(&cw)).unwrap();
        assert!(out.converged);
        assert_eq!(out.iterations, 1);
        assert_eq!(out.codeword, cw);
    }

    #[test]
    fn zero_llrs_do_not_converge() {
        let h = ParityCheckMatrix::from_alist(SMALL).unwrap();
        let out = MinSumDecoder::default().decode(&h, &[0.0; 24]).unwrap();
        assert!(!out.converged);
    }

    #[test]
    fn corrects_every_single_flip() {
        let code = LdpcCode::new(ParityCheckMatrix::from_alist(SMALL).unwrap()).unwrap();
        let cw = code.encode(&[0, 1, 1, 0, 1, 0, 0, 1, 1, 0, 1, 1]).unwrap();
        for flip in 0..24 {
            let mut llrs: Vec<f64> = perfect_llrs(&cw).iter().map(|l| l / 4.0).collect();
            llrs[flip] = -llrs[flip];
            let out = MinSumDecoder::default().decode(code.h(), &llrs).unwrap();
            assert!(out.converged, "flip {flip}");
            assert_eq!(out.codeword, cw, "flip {flip}");
        }
    }
}
