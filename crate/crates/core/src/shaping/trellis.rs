//! Enumerative sphere shaping.
//!
//! The codebook is every amplitude sequence of length `N` whose energy
//! `Σ a_i²` does not exceed `E_max`, ordered lexicographically by amplitude
//! value. A counting trellis `T(n, e)` holds the number of admissible
//! suffixes from position `n` with accumulated energy `e`; encoding walks the
//! trellis subtracting the suffix counts of smaller amplitudes.
//!
//! Energies are stored on the compressed grid `e = n + 8j` since every odd
//! square is `1 mod 8`. With that indexing the admissible `j` range is the
//! same at every position: `0 ..= (E_max − N) / 8`.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{AmplitudeAlphabet, AmplitudeBlock, BitBlock};
use crate::{Error, Result};

/// Bounded-energy counting lattice with exact path counts.
#[derive(Debug, Clone)]
pub struct EnergyTrellis {
    alphabet: AmplitudeAlphabet,
    n: usize,
    e_max: u64,
    steps: Vec<usize>,
    /// `counts[n][j]` = number of admissible suffixes from position `n` at energy `n + 8j`.
    counts: Vec<Vec<BigUint>>,
}

fn grid_width(n: usize, e_max: u64) -> usize {
    ((e_max - n as u64) / 8 + 1) as usize
}

impl EnergyTrellis {
    pub fn build(alphabet: &AmplitudeAlphabet, n: usize, e_max: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("blocklength must be at least 1".into()));
        }
        if e_max < n as u64 {
            return Err(Error::EmptyShapingSet { e_max, min_energy: n as u64 });
        }
        let width = grid_width(n, e_max);
        let steps = alphabet.grid_steps();
        let mut counts = vec![Vec::new(); n + 1];
        counts[n] = vec![BigUint::one(); width];
        for pos in (0..n).rev() {
            let next = &counts[pos + 1];
            let row = (0..width)
                .map(|j| {
                    let mut acc = BigUint::zero();
                    for &d in &steps {
                        match next.get(j + d) {
                            Some(c) => acc += c,
                            None => break,
                        }
                    }
                    acc
                })
                .collect();
            counts[pos] = row;
        }
        Ok(Self { alphabet: alphabet.clone(), n, e_max, steps, counts })
    }

    pub fn alphabet(&self) -> &AmplitudeAlphabet {
        &self.alphabet
    }

    pub fn blocklength(&self) -> usize {
        self.n
    }

    pub fn e_max(&self) -> u64 {
        self.e_max
    }

    /// Number of grid columns per position.
    pub fn width(&self) -> usize {
        self.counts[0].len()
    }

    /// `T(pos, energy)`; zero for energies off the grid or above the bound.
    pub fn count(&self, pos: usize, energy: u64) -> BigUint {
        if pos > self.n || energy < pos as u64 || (energy - pos as u64) % 8 != 0 {
            return BigUint::zero();
        }
        let j = ((energy - pos as u64) / 8) as usize;
        self.counts[pos].get(j).cloned().unwrap_or_default()
    }

    fn at(&self, pos: usize, j: usize) -> Option<&BigUint> {
        self.counts[pos].get(j)
    }

    /// Size of the whole bounded-energy set, `T(0, 0)`.
    pub fn num_sequences(&self) -> &BigUint {
        &self.counts[0][0]
    }

    /// `floor(log2 T(0, 0))`, computed exactly.
    pub fn num_bits(&self) -> u64 {
        self.num_sequences().bits() - 1
    }

    /// The `index`-th sequence of the bounded-energy set in lexicographic order.
    pub fn sequence_at(&self, index: &BigUint) -> Result<AmplitudeBlock> {
        if index >= self.num_sequences() {
            return Err(Error::IndexOutOfRange { bits: self.num_bits() + 1 });
        }
        let mut rest = index.clone();
        let mut j = 0usize;
        let mut out = Vec::with_capacity(self.n);
        for pos in 0..self.n {
            let mut chosen = None;
            for (ai, &d) in self.steps.iter().enumerate() {
                let Some(c) = self.at(pos + 1, j + d) else { break };
                if rest < *c {
                    chosen = Some(ai);
                    j += d;
                    break;
                }
                rest -= c;
            }
            let ai = chosen.expect("index below T(0,0) always finds a branch");
            out.push(self.alphabet.amplitudes()[ai]);
        }
        Ok(AmplitudeBlock(out))
    }

    /// Lexicographic rank of `seq` within the bounded-energy set.
    pub fn index_of(&self, seq: &AmplitudeBlock) -> Result<BigUint> {
        if seq.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, actual: seq.len() });
        }
        let mut energy = 0u64;
        for &a in seq.as_slice() {
            self.alphabet.index_of(a).ok_or(Error::NotInAlphabet(a))?;
            energy += a as u64 * a as u64;
        }
        if energy > self.e_max {
            return Err(Error::EnergyExceeded { energy, e_max: self.e_max });
        }
        let mut index = BigUint::zero();
        let mut j = 0usize;
        for (pos, &a) in seq.as_slice().iter().enumerate() {
            let ai = self.alphabet.index_of(a).expect("checked above");
            for &d in &self.steps[..ai] {
                if let Some(c) = self.at(pos + 1, j + d) {
                    index += c;
                }
            }
            j += self.steps[ai];
        }
        Ok(index)
    }

    /// Shapes exactly `num_bits()` input bits.
    pub fn encode(&self, input: &BitBlock) -> Result<AmplitudeBlock> {
        let k = self.num_bits() as usize;
        if input.len() != k {
            return Err(Error::LengthMismatch { expected: k, actual: input.len() });
        }
        self.sequence_at(&input.to_index())
    }

    /// Inverse of [`EnergyTrellis::encode`]; rejects sequences outside the `2^k` used indices.
    pub fn decode(&self, seq: &AmplitudeBlock) -> Result<BitBlock> {
        self.decode_with_bits(seq, self.num_bits())
    }

    pub(crate) fn decode_with_bits(&self, seq: &AmplitudeBlock, k: u64) -> Result<BitBlock> {
        let index = self.index_of(seq)?;
        if index.bits() > k {
            return Err(Error::IndexOutOfRange { bits: k });
        }
        BitBlock::from_index(&index, k as usize)
    }

    /// Forward counts `F(n, j)`: number of length-`n` prefixes at energy `n + 8j`.
    fn forward_counts(&self) -> Vec<Vec<BigUint>> {
        let width = self.width();
        let mut fwd = vec![vec![BigUint::zero(); width]; self.n + 1];
        fwd[0][0] = BigUint::one();
        for pos in 0..self.n {
            let (head, tail) = fwd.split_at_mut(pos + 1);
            let cur = &head[pos];
            let next = &mut tail[0];
            for (j, c) in cur.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for &d in &self.steps {
                    match next.get_mut(j + d) {
                        Some(slot) => *slot += c,
                        None => break,
                    }
                }
            }
        }
        fwd
    }

    /// Exact per-amplitude occurrence counts over the whole bounded-energy set.
    fn occurrence_counts(&self) -> Vec<BigUint> {
        let fwd = self.forward_counts();
        self.steps
            .iter()
            .map(|&d| {
                let mut acc = BigUint::zero();
                for pos in 0..self.n {
                    for (j, f) in fwd[pos].iter().enumerate() {
                        if f.is_zero() {
                            continue;
                        }
                        if let Some(t) = self.at(pos + 1, j + d) {
                            acc += f * t;
                        }
                    }
                }
                acc
            })
            .collect()
    }

    /// Time-averaged amplitude marginal under the uniform distribution over
    /// all `T(0, 0)` sequences, as exact rationals.
    pub fn amplitude_distribution_exact(&self) -> Vec<BigRational> {
        let denom = BigUint::from(self.n) * self.num_sequences();
        self.occurrence_counts()
            .into_iter()
            .map(|c| ratio(c, denom.clone()))
            .collect()
    }

    pub fn amplitude_distribution(&self) -> Vec<f64> {
        self.amplitude_distribution_exact().iter().map(rational_to_f64).collect()
    }

    /// Amplitude marginal over the first `2^k` sequences only: the codebook
    /// an encoder with `k` input bits actually emits.
    pub fn codebook_distribution_exact(&self, k: u64) -> Result<Vec<BigRational>> {
        let used = BigUint::one() << k;
        if used > *self.num_sequences() {
            return Err(Error::InsufficientBits { requested: k, available: self.num_bits() });
        }
        if used == *self.num_sequences() {
            return Ok(self.amplitude_distribution_exact());
        }
        let counts = self.prefix_set_occurrences(&used);
        let denom = BigUint::from(self.n) * used;
        Ok(counts.into_iter().map(|c| ratio(c, denom.clone())).collect())
    }

    pub fn codebook_distribution(&self, k: u64) -> Result<Vec<f64>> {
        Ok(self.codebook_distribution_exact(k)?.iter().map(rational_to_f64).collect())
    }

    /// Per-amplitude occurrence counts over the sequences with index below
    /// `limit` (`0 < limit < T(0,0)`).
    ///
    /// Every such sequence agrees with the boundary sequence `s = seq(limit)`
    /// up to some position, where it takes a smaller amplitude and continues
    /// freely. `below[j]` counts prefixes that have already dropped below `s`.
    fn prefix_set_occurrences(&self, limit: &BigUint) -> Vec<BigUint> {
        let boundary = self.sequence_at(limit).expect("limit < T(0,0)");
        let width = self.width();
        let q = self.alphabet.len();
        let bidx: Vec<usize> = boundary
            .as_slice()
            .iter()
            .map(|&a| self.alphabet.index_of(a).expect("trellis output"))
            .collect();
        let mut bj = Vec::with_capacity(self.n + 1);
        bj.push(0usize);
        for &ai in &bidx {
            bj.push(bj.last().unwrap() + self.steps[ai]);
        }
        // branch[pos][b] = sequences diverging from the boundary at `pos` with amplitude b
        let branch: Vec<Vec<BigUint>> = (0..self.n)
            .map(|pos| {
                (0..bidx[pos])
                    .map(|b| self.at(pos + 1, bj[pos] + self.steps[b]).cloned().unwrap_or_default())
                    .collect()
            })
            .collect();
        // tail[pos] = sequences that follow the boundary through `pos` and diverge later
        let mut tail = vec![BigUint::zero(); self.n];
        let mut acc = BigUint::zero();
        for pos in (0..self.n).rev() {
            tail[pos] = acc.clone();
            for c in &branch[pos] {
                acc += c;
            }
        }
        debug_assert_eq!(&acc, limit);

        let mut occ = vec![BigUint::zero(); q];
        let mut below = vec![BigUint::zero(); width];
        for pos in 0..self.n {
            for (ai, &d) in self.steps.iter().enumerate() {
                for (j, g) in below.iter().enumerate() {
                    if g.is_zero() {
                        continue;
                    }
                    match self.at(pos + 1, j + d) {
                        Some(t) => occ[ai] += g * t,
                        None => break,
                    }
                }
                if ai < bidx[pos] {
                    occ[ai] += &branch[pos][ai];
                } else if ai == bidx[pos] {
                    occ[ai] += &tail[pos];
                }
            }
            let mut next = vec![BigUint::zero(); width];
            for (j, g) in below.iter().enumerate() {
                if g.is_zero() {
                    continue;
                }
                for &d in &self.steps {
                    match next.get_mut(j + d) {
                        Some(slot) => *slot += g,
                        None => break,
                    }
                }
            }
            for b in 0..bidx[pos] {
                if let Some(slot) = next.get_mut(bj[pos] + self.steps[b]) {
                    *slot += 1u32;
                }
            }
            below = next;
        }
        occ
    }

    /// Diagnostic dump: one `n,e,count` row per stored state, counts in decimal.
    pub fn write_table<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "n,e,count")?;
        for (pos, row) in self.counts.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                writeln!(out, "{},{},{}", pos, pos as u64 + 8 * j as u64, c)?;
            }
        }
        Ok(())
    }
}

/// `T(0, 0)` without keeping the whole table; memory is one trellis row.
pub fn count_sequences(alphabet: &AmplitudeAlphabet, n: usize, e_max: u64) -> BigUint {
    if e_max < n as u64 {
        return BigUint::zero();
    }
    let width = grid_width(n, e_max);
    let steps = alphabet.grid_steps();
    let mut row = vec![BigUint::one(); width];
    for _ in 0..n {
        row = (0..width)
            .map(|j| {
                let mut acc = BigUint::zero();
                for &d in &steps {
                    match row.get(j + d) {
                        Some(c) => acc += c,
                        None => break,
                    }
                }
                acc
            })
            .collect();
    }
    row.swap_remove(0)
}

/// Smallest `E_max` on the grid `N + 8j` whose trellis carries at least `k` bits.
///
/// `T(0,0)` is nondecreasing in `E_max`, so a galloping search followed by
/// bisection over `j` finds the boundary.
pub fn min_emax_for_bits(alphabet: &AmplitudeAlphabet, n: usize, k: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidParameter("blocklength must be at least 1".into()));
    }
    let available = n as u64 * (alphabet.m() as u64 - 1);
    if k > available {
        return Err(Error::InsufficientBits { requested: k, available });
    }
    let bits_at = |j: u64| count_sequences(alphabet, n, n as u64 + 8 * j).bits() - 1;
    let j_full = n as u64 * ((alphabet.max_amplitude() as u64).pow(2) - 1) / 8;
    if bits_at(0) >= k {
        return Ok(n as u64);
    }
    let (mut lo, mut hi) = (0u64, 1u64);
    while hi < j_full && bits_at(hi) < k {
        lo = hi;
        hi = (hi * 2).min(j_full);
    }
    // invariant: bits_at(lo) < k <= bits_at(hi)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if bits_at(mid) >= k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(n as u64 + 8 * hi)
}

pub(crate) fn ratio(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(num.into(), den.into())
}

/// Nearest-double conversion of an exact nonnegative rational.
pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    let (num, den) = (r.numer().magnitude(), r.denom().magnitude());
    if num.is_zero() {
        return 0.0;
    }
    // Scale so the integer quotient keeps ~64 significant bits.
    let shift = den.bits() as i64 - num.bits() as i64 + 64;
    let q = if shift >= 0 { (num << shift as u64) / den } else { num / (den << (-shift) as u64) };
    q.to_f64().unwrap() * 2f64.powi(-shift as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_level() -> AmplitudeAlphabet {
        AmplitudeAlphabet::new(2).unwrap()
    }

    #[test]
    fn small_counts() {
        let a = two_level();
        assert_eq!(EnergyTrellis::build(&a, 2, 10).unwrap().num_sequences(), &BigUint::from(3u32));
        assert_eq!(EnergyTrellis::build(&a, 2, 2).unwrap().num_sequences(), &BigUint::from(1u32));
        let a4 = AmplitudeAlphabet::new(3).unwrap();
        assert_eq!(EnergyTrellis::build(&a4, 1, 49).unwrap().num_sequences(), &BigUint::from(4u32));
    }

    #[test]
    fn rejects_empty_set() {
        assert!(matches!(
            EnergyTrellis::build(&two_level(), 3, 2),
            Err(Error::EmptyShapingSet { .. })
        ));
    }

    #[test]
    fn num_bits_is_floor_log2() {
        let a = two_level();
        assert_eq!(EnergyTrellis::build(&a, 2, 10).unwrap().num_bits(), 1);
        assert_eq!(EnergyTrellis::build(&a, 2, 2).unwrap().num_bits(), 0);
        // unconstrained: 2^433 sequences exactly
        let t = EnergyTrellis::build(&a, 433, 433 * 9).unwrap();
        assert_eq!(t.num_sequences(), &(BigUint::one() << 433u32));
        assert_eq!(t.num_bits(), 433);
    }

    #[test]
    fn recursion_and_grid() {
        let a = AmplitudeAlphabet::new(3).unwrap();
        let t = EnergyTrellis::build(&a, 5, 60).unwrap();
        for e in 0..=60u64 {
            if e % 8 == 5 % 8 {
                assert_eq!(t.count(5, e), BigUint::one());
            }
        }
        for pos in 0..5 {
            for e in pos as u64..=60 {
                let want: BigUint = a
                    .energies()
                    .iter()
                    .filter(|&&s| e + s <= 60)
                    .map(|&s| t.count(pos + 1, e + s))
                    .sum();
                assert_eq!(t.count(pos, e), want, "pos {pos} e {e}");
            }
        }
    }

    #[test]
    fn min_emax_examples() {
        let a = two_level();
        assert_eq!(min_emax_for_bits(&a, 2, 1).unwrap(), 10);
        assert_eq!(min_emax_for_bits(&a, 2, 2).unwrap(), 18);
        assert!(matches!(min_emax_for_bits(&a, 2, 3), Err(Error::InsufficientBits { .. })));
        assert_eq!(min_emax_for_bits(&a, 2, 0).unwrap(), 2);
    }

    #[test]
    fn encode_examples() {
        let a = two_level();
        let t = EnergyTrellis::build(&a, 2, 10).unwrap();
        assert_eq!(t.encode(&BitBlock::new(vec![0]).unwrap()).unwrap().0, vec![1, 1]);
        assert_eq!(t.encode(&BitBlock::new(vec![1]).unwrap()).unwrap().0, vec![1, 3]);
        let full = EnergyTrellis::build(&a, 2, 18).unwrap();
        assert_eq!(full.encode(&BitBlock::new(vec![1, 1]).unwrap()).unwrap().0, vec![3, 3]);
    }

    #[test]
    fn decode_examples() {
        let a = two_level();
        let t = EnergyTrellis::build(&a, 2, 10).unwrap();
        assert_eq!(t.decode(&AmplitudeBlock(vec![1, 1])).unwrap().bits(), &[0]);
        assert_eq!(t.index_of(&AmplitudeBlock(vec![3, 1])).unwrap(), BigUint::from(2u32));
        assert!(matches!(
            t.decode(&AmplitudeBlock(vec![3, 1])),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            t.decode(&AmplitudeBlock(vec![3, 3])),
            Err(Error::EnergyExceeded { .. })
        ));
        assert!(matches!(t.decode(&AmplitudeBlock(vec![2, 1])), Err(Error::NotInAlphabet(2))));
    }

    #[test]
    fn distribution_examples() {
        let a = two_level();
        let t = EnergyTrellis::build(&a, 2, 10).unwrap();
        let p = t.amplitude_distribution_exact();
        assert_eq!(p[0], BigRational::new(2.into(), 3.into()));
        assert_eq!(p[1], BigRational::new(1.into(), 3.into()));

        let a8 = AmplitudeAlphabet::new(4).unwrap();
        let t = EnergyTrellis::build(&a8, 7, 7).unwrap();
        assert_eq!(t.amplitude_distribution()[0], 1.0);

        let t = EnergyTrellis::build(&a, 5, 45).unwrap();
        assert_eq!(t.amplitude_distribution(), vec![0.5, 0.5]);
    }

    #[test]
    fn codebook_distribution_drops_unused_tail() {
        let a = two_level();
        let t = EnergyTrellis::build(&a, 2, 10).unwrap();
        // used codebook {(1,1), (1,3)}: three ones out of four slots
        let p = t.codebook_distribution_exact(1).unwrap();
        assert_eq!(p[0], BigRational::new(3.into(), 4.into()));
        assert!(t.codebook_distribution_exact(2).is_err());
    }

    #[test]
    fn table_dump() {
        let t = EnergyTrellis::build(&two_level(), 2, 10).unwrap();
        let mut buf = Vec::new();
        t.write_table(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("n,e,count\n0,0,3\n"));
        assert!(text.contains("2,10,1"));
    }

    #[test]
    fn rational_conversion() {
        let r = BigRational::new(1.into(), 3.into());
        assert!((rational_to_f64(&r) - 1.0 / 3.0).abs() < 1e-16);
        let big = BigRational::new(BigUint::from(7u32).pow(300).into(), BigUint::from(5u32).pow(400).into());
        let want = 300.0 * 7f64.ln() - 400.0 * 5f64.ln();
        assert!((rational_to_f64(&big).ln() - want).abs() < 1e-12);
    }
}
