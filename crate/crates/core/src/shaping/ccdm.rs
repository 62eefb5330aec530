//! Constant-composition distribution matching.
//!
//! The codebook is every permutation of a fixed amplitude composition,
//! ranked lexicographically with exact multinomial arithmetic. This is the
//! enumerative equivalent of arithmetic-coding CCDM and is perfectly
//! invertible.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::{AmplitudeAlphabet, AmplitudeBlock, BitBlock};
use crate::{Error, Result};

/// Occurrence count per alphabet amplitude; the counts sum to the blocklength.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Composition {
    counts: Vec<usize>,
}

impl Composition {
    pub fn new(counts: Vec<usize>) -> Result<Self> {
        if counts.is_empty() || counts.iter().sum::<usize>() == 0 {
            return Err(Error::InvalidParameter("composition must have positive length".into()));
        }
        Ok(Self { counts })
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn blocklength(&self) -> usize {
        self.counts.iter().sum()
    }

    /// `Σ n_a a²` over the given alphabet.
    pub fn energy(&self, alphabet: &AmplitudeAlphabet) -> u64 {
        self.counts
            .iter()
            .zip(alphabet.energies())
            .map(|(&c, e)| c as u64 * e)
            .sum()
    }

    /// `n_a / N`.
    pub fn distribution(&self) -> Vec<f64> {
        let n = self.blocklength() as f64;
        self.counts.iter().map(|&c| c as f64 / n).collect()
    }

    fn histogram(&self, alphabet: &AmplitudeAlphabet, seq: &AmplitudeBlock) -> Result<Vec<usize>> {
        let mut hist = vec![0usize; self.counts.len()];
        for &a in seq.as_slice() {
            let i = alphabet.index_of(a).filter(|&i| i < hist.len()).ok_or(Error::NotInAlphabet(a))?;
            hist[i] += 1;
        }
        Ok(hist)
    }
}

/// Multinomial coefficient `N! / Π n_a!`.
pub fn ccdm_count(composition: &Composition) -> BigUint {
    let mut total = BigUint::one();
    let mut placed = 0u64;
    for &c in composition.counts() {
        // running product of binomials C(placed + i, i), exact at every step
        for i in 1..=c as u64 {
            placed += 1;
            total *= placed;
            total /= i;
        }
    }
    total
}

/// Number of input bits a composition supports: `floor(log2 multinomial)`.
pub fn ccdm_num_bits(composition: &Composition) -> u64 {
    ccdm_count(composition).bits() - 1
}

/// Enumerative encoder/decoder over one composition.
#[derive(Debug, Clone)]
pub struct CcdmCodebook {
    alphabet: AmplitudeAlphabet,
    composition: Composition,
    total: BigUint,
}

impl CcdmCodebook {
    pub fn new(alphabet: &AmplitudeAlphabet, composition: Composition) -> Result<Self> {
        if composition.counts().len() > alphabet.len() {
            return Err(Error::InvalidParameter(format!(
                "composition has {} entries but the alphabet only {}",
                composition.counts().len(),
                alphabet.len()
            )));
        }
        let mut counts = composition.counts.clone();
        counts.resize(alphabet.len(), 0);
        let composition = Composition { counts };
        let total = ccdm_count(&composition);
        Ok(Self { alphabet: alphabet.clone(), composition, total })
    }

    pub fn alphabet(&self) -> &AmplitudeAlphabet {
        &self.alphabet
    }

    pub fn composition(&self) -> &Composition {
        &self.composition
    }

    pub fn blocklength(&self) -> usize {
        self.composition.blocklength()
    }

    pub fn num_sequences(&self) -> &BigUint {
        &self.total
    }

    pub fn num_bits(&self) -> u64 {
        self.total.bits() - 1
    }

    /// The `index`-th permutation of the composition in lexicographic order.
    pub fn sequence_at(&self, index: &BigUint) -> Result<AmplitudeBlock> {
        if index >= &self.total {
            return Err(Error::IndexOutOfRange { bits: self.num_bits() + 1 });
        }
        let mut rest = index.clone();
        let mut remaining = self.composition.counts.clone();
        let mut left = self.blocklength() as u64;
        // number of permutations of the remaining multiset
        let mut perms = self.total.clone();
        let mut out = Vec::with_capacity(left as usize);
        while left > 0 {
            let mut chosen = None;
            for (ai, &c) in remaining.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let with_a = &perms * c as u64 / left;
                if rest < with_a {
                    chosen = Some((ai, with_a));
                    break;
                }
                rest -= with_a;
            }
            let (ai, with_a) = chosen.expect("index below total always finds a branch");
            out.push(self.alphabet.amplitudes()[ai]);
            remaining[ai] -= 1;
            left -= 1;
            perms = with_a;
        }
        Ok(AmplitudeBlock(out))
    }

    /// Lexicographic rank of a permutation of the composition.
    pub fn index_of(&self, seq: &AmplitudeBlock) -> Result<BigUint> {
        if seq.len() != self.blocklength() {
            return Err(Error::LengthMismatch { expected: self.blocklength(), actual: seq.len() });
        }
        let hist = self.composition.histogram(&self.alphabet, seq)?;
        if hist != self.composition.counts {
            return Err(Error::CompositionMismatch {
                expected: self.composition.counts.clone(),
                actual: hist,
            });
        }
        let mut index = BigUint::zero();
        let mut remaining = self.composition.counts.clone();
        let mut left = self.blocklength() as u64;
        let mut perms = self.total.clone();
        for &a in seq.as_slice() {
            let ai = self.alphabet.index_of(a).expect("histogram checked");
            for &c in remaining.iter().take(ai) {
                if c > 0 {
                    index += &perms * c as u64 / left;
                }
            }
            perms = &perms * remaining[ai] as u64 / left;
            remaining[ai] -= 1;
            left -= 1;
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
}

/// `log2(i!)` for `i = 0..=n`.
fn log2_factorials(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = 0.0f64;
    out.push(0.0);
    for i in 1..=n {
        acc += (i as f64).log2();
        out.push(acc);
    }
    out
}

fn log2_multinomial(lf: &[f64], counts: &[usize]) -> f64 {
    let n: usize = counts.iter().sum();
    lf[n] - counts.iter().map(|&c| lf[c]).sum::<f64>()
}

/// Integer composition of `n` closest to `n · p` (largest-remainder rounding).
fn quantize(p: &[f64], n: usize) -> Vec<usize> {
    let scaled: Vec<f64> = p.iter().map(|&x| x * n as f64).collect();
    let mut counts: Vec<usize> = scaled.iter().map(|&x| x.floor() as usize).collect();
    let mut short = n - counts.iter().sum::<usize>();
    let mut order: Vec<usize> = (0..p.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = scaled[a] - scaled[a].floor();
        let rb = scaled[b] - scaled[b].floor();
        rb.partial_cmp(&ra).unwrap().then(a.cmp(&b))
    });
    for &i in order.iter().cycle() {
        if short == 0 {
            break;
        }
        counts[i] += 1;
        short -= 1;
    }
    counts
}

fn maxwell_boltzmann(energies: &[u64], lambda: f64) -> Vec<f64> {
    let w: Vec<f64> = energies.iter().map(|&e| (-lambda * (e as f64 - 1.0)).exp()).collect();
    let z: f64 = w.iter().sum();
    w.into_iter().map(|x| x / z).collect()
}

/// Minimum-energy composition whose multinomial carries at least `k` bits.
///
/// Seeds with the largest-λ Maxwell–Boltzmann quantization meeting the bit
/// constraint, then applies energy-reducing local moves (one or two count
/// transfers) that keep the constraint, until none remains.
pub fn ccdm_composition_for_bits(alphabet: &AmplitudeAlphabet, n: usize, k: u64) -> Result<Composition> {
    if n == 0 {
        return Err(Error::InvalidParameter("blocklength must be at least 1".into()));
    }
    let q = alphabet.len();
    let mut all_ones = vec![0usize; q];
    all_ones[0] = n;
    if k == 0 {
        return Composition::new(all_ones);
    }
    let energies = alphabet.energies();
    let lf = log2_factorials(n);
    let exact_ok = |c: &[usize]| ccdm_num_bits(&Composition { counts: c.to_vec() }) >= k;
    // screen in floating point, confirm exactly near the boundary
    let feasible = |c: &[usize]| {
        let b = log2_multinomial(&lf, c);
        if b >= k as f64 + 1e-6 {
            true
        } else if b < k as f64 - 1e-6 {
            false
        } else {
            exact_ok(c)
        }
    };

    let balanced = quantize(&vec![1.0 / q as f64; q], n);
    if !feasible(&balanced) {
        return Err(Error::InsufficientBits {
            requested: k,
            available: ccdm_num_bits(&Composition { counts: balanced }),
        });
    }

    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    while feasible(&quantize(&maxwell_boltzmann(&energies, hi), n)) && hi < 1e3 {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if feasible(&quantize(&maxwell_boltzmann(&energies, mid), n)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut counts = quantize(&maxwell_boltzmann(&energies, lo), n);
    if !feasible(&counts) {
        counts = balanced;
    }

    let energy = |c: &[usize]| -> u64 { c.iter().zip(&energies).map(|(&x, &e)| x as u64 * e).sum() };
    loop {
        let base = energy(&counts);
        let mut moves: Vec<(u64, Vec<usize>)> = Vec::new();
        let transfer = |c: &[usize], from: usize, to: usize| -> Option<Vec<usize>> {
            if from == to || c[from] == 0 {
                return None;
            }
            let mut c = c.to_vec();
            c[from] -= 1;
            c[to] += 1;
            Some(c)
        };
        for from in 0..q {
            for to in 0..q {
                let Some(one) = transfer(&counts, from, to) else { continue };
                let e1 = energy(&one);
                if e1 < base {
                    moves.push((e1, one.clone()));
                }
                for from2 in 0..q {
                    for to2 in 0..q {
                        let Some(two) = transfer(&one, from2, to2) else { continue };
                        let e2 = energy(&two);
                        if e2 < base {
                            moves.push((e2, two));
                        }
                    }
                }
            }
        }
        moves.sort();
        moves.dedup();
        match moves.into_iter().find(|(_, c)| feasible(c)) {
            Some((_, c)) => counts = c,
            None => break,
        }
    }
    Composition::new(counts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> AmplitudeAlphabet {
        AmplitudeAlphabet::new(2).unwrap()
    }

    #[test]
    fn counts() {
        assert_eq!(ccdm_count(&Composition::new(vec![2, 2]).unwrap()), BigUint::from(6u32));
        assert_eq!(ccdm_count(&Composition::new(vec![4, 0]).unwrap()), BigUint::from(1u32));
        assert_eq!(ccdm_count(&Composition::new(vec![2, 1, 1]).unwrap()), BigUint::from(12u32));
    }

    #[test]
    fn composition_search_examples() {
        assert_eq!(ccdm_composition_for_bits(&a2(), 4, 2).unwrap().counts(), &[3, 1]);
        assert_eq!(ccdm_composition_for_bits(&a2(), 4, 0).unwrap().counts(), &[4, 0]);
        assert!(matches!(
            ccdm_composition_for_bits(&a2(), 2, 2),
            Err(Error::InsufficientBits { .. })
        ));
    }

    #[test]
    fn encode_first_and_overflow() {
        let cb = CcdmCodebook::new(&a2(), Composition::new(vec![2, 2]).unwrap()).unwrap();
        assert_eq!(cb.num_bits(), 2);
        assert_eq!(cb.sequence_at(&BigUint::zero()).unwrap().0, vec![1, 1, 3, 3]);
        assert_eq!(cb.sequence_at(&BigUint::from(5u32)).unwrap().0, vec![3, 3, 1, 1]);
        assert!(matches!(
            cb.decode(&AmplitudeBlock(vec![3, 3, 1, 1])),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            cb.decode(&AmplitudeBlock(vec![3, 3, 3, 1])),
            Err(Error::CompositionMismatch { .. })
        ));
    }

    #[test]
    fn quantize_sums_to_n() {
        let c = quantize(&[0.5, 0.3, 0.2], 7);
        assert_eq!(c.iter().sum::<usize>(), 7);
    }
}
