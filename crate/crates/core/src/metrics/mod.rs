//! Finite-blocklength BMD rate, effective SNR and the estimators behind them.
//!
//! Rates are reported per 4D symbol (two polarizations × two quadratures),
//! i.e. four times the per-real-dimension quantities.

mod report;

use num_complex::Complex64;

use crate::pas::LlrBlock;
use crate::shaping::entropy_bits;
use crate::{Error, Result};

pub use report::{MetricsReport, CSV_HEADER};

/// Two-sided 95 % normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Real dimensions per 4D symbol.
pub const DIMENSIONS_4D: f64 = 4.0;

/// Effective SNR of one block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrEstimate {
    /// `+∞` when the error power is exactly zero
    pub db: f64,
    /// 95 % half-width in dB (delta method on the ratio estimator)
    pub ci_db: f64,
    pub samples: usize,
}

impl SnrEstimate {
    pub fn is_infinite(&self) -> bool {
        self.db == f64::INFINITY
    }
}

/// Mergeable sums for `E[|X|²] / E[|Y − X|²]`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SnrAccumulator {
    n: usize,
    signal: f64,
    error: f64,
    signal_sq: f64,
    error_sq: f64,
    cross: f64,
}

impl SnrAccumulator {
    pub fn push(&mut self, x: Complex64, y: Complex64) {
        let p = x.norm_sqr();
        let e = (y - x).norm_sqr();
        self.n += 1;
        self.signal += p;
        self.error += e;
        self.signal_sq += p * p;
        self.error_sq += e * e;
        self.cross += p * e;
    }

    pub fn merge(&mut self, other: &Self) {
        self.n += other.n;
        self.signal += other.signal;
        self.error += other.error;
        self.signal_sq += other.signal_sq;
        self.error_sq += other.error_sq;
        self.cross += other.cross;
    }

    pub fn estimate(&self) -> SnrEstimate {
        let n = self.n as f64;
        if self.error == 0.0 {
            return SnrEstimate { db: f64::INFINITY, ci_db: 0.0, samples: self.n };
        }
        let ratio = self.signal / self.error;
        let e_mean = self.error / n;
        // var(p − R·e) from raw moments
        let var_d = (self.signal_sq - 2.0 * ratio * self.cross + ratio * ratio * self.error_sq) / n
            - (self.signal / n - ratio * e_mean).powi(2);
        let sd_ratio = (var_d.max(0.0) / n).sqrt() / e_mean;
        SnrEstimate {
            db: 10.0 * ratio.log10(),
            ci_db: Z95 * 10.0 / std::f64::consts::LN_10 * sd_ratio / ratio,
            samples: self.n,
        }
    }
}

/// `10·log10(E[|X|²] / E[|Y − X|²])` over the block; `y` must already be
/// phase- and gain-aligned.
pub fn effective_snr(x: &[Complex64], y: &[Complex64]) -> Result<SnrEstimate> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch { expected: x.len(), actual: y.len() });
    }
    let mut acc = SnrAccumulator::default();
    for (&a, &b) in x.iter().zip(y) {
        acc.push(a, b);
    }
    Ok(acc.estimate())
}

/// Real channel gain `h` minimizing `Σ|y − h·x|²`; dividing `y` by it
/// aligns the scale without the shrinkage of regressing `x` on `y`.
pub fn least_squares_gain(received: &[Complex64], transmitted: &[Complex64]) -> f64 {
    let num: f64 = received.iter().zip(transmitted).map(|(y, x)| (y * x.conj()).re).sum();
    let den: f64 = transmitted.iter().map(|x| x.norm_sqr()).sum();
    if num == 0.0 || den == 0.0 { 1.0 } else { num / den }
}

/// `log2(1 + e^z)` without overflow.
fn log2_one_plus_exp(z: f64) -> f64 {
    let nat = if z > 0.0 { z + (-z).exp().ln_1p() } else { z.exp().ln_1p() };
    nat / std::f64::consts::LN_2
}

/// Mergeable per-level sums for `Ĥ(C_i | Y) = mean log2(1 + e^{−(1−2c)λ})`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BmdAccumulator {
    levels: Vec<f64>,
    symbols: usize,
    /// per-symbol sums over levels, for the error bar
    total: f64,
    total_sq: f64,
}

impl BmdAccumulator {
    pub fn new(m: usize) -> Self {
        Self { levels: vec![0.0; m], ..Default::default() }
    }

    /// Adds one LLR block against the transmitted bits (same layout).
    pub fn push(&mut self, llrs: &LlrBlock, bits: &[u8]) -> Result<()> {
        if llrs.m != self.levels.len() {
            return Err(Error::LengthMismatch { expected: self.levels.len(), actual: llrs.m });
        }
        if bits.len() != llrs.values.len() {
            return Err(Error::LengthMismatch { expected: llrs.values.len(), actual: bits.len() });
        }
        if let Some(i) = llrs.values.iter().position(|l| !l.is_finite()) {
            return Err(Error::NonFiniteLlr(i));
        }
        for (lam, c) in llrs.values.chunks(llrs.m).zip(bits.chunks(llrs.m)) {
            let mut sum = 0.0;
            for (level, (&l, &b)) in lam.iter().zip(c).enumerate() {
                let signed = if b == 0 { l } else { -l };
                let h = log2_one_plus_exp(-signed);
                self.levels[level] += h;
                sum += h;
            }
            self.total += sum;
            self.total_sq += sum * sum;
            self.symbols += 1;
        }
        Ok(())
    }

    pub fn merge(&mut self, other: &Self) {
        if self.levels.is_empty() {
            self.levels = vec![0.0; other.levels.len()];
        }
        self.levels.iter_mut().zip(&other.levels).for_each(|(a, b)| *a += b);
        self.symbols += other.symbols;
        self.total += other.total;
        self.total_sq += other.total_sq;
    }

    pub fn symbols(&self) -> usize {
        self.symbols
    }

    /// `Ĥ(C_i | Y)` per level, in bits.
    pub fn conditional_entropies(&self) -> Vec<f64> {
        self.levels.iter().map(|s| s / self.symbols.max(1) as f64).collect()
    }

    /// 95 % half-width of `Σ_i Ĥ(C_i | Y)` per real dimension.
    pub fn sum_ci(&self) -> f64 {
        let n = self.symbols.max(1) as f64;
        let mean = self.total / n;
        let var = (self.total_sq / n - mean * mean).max(0.0) * n / (n - 1.0).max(1.0);
        Z95 * (var / n).sqrt()
    }
}

/// Per-level Monte Carlo estimate of `H(C_i | Y)` from LLRs and true bits.
pub fn conditional_entropy_bmd(llrs: &LlrBlock, bits: &[u8]) -> Result<Vec<f64>> {
    let mut acc = BmdAccumulator::new(llrs.m);
    acc.push(llrs, bits)?;
    Ok(acc.conditional_entropies())
}

/// `H(C)` per real dimension: `H(A) + 1` for PAS, `m` for uniform signalling.
pub fn coded_bit_entropy(amplitude_distribution: Option<&[f64]>, m: u32) -> f64 {
    match amplitude_distribution {
        Some(p) => entropy_bits(p) + 1.0,
        None => m as f64,
    }
}

/// BMD rate `4·[H(C) − Σ H(C_i|Y)]` in bits/4D.
pub fn bmd_rate(h_c: f64, h_ci: &[f64]) -> f64 {
    DIMENSIONS_4D * (h_c - h_ci.iter().sum::<f64>())
}

/// `AIR_N = 4·{[H(C) − Σ H(C_i|Y)] − [H(A) − k/N]}` in bits/4D.
pub fn air_n(h_c: f64, h_ci: &[f64], rate_loss_per_amp: f64) -> f64 {
    bmd_rate(h_c, h_ci) - DIMENSIONS_4D * rate_loss_per_amp
}

/// Distance where the AIR-vs-distance curve crosses `target`, by linear
/// interpolation between the bracketing grid points.
pub fn reach_at_air(sweep: &[(f64, f64)], target: f64) -> Result<f64> {
    let mut points = sweep.to_vec();
    points.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (min, max) = points
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, a)| (lo.min(a), hi.max(a)));
    if points.is_empty() || target < min || target > max {
        return Err(Error::OutOfRange { target, min, max });
    }
    for w in points.windows(2) {
        let ((d0, a0), (d1, a1)) = (w[0], w[1]);
        if a0 == target {
            return Ok(d0);
        }
        if (a0 - target) * (a1 - target) < 0.0 {
            return Ok(d0 + (a0 - target) / (a0 - a1) * (d1 - d0));
        }
    }
    let last = points[points.len() - 1];
    if last.1 == target {
        return Ok(last.0);
    }
    Err(Error::OutOfRange { target, min, max })
}
