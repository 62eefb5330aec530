//! Prior-aware bit-wise LLRs for PAM/QAM under Gaussian noise.

use num_complex::Complex64;

use super::ldpc::LLR_CLIP;
use super::LabelingMap;
use crate::{Error, Result};

/// 2^m-PAM points (integer grid) with their labels and prior probabilities.
#[derive(Debug, Clone)]
pub struct PamConstellation {
    labeling: LabelingMap,
    points: Vec<f64>,
    log_priors: Vec<f64>,
}

impl PamConstellation {
    pub fn uniform(labeling: LabelingMap) -> Self {
        let size = labeling.size();
        Self::with_priors(labeling, vec![1.0 / size as f64; size]).expect("uniform priors are valid")
    }

    /// PAS priors: amplitude distribution (over `1, 3, …`) times a uniform sign.
    pub fn shaped(labeling: LabelingMap, amplitude_distribution: &[f64]) -> Result<Self> {
        let half = labeling.size() / 2;
        if amplitude_distribution.len() != half {
            return Err(Error::LengthMismatch { expected: half, actual: amplitude_distribution.len() });
        }
        let priors = (0..labeling.size())
            .map(|i| {
                let a = labeling.point_value(i).unsigned_abs() as usize;
                amplitude_distribution[(a - 1) / 2] / 2.0
            })
            .collect();
        Self::with_priors(labeling, priors)
    }

    pub fn with_priors(labeling: LabelingMap, priors: Vec<f64>) -> Result<Self> {
        let total: f64 = priors.iter().sum();
        if priors.len() != labeling.size() || (total - 1.0).abs() > 1e-9 || priors.iter().any(|&p| p < 0.0) {
            return Err(Error::InvalidParameter(format!("priors must be a distribution over {} points", labeling.size())));
        }
        let points = labeling.point_values().into_iter().map(f64::from).collect();
        let log_priors = priors.iter().map(|&p| p.ln()).collect();
        Ok(Self { labeling, points, log_priors })
    }

    pub fn labeling(&self) -> &LabelingMap {
        &self.labeling
    }

    pub fn m(&self) -> usize {
        self.labeling.m() as usize
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn priors(&self) -> Vec<f64> {
        self.log_priors.iter().map(|l| l.exp()).collect()
    }

    /// Mean energy `E[X²]` on the integer grid.
    pub fn mean_energy(&self) -> f64 {
        self.points.iter().zip(&self.log_priors).map(|(x, l)| x * x * l.exp()).sum()
    }
}

/// Per-symbol LLRs `λ_1 … λ_m`, symbol-major. Positive ⇒ bit 0 more likely.
#[derive(Debug, Clone, PartialEq)]
pub struct LlrBlock {
    pub m: usize,
    pub values: Vec<f64>,
}

impl LlrBlock {
    pub fn num_symbols(&self) -> usize {
        self.values.len() / self.m
    }

    pub fn symbol(&self, i: usize) -> &[f64] {
        &self.values[i * self.m..(i + 1) * self.m]
    }

    pub fn level(&self, i: usize, level: usize) -> f64 {
        self.values[i * self.m + level]
    }
}

fn log_sum_exp(acc: &mut (f64, f64), x: f64) {
    // running (max, sum of exp(x - max))
    let (max, sum) = acc;
    if x == f64::NEG_INFINITY {
        return;
    }
    if x > *max {
        *sum = *sum * (*max - x).exp() + 1.0;
        *max = x;
    } else {
        *sum += (x - *max).exp();
    }
}

fn finish(acc: (f64, f64)) -> f64 {
    if acc.1 == 0.0 { f64::NEG_INFINITY } else { acc.0 + acc.1.ln() }
}

/// LLRs for real-valued observations with per-dimension noise variance `σ²`.
pub fn compute_pam_llrs(received: &[f64], real_variance: f64, constellation: &PamConstellation) -> Result<LlrBlock> {
    if !(real_variance > 0.0) {
        return Err(Error::InvalidParameter(format!("noise variance must be positive, got {real_variance}")));
    }
    let m = constellation.m();
    let labels: Vec<u32> = (0..constellation.points.len())
        .map(|i| constellation.labeling.label_of_index(i))
        .collect();
    let mut values = Vec::with_capacity(received.len() * m);
    let mut metric = vec![0.0; constellation.points.len()];
    for &y in received {
        for ((slot, &x), &lp) in metric.iter_mut().zip(&constellation.points).zip(&constellation.log_priors) {
            *slot = lp - (y - x) * (y - x) / (2.0 * real_variance);
        }
        for level in 0..m {
            let shift = m - 1 - level;
            let mut zero = (f64::NEG_INFINITY, 0.0);
            let mut one = (f64::NEG_INFINITY, 0.0);
            for (&v, &l) in metric.iter().zip(&labels) {
                if (l >> shift) & 1 == 0 {
                    log_sum_exp(&mut zero, v);
                } else {
                    log_sum_exp(&mut one, v);
                }
            }
            let llr = finish(zero) - finish(one);
            values.push(if llr.is_nan() { 0.0 } else { llr.clamp(-LLR_CLIP, LLR_CLIP) });
        }
    }
    Ok(LlrBlock { m, values })
}

/// LLRs for QAM symbols: each complex symbol yields `m` in-phase then `m`
/// quadrature LLRs. `noise_variance` is per complex dimension.
pub fn compute_llrs(received: &[Complex64], noise_variance: f64, constellation: &PamConstellation) -> Result<LlrBlock> {
    let real: Vec<f64> = received.iter().flat_map(|c| [c.re, c.im]).collect();
    let block = compute_pam_llrs(&real, noise_variance / 2.0, constellation)?;
    Ok(LlrBlock { m: block.m * 2, values: block.values })
}
