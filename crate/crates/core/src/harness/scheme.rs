use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::config::{ExperimentConfig, Scheme};
use crate::metrics::{
    air_n, bmd_rate, coded_bit_entropy, BmdAccumulator, MetricsReport, SnrAccumulator, SnrEstimate, DIMENSIONS_4D,
};
use crate::pas::{compute_pam_llrs, LabelingMap, PamConstellation};
use crate::shaping::{plan_rate, BitBlock, DistributionMatcher, RatePlan, Shaper, ShapingConfig};
use crate::{Error, Result};

/// Everything per scheme that does not depend on the grid point.
#[derive(Debug, Clone)]
pub struct SchemeSetup {
    pub scheme: Scheme,
    pub label: String,
    pub m: u32,
    pub plan: Option<RatePlan>,
    pub shaper: Option<Shaper>,
    pub labeling: LabelingMap,
    pub constellation: PamConstellation,
    /// `H(C)` per real dimension
    pub h_c: f64,
    /// bits per amplitude
    pub rate_loss: f64,
    /// `E[X²]` per real dimension on the integer grid
    pub mean_energy: f64,
}

impl SchemeSetup {
    pub fn new(config: &ExperimentConfig) -> Result<Self> {
        let labeling = LabelingMap::gray(config.m)?;
        let (plan, shaper) = match config.scheme {
            Scheme::Uniform => (None, None),
            scheme => {
                let plan = plan_rate(config.target_rate, config.m, config.fec_rate, config.blocklength)?;
                let shaping = match scheme {
                    Scheme::Ess => ShapingConfig::ess(plan.clone())?,
                    _ => ShapingConfig::ccdm(plan.clone())?,
                };
                (Some(plan), Some(Shaper::from_config(&shaping)?))
            }
        };
        let (constellation, h_c, rate_loss) = match &shaper {
            Some(s) => {
                let dist = s.distribution();
                (PamConstellation::shaped(labeling.clone(), &dist)?, coded_bit_entropy(Some(&dist), config.m), s.rate_loss())
            }
            None => (PamConstellation::uniform(labeling.clone()), coded_bit_entropy(None, config.m), 0.0),
        };
        let mean_energy = constellation.mean_energy();
        Ok(Self { scheme: config.scheme, label: config.label(), m: config.m, plan, shaper, labeling, constellation, h_c, rate_loss, mean_energy })
    }

    /// Factor taking integer-grid QAM symbols to unit average power.
    pub fn normalization(&self) -> f64 {
        (2.0 * self.mean_energy).sqrt().recip()
    }

    /// `count` real PAM values with genie FEC signs: shaped amplitudes with
    /// uniform random signs, or uniform labels. Deterministic in `seed`
    /// regardless of thread count.
    pub fn pam_symbols(&self, count: usize, seed: u64) -> Result<Vec<i32>> {
        match &self.shaper {
            Some(shaper) => {
                let n = shaper.blocklength();
                let k = shaper.input_bits() as usize;
                let blocks = count.div_ceil(n);
                let out: Vec<Vec<i32>> = (0..blocks)
                    .into_par_iter()
                    .map(|b| {
                        let mut rng = ChaCha8Rng::seed_from_u64(seed);
                        rng.set_stream(b as u64);
                        let amps = shaper.encode(&BitBlock::random(k, &mut rng))?;
                        Ok(amps
                            .as_slice()
                            .iter()
                            .map(|&a| if rng.random::<bool>() { a as i32 } else { -(a as i32) })
                            .collect())
                    })
                    .collect::<Result<_>>()?;
                let mut flat: Vec<i32> = out.into_iter().flatten().collect();
                flat.truncate(count);
                Ok(flat)
            }
            None => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let size = self.labeling.size() as u32;
                Ok((0..count).map(|_| self.labeling.value_of_label(rng.random_range(0..size))).collect())
            }
        }
    }

    /// Label bits of real PAM values, `m` per value, sign level first.
    pub fn label_bits(&self, values: &[i32]) -> Result<Vec<u8>> {
        let m = self.m as usize;
        let mut bits = Vec::with_capacity(values.len() * m);
        for &v in values {
            let label = self.labeling.label_of_value(v).ok_or(Error::NotInAlphabet(v.unsigned_abs()))?;
            bits.extend((0..m).map(|level| self.labeling.bit(label, level)));
        }
        Ok(bits)
    }

    /// Effective SNR and BMD sums for aligned received symbols, both on the
    /// integer grid. The LLR noise variance is measured from the same pairs.
    pub fn measure(&self, tx: &[Complex64], rx: &[Complex64]) -> Result<Measurement> {
        if tx.len() != rx.len() {
            return Err(Error::LengthMismatch { expected: tx.len(), actual: rx.len() });
        }
        if let Some(i) = rx.iter().position(|s| !s.re.is_finite() || !s.im.is_finite()) {
            return Err(Error::InvalidParameter(format!("received sample {i} is not finite")));
        }
        let mut snr = SnrAccumulator::default();
        for (&x, &y) in tx.iter().zip(rx) {
            snr.push(x, y);
        }
        let error: f64 = tx.iter().zip(rx).map(|(x, y)| (y - x).norm_sqr()).sum::<f64>() / tx.len().max(1) as f64;
        let variance = error.max(1e-12 * self.mean_energy);
        let real_tx: Vec<i32> = tx.iter().flat_map(|c| [c.re.round() as i32, c.im.round() as i32]).collect();
        let real_rx: Vec<f64> = rx.iter().flat_map(|c| [c.re, c.im]).collect();
        let mut bmd = BmdAccumulator::new(self.m as usize);
        // chunked to bound memory
        for (t, r) in real_tx.chunks(1 << 16).zip(real_rx.chunks(1 << 16)) {
            let llrs = compute_pam_llrs(r, variance / 2.0, &self.constellation)?;
            bmd.push(&llrs, &self.label_bits(t)?)?;
        }
        Ok(Measurement { snr: snr.estimate(), bmd })
    }

    /// Fills the metric columns of a report from a measurement.
    pub fn report(&self, config_hash: &str, blocklength: Option<usize>, measurement: &Measurement) -> MetricsReport {
        let h_ci = measurement.bmd.conditional_entropies();
        MetricsReport {
            config_hash: config_hash.to_string(),
            scheme: self.label.clone(),
            blocklength,
            snr_eff_db: measurement.snr.db,
            snr_eff_ci_db: measurement.snr.ci_db,
            h_c: self.h_c,
            bmd_4d: bmd_rate(self.h_c, &h_ci),
            rate_loss_per_amp: self.rate_loss,
            air_4d: air_n(self.h_c, &h_ci, self.rate_loss),
            air_ci_4d: DIMENSIONS_4D * measurement.bmd.sum_ci(),
            h_ci_given_y: h_ci,
            samples: measurement.bmd.symbols(),
            ..Default::default()
        }
    }
}

/// Raw per-point estimates before they are turned into a report.
#[derive(Debug, Clone)]
pub struct Measurement {
    pub snr: SnrEstimate,
    pub bmd: BmdAccumulator,
}

/// Pairs consecutive real values into complex symbols (`I + jQ`).
pub fn pair_complex(values: &[i32]) -> Vec<Complex64> {
    values.chunks_exact(2).map(|p| Complex64::new(p[0] as f64, p[1] as f64)).collect()
}
