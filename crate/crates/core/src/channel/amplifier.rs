use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{Waveform, PLANCK};
use crate::{Error, Result};

/// OSNR reference bandwidth, Hz (0.1 nm at 1550 nm).
pub const OSNR_REFERENCE_BANDWIDTH: f64 = 12.5e9;

/// Lumped erbium-doped amplifier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplifierParams {
    pub gain_db: f64,
    pub noise_figure_db: f64,
    /// Adds ASE when set; clear it for a noiseless gain stage.
    pub ase: bool,
}

impl Default for AmplifierParams {
    fn default() -> Self {
        Self { gain_db: 16.0, noise_figure_db: 5.0, ase: true }
    }
}

impl AmplifierParams {
    pub fn gain(&self) -> f64 {
        10f64.powf(self.gain_db / 10.0)
    }

    /// Spontaneous-emission factor `NF/2` (linear).
    pub fn n_sp(&self) -> f64 {
        10f64.powf(self.noise_figure_db / 10.0) / 2.0
    }

    /// ASE power spectral density per polarization, W/Hz.
    pub fn ase_psd(&self, optical_frequency: f64) -> f64 {
        if !self.ase {
            return 0.0;
        }
        (self.gain() - 1.0) * PLANCK * optical_frequency * self.n_sp()
    }

    /// OSNR right after this amplifier for output signal power `p_out` (W),
    /// counting ASE in both polarizations over the reference bandwidth.
    pub fn osnr_db(&self, p_out: f64, optical_frequency: f64) -> f64 {
        10.0 * (p_out / (2.0 * self.ase_psd(optical_frequency) * OSNR_REFERENCE_BANDWIDTH)).log10()
    }
}

/// Amplifies in place by `√G` and adds white ASE over the simulation band.
pub fn edfa(wave: &mut Waveform, amp: &AmplifierParams, seed: u64) -> Result<()> {
    if !(amp.gain_db >= 0.0) {
        return Err(Error::InvalidParameter(format!("gain must be >= 0 dB, got {}", amp.gain_db)));
    }
    wave.scale(amp.gain().sqrt());
    let variance = amp.ase_psd(wave.center_frequency) * wave.sample_rate;
    if variance == 0.0 {
        return Ok(());
    }
    let sigma = (variance / 2.0).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for pol in wave.polarizations_mut() {
        for s in pol.iter_mut() {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            *s += Complex64::new(re, im) * sigma;
        }
    }
    Ok(())
}
