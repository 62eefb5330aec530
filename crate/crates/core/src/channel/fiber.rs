//! Symmetric split-step Fourier propagation of the Manakov equation.

use num_complex::Complex64;

use super::{Waveform, CARRIER_WAVELENGTH, SPEED_OF_LIGHT};
use crate::fft::{frequencies, FftPair};
use crate::{Error, Result};

/// Standard single-mode fiber span parameters in customary units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiberParams {
    /// dB/km
    pub alpha_db_per_km: f64,
    /// ps/(nm·km)
    pub dispersion: f64,
    /// 1/(W·km)
    pub gamma_nl: f64,
    /// km
    pub span_length_km: f64,
}

impl Default for FiberParams {
    fn default() -> Self {
        Self { alpha_db_per_km: 0.2, dispersion: 17.0, gamma_nl: 1.3, span_length_km: 80.0 }
    }
}

impl FiberParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha_db_per_km >= 0.0) || !(self.span_length_km > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "need alpha >= 0 and span length > 0, got {} dB/km and {} km",
                self.alpha_db_per_km, self.span_length_km
            )));
        }
        Ok(())
    }

    /// Field-power attenuation in 1/m.
    pub fn alpha_per_m(&self) -> f64 {
        self.alpha_db_per_km * std::f64::consts::LN_10 / 10.0 / 1e3
    }

    /// Group-velocity dispersion `β2 = −Dλ²/(2πc)` in s²/m.
    pub fn beta2(&self) -> f64 {
        let d_si = self.dispersion * 1e-6; // ps/(nm·km) → s/m²
        -d_si * CARRIER_WAVELENGTH * CARRIER_WAVELENGTH / (2.0 * std::f64::consts::PI * SPEED_OF_LIGHT)
    }

    /// Nonlinear coefficient in 1/(W·m).
    pub fn gamma_per_w_m(&self) -> f64 {
        self.gamma_nl / 1e3
    }

    pub fn span_loss_db(&self) -> f64 {
        self.alpha_db_per_km * self.span_length_km
    }
}

/// Frequency response of lossy dispersive fiber over `length` metres:
/// `exp(j(β2/2)ω²·length − α·length/2)` per FFT bin.
pub(crate) fn linear_response(beta2: f64, alpha: f64, length: f64, freqs: &[f64]) -> Vec<Complex64> {
    freqs
        .iter()
        .map(|&f| {
            let w = 2.0 * std::f64::consts::PI * f;
            Complex64::from_polar((-alpha * length / 2.0).exp(), beta2 / 2.0 * w * w * length)
        })
        .collect()
}

/// Reusable propagator for one span configuration and waveform geometry.
///
/// Half linear steps of neighbouring steps are merged, so a span of `s`
/// steps costs `s + 1` linear operations.
pub struct SplitStep {
    fiber: FiberParams,
    steps: Vec<f64>,
    fft: FftPair,
    freqs: Vec<f64>,
    sample_rate: f64,
    operators: Vec<(u64, Vec<Complex64>)>,
}

impl SplitStep {
    pub fn new(fiber: FiberParams, step_km: f64, len: usize, sample_rate: f64) -> Result<Self> {
        fiber.validate()?;
        if !(step_km > 0.0) {
            return Err(Error::InvalidParameter(format!("step must be positive, got {step_km} km")));
        }
        let full = (fiber.span_length_km / step_km + 1e-9).floor() as usize;
        let mut steps = vec![step_km * 1e3; full];
        let rest = fiber.span_length_km - full as f64 * step_km;
        if rest > 1e-9 * fiber.span_length_km {
            steps.push(rest * 1e3);
        }
        if steps.is_empty() {
            steps.push(fiber.span_length_km * 1e3);
        }
        Ok(Self {
            fiber,
            steps,
            fft: FftPair::new(len),
            freqs: frequencies(len, sample_rate),
            sample_rate,
            operators: Vec::new(),
        })
    }

    pub fn fiber(&self) -> &FiberParams {
        &self.fiber
    }

    pub fn num_steps(&self) -> usize {
        self.steps.len()
    }

    fn operator(&mut self, length: f64) -> usize {
        let key = length.to_bits();
        if let Some(i) = self.operators.iter().position(|(k, _)| *k == key) {
            return i;
        }
        let op = linear_response(self.fiber.beta2(), self.fiber.alpha_per_m(), length, &self.freqs);
        self.operators.push((key, op));
        self.operators.len() - 1
    }

    fn linear(&mut self, wave: &mut Waveform, length: f64) {
        let idx = self.operator(length);
        for pol in wave.polarizations_mut() {
            self.fft.forward(pol);
            for (s, h) in pol.iter_mut().zip(&self.operators[idx].1) {
                *s *= h;
            }
            self.fft.inverse(pol);
        }
    }

    fn nonlinear(&self, wave: &mut Waveform, length: f64) {
        let alpha = self.fiber.alpha_per_m();
        // power profile integrated around the step midpoint
        let effective = if alpha > 0.0 { 2.0 * (alpha * length / 2.0).sinh() / alpha } else { length };
        let coefficient = 8.0 / 9.0 * self.fiber.gamma_per_w_m() * effective;
        if coefficient == 0.0 {
            return;
        }
        for (x, y) in wave.x.iter_mut().zip(wave.y.iter_mut()) {
            let rot = Complex64::from_polar(1.0, coefficient * (x.norm_sqr() + y.norm_sqr()));
            *x *= rot;
            *y *= rot;
        }
    }

    /// Propagates one span in place.
    pub fn propagate(&mut self, wave: &mut Waveform) -> Result<()> {
        if wave.len() != self.fft.len() || wave.sample_rate != self.sample_rate {
            return Err(Error::InvalidParameter(format!(
                "propagator built for {} samples at {} Hz, got {} at {} Hz",
                self.fft.len(),
                self.sample_rate,
                wave.len(),
                wave.sample_rate
            )));
        }
        let steps = self.steps.clone();
        let mut pending = steps[0] / 2.0;
        for (i, &dz) in steps.iter().enumerate() {
            self.linear(wave, pending);
            self.nonlinear(wave, dz);
            pending = dz / 2.0 + steps.get(i + 1).map_or(0.0, |next| next / 2.0);
        }
        self.linear(wave, pending);
        Ok(())
    }
}

/// One-shot span propagation; build a [`SplitStep`] to reuse transforms.
pub fn ssfm_span(wave: &mut Waveform, fiber: &FiberParams, step_km: f64) -> Result<()> {
    SplitStep::new(*fiber, step_km, wave.len(), wave.sample_rate)?.propagate(wave)
}
