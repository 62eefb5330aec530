//! Transmit pulse shaping and the receive chain: resampling, chromatic
//! dispersion compensation, matched filtering and genie phase correction.
//!
//! Every filter is a zero-padded FFT linear convolution; waveforms carry the
//! sample position of their first symbol in [`Waveform::delay`] so the
//! receiver can sample at symbol centres.

mod rrc;

use num_complex::Complex64;

use crate::channel::{carrier_frequency, FiberParams, Waveform};
use crate::fft::{frequencies, FftPair};
use crate::{Error, Result};

pub use rrc::{RrcFilter, DEFAULT_ROLL_OFF, DEFAULT_SPAN};

/// Full linear convolution with real taps, advanced by `advance` samples
/// (fractional part applied as a spectral phase ramp).
fn convolve(signal: &[Complex64], taps: &[f64], advance: f64) -> Vec<Complex64> {
    let out_len = signal.len() + taps.len() - 1;
    let size = out_len.next_power_of_two();
    let mut fft = FftPair::new(size);
    let mut a = vec![Complex64::default(); size];
    a[..signal.len()].copy_from_slice(signal);
    let mut b = vec![Complex64::default(); size];
    b.iter_mut().zip(taps).for_each(|(d, &t)| *d = Complex64::new(t, 0.0));
    fft.forward(&mut a);
    fft.forward(&mut b);
    let freqs = frequencies(size, 1.0);
    for ((x, h), f) in a.iter_mut().zip(&b).zip(&freqs) {
        *x *= h * Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * f * advance);
    }
    fft.inverse(&mut a);
    a.truncate(out_len);
    a
}

/// Zero-padded spectral filtering: `response(f)` with `f` in Hz.
fn filter_spectrum(signal: &[Complex64], sample_rate: f64, response: impl Fn(f64) -> Complex64) -> Vec<Complex64> {
    let size = (2 * signal.len()).next_power_of_two();
    let mut fft = FftPair::new(size);
    let mut a = vec![Complex64::default(); size];
    a[..signal.len()].copy_from_slice(signal);
    fft.forward(&mut a);
    for (x, f) in a.iter_mut().zip(frequencies(size, sample_rate)) {
        *x *= response(f);
    }
    fft.inverse(&mut a);
    a.truncate(signal.len());
    a
}

fn samples_per_symbol(sample_rate: f64, symbol_rate: f64) -> Result<usize> {
    let ratio = sample_rate / symbol_rate;
    let rounded = ratio.round();
    if rounded < 1.0 || (ratio - rounded).abs() > 1e-9 * ratio {
        return Err(Error::InvalidParameter(format!("non-integer samples per symbol {ratio}")));
    }
    Ok(rounded as usize)
}

/// Zero-insertion upsampling to `rrc.sps` and RRC filtering of both
/// polarizations.
pub fn pulse_shape(x: &[Complex64], y: &[Complex64], symbol_rate: f64, rrc: &RrcFilter) -> Result<Waveform> {
    if (rrc.sps as f64) < 2.0 * (1.0 + rrc.roll_off) {
        return Err(Error::InvalidParameter(format!(
            "{} samples per symbol is below the 2(1 + roll-off) margin",
            rrc.sps
        )));
    }
    if x.len() != y.len() {
        return Err(Error::LengthMismatch { expected: x.len(), actual: y.len() });
    }
    let upsample = |s: &[Complex64]| {
        let mut up = vec![Complex64::default(); s.len() * rrc.sps];
        for (i, v) in s.iter().enumerate() {
            up[i * rrc.sps] = *v;
        }
        convolve(&up, &rrc.taps, 0.0)
    };
    let mut wave = Waveform::new(upsample(x), upsample(y), symbol_rate * rrc.sps as f64, carrier_frequency())?;
    wave.delay = rrc.delay();
    Ok(wave)
}

/// Brick-wall anti-alias filtering and integer-factor decimation to
/// `target_sps`; the decimation phase lands symbol centres on samples.
pub fn downsample_to(wave: &Waveform, symbol_rate: f64, target_sps: usize) -> Result<Waveform> {
    let sps = samples_per_symbol(wave.sample_rate, symbol_rate)?;
    if target_sps == 0 || sps % target_sps != 0 {
        return Err(Error::InvalidParameter(format!("cannot decimate {sps} to {target_sps} samples per symbol")));
    }
    let factor = sps / target_sps;
    if factor == 1 {
        return Ok(wave.clone());
    }
    let cutoff = wave.sample_rate / factor as f64 / 2.0;
    let phase = wave.delay.rem_euclid(factor as f64);
    let response = |f: f64| {
        if f.abs() <= cutoff {
            Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * f * phase / wave.sample_rate)
        } else {
            Complex64::default()
        }
    };
    let mut out = wave.clone();
    for pol in out.polarizations_mut() {
        let filtered = filter_spectrum(pol, wave.sample_rate, response);
        *pol = filtered.into_iter().step_by(factor).collect();
    }
    out.sample_rate = wave.sample_rate / factor as f64;
    out.delay = ((wave.delay - phase) / factor as f64).round();
    Ok(out)
}

/// Inverts the accumulated dispersion of `distance_km` of `fiber`.
pub fn cd_compensate(wave: &Waveform, fiber: &FiberParams, distance_km: f64) -> Waveform {
    if distance_km == 0.0 {
        return wave.clone();
    }
    let beta2 = fiber.beta2();
    let length = distance_km * 1e3;
    let response = |f: f64| {
        let w = 2.0 * std::f64::consts::PI * f;
        Complex64::from_polar(1.0, -beta2 / 2.0 * w * w * length)
    };
    let mut out = wave.clone();
    for pol in out.polarizations_mut() {
        *pol = filter_spectrum(pol, wave.sample_rate, response);
    }
    out
}

/// Matched RRC filter followed by sampling at `num_symbols` symbol centres,
/// per polarization.
pub fn matched_filter_and_decimate(
    wave: &Waveform,
    rrc: &RrcFilter,
    symbol_rate: f64,
    num_symbols: usize,
) -> Result<[Vec<Complex64>; 2]> {
    let sps = samples_per_symbol(wave.sample_rate, symbol_rate)?;
    if sps != rrc.sps {
        return Err(Error::InvalidParameter(format!("waveform at {sps} sps, filter designed for {}", rrc.sps)));
    }
    let delay = wave.delay + rrc.delay();
    let advance = delay - delay.floor();
    let start = delay.floor();
    if start < -(sps as f64) / 2.0 {
        return Err(Error::Misaligned(format!("first symbol at sample {start}")));
    }
    let start = start.max(0.0) as usize;
    let mut out = [Vec::new(), Vec::new()];
    for (pol, dst) in [&wave.x, &wave.y].into_iter().zip(out.iter_mut()) {
        let filtered = convolve(pol, &rrc.taps, advance);
        let last = start + num_symbols.saturating_sub(1) * sps;
        if num_symbols > 0 && last >= filtered.len() {
            return Err(Error::Misaligned(format!(
                "{num_symbols} symbols from sample {start} overrun {} filtered samples",
                filtered.len()
            )));
        }
        *dst = (0..num_symbols).map(|k| filtered[start + k * sps]).collect();
    }
    Ok(out)
}

/// Block-constant phase rotation found by [`genie_phase_correct`].
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseCorrection {
    pub symbols: Vec<Complex64>,
    /// radians removed from the received block
    pub phase: f64,
    /// set when the cross-correlation vanished and no rotation was applied
    pub degenerate: bool,
}

/// Rotates `received` by `−arg Σ y·conj(x)`.
pub fn genie_phase_correct(received: &[Complex64], transmitted: &[Complex64]) -> Result<PhaseCorrection> {
    if received.len() != transmitted.len() {
        return Err(Error::LengthMismatch { expected: transmitted.len(), actual: received.len() });
    }
    let corr: Complex64 = received.iter().zip(transmitted).map(|(y, x)| y * x.conj()).sum();
    if corr.norm() == 0.0 {
        return Ok(PhaseCorrection { symbols: received.to_vec(), phase: 0.0, degenerate: true });
    }
    let phase = corr.arg();
    let rot = Complex64::from_polar(1.0, -phase);
    Ok(PhaseCorrection { symbols: received.iter().map(|y| y * rot).collect(), phase, degenerate: false })
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;

    fn qam16(n: usize, seed: u64) -> Vec<Complex64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let level = |r: &mut ChaCha8Rng| (2 * r.random_range(0..4) - 3) as f64;
        (0..n).map(|_| Complex64::new(level(&mut rng), level(&mut rng)) / 10f64.sqrt()).collect()
    }

    fn max_err(a: &[Complex64], b: &[Complex64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn single_symbol_gives_impulse_response() {
        let rrc = RrcFilter::new(0.1, 8, 4).unwrap();
        let one = [Complex64::new(1.0, 0.0)];
        let w = pulse_shape(&one, &one, 1e9, &rrc).unwrap();
        assert_eq!(w.len(), rrc.sps + rrc.len() - 1);
        assert!(w.x.iter().zip(&rrc.taps).all(|(s, t)| (s.re - t).abs() < 1e-12 && s.im.abs() < 1e-12));
        assert_eq!(w.delay, 16.0);
        assert!(pulse_shape(&one, &one, 1e9, &RrcFilter::new(0.1, 8, 2).unwrap()).is_err());
    }

    #[test]
    fn spectrum_occupies_roll_off_band() {
        let rrc = RrcFilter::new(0.1, 64, 8).unwrap();
        let s = qam16(2048, 1);
        let w = pulse_shape(&s, &s, 1.0, &rrc).unwrap();
        let mut spectrum = w.x.clone();
        let n = spectrum.len();
        FftPair::new(n).forward(&mut spectrum);
        let freqs = frequencies(n, 8.0);
        let total: f64 = spectrum.iter().map(|c| c.norm_sqr()).sum();
        let outside: f64 = spectrum.iter().zip(&freqs).filter(|(_, f)| f.abs() > 0.55 * 1.01).map(|(c, _)| c.norm_sqr()).sum();
        assert!(outside / total < 1e-4, "{}", outside / total);
    }

    #[test]
    fn back_to_back_chain_recovers_symbols() {
        let span = DEFAULT_SPAN;
        for (tx_len, rx_len) in [(span * 16 + 1, span * 2 + 1), (span * 16, span * 2)] {
            let tx = RrcFilter::with_len(0.1, 16, tx_len).unwrap();
            let rx = RrcFilter::with_len(0.1, 2, rx_len).unwrap();
            let x = qam16(512, 2);
            let y = qam16(512, 3);
            let w = pulse_shape(&x, &y, 1e9, &tx).unwrap();
            let w2 = downsample_to(&w, 1e9, 2).unwrap();
            let w2 = cd_compensate(&w2, &FiberParams::default(), 0.0);
            let [rx_x, rx_y] = matched_filter_and_decimate(&w2, &rx, 1e9, 512).unwrap();
            // unit-energy taps at 16 and 2 sps leave an end-to-end gain of 1/√8
            let g = 8f64.sqrt();
            for (rx, tx) in [(rx_x, &x), (rx_y, &y)] {
                let rx: Vec<Complex64> = rx.iter().map(|s| s * g).collect();
                assert!(max_err(&rx, tx) < 1e-3, "{tx_len} taps: {}", max_err(&rx, tx));
            }
        }
    }

    #[test]
    fn downsample_identity_and_power() {
        let tx = RrcFilter::new(0.1, 64, 8).unwrap();
        let x = qam16(4096, 4);
        let w = pulse_shape(&x, &x, 1.0, &tx).unwrap();
        assert_eq!(downsample_to(&w, 1.0, 8).unwrap(), w);
        let d = downsample_to(&w, 1.0, 2).unwrap();
        let ratio = d.mean_power() / w.mean_power();
        assert!((10.0 * ratio.log10()).abs() < 0.1);
        assert!(downsample_to(&w, 1.0, 3).is_err());
    }

    #[test]
    fn cd_compensation_is_additive() {
        let tx = RrcFilter::new(0.1, 32, 4).unwrap();
        let mut x = vec![Complex64::default(); 512];
        x.extend(qam16(1024, 5));
        x.extend(vec![Complex64::default(); 512]);
        let mut w = pulse_shape(&x, &x, 32e9, &tx).unwrap();
        let fiber = FiberParams::default();
        w = cd_compensate(&w, &fiber, -400.0);
        let once = cd_compensate(&w, &fiber, 400.0);
        let twice = cd_compensate(&cd_compensate(&w, &fiber, 200.0), &fiber, 200.0);
        let err: f64 = once.x.iter().zip(&twice.x).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>() / once.energy();
        assert!(err < 1e-10, "{err}");
    }

    #[test]
    fn phase_correction_closed_form() {
        let x = qam16(1000, 6);
        let rot = Complex64::from_polar(1.0, 0.3);
        let y: Vec<Complex64> = x.iter().map(|s| s * rot).collect();
        let c = genie_phase_correct(&y, &x).unwrap();
        assert!((c.phase - 0.3).abs() < 1e-12);
        assert!(max_err(&c.symbols, &x) < 1e-12);
        assert_eq!(genie_phase_correct(&x, &x).unwrap().phase, 0.0);
        let zero = vec![Complex64::default(); 4];
        assert!(genie_phase_correct(&zero, &x[..4]).unwrap().degenerate);
    }

    #[test]
    fn phase_estimate_variance() {
        // var(φ̂) ≈ 1/(2·n·SNR) for a unit-power block
        let n = 1000;
        let snr = 10.0;
        let x = qam16(n, 7);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let sigma = (1.0 / snr / 2.0f64).sqrt();
        let trials = 400;
        let mut sq = 0.0;
        for _ in 0..trials {
            let y: Vec<Complex64> = x
                .iter()
                .map(|s| {
                    let re: f64 = rng.sample(rand_distr::StandardNormal);
                    let im: f64 = rng.sample(rand_distr::StandardNormal);
                    s * Complex64::from_polar(1.0, 0.5) + Complex64::new(re, im) * sigma
                })
                .collect();
            sq += (genie_phase_correct(&y, &x).unwrap().phase - 0.5).powi(2);
        }
        let rms = (sq / trials as f64).sqrt();
        let bound = 1.0 / ((n as f64) * snr).sqrt();
        assert!(rms < bound, "{rms} vs {bound}");
        assert!(rms > 0.5 / (2.0 * n as f64 * snr).sqrt());
    }
}
