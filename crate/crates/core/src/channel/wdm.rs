use num_complex::Complex64;

use super::Waveform;
use crate::fft::{frequencies, FftPair};
use crate::{Error, Result};

/// WDM grid centred on the channel of interest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WdmConfig {
    pub channel_count: usize,
    /// Hz
    pub spacing: f64,
    /// Bd
    pub symbol_rate: f64,
    pub roll_off: f64,
}

impl Default for WdmConfig {
    fn default() -> Self {
        Self { channel_count: 11, spacing: 50e9, symbol_rate: 45e9, roll_off: 0.1 }
    }
}

impl WdmConfig {
    pub fn validate(&self) -> Result<()> {
        if self.channel_count == 0 || self.spacing < self.symbol_rate * (1.0 + self.roll_off) {
            return Err(Error::InvalidParameter(format!(
                "{} channels at {} Hz spacing cannot hold {} Bd with roll-off {}",
                self.channel_count, self.spacing, self.symbol_rate, self.roll_off
            )));
        }
        Ok(())
    }

    pub fn center_index(&self) -> usize {
        self.channel_count / 2
    }

    /// Frequency offset of channel `index` from the grid centre, Hz.
    pub fn offset(&self, index: usize) -> f64 {
        (index as f64 - (self.channel_count as f64 - 1.0) / 2.0) * self.spacing
    }

    pub fn bandwidth(&self) -> f64 {
        self.channel_count as f64 * self.spacing
    }

    pub fn check_sample_rate(&self, sample_rate: f64) -> Result<()> {
        if sample_rate < self.bandwidth() {
            return Err(Error::Aliasing { sample_rate, bandwidth: self.bandwidth() });
        }
        Ok(())
    }
}

fn shift(samples: &mut [Complex64], offset: f64, sample_rate: f64) {
    let step = 2.0 * std::f64::consts::PI * offset / sample_rate;
    for (n, s) in samples.iter_mut().enumerate() {
        *s *= Complex64::from_polar(1.0, step * n as f64);
    }
}

/// Frequency-shifts each channel to its grid slot and sums.
pub fn wdm_mux(channels: &[Waveform], config: &WdmConfig) -> Result<Waveform> {
    config.validate()?;
    if channels.len() != config.channel_count {
        return Err(Error::LengthMismatch { expected: config.channel_count, actual: channels.len() });
    }
    let first = &channels[0];
    config.check_sample_rate(first.sample_rate)?;
    let mut out = Waveform::new(
        vec![Complex64::default(); first.len()],
        vec![Complex64::default(); first.len()],
        first.sample_rate,
        first.center_frequency,
    )?;
    for (i, ch) in channels.iter().enumerate() {
        if ch.len() != first.len() || ch.sample_rate != first.sample_rate {
            return Err(Error::InvalidParameter("WDM channels must share length and sample rate".into()));
        }
        let mut ch = ch.clone();
        for pol in ch.polarizations_mut() {
            shift(pol, config.offset(i), first.sample_rate);
        }
        out.x.iter_mut().zip(&ch.x).for_each(|(o, s)| *o += s);
        out.y.iter_mut().zip(&ch.y).for_each(|(o, s)| *o += s);
    }
    Ok(out)
}

/// Shifts channel `index` to baseband and keeps `|f| ≤ spacing/2`.
pub fn wdm_select(wave: &Waveform, config: &WdmConfig, index: usize) -> Result<Waveform> {
    config.validate()?;
    if index >= config.channel_count {
        return Err(Error::InvalidParameter(format!("channel {index} outside a {}-channel grid", config.channel_count)));
    }
    config.check_sample_rate(wave.sample_rate)?;
    let mut out = wave.clone();
    let mut fft = FftPair::new(wave.len());
    let freqs = frequencies(wave.len(), wave.sample_rate);
    for pol in out.polarizations_mut() {
        shift(pol, -config.offset(index), wave.sample_rate);
        fft.forward(pol);
        for (s, f) in pol.iter_mut().zip(&freqs) {
            if f.abs() > config.spacing / 2.0 {
                *s = Complex64::default();
            }
        }
        fft.inverse(pol);
    }
    out.center_frequency = wave.center_frequency + config.offset(index);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Band-limited random tone comb inside ±20 GHz.
    fn channel(seed: u64, len: usize, fs: f64) -> Waveform {
        let tones: Vec<(f64, f64)> = (0..8)
            .map(|k| {
                let f = ((k as f64 - 3.5) * 5.0e9 / (fs / len as f64)).round() * fs / len as f64;
                (f, (seed as f64 + k as f64) * 0.7)
            })
            .collect();
        let make = |phase_offset: f64| -> Vec<Complex64> {
            (0..len)
                .map(|n| {
                    tones
                        .iter()
                        .map(|&(f, p)| Complex64::from_polar(1e-2, 2.0 * std::f64::consts::PI * f * n as f64 / fs + p + phase_offset))
                        .sum()
                })
                .collect()
        };
        Waveform::new(make(0.0), make(1.0), fs, 193.4e12).unwrap()
    }

    fn error_db(a: &[Complex64], b: &[Complex64]) -> f64 {
        let e: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
        let p: f64 = b.iter().map(|y| y.norm_sqr()).sum();
        10.0 * (e / p).log10()
    }

    #[test]
    fn mux_select_recovers_each_channel() {
        let config = WdmConfig { channel_count: 5, ..Default::default() };
        let fs = 400e9;
        let chans: Vec<Waveform> = (0..5).map(|s| channel(s, 4096, fs)).collect();
        let mux = wdm_mux(&chans, &config).unwrap();
        for i in [0, 2, 4] {
            let sel = wdm_select(&mux, &config, i).unwrap();
            assert!(error_db(&sel.x, &chans[i].x) < -40.0);
            assert!(error_db(&sel.y, &chans[i].y) < -40.0);
        }
    }

    #[test]
    fn single_channel_is_identity() {
        let config = WdmConfig { channel_count: 1, ..Default::default() };
        let ch = channel(3, 1024, 100e9);
        let back = wdm_select(&wdm_mux(std::slice::from_ref(&ch), &config).unwrap(), &config, 0).unwrap();
        assert!(error_db(&back.x, &ch.x) < -100.0);
    }

    #[test]
    fn aliasing_is_rejected() {
        let config = WdmConfig::default();
        let chans: Vec<Waveform> = (0..11).map(|s| channel(s, 256, 500e9)).collect();
        assert!(matches!(wdm_mux(&chans, &config), Err(Error::Aliasing { .. })));
        assert!(WdmConfig { spacing: 40e9, ..Default::default() }.validate().is_err());
    }
}
