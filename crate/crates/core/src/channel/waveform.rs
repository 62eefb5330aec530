use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::shaping::io::manifest_path;
use crate::{Error, Result};

/// Dual-polarization complex envelope in √W, sampled uniformly.
#[derive(Debug, Clone, PartialEq)]
pub struct Waveform {
    pub x: Vec<Complex64>,
    pub y: Vec<Complex64>,
    pub sample_rate: f64,
    pub center_frequency: f64,
    /// Sample position of the first symbol's centre; fractional after even-length filters.
    pub delay: f64,
}

impl Waveform {
    pub fn new(x: Vec<Complex64>, y: Vec<Complex64>, sample_rate: f64, center_frequency: f64) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::LengthMismatch { expected: x.len(), actual: y.len() });
        }
        if !(sample_rate > 0.0) {
            return Err(Error::InvalidParameter(format!("sample rate must be positive, got {sample_rate}")));
        }
        Ok(Self { x, y, sample_rate, center_frequency, delay: 0.0 })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// Sum of `|x|² + |y|²` over all samples.
    pub fn energy(&self) -> f64 {
        self.x.iter().chain(&self.y).map(|s| s.norm_sqr()).sum()
    }

    /// Mean total power in W (both polarizations).
    pub fn mean_power(&self) -> f64 {
        self.energy() / self.len().max(1) as f64
    }

    pub fn scale(&mut self, factor: f64) {
        self.x.iter_mut().chain(self.y.iter_mut()).for_each(|s| *s *= factor);
    }

    pub fn polarizations_mut(&mut self) -> [&mut Vec<Complex64>; 2] {
        [&mut self.x, &mut self.y]
    }

    /// Interleaved little-endian complex64 (`f32` re, im), X then Y per
    /// sample, plus a text sidecar with the sampling metadata.
    pub fn dump(&self, path: &Path) -> Result<()> {
        let mut out = BufWriter::new(fs::File::create(path)?);
        for (x, y) in self.x.iter().zip(&self.y) {
            for v in [x.re, x.im, y.re, y.im] {
                out.write_all(&(v as f32).to_le_bytes())?;
            }
        }
        out.flush()?;
        fs::write(
            manifest_path(path),
            format!(
                "sample_rate = {}\ncenter_frequency = {}\ndelay = {}\nlength = {}\n",
                self.sample_rate,
                self.center_frequency,
                self.delay,
                self.len()
            ),
        )?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let sidecar = manifest_path(path);
        let text = fs::read_to_string(&sidecar)?;
        let mut sample_rate = None;
        let mut center_frequency = None;
        let mut length = None;
        let mut delay = 0.0;
        for (i, line) in text.lines().enumerate() {
            let Some((key, value)) = line.split_once('=') else { continue };
            let bad = || Error::Parse { path: sidecar.clone(), line: i + 1, message: format!("bad value {:?}", value.trim()) };
            match key.trim() {
                "sample_rate" => sample_rate = Some(value.trim().parse::<f64>().map_err(|_| bad())?),
                "center_frequency" => center_frequency = Some(value.trim().parse::<f64>().map_err(|_| bad())?),
                "delay" => delay = value.trim().parse::<f64>().map_err(|_| bad())?,
                "length" => length = Some(value.trim().parse::<usize>().map_err(|_| bad())?),
                _ => {}
            }
        }
        let missing = |what: &str| Error::Parse { path: sidecar.clone(), line: 0, message: format!("missing {what}") };
        let sample_rate = sample_rate.ok_or_else(|| missing("sample_rate"))?;
        let center_frequency = center_frequency.ok_or_else(|| missing("center_frequency"))?;
        let length = length.ok_or_else(|| missing("length"))?;
        let bytes = fs::read(path)?;
        if bytes.len() != length * 16 {
            return Err(Error::Malformed {
                offset: bytes.len() as u64,
                message: format!("expected {} bytes for {length} samples", length * 16),
            });
        }
        let vals: Vec<f64> = bytes
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]) as f64)
            .collect();
        let x = vals.chunks_exact(4).map(|v| Complex64::new(v[0], v[1])).collect();
        let y = vals.chunks_exact(4).map(|v| Complex64::new(v[2], v[3])).collect();
        let mut wave = Self::new(x, y, sample_rate, center_frequency)?;
        wave.delay = delay;
        Ok(wave)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unequal_polarizations() {
        let z = Complex64::default();
        assert!(Waveform::new(vec![z; 3], vec![z; 2], 1.0, 0.0).is_err());
        assert!(Waveform::new(vec![z; 2], vec![z; 2], 0.0, 0.0).is_err());
    }

    #[test]
    fn dump_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("w.bin");
        let w = Waveform::new(
            vec![Complex64::new(0.5, -1.0), Complex64::new(2.0, 0.25)],
            vec![Complex64::new(-0.125, 3.0), Complex64::new(0.0, 1.5)],
            64e9,
            193.4e12,
        )
        .unwrap();
        let w = Waveform { delay: 12.5, ..w };
        w.dump(&path).unwrap();
        assert_eq!(fs::read(&path).unwrap().len(), 32);
        assert_eq!(&fs::read(&path).unwrap()[..4], &0.5f32.to_le_bytes());
        assert_eq!(Waveform::load(&path).unwrap(), w);
    }
}
