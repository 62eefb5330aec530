use std::f64::consts::PI;
use std::io::Write;

use crate::{Error, Result};

pub const DEFAULT_ROLL_OFF: f64 = 0.1;
pub const DEFAULT_SPAN: usize = 256;

/// Root-raised-cosine taps normalized to unit energy.
#[derive(Debug, Clone, PartialEq)]
pub struct RrcFilter {
    pub roll_off: f64,
    pub span: usize,
    pub sps: usize,
    pub taps: Vec<f64>,
}

impl RrcFilter {
    /// `span · sps + 1` taps (odd length, integer delay).
    pub fn new(roll_off: f64, span: usize, sps: usize) -> Result<Self> {
        Self::with_len(roll_off, sps, span * sps + 1)
    }

    /// Arbitrary tap count; even lengths have a half-sample delay.
    pub fn with_len(roll_off: f64, sps: usize, len: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&roll_off) || roll_off == 0.0 {
            return Err(Error::InvalidParameter(format!("roll-off must lie in (0, 1], got {roll_off}")));
        }
        if sps == 0 || len < 2 {
            return Err(Error::InvalidParameter(format!("need sps >= 1 and at least 2 taps, got {sps} and {len}")));
        }
        let centre = (len as f64 - 1.0) / 2.0;
        let mut taps: Vec<f64> = (0..len).map(|i| rrc_impulse((i as f64 - centre) / sps as f64, roll_off)).collect();
        let norm = taps.iter().map(|t| t * t).sum::<f64>().sqrt();
        taps.iter_mut().for_each(|t| *t /= norm);
        Ok(Self { roll_off, span: len.div_ceil(sps), sps, taps })
    }

    pub fn len(&self) -> usize {
        self.taps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taps.is_empty()
    }

    /// Group delay in samples.
    pub fn delay(&self) -> f64 {
        (self.taps.len() as f64 - 1.0) / 2.0
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "index,tap")?;
        for (i, t) in self.taps.iter().enumerate() {
            writeln!(out, "{i},{t:e}")?;
        }
        Ok(())
    }
}

/// Continuous RRC pulse at `t` symbol periods.
fn rrc_impulse(t: f64, beta: f64) -> f64 {
    if t.abs() < 1e-12 {
        return 1.0 - beta + 4.0 * beta / PI;
    }
    let singular = 1.0 / (4.0 * beta);
    if (t.abs() - singular).abs() < 1e-9 {
        let arg = PI / (4.0 * beta);
        return beta / 2f64.sqrt() * ((1.0 + 2.0 / PI) * arg.sin() + (1.0 - 2.0 / PI) * arg.cos());
    }
    let num = (PI * t * (1.0 - beta)).sin() + 4.0 * beta * t * (PI * t * (1.0 + beta)).cos();
    num / (PI * t * (1.0 - (4.0 * beta * t).powi(2)))
}
