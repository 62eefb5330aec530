use num_complex::Complex64;

use crate::{Error, Result};

/// QAM symbols on the integer PAM grid, with the factor that scales them to
/// unit average energy kept alongside rather than applied.
#[derive(Debug, Clone, PartialEq)]
pub struct QamBlock {
    pub symbols: Vec<Complex64>,
    pub scale: f64,
}

impl QamBlock {
    pub fn normalized(&self) -> Vec<Complex64> {
        self.symbols.iter().map(|s| s * self.scale).collect()
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

/// Cartesian product of two PAM streams: `I + jQ`.
pub fn qam_assemble(pam_i: &[i32], pam_q: &[i32]) -> Result<QamBlock> {
    if pam_i.len() != pam_q.len() {
        return Err(Error::LengthMismatch { expected: pam_i.len(), actual: pam_q.len() });
    }
    let symbols: Vec<Complex64> = pam_i
        .iter()
        .zip(pam_q)
        .map(|(&i, &q)| Complex64::new(i as f64, q as f64))
        .collect();
    let energy = symbols.iter().map(|s| s.norm_sqr()).sum::<f64>() / symbols.len().max(1) as f64;
    let scale = if energy > 0.0 { energy.sqrt().recip() } else { 1.0 };
    Ok(QamBlock { symbols, scale })
}
