use crate::{Error, Result};

/// `−Σ p log2 p` with `0 · log 0 = 0`.
pub fn entropy_bits(p: &[f64]) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum()
}

/// `H(A) − k/N` in bits per amplitude.
pub fn rate_loss(distribution: &[f64], k: u64, n: usize) -> Result<f64> {
    let total: f64 = distribution.iter().sum();
    if (total - 1.0).abs() > 1e-12 || distribution.iter().any(|&x| !(0.0..=1.0).contains(&x)) {
        return Err(Error::InvalidParameter(format!(
            "distribution must be a probability vector (sums to {total})"
        )));
    }
    Ok(entropy_bits(distribution) - k as f64 / n as f64)
}
