use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Adds circularly-symmetric Gaussian noise at `E[|X|²]/σ² = snr_db`, with
/// `E[|X|²]` measured on the block. An infinite SNR returns the input.
pub fn awgn(symbols: &[Complex64], snr_db: f64, seed: u64) -> Vec<Complex64> {
    if snr_db == f64::INFINITY {
        return symbols.to_vec();
    }
    let power = symbols.iter().map(|s| s.norm_sqr()).sum::<f64>() / symbols.len().max(1) as f64;
    let sigma = (power / 10f64.powf(snr_db / 10.0) / 2.0).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    symbols
        .iter()
        .map(|s| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            s + Complex64::new(re, im) * sigma
        })
        .collect()
}

/// Real-valued AWGN with `E[X²]/σ² = snr_db` per real dimension.
pub fn awgn_real(samples: &[f64], snr_db: f64, seed: u64) -> Vec<f64> {
    if snr_db == f64::INFINITY {
        return samples.to_vec();
    }
    let power = samples.iter().map(|s| s * s).sum::<f64>() / samples.len().max(1) as f64;
    let sigma = (power / 10f64.powf(snr_db / 10.0)).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    samples
        .iter()
        .map(|s| {
            let n: f64 = StandardNormal.sample(&mut rng);
            s + sigma * n
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qpsk(n: usize) -> Vec<Complex64> {
        (0..n)
            .map(|i| Complex64::new(if i % 2 == 0 { 1.0 } else { -1.0 }, if i % 3 == 0 { 1.0 } else { -1.0 }) / 2f64.sqrt())
            .collect()
    }

    #[test]
    fn infinite_snr_is_identity() {
        let x = qpsk(16);
        assert_eq!(awgn(&x, f64::INFINITY, 1), x);
    }

    #[test]
    fn deterministic_under_seed() {
        let x = qpsk(1000);
        assert_eq!(awgn(&x, 5.0, 7), awgn(&x, 5.0, 7));
        assert_ne!(awgn(&x, 5.0, 7), awgn(&x, 5.0, 8));
    }

    #[test]
    fn noise_power_matches_snr() {
        let x = qpsk(200_000);
        let y = awgn(&x, 10.0, 3);
        let noise: f64 = y.iter().zip(&x).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>() / x.len() as f64;
        assert!((10.0 * (1.0 / noise).log10() - 10.0).abs() < 0.05);
    }
}
