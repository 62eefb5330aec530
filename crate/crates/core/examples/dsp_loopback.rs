//! Noiseless transmit/receive DSP chain: RRC pulse shaping at 16 samples per
//! symbol, downsampling to 2, zero-distance dispersion compensation, matched
//! filtering and genie phase correction.
//!
//! Run: cargo run --release --example dsp_loopback

use num_complex::Complex64;
use pas_shaping::channel::FiberParams;
use pas_shaping::dsp::{
    cd_compensate, downsample_to, genie_phase_correct, matched_filter_and_decimate, pulse_shape, RrcFilter,
};
use pas_shaping::metrics::{effective_snr, least_squares_gain};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> pas_shaping::Result<()> {
    let symbol_rate = 45e9;
    let n = 4096;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut qam = || Complex64::new(rng.random_range(-3i32..=3) as f64, rng.random_range(-3i32..=3) as f64);
    let x: Vec<Complex64> = (0..n).map(|_| qam()).collect();
    let y: Vec<Complex64> = (0..n).map(|_| qam()).collect();

    let tx = RrcFilter::new(0.1, 256, 16)?;
    let wave = pulse_shape(&x, &y, symbol_rate, &tx)?;
    let wave = downsample_to(&wave, symbol_rate, 2)?;
    let wave = cd_compensate(&wave, &FiberParams::default(), 0.0);
    let rx = RrcFilter::new(0.1, 256, 2)?;
    let [rx_x, _] = matched_filter_and_decimate(&wave, &rx, symbol_rate, n)?;
    let corrected = genie_phase_correct(&rx_x, &x)?;
    let gain = least_squares_gain(&corrected.symbols, &x);
    let aligned: Vec<Complex64> = corrected.symbols.iter().map(|s| s / gain).collect();
    let worst = aligned.iter().zip(&x).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    println!("chain gain {gain:.6} (1/sqrt(8) = {:.6}), phase {:.2e} rad", 8f64.sqrt().recip(), corrected.phase);
    println!("max symbol error {worst:.2e}, effective SNR {:.1} dB", effective_snr(&x, &aligned)?.db);
    Ok(())
}
