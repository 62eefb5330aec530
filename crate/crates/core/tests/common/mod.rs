#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_complex::Complex64;
use pas_shaping::channel::FiberParams;
use pas_shaping::dsp::{
    cd_compensate, downsample_to, genie_phase_correct, matched_filter_and_decimate, pulse_shape, RrcFilter,
};
use pas_shaping::harness::{ExperimentConfig, SchemeSetup};
use pas_shaping::metrics::least_squares_gain;
use pas_shaping::pas::{compute_pam_llrs, LdpcCode, PamConstellation, PasCodec, UniformCodec};
use pas_shaping::shaping::{BitBlock, DistributionMatcher, Shaper};
use pas_shaping::Result;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const SYMBOL_RATE: f64 = 45e9;

pub fn manifest_dir() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

pub fn preset(name: &str) -> PathBuf {
    manifest_dir().join("presets").join(name)
}

pub fn r56_code() -> Arc<LdpcCode> {
    Arc::new(LdpcCode::from_alist_file(&manifest_dir().join("fixtures/ldpc_r56_n480.alist")).expect("fixture"))
}

/// Real PAM values through the dual-polarization optical front and back end
/// at zero distance: four reals per 4D symbol (XI, XQ, YI, YQ), unit-power
/// scaling, RRC at 16 samples/symbol, decimation to 2, dispersion
/// compensation, matched filter, genie phase and gain. Returns received
/// reals on the integer grid.
pub fn optical_loopback(values: &[i32], mean_energy: f64) -> Result<Vec<f64>> {
    let norm = (2.0 * mean_energy).sqrt().recip();
    let mut padded: Vec<f64> = values.iter().map(|&v| v as f64).collect();
    padded.resize(values.len().div_ceil(4) * 4, 1.0);
    let (mut x, mut y) = (Vec::new(), Vec::new());
    for q in padded.chunks(4) {
        x.push(Complex64::new(q[0], q[1]));
        y.push(Complex64::new(q[2], q[3]));
    }
    let n = x.len();
    let scaled = |v: &[Complex64]| v.iter().map(|s| s * norm).collect::<Vec<_>>();
    let (xs, ys) = (scaled(&x), scaled(&y));
    let wave = pulse_shape(&xs, &ys, SYMBOL_RATE, &RrcFilter::new(0.1, 256, 16)?)?;
    let wave = downsample_to(&wave, SYMBOL_RATE, 2)?;
    let wave = cd_compensate(&wave, &FiberParams::default(), 0.0);
    let [rx_x, rx_y] = matched_filter_and_decimate(&wave, &RrcFilter::new(0.1, 256, 2)?, SYMBOL_RATE, n)?;
    let mut out = Vec::with_capacity(padded.len());
    let mut pols = Vec::new();
    for (rx, tx) in [(rx_x, xs), (rx_y, ys)] {
        let c = genie_phase_correct(&rx, &tx)?;
        let g = least_squares_gain(&c.symbols, &tx);
        pols.push(c.symbols.iter().map(|s| s / (g * norm)).collect::<Vec<_>>());
    }
    for i in 0..n {
        out.extend([pols[0][i].re, pols[0][i].im, pols[1][i].re, pols[1][i].im]);
    }
    out.truncate(values.len());
    Ok(out)
}

/// Noise variance per real dimension measured from the aligned pairs.
pub fn measured_variance(tx: &[i32], rx: &[f64], mean_energy: f64) -> f64 {
    let e = tx.iter().zip(rx).map(|(&t, &r)| (r - t as f64).powi(2)).sum::<f64>() / tx.len() as f64;
    e.max(1e-12 * mean_energy)
}

/// Sends `min_bits` or more random information bits of the scheme in
/// `preset_file` through PAS (or uniform BICM), the optical loopback, soft
/// demapping, LDPC decoding and deshaping. Returns `(bits sent, bit errors)`.
pub fn end_to_end(preset_file: &str, min_bits: usize, seed: u64) -> Result<(usize, usize)> {
    let config = ExperimentConfig::from_file(&preset(preset_file))?;
    let setup = SchemeSetup::new(&config)?;
    let code = r56_code();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut sent, mut errors) = (0, 0);
    match setup.shaper.clone() {
        Some(shaper) => {
            let dist = shaper.distribution();
            let codec = PasCodec::<Shaper>::new(shaper, code)?;
            let constellation = PamConstellation::shaped(codec.labeling().clone(), &dist)?;
            let energy = constellation.mean_energy();
            while sent < min_bits {
                let info = BitBlock::random(codec.layout().info_bits(), &mut rng);
                let frame = codec.transmit(&info)?;
                let rx = optical_loopback(&frame.symbols, energy)?;
                let variance = measured_variance(&frame.symbols, &rx, energy);
                let out = codec.receive_llrs(&compute_pam_llrs(&rx, variance, &constellation)?)?;
                errors += out.info.bits().iter().zip(info.bits()).filter(|(a, b)| a != b).count();
                sent += info.len();
            }
        }
        None => {
            let codec = UniformCodec::new(config.m, code)?;
            let constellation = PamConstellation::uniform(codec.labeling().clone());
            let energy = constellation.mean_energy();
            let k = codec.info_bits_per_codeword();
            let info = BitBlock::random(min_bits.div_ceil(k) * k, &mut rng);
            let symbols = codec.transmit(&info)?;
            let rx = optical_loopback(&symbols, energy)?;
            let variance = measured_variance(&symbols, &rx, energy);
            let out = codec.receive_llrs(&compute_pam_llrs(&rx, variance, &constellation)?)?;
            errors += out.info.bits().iter().zip(info.bits()).filter(|(a, b)| a != b).count();
            sent += info.len();
        }
    }
    Ok((sent, errors))
}
