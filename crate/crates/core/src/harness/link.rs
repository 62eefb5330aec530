//! One grid point of the dual-polarization fiber link: pulse shaping, WDM,
//! span-by-span propagation with EDFAs, and the receive DSP.

use num_complex::Complex64;

use super::config::ExperimentConfig;
use super::scheme::{pair_complex, Measurement, SchemeSetup};
use super::sweep::derive_seed;
use crate::channel::{dbm_to_watts, edfa, wdm_mux, wdm_select, SplitStep, Waveform};
use crate::dsp::{cd_compensate, downsample_to, genie_phase_correct, matched_filter_and_decimate, pulse_shape, RrcFilter};
use crate::metrics::least_squares_gain;
use crate::Result;

/// Smallest length `≥ n` whose only prime factors are 2, 3 and 5.
pub fn fast_len(n: usize) -> usize {
    let mut best = n.next_power_of_two();
    let mut p5 = 1;
    while p5 < best {
        let mut p35 = p5;
        while p35 < best {
            let mut v = p35;
            while v < n {
                v *= 2;
            }
            best = best.min(v);
            p35 *= 3;
        }
        p5 *= 5;
    }
    best
}

/// Symbols discarded at each edge: accumulated dispersion spread plus the
/// RRC span, so circular propagation never reaches the measured window.
pub fn guard_symbols(config: &ExperimentConfig, spans: usize) -> usize {
    let length = spans as f64 * config.fiber.span_length_km * 1e3;
    let bandwidth = 2.0 * std::f64::consts::PI * config.wdm.symbol_rate * (1.0 + config.wdm.roll_off);
    let spread = config.fiber.beta2().abs() * length * bandwidth * config.wdm.symbol_rate;
    spread.ceil() as usize + config.rrc_span + 16
}

fn shaped_channel(
    setup: &SchemeSetup,
    config: &ExperimentConfig,
    symbols: usize,
    seed: u64,
    tx_rrc: &RrcFilter,
) -> Result<(Vec<Complex64>, Vec<Complex64>, Waveform)> {
    let values = setup.pam_symbols(4 * symbols, seed)?;
    let (xv, yv) = values.split_at(2 * symbols);
    let (x, y) = (pair_complex(xv), pair_complex(yv));
    let norm = setup.normalization();
    let xs: Vec<Complex64> = x.iter().map(|s| s * norm).collect();
    let ys: Vec<Complex64> = y.iter().map(|s| s * norm).collect();
    let wave = pulse_shape(&xs, &ys, config.wdm.symbol_rate, tx_rrc)?;
    Ok((x, y, wave))
}

/// Propagates one waveform over `spans` spans and measures the centre channel.
pub fn simulate_fiber_point(
    setup: &SchemeSetup,
    config: &ExperimentConfig,
    power_dbm: f64,
    spans: usize,
    data_seed: u64,
    noise_seed: u64,
) -> Result<Measurement> {
    let guard = guard_symbols(config, spans);
    let total = config.symbols + 2 * guard;
    let rs = config.wdm.symbol_rate;
    let tx_rrc = RrcFilter::new(config.wdm.roll_off, config.rrc_span, config.sps)?;
    let rx_rrc = RrcFilter::new(config.wdm.roll_off, config.rrc_span, 2)?;
    let amplitude = (dbm_to_watts(power_dbm) * config.sps as f64 / 2.0).sqrt();

    let centre = config.wdm.center_index();
    let mut channels = Vec::with_capacity(config.wdm.channel_count);
    let mut reference = None;
    for ch in 0..config.wdm.channel_count {
        let seed = if ch == centre { data_seed } else { derive_seed(data_seed, &format!("wdm-{ch}")) };
        let (x, y, mut wave) = shaped_channel(setup, config, total, seed, &tx_rrc)?;
        wave.scale(amplitude);
        let len = fast_len(wave.len());
        wave.x.resize(len, Complex64::default());
        wave.y.resize(len, Complex64::default());
        if ch == centre {
            reference = Some((x, y));
        }
        channels.push(wave);
    }
    let (tx_x, tx_y) = reference.expect("centre channel exists");
    let mut wave = if channels.len() == 1 { channels.pop().expect("one channel") } else { wdm_mux(&channels, &config.wdm)? };
    drop(channels);

    let mut propagator = SplitStep::new(config.fiber, config.step_km, wave.len(), wave.sample_rate)?;
    for span in 0..spans {
        propagator.propagate(&mut wave)?;
        edfa(&mut wave, &config.amplifier, derive_seed(noise_seed, &format!("span-{span}")))?;
    }

    if config.wdm.channel_count > 1 {
        wave = wdm_select(&wave, &config.wdm, centre)?;
    }
    let wave = downsample_to(&wave, rs, 2)?;
    let wave = cd_compensate(&wave, &config.fiber, spans as f64 * config.fiber.span_length_km);
    let [rx_x, rx_y] = matched_filter_and_decimate(&wave, &rx_rrc, rs, total)?;

    let window = guard..guard + config.symbols;
    let norm = setup.normalization();
    let mut tx_all = Vec::with_capacity(2 * config.symbols);
    let mut rx_all = Vec::with_capacity(2 * config.symbols);
    for (tx, rx) in [(&tx_x, &rx_x), (&tx_y, &rx_y)] {
        let tx = &tx[window.clone()];
        let reference: Vec<Complex64> = tx.iter().map(|s| s * norm).collect();
        let corrected = genie_phase_correct(&rx[window.clone()], &reference)?;
        let gain = least_squares_gain(&corrected.symbols, &reference);
        tx_all.extend_from_slice(tx);
        rx_all.extend(corrected.symbols.iter().map(|s| s / (gain * norm)));
    }
    setup.measure(&tx_all, &rx_all)
}
