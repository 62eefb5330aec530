//! Split-step Fourier propagation of a Gaussian pulse: dispersive broadening
//! against the closed form, and the second-order convergence of the symmetric
//! scheme when the Kerr term is on.
//!
//! Run: cargo run --release --example split_step

use num_complex::Complex64;
use pas_shaping::channel::{FiberParams, SplitStep, Waveform};

fn gaussian(len: usize, fs: f64, width: f64, peak_w: f64) -> Waveform {
    let x: Vec<Complex64> = (0..len)
        .map(|i| {
            let t = (i as f64 - len as f64 / 2.0) / fs;
            Complex64::new(peak_w.sqrt() * (-t * t / (2.0 * width * width)).exp(), 0.0)
        })
        .collect();
    Waveform::new(x.clone(), x, fs, 0.0).expect("equal lengths")
}

fn rms_width(w: &Waveform) -> f64 {
    let fs = w.sample_rate;
    let p: Vec<f64> = w.x.iter().map(|s| s.norm_sqr()).collect();
    let total: f64 = p.iter().sum();
    let mean = p.iter().enumerate().map(|(i, v)| i as f64 * v).sum::<f64>() / total;
    let var = p.iter().enumerate().map(|(i, v)| (i as f64 - mean).powi(2) * v).sum::<f64>() / total;
    (2.0 * var).sqrt() / fs
}

fn main() -> pas_shaping::Result<()> {
    let fs = 400e9;
    let len = 1 << 14;
    let width = 10e-12;
    let linear = FiberParams { alpha_db_per_km: 0.0, gamma_nl: 0.0, span_length_km: 20.0, ..FiberParams::default() };
    let mut w = gaussian(len, fs, width, 1e-3);
    SplitStep::new(linear, 1.0, len, fs)?.propagate(&mut w)?;
    let ld = width * width / linear.beta2().abs();
    let expected = width * (1.0 + (linear.span_length_km * 1e3 / ld).powi(2)).sqrt();
    println!("broadening over {} km: {:.3} ps, closed form {:.3} ps", linear.span_length_km, rms_width(&w) * 1e12, expected * 1e12);

    let fiber = FiberParams::default();
    let run = |step: f64| -> pas_shaping::Result<Waveform> {
        let mut w = gaussian(len, fs, width, 0.1);
        SplitStep::new(fiber, step, len, fs)?.propagate(&mut w)?;
        Ok(w)
    };
    let reference = run(0.05)?;
    let error = |w: &Waveform| -> f64 {
        w.x.iter().zip(&reference.x).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
    };
    let mut previous: Option<f64> = None;
    for step in [8.0, 4.0, 2.0, 1.0] {
        let e = error(&run(step)?);
        match previous {
            Some(p) => println!("step {step:>4} km  error {e:.3e}  ratio {:.2}", p / e),
            None => println!("step {step:>4} km  error {e:.3e}"),
        }
        previous = Some(e);
    }
    Ok(())
}
