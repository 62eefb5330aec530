//! SNR needed for AIR_N = 10 bit/4D on the AWGN channel: ESS-shaped 256-QAM
//! against uniform 64-QAM, both at R_c = 5/6.
//!
//! Run: cargo run --release --example awgn_shaping_gain

use pas_shaping::harness::{run_sweep, snr_at_air, worker_budget, ExperimentConfig};

fn main() -> pas_shaping::Result<()> {
    let base = "channel = awgn\nsnr_db = 14:17:0.5\nsymbols = 100000\n";
    let mut required = Vec::new();
    for scheme in ["scheme = ess\nblocklength = 200\nm = 4", "scheme = uniform\nm = 3"] {
        let config = ExperimentConfig::from_text(&format!("{base}{scheme}"))?;
        let rows = run_sweep(&config, None, worker_budget())?;
        for r in &rows {
            println!("{:<11} SNR {:>5.1} dB  AIR {:.3} bit/4D", r.scheme, r.snr_db.unwrap_or(f64::NAN), r.air_4d);
        }
        let snr = snr_at_air(&rows, 10.0)?;
        println!("{}: {snr:.3} dB at 10 bit/4D\n", config.label());
        required.push(snr);
    }
    println!("shaping gain {:.2} dB", required[1] - required[0]);
    Ok(())
}
