//! One reduced-scale fiber point per scheme: single 45 GBd channel over
//! 10 x 80 km with EDFAs, followed by the receive DSP chain.
//!
//! Run: cargo run --release --example fiber_link [power_dbm]

use pas_shaping::harness::{run_sweep, worker_budget, ExperimentConfig};

fn main() -> pas_shaping::Result<()> {
    let power: f64 = std::env::args().nth(1).map_or(Ok(3.0), |p| p.parse()).unwrap_or(3.0);
    let base = format!(
        "channel = fiber\nwdm_channels = 1\nsps = 4\nstep_km = 1\nspans = 10\nsymbols = 16384\npower_dbm = {power}\n"
    );
    println!("{:<12} {:>10} {:>10} {:>10}", "scheme", "SNR_eff", "+/-", "AIR_N");
    for scheme in ["scheme = uniform\nm = 3", "scheme = ess\nblocklength = 200", "scheme = ccdm\nblocklength = 200"] {
        let config = ExperimentConfig::from_text(&format!("{base}{scheme}"))?;
        for r in run_sweep(&config, None, worker_budget())? {
            println!("{:<12} {:>10.3} {:>10.3} {:>10.3}", r.scheme, r.snr_eff_db, r.snr_eff_ci_db, r.air_4d);
        }
    }
    Ok(())
}
