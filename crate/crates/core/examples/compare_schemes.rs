//! Five-scheme comparison on the AWGN channel, written as CSV with the
//! differences to uniform signalling.
//!
//! Run: cargo run --release --example compare_schemes > comparison.csv

use std::path::Path;

use pas_shaping::harness::{compare_shapers, worker_budget, write_comparison, ExperimentConfig};

fn main() -> pas_shaping::Result<()> {
    let presets = Path::new(env!("CARGO_MANIFEST_DIR")).join("presets");
    let configs = ["uniform", "ess-100", "ess-200", "ccdm-200", "ccdm-3600"]
        .iter()
        .map(|name| {
            ExperimentConfig::from_file(&presets.join(format!("awgn-{name}.cfg")))?
                .with("snr_db", "12:16:2")?
                .with("symbols", 20000)
        })
        .collect::<pas_shaping::Result<Vec<_>>>()?;
    let rows = compare_shapers(&configs, worker_budget())?;
    write_comparison(std::io::stdout().lock(), &rows)
}
