//! Full PAS link over real AWGN: ESS shaping, systematic LDPC encoding of
//! amplitude bits with parity on the signs, soft demapping with the shaped
//! priors, min-sum decoding and deshaping. Prints the frame error rate per SNR.
//!
//! Run: cargo run --release --example pas_ldpc_awgn

use std::path::Path;
use std::sync::Arc;

use pas_shaping::channel::awgn_real;
use pas_shaping::pas::{compute_pam_llrs, LdpcCode, PamConstellation, PasCodec};
use pas_shaping::shaping::{parse_rational, plan_rate, BitBlock, DistributionMatcher, Shaper, ShapingConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> pas_shaping::Result<()> {
    let fixture = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/ldpc_r56_n480.alist");
    let code = Arc::new(LdpcCode::from_alist_file(&fixture)?);
    let plan = plan_rate(parse_rational("2.5")?, 4, code.rate(), 60)?;
    let shaper = Shaper::from_config(&ShapingConfig::ess(plan)?)?;
    let dist = shaper.distribution();
    let codec = PasCodec::new(shaper, code)?;
    let layout = codec.layout().clone();
    println!(
        "frame: {} symbols, {} blocks of N = {}, {} codewords, {} info bits ({:.4} bit/1D)",
        layout.symbols(),
        layout.blocks,
        layout.blocklength,
        layout.codewords,
        layout.info_bits(),
        layout.rate()
    );
    let constellation = PamConstellation::shaped(codec.labeling().clone(), &dist)?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let frames = 40;
    for snr_db in [14.0, 15.0, 16.0, 17.0, 18.0] {
        let mut errors = 0;
        for f in 0..frames {
            let info = BitBlock::random(layout.info_bits(), &mut rng);
            let frame = codec.transmit(&info)?;
            let tx: Vec<f64> = frame.symbols.iter().map(|&s| s as f64).collect();
            let rx = awgn_real(&tx, snr_db, 1000 * f + snr_db as u64);
            let power = tx.iter().map(|x| x * x).sum::<f64>() / tx.len() as f64;
            let variance = power / 10f64.powf(snr_db / 10.0);
            let llrs = compute_pam_llrs(&rx, variance, &constellation)?;
            let decoded = codec.receive_llrs(&llrs);
            if !matches!(decoded, Ok(ref out) if out.info == info) {
                errors += 1;
            }
        }
        println!("SNR {snr_db:>5.1} dB  FER {:.3}", errors as f64 / frames as f64);
    }
    Ok(())
}
