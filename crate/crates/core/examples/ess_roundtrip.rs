//! Enumerative sphere shaping at N = 200: encode random bits, check the
//! energy bound, decode, and compare the empirical amplitude histogram with
//! the codebook distribution.
//!
//! Run: cargo run --release --example ess_roundtrip

use pas_shaping::shaping::{parse_rational, plan_rate, BitBlock, DistributionMatcher, Shaper, ShapingConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> pas_shaping::Result<()> {
    let plan = plan_rate(parse_rational("2.5")?, 4, parse_rational("5/6")?, 200)?;
    let config = ShapingConfig::ess(plan.clone())?;
    let e_max = config.e_max().expect("ess");
    let shaper = Shaper::from_config(&config)?;
    println!("N = {}, k = {}, E_max = {e_max}", plan.n, plan.k);

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let blocks = 2000;
    let mut hist = vec![0usize; shaper.alphabet().len()];
    let mut worst = 0;
    for _ in 0..blocks {
        let bits = BitBlock::random(plan.k as usize, &mut rng);
        let amps = shaper.encode(&bits)?;
        worst = worst.max(amps.energy());
        for &a in amps.as_slice() {
            hist[shaper.alphabet().index_of(a).expect("in alphabet")] += 1;
        }
        assert_eq!(shaper.decode(&amps)?, bits);
    }
    println!("{blocks} blocks decoded exactly; largest energy {worst} <= {e_max}");
    println!("{:>4} {:>10} {:>10}", "a", "empirical", "codebook");
    let total = (blocks * plan.n) as f64;
    for ((a, count), p) in shaper.alphabet().amplitudes().iter().zip(&hist).zip(shaper.distribution()) {
        println!("{a:>4} {:>10.4} {p:>10.4}", *count as f64 / total);
    }
    println!("rate loss {:.5} bit/amplitude", shaper.rate_loss());
    Ok(())
}
