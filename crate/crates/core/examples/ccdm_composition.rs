//! Constant composition distribution matching: the composition chosen for
//! each blocklength, and a roundtrip that checks every codeword keeps it.
//!
//! Run: cargo run --release --example ccdm_composition

use pas_shaping::shaping::{parse_rational, plan_rate, BitBlock, DistributionMatcher, Shaper, ShapingConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> pas_shaping::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in [50usize, 200, 3600] {
        let plan = plan_rate(parse_rational("2.5")?, 4, parse_rational("5/6")?, n)?;
        let config = ShapingConfig::ccdm(plan.clone())?;
        let comp = config.composition().expect("ccdm").clone();
        let shaper = Shaper::from_config(&config)?;
        for _ in 0..20 {
            let bits = BitBlock::random(plan.k as usize, &mut rng);
            let amps = shaper.encode(&bits)?;
            let mut counts = vec![0usize; comp.counts().len()];
            for &a in amps.as_slice() {
                counts[shaper.alphabet().index_of(a).expect("in alphabet")] += 1;
            }
            assert_eq!(counts, comp.counts());
            assert_eq!(shaper.decode(&amps)?, bits);
        }
        println!(
            "N = {n:>4}  k = {:>4}  composition {:?}  rate loss {:.5}",
            plan.k,
            comp.counts(),
            shaper.rate_loss()
        );
    }
    Ok(())
}
