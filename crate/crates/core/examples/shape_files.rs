//! File-level shaping: a packed bit file goes through the matcher into a
//! text amplitude file and back.
//!
//! Run: cargo run --release --example shape_files

use pas_shaping::harness::{deshape_file, shape_file, ExperimentConfig, SchemeSetup};
use pas_shaping::shaping::io::{read_bit_file, write_bit_file};
use pas_shaping::shaping::{BitBlock, DistributionMatcher};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> pas_shaping::Result<()> {
    let config = ExperimentConfig::from_text("scheme = ccdm\nblocklength = 100")?;
    let shaper = SchemeSetup::new(&config)?.shaper.expect("shaped scheme");
    let dir = std::env::temp_dir().join(format!("pas-shape-files-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let (bits_in, amps, bits_out) = (dir.join("payload.bin"), dir.join("payload.amp"), dir.join("payload.out"));

    let payload = BitBlock::random(shaper.input_bits() as usize * 50, &mut ChaCha8Rng::seed_from_u64(5));
    write_bit_file(&bits_in, &payload)?;
    let blocks = shape_file(&bits_in, &amps, &shaper)?;
    deshape_file(&amps, &bits_out, &shaper)?;
    assert_eq!(read_bit_file(&bits_out)?, payload);
    println!("{} bits -> {blocks} amplitude blocks -> identical bits", payload.len());
    println!("amplitude file: {}", amps.display());
    let first = std::fs::read_to_string(&amps)?;
    println!("first block: {}", first.lines().next().unwrap_or(""));
    Ok(())
}
