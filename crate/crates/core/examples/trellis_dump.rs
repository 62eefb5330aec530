//! Prints the counting trellis of a small ESS codebook and walks the
//! lexicographic index of every sequence.
//!
//! Run: cargo run --release --example trellis_dump

use num_bigint::BigUint;
use pas_shaping::shaping::{AmplitudeAlphabet, EnergyTrellis};

fn main() -> pas_shaping::Result<()> {
    let alphabet = AmplitudeAlphabet::new(3)?;
    let trellis = EnergyTrellis::build(&alphabet, 3, 35)?;
    trellis.write_table(std::io::stdout().lock())?;
    println!("\n{} sequences, {} bits", trellis.num_sequences(), trellis.num_bits());
    let mut i = BigUint::default();
    while &i < trellis.num_sequences() {
        let seq = trellis.sequence_at(&i)?;
        println!("{i:>3} {:?} E = {}", seq.as_slice(), seq.energy());
        i += 1u32;
    }
    Ok(())
}
