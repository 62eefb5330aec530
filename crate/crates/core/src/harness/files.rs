use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use crate::shaping::io::{read_amplitude_file, read_bit_file, write_amplitude_blocks, write_bit_file};
use crate::shaping::{BitBlock, DistributionMatcher};
use crate::{Error, Result};

/// Shapes a packed bit file (with manifest) into an amplitude file, one
/// block per line. The payload must be a whole number of shaper inputs.
/// Returns the number of blocks written.
pub fn shape_file(input: &Path, output: &Path, shaper: &dyn DistributionMatcher) -> Result<usize> {
    let bits = read_bit_file(input)?;
    let k = shaper.input_bits() as usize;
    if k == 0 || bits.len() % k != 0 {
        return Err(Error::LengthMismatch { expected: bits.len().div_ceil(k.max(1)) * k, actual: bits.len() });
    }
    let blocks = bits
        .bits()
        .chunks(k)
        .map(|chunk| shaper.encode(&BitBlock::new(chunk.to_vec())?))
        .collect::<Result<Vec<_>>>()?;
    write_amplitude_blocks(BufWriter::new(File::create(output)?), &blocks)?;
    Ok(blocks.len())
}

/// Inverse of [`shape_file`]; a block that is not a codeword fails with its index.
pub fn deshape_file(input: &Path, output: &Path, shaper: &dyn DistributionMatcher) -> Result<usize> {
    let blocks = read_amplitude_file(input)?;
    let mut bits = Vec::with_capacity(blocks.len() * shaper.input_bits() as usize);
    for (block, amps) in blocks.iter().enumerate() {
        let decoded = shaper.decode(amps).map_err(|e| Error::BlockDecode { block, source: Box::new(e) })?;
        bits.extend(decoded.into_bits());
    }
    write_bit_file(output, &BitBlock::new(bits)?)?;
    Ok(blocks.len())
}
