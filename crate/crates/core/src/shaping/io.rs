//! File formats for shaped blocks and packed bit payloads.
//!
//! Amplitude files hold one block per line, one amplitude per
//! whitespace-separated token. Bit files are packed most-significant bit
//! first; the bit length lives in a `<file>.manifest` sidecar as `bits = <n>`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use super::{AmplitudeBlock, BitBlock};
use crate::{Error, Result};

pub fn write_amplitude_blocks<W: Write>(mut out: W, blocks: &[AmplitudeBlock]) -> Result<()> {
    for block in blocks {
        let line: Vec<String> = block.as_slice().iter().map(u32::to_string).collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    Ok(())
}

/// Parses an amplitude file; blank lines are skipped.
pub fn parse_amplitude_blocks(text: &str) -> Result<Vec<AmplitudeBlock>> {
    let mut blocks = Vec::new();
    let mut offset = 0u64;
    for line in text.split_inclusive('\n') {
        let mut block = Vec::new();
        let mut col = 0usize;
        for token in line.split_whitespace() {
            let at = line[col..].find(token).map(|p| p + col).unwrap_or(col);
            col = at + token.len();
            let a: u32 = token.parse().map_err(|_| Error::Malformed {
                offset: offset + at as u64,
                message: format!("amplitude token {token:?} is not an unsigned integer"),
            })?;
            block.push(a);
        }
        if !block.is_empty() {
            blocks.push(AmplitudeBlock(block));
        }
        offset += line.len() as u64;
    }
    Ok(blocks)
}

pub fn read_amplitude_file(path: &Path) -> Result<Vec<AmplitudeBlock>> {
    parse_amplitude_blocks(&fs::read_to_string(path)?)
}

pub fn pack_bits(bits: &BitBlock) -> Vec<u8> {
    bits.bits()
        .chunks(8)
        .map(|chunk| chunk.iter().enumerate().fold(0u8, |acc, (i, &b)| acc | (b << (7 - i))))
        .collect()
}

pub fn unpack_bits(bytes: &[u8], len: usize) -> Result<BitBlock> {
    let needed = len.div_ceil(8);
    if bytes.len() < needed {
        return Err(Error::Malformed {
            offset: bytes.len() as u64,
            message: format!("truncated bit file: {len} bits need {needed} bytes, found {}", bytes.len()),
        });
    }
    let bits = (0..len).map(|i| (bytes[i / 8] >> (7 - i % 8)) & 1).collect();
    BitBlock::new(bits)
}

pub fn manifest_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".manifest");
    PathBuf::from(name)
}

pub fn write_bit_file(path: &Path, bits: &BitBlock) -> Result<()> {
    fs::write(path, pack_bits(bits))?;
    fs::write(manifest_path(path), format!("bits = {}\n", bits.len()))?;
    Ok(())
}

pub fn read_bit_file(path: &Path) -> Result<BitBlock> {
    let manifest = manifest_path(path);
    let text = fs::read_to_string(&manifest)?;
    let mut len = None;
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match line.split_once('=') {
            Some((key, value)) if key.trim() == "bits" => {
                len = Some(value.trim().parse::<usize>().map_err(|_| Error::Parse {
                    path: manifest.clone(),
                    line: i + 1,
                    message: format!("bad bit length {:?}", value.trim()),
                })?);
            }
            _ => {}
        }
    }
    let len = len.ok_or_else(|| Error::Parse {
        path: manifest.clone(),
        line: 0,
        message: "missing `bits = <n>` entry".into(),
    })?;
    unpack_bits(&fs::read(path)?, len)
}
