//! PAS and uniform BICM transmit/receive chains.
//!
//! A super-frame spans `lcm(N, n_c/m)` real symbols: an integer number of
//! shaper blocks and of codewords. Within codeword `j` (symbols
//! `j·n_c/m ..`), the systematic part is the amplitude bit planes filled level
//! by level (all level-1 bits, then level 2, …) followed by the extra bits;
//! the sign bits of its symbols are `[parity ∥ extra]` in symbol order.
//! Information order over a super-frame is `[shaper inputs per block ∥ extra
//! bits per codeword]`.

use std::sync::Arc;

use num_rational::Rational64;
use num_traits::{Signed, ToPrimitive};

use super::ldpc::{LdpcCode, MinSumDecoder};
use super::llr::LlrBlock;
use super::LabelingMap;
use crate::shaping::rate::lcm;
use crate::shaping::{gamma, AmplitudeBlock, BitBlock, DistributionMatcher};
use crate::{Error, Result};

/// Frame geometry shared by transmitter and receiver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameLayout {
    pub m: usize,
    pub blocklength: usize,
    pub shaper_bits: usize,
    /// real symbols per codeword, `n_c / m`
    pub symbols_per_codeword: usize,
    pub codewords: usize,
    pub blocks: usize,
    /// `γ · n_c / m`
    pub extra_per_codeword: usize,
    /// `(1 − R_c) · n_c`
    pub parity_per_codeword: usize,
}

impl FrameLayout {
    pub fn new(m: usize, blocklength: usize, shaper_bits: usize, code: &LdpcCode) -> Result<Self> {
        let n_c = code.length();
        if m < 2 || n_c % m != 0 {
            return Err(Error::FrameMisalignment(format!("codeword length {n_c} is not a multiple of m = {m}")));
        }
        let rate = Rational64::new(code.dimension() as i64, n_c as i64);
        let g = gamma(m as u32, rate)?;
        let symbols_per_codeword = n_c / m;
        let extra = g * Rational64::from_integer(symbols_per_codeword as i64);
        if !extra.is_integer() || extra.is_negative() {
            return Err(Error::FrameMisalignment(format!(
                "γ·n_c/m = {extra} extra bits per codeword is not an integer"
            )));
        }
        let extra_per_codeword = extra.to_usize().unwrap_or(0);
        let parity_per_codeword = n_c - code.dimension();
        debug_assert_eq!(parity_per_codeword + extra_per_codeword, symbols_per_codeword);
        if blocklength == 0 {
            return Err(Error::InvalidParameter("blocklength must be at least 1".into()));
        }
        let total = lcm(blocklength, symbols_per_codeword);
        Ok(Self {
            m,
            blocklength,
            shaper_bits,
            symbols_per_codeword,
            codewords: total / symbols_per_codeword,
            blocks: total / blocklength,
            extra_per_codeword,
            parity_per_codeword,
        })
    }

    pub fn symbols(&self) -> usize {
        self.blocks * self.blocklength
    }

    pub fn extra_bits(&self) -> usize {
        self.codewords * self.extra_per_codeword
    }

    /// Information bits per super-frame.
    pub fn info_bits(&self) -> usize {
        self.blocks * self.shaper_bits + self.extra_bits()
    }

    /// Information rate in bits per real dimension.
    pub fn rate(&self) -> f64 {
        self.info_bits() as f64 / self.symbols() as f64
    }
}

/// Everything the PAS transmitter produced for one super-frame.
#[derive(Debug, Clone, PartialEq)]
pub struct PasFrame {
    pub amplitudes: Vec<AmplitudeBlock>,
    pub extra_bits: Vec<u8>,
    /// `(m − 1)` label bits per symbol, level-major within each codeword
    pub amplitude_bit_plane: Vec<u8>,
    pub parity_bits: Vec<u8>,
    /// `1` ⇒ positive
    pub sign_bits: Vec<u8>,
    pub codewords: Vec<Vec<u8>>,
    pub symbols: Vec<i32>,
}

/// Result of a receive pass: recovered information plus FEC status.
#[derive(Debug, Clone, PartialEq)]
pub struct ReceiveOutcome {
    pub info: BitBlock,
    pub converged: bool,
    pub failed_codewords: usize,
}

/// PAS transmitter and receiver around a distribution matcher and an LDPC code.
#[derive(Debug, Clone)]
pub struct PasCodec<S> {
    shaper: S,
    code: Arc<LdpcCode>,
    labeling: LabelingMap,
    layout: FrameLayout,
    decoder: MinSumDecoder,
}

impl<S: DistributionMatcher> PasCodec<S> {
    pub fn new(shaper: S, code: Arc<LdpcCode>) -> Result<Self> {
        let m = shaper.alphabet().m();
        let labeling = LabelingMap::gray(m)?;
        let layout = FrameLayout::new(m as usize, shaper.blocklength(), shaper.input_bits() as usize, &code)?;
        Ok(Self { shaper, code, labeling, layout, decoder: MinSumDecoder::default() })
    }

    pub fn with_decoder(mut self, decoder: MinSumDecoder) -> Self {
        self.decoder = decoder;
        self
    }

    pub fn layout(&self) -> &FrameLayout {
        &self.layout
    }

    pub fn shaper(&self) -> &S {
        &self.shaper
    }

    pub fn labeling(&self) -> &LabelingMap {
        &self.labeling
    }

    pub fn code(&self) -> &LdpcCode {
        &self.code
    }

    pub fn transmit(&self, info: &BitBlock) -> Result<PasFrame> {
        let l = &self.layout;
        if info.len() != l.info_bits() {
            return Err(Error::LengthMismatch { expected: l.info_bits(), actual: info.len() });
        }
        let (shaper_part, extra) = info.split_at(l.blocks * l.shaper_bits);
        let amplitudes = shaper_part
            .bits()
            .chunks(l.shaper_bits.max(1))
            .take(l.blocks)
            .map(|chunk| {
                let bits = if l.shaper_bits == 0 { Vec::new() } else { chunk.to_vec() };
                self.shaper.encode(&BitBlock::new(bits)?)
            })
            .collect::<Result<Vec<_>>>()?;
        let flat: Vec<u32> = amplitudes.iter().flat_map(|b| b.as_slice().iter().copied()).collect();
        let extra = extra.into_bits();

        let per = l.symbols_per_codeword;
        let mut frame = PasFrame {
            amplitudes,
            extra_bits: extra.clone(),
            amplitude_bit_plane: Vec::with_capacity(flat.len() * (l.m - 1)),
            parity_bits: Vec::with_capacity(l.codewords * l.parity_per_codeword),
            sign_bits: Vec::with_capacity(flat.len()),
            codewords: Vec::with_capacity(l.codewords),
            symbols: Vec::with_capacity(flat.len()),
        };
        for (j, amps) in flat.chunks(per).enumerate() {
            let labels: Vec<u32> = amps.iter().map(|&a| self.labeling.amplitude_label(a)).collect();
            let mut systematic = Vec::with_capacity(self.code.dimension());
            for level in 1..l.m {
                systematic.extend(labels.iter().map(|&lab| self.labeling.bit(lab, level)));
            }
            frame.amplitude_bit_plane.extend_from_slice(&systematic);
            let extra_here = &extra[j * l.extra_per_codeword..(j + 1) * l.extra_per_codeword];
            systematic.extend_from_slice(extra_here);
            let parity = self.code.parity(&systematic)?;
            let codeword = self.place(&systematic, &parity);
            frame.parity_bits.extend_from_slice(&parity);
            let signs: Vec<u8> = parity.iter().chain(extra_here).copied().collect();
            frame.symbols.extend(amps.iter().zip(&signs).map(|(&a, &s)| self.labeling.signed(s, a)));
            frame.sign_bits.extend(signs);
            frame.codewords.push(codeword);
        }
        Ok(frame)
    }

    fn place(&self, info: &[u8], parity: &[u8]) -> Vec<u8> {
        let mut cw = vec![0u8; self.code.length()];
        for (&p, &b) in self.code.info_positions().iter().zip(info) {
            cw[p] = b;
        }
        for (&p, &b) in self.code.parity_positions().iter().zip(parity) {
            cw[p] = b;
        }
        cw
    }

    /// Channel bit carried by codeword position order `[systematic ∥ parity]`:
    /// returns `(symbol within codeword, level)`.
    fn slot(&self, systematic_index: Option<usize>, parity_index: Option<usize>) -> (usize, usize) {
        let l = &self.layout;
        let amp_bits = (l.m - 1) * l.symbols_per_codeword;
        match (systematic_index, parity_index) {
            (Some(t), _) if t < amp_bits => (t % l.symbols_per_codeword, 1 + t / l.symbols_per_codeword),
            (Some(t), _) => (l.parity_per_codeword + t - amp_bits, 0),
            (None, Some(p)) => (p, 0),
            _ => unreachable!(),
        }
    }

    /// Rearranges per-symbol LLRs (sign level first) into `H` column order,
    /// one vector per codeword.
    pub fn codeword_llrs(&self, llrs: &LlrBlock) -> Result<Vec<Vec<f64>>> {
        let l = &self.layout;
        if llrs.m != l.m {
            return Err(Error::LengthMismatch { expected: l.m, actual: llrs.m });
        }
        if llrs.num_symbols() != l.symbols() {
            return Err(Error::LengthMismatch { expected: l.symbols(), actual: llrs.num_symbols() });
        }
        Ok((0..l.codewords)
            .map(|j| {
                let base = j * l.symbols_per_codeword;
                let mut out = vec![0.0; self.code.length()];
                for (t, &pos) in self.code.info_positions().iter().enumerate() {
                    let (s, level) = self.slot(Some(t), None);
                    out[pos] = llrs.level(base + s, level);
                }
                for (p, &pos) in self.code.parity_positions().iter().enumerate() {
                    let (s, level) = self.slot(None, Some(p));
                    out[pos] = llrs.level(base + s, level);
                }
                out
            })
            .collect())
    }

    /// Soft receive: decode every codeword, then deshape.
    pub fn receive_llrs(&self, llrs: &LlrBlock) -> Result<ReceiveOutcome> {
        let mut codewords = Vec::with_capacity(self.layout.codewords);
        let mut failed = 0;
        for cw_llrs in self.codeword_llrs(llrs)? {
            let out = self.decoder.decode(self.code.h(), &cw_llrs)?;
            failed += usize::from(!out.converged);
            codewords.push(out.codeword);
        }
        let info = self.receive_codewords(&codewords)?;
        Ok(ReceiveOutcome { info, converged: failed == 0, failed_codewords: failed })
    }

    /// Hard receive from decoded codewords in `H` column order.
    pub fn receive_codewords(&self, codewords: &[Vec<u8>]) -> Result<BitBlock> {
        let l = &self.layout;
        if codewords.len() != l.codewords {
            return Err(Error::LengthMismatch { expected: l.codewords, actual: codewords.len() });
        }
        let amp_bits = (l.m - 1) * l.symbols_per_codeword;
        let mut amplitudes = Vec::with_capacity(l.symbols());
        let mut extra = Vec::with_capacity(l.extra_bits());
        for cw in codewords {
            if cw.len() != self.code.length() {
                return Err(Error::LengthMismatch { expected: self.code.length(), actual: cw.len() });
            }
            let systematic = self.code.extract_info(cw);
            for s in 0..l.symbols_per_codeword {
                let mut label = 0u32;
                for level in 1..l.m {
                    label = (label << 1) | systematic[(level - 1) * l.symbols_per_codeword + s] as u32;
                }
                amplitudes.push(self.labeling.amplitude_of_label(label));
            }
            extra.extend_from_slice(&systematic[amp_bits..]);
        }
        self.deshape(&amplitudes, extra)
    }

    /// Genie receive straight from exact PAM symbols, bypassing the FEC.
    pub fn receive_symbols(&self, symbols: &[i32]) -> Result<BitBlock> {
        let l = &self.layout;
        if symbols.len() != l.symbols() {
            return Err(Error::LengthMismatch { expected: l.symbols(), actual: symbols.len() });
        }
        let amplitudes: Vec<u32> = symbols.iter().map(|s| s.unsigned_abs()).collect();
        let mut extra = Vec::with_capacity(l.extra_bits());
        for chunk in symbols.chunks(l.symbols_per_codeword) {
            extra.extend(chunk[l.parity_per_codeword..].iter().map(|&s| u8::from(s > 0)));
        }
        self.deshape(&amplitudes, extra)
    }

    fn deshape(&self, amplitudes: &[u32], extra: Vec<u8>) -> Result<BitBlock> {
        let l = &self.layout;
        let mut bits = Vec::with_capacity(l.info_bits());
        for (block, amps) in amplitudes.chunks(l.blocklength).enumerate() {
            let decoded = self
                .shaper
                .decode(&AmplitudeBlock(amps.to_vec()))
                .map_err(|e| Error::BlockDecode { block, source: Box::new(e) })?;
            bits.extend(decoded.into_bits());
        }
        bits.extend(extra);
        BitBlock::new(bits)
    }
}

/// Uniform 2^m-PAM BICM reference: codeword bits grouped `m` per symbol in
/// `H` column order, Gray-mapped.
#[derive(Debug, Clone)]
pub struct UniformCodec {
    code: Arc<LdpcCode>,
    labeling: LabelingMap,
    decoder: MinSumDecoder,
}

impl UniformCodec {
    pub fn new(m: u32, code: Arc<LdpcCode>) -> Result<Self> {
        if code.length() % m as usize != 0 {
            return Err(Error::FrameMisalignment(format!(
                "codeword length {} is not a multiple of m = {m}",
                code.length()
            )));
        }
        Ok(Self { labeling: LabelingMap::gray(m)?, code, decoder: MinSumDecoder::default() })
    }

    pub fn labeling(&self) -> &LabelingMap {
        &self.labeling
    }

    pub fn code(&self) -> &LdpcCode {
        &self.code
    }

    pub fn info_bits_per_codeword(&self) -> usize {
        self.code.dimension()
    }

    pub fn symbols_per_codeword(&self) -> usize {
        self.code.length() / self.labeling.m() as usize
    }

    /// Encodes whole codewords; `info` must be a multiple of `k_c`.
    pub fn transmit(&self, info: &BitBlock) -> Result<Vec<i32>> {
        let k = self.code.dimension();
        if info.len() % k != 0 {
            return Err(Error::LengthMismatch { expected: info.len().div_ceil(k) * k, actual: info.len() });
        }
        let m = self.labeling.m() as usize;
        let mut symbols = Vec::with_capacity(info.len() / k * self.symbols_per_codeword());
        for chunk in info.bits().chunks(k) {
            let cw = self.code.encode(chunk)?;
            symbols.extend(cw.chunks(m).map(|bits| {
                let label = bits.iter().fold(0u32, |acc, &b| (acc << 1) | b as u32);
                self.labeling.value_of_label(label)
            }));
        }
        Ok(symbols)
    }

    pub fn receive_llrs(&self, llrs: &LlrBlock) -> Result<ReceiveOutcome> {
        let n = self.code.length();
        if llrs.m != self.labeling.m() as usize || llrs.values.len() % n != 0 {
            return Err(Error::LengthMismatch { expected: n, actual: llrs.values.len() });
        }
        let mut info = Vec::with_capacity(llrs.values.len() / n * self.code.dimension());
        let mut failed = 0;
        for chunk in llrs.values.chunks(n) {
            let out = self.decoder.decode(self.code.h(), chunk)?;
            failed += usize::from(!out.converged);
            info.extend(self.code.extract_info(&out.codeword));
        }
        Ok(ReceiveOutcome { info: BitBlock::new(info)?, converged: failed == 0, failed_codewords: failed })
    }

    pub fn receive_symbols(&self, symbols: &[i32]) -> Result<BitBlock> {
        let m = self.labeling.m() as usize;
        let per = self.symbols_per_codeword();
        if symbols.len() % per != 0 {
            return Err(Error::LengthMismatch { expected: symbols.len().div_ceil(per) * per, actual: symbols.len() });
        }
        let mut info = Vec::new();
        for chunk in symbols.chunks(per) {
            let mut cw = Vec::with_capacity(self.code.length());
            for &s in chunk {
                let label = self.labeling.label_of_value(s).ok_or(Error::NotInAlphabet(s.unsigned_abs()))?;
                cw.extend((0..m).map(|level| self.labeling.bit(label, level)));
            }
            info.extend(self.code.extract_info(&cw));
        }
        BitBlock::new(info)
    }
}
