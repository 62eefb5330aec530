//! Probabilistic amplitude shaping with enumerative sphere shaping (ESS) and
//! constant-composition distribution matching (CCDM), rate-adapted at a fixed
//! FEC rate, together with the AWGN and split-step fiber simulation harness
//! used to compare them by finite-blocklength BMD rate and effective SNR.

mod error;
mod fft;

pub mod channel;
pub mod dsp;
pub mod harness;
pub mod metrics;
pub mod pas;
pub mod shaping;

pub use error::{Error, Result};
