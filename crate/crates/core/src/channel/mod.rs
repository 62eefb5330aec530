//! Channels: AWGN on symbols, and dual-polarization fiber links built from
//! split-step spans, lumped EDFAs and WDM multiplexing.

mod amplifier;
mod awgn;
mod fiber;
mod waveform;
mod wdm;

pub use amplifier::{edfa, AmplifierParams, OSNR_REFERENCE_BANDWIDTH};
pub use awgn::{awgn, awgn_real};
pub use fiber::{ssfm_span, FiberParams, SplitStep};
pub use waveform::Waveform;
pub use wdm::{wdm_mux, wdm_select, WdmConfig};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Planck constant, J·s.
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Carrier wavelength used for dispersion and photon energy, m.
pub const CARRIER_WAVELENGTH: f64 = 1550e-9;

pub fn carrier_frequency() -> f64 {
    SPEED_OF_LIGHT / CARRIER_WAVELENGTH
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    1e-3 * 10f64.powf(dbm / 10.0)
}

pub fn watts_to_dbm(watts: f64) -> f64 {
    10.0 * (watts / 1e-3).log10()
}
