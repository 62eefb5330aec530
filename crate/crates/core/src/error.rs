use std::path::PathBuf;

/// Errors raised across the shaping, coding, channel and harness layers.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("FEC rate {fec_rate} leaves no room for shaping with m = {m} (gamma = {gamma})")]
    PasInfeasible { m: u32, fec_rate: String, gamma: String },

    #[error("shaping set is empty: e_max = {e_max} below the all-ones energy {min_energy}")]
    EmptyShapingSet { e_max: u64, min_energy: u64 },

    #[error("cannot reach {requested} bits: at most {available} bits are available")]
    InsufficientBits { requested: u64, available: u64 },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("amplitude {0} is not in the alphabet")]
    NotInAlphabet(u32),

    #[error("sequence energy {energy} exceeds the bound {e_max}")]
    EnergyExceeded { energy: u64, e_max: u64 },

    #[error("composition mismatch: sequence histogram {actual:?} differs from {expected:?}")]
    CompositionMismatch { expected: Vec<usize>, actual: Vec<usize> },

    #[error("decoded index lies outside the {bits}-bit codebook")]
    IndexOutOfRange { bits: u64 },

    #[error("shaper decoding failed in block {block}: {source}")]
    BlockDecode {
        block: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("FEC frame misalignment: {0}")]
    FrameMisalignment(String),

    #[error("invalid parity-check matrix: {0}")]
    InvalidCode(String),

    #[error("sample rate {sample_rate} Hz cannot hold a {bandwidth} Hz WDM band")]
    Aliasing { sample_rate: f64, bandwidth: f64 },

    #[error("alignment error: {0}")]
    Misaligned(String),

    #[error("non-finite LLR at position {0}")]
    NonFiniteLlr(usize),

    #[error("target {target} is outside the swept range [{min}, {max}]")]
    OutOfRange { target: f64, min: f64, max: f64 },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("malformed input at byte offset {offset}: {message}")]
    Malformed { offset: u64, message: String },

    #[error("incompatible configurations: {0}")]
    Incompatible(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
