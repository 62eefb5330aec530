//! Distribution matchers for probabilistic amplitude shaping.
//!
//! Both matchers map a `k`-bit index to a block of `N` one-sided amplitudes
//! with exact big-integer arithmetic; they differ in the codebook:
//! [`EnergyTrellis`] takes every sequence under an energy bound, and
//! [`CcdmCodebook`] takes every permutation of one composition.

mod alphabet;
mod bits;
pub mod ccdm;
mod entropy;
pub mod io;
pub mod rate;
pub mod trellis;

use std::sync::Arc;

pub use alphabet::AmplitudeAlphabet;
pub use bits::{AmplitudeBlock, BitBlock};
pub use ccdm::{ccdm_composition_for_bits, ccdm_count, ccdm_num_bits, CcdmCodebook, Composition};
pub use entropy::{entropy_bits, rate_loss};
pub use rate::{gamma, parse_rational, plan_rate, MatcherTuning, RatePlan, ShapingConfig};
pub use trellis::{count_sequences, min_emax_for_bits, EnergyTrellis};

use crate::{Error, Result};

/// Common interface of fixed-length distribution matchers.
pub trait DistributionMatcher {
    fn blocklength(&self) -> usize;

    /// Input bits consumed per block.
    fn input_bits(&self) -> u64;

    fn alphabet(&self) -> &AmplitudeAlphabet;

    fn encode(&self, input: &BitBlock) -> Result<AmplitudeBlock>;

    fn decode(&self, amplitudes: &AmplitudeBlock) -> Result<BitBlock>;

    /// Amplitude marginal of the codebook the encoder emits.
    fn distribution(&self) -> Vec<f64>;

    fn rate_loss(&self) -> f64 {
        rate_loss(&self.distribution(), self.input_bits(), self.blocklength())
            .expect("matcher distributions are normalized")
    }

    /// Average energy per amplitude under [`DistributionMatcher::distribution`].
    fn mean_energy(&self) -> f64 {
        self.distribution()
            .iter()
            .zip(self.alphabet().energies())
            .map(|(p, e)| p * e as f64)
            .sum()
    }
}

/// ESS over a shared trellis, indexing only the first `2^k` sequences.
#[derive(Debug, Clone)]
pub struct EssMatcher {
    trellis: Arc<EnergyTrellis>,
    k: u64,
    distribution: Vec<f64>,
}

impl EssMatcher {
    pub fn new(trellis: Arc<EnergyTrellis>, k: u64) -> Result<Self> {
        let distribution = trellis.codebook_distribution(k)?;
        Ok(Self { trellis, k, distribution })
    }

    pub fn trellis(&self) -> &EnergyTrellis {
        &self.trellis
    }
}

impl DistributionMatcher for EssMatcher {
    fn blocklength(&self) -> usize {
        self.trellis.blocklength()
    }

    fn input_bits(&self) -> u64 {
        self.k
    }

    fn alphabet(&self) -> &AmplitudeAlphabet {
        self.trellis.alphabet()
    }

    fn encode(&self, input: &BitBlock) -> Result<AmplitudeBlock> {
        if input.len() as u64 != self.k {
            return Err(Error::LengthMismatch { expected: self.k as usize, actual: input.len() });
        }
        self.trellis.sequence_at(&input.to_index())
    }

    fn decode(&self, amplitudes: &AmplitudeBlock) -> Result<BitBlock> {
        self.trellis.decode_with_bits(amplitudes, self.k)
    }

    fn distribution(&self) -> Vec<f64> {
        self.distribution.clone()
    }
}

/// CCDM indexing the first `2^k` permutations of its composition.
#[derive(Debug, Clone)]
pub struct CcdmMatcher {
    codebook: Arc<CcdmCodebook>,
    k: u64,
}

impl CcdmMatcher {
    pub fn new(codebook: Arc<CcdmCodebook>, k: u64) -> Result<Self> {
        if k > codebook.num_bits() {
            return Err(Error::InsufficientBits { requested: k, available: codebook.num_bits() });
        }
        Ok(Self { codebook, k })
    }

    pub fn codebook(&self) -> &CcdmCodebook {
        &self.codebook
    }
}

impl DistributionMatcher for CcdmMatcher {
    fn blocklength(&self) -> usize {
        self.codebook.blocklength()
    }

    fn input_bits(&self) -> u64 {
        self.k
    }

    fn alphabet(&self) -> &AmplitudeAlphabet {
        self.codebook.alphabet()
    }

    fn encode(&self, input: &BitBlock) -> Result<AmplitudeBlock> {
        if input.len() as u64 != self.k {
            return Err(Error::LengthMismatch { expected: self.k as usize, actual: input.len() });
        }
        self.codebook.sequence_at(&input.to_index())
    }

    fn decode(&self, amplitudes: &AmplitudeBlock) -> Result<BitBlock> {
        self.codebook.decode_with_bits(amplitudes, self.k)
    }

    /// Every permutation has the same histogram, so the marginal is exactly `n_a / N`.
    fn distribution(&self) -> Vec<f64> {
        self.codebook.composition().distribution()
    }
}

/// A configured shaper of either kind.
#[derive(Debug, Clone)]
pub enum Shaper {
    Ess(EssMatcher),
    Ccdm(CcdmMatcher),
}

impl Shaper {
    /// Builds the matcher described by a tuned configuration.
    pub fn from_config(config: &ShapingConfig) -> Result<Self> {
        let alphabet = config.alphabet();
        match &config.tuning {
            MatcherTuning::Ess { e_max } => {
                let trellis = EnergyTrellis::build(&alphabet, config.plan.n, *e_max)?;
                Ok(Shaper::Ess(EssMatcher::new(Arc::new(trellis), config.plan.k)?))
            }
            MatcherTuning::Ccdm { composition } => {
                let codebook = CcdmCodebook::new(&alphabet, composition.clone())?;
                Ok(Shaper::Ccdm(CcdmMatcher::new(Arc::new(codebook), config.plan.k)?))
            }
        }
    }

    fn inner(&self) -> &dyn DistributionMatcher {
        match self {
            Shaper::Ess(m) => m,
            Shaper::Ccdm(m) => m,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Shaper::Ess(_) => "ess",
            Shaper::Ccdm(_) => "ccdm",
        }
    }
}

impl DistributionMatcher for Shaper {
    fn blocklength(&self) -> usize {
        self.inner().blocklength()
    }
    fn input_bits(&self) -> u64 {
        self.inner().input_bits()
    }
    fn alphabet(&self) -> &AmplitudeAlphabet {
        self.inner().alphabet()
    }
    fn encode(&self, input: &BitBlock) -> Result<AmplitudeBlock> {
        self.inner().encode(input)
    }
    fn decode(&self, amplitudes: &AmplitudeBlock) -> Result<BitBlock> {
        self.inner().decode(amplitudes)
    }
    fn distribution(&self) -> Vec<f64> {
        self.inner().distribution()
    }
}
