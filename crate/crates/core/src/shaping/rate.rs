//! Rate adaptation at a fixed FEC rate.
//!
//! With a rate-`R_c` systematic code over `m` bit levels, a fraction
//! `γ = m(R_c − 1) + 1` of the sign bits per real dimension is left over for
//! uniform information bits. The shaper then only has to deliver
//! `R_s = R − γ` bits per amplitude to reach the information rate `R`.

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};

use super::ccdm::{ccdm_composition_for_bits, Composition};
use super::trellis::min_emax_for_bits;
use super::AmplitudeAlphabet;
use crate::{Error, Result};

/// Extra information bits per real dimension carried by sign bits: `m(R_c − 1) + 1`.
///
/// Fails when the result is not positive, i.e. the parity alone already
/// consumes every sign bit.
pub fn gamma(m: u32, fec_rate: Rational64) -> Result<Rational64> {
    if fec_rate <= Rational64::zero() || fec_rate > Rational64::one() {
        return Err(Error::InvalidParameter(format!(
            "FEC rate must lie in (0, 1], got {fec_rate}"
        )));
    }
    let g = Rational64::from_integer(m as i64) * (fec_rate - 1) + 1;
    if g <= Rational64::zero() {
        return Err(Error::PasInfeasible {
            m,
            fec_rate: fec_rate.to_string(),
            gamma: g.to_string(),
        });
    }
    Ok(g)
}

/// Parses `"5/6"`, `"2.5"` or `"3"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational64> {
    let text = text.trim();
    let bad = || Error::InvalidParameter(format!("not a rational number: {text:?}"));
    if let Some((num, den)) = text.split_once('/') {
        let num: i64 = num.trim().parse().map_err(|_| bad())?;
        let den: i64 = den.trim().parse().map_err(|_| bad())?;
        if den == 0 {
            return Err(bad());
        }
        return Ok(Rational64::new(num, den));
    }
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() || frac.len() > 15 {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    if !digits.bytes().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let num: i64 = digits.parse().map_err(|_| bad())?;
    let r = Rational64::new(num, 10i64.pow(frac.len() as u32));
    Ok(if negative { -r } else { r })
}

/// Outcome of planning the shaping rate for a target information rate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatePlan {
    pub m: u32,
    pub fec_rate: Rational64,
    pub gamma: Rational64,
    /// Requested information rate `R` in bits per real dimension.
    pub target_rate: Rational64,
    /// `R − γ`, before flooring to an integer number of shaper bits.
    pub target_shaping_rate: Rational64,
    /// Blocklength in amplitudes.
    pub n: usize,
    /// Shaper input length in bits: `floor(N · R_s)`.
    pub k: u64,
}

impl RatePlan {
    /// `k / N`, the rate the shaper actually delivers.
    pub fn shaping_rate(&self) -> Rational64 {
        Rational64::new(self.k as i64, self.n as i64)
    }

    /// `k / N + γ`; never above the target.
    pub fn achieved_rate(&self) -> Rational64 {
        self.shaping_rate() + self.gamma
    }

    pub fn is_exact(&self) -> bool {
        self.achieved_rate() == self.target_rate
    }

    /// Extra (sign-carried) information bits for `blocks` shaping blocks.
    ///
    /// `None` when `γ · N · blocks` is not an integer.
    pub fn extra_bits(&self, blocks: usize) -> Option<u64> {
        let total = self.gamma * Rational64::from_integer((self.n * blocks) as i64);
        total.is_integer().then(|| total.to_integer() as u64)
    }

    /// Smallest number of shaping blocks whose extra-bit count is integral.
    pub fn min_blocks_per_frame(&self) -> usize {
        let per_block = self.gamma * Rational64::from_integer(self.n as i64);
        *per_block.denom() as usize
    }
}

/// Chooses the shaper input length for a target information rate.
pub fn plan_rate(target_rate: Rational64, m: u32, fec_rate: Rational64, n: usize) -> Result<RatePlan> {
    if n == 0 {
        return Err(Error::InvalidParameter("blocklength must be at least 1".into()));
    }
    if target_rate >= Rational64::from_integer(m as i64) || !target_rate.is_positive() {
        return Err(Error::InvalidParameter(format!(
            "target rate {target_rate} must lie in (0, {m})"
        )));
    }
    let gamma = gamma(m, fec_rate)?;
    let rs = target_rate - gamma;
    let k_exact = rs * Rational64::from_integer(n as i64);
    let k = k_exact.floor().to_integer();
    if k <= 0 {
        return Err(Error::InvalidParameter(format!(
            "target rate {target_rate} leaves no shaper bits (R_s = {rs})"
        )));
    }
    let k = k as u64;
    let available = n as u64 * (m as u64 - 1);
    if k > available {
        return Err(Error::InsufficientBits { requested: k, available });
    }
    Ok(RatePlan {
        m,
        fec_rate,
        gamma,
        target_rate,
        target_shaping_rate: rs,
        n,
        k,
    })
}

/// The tunable parameter of a distribution matcher.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatcherTuning {
    /// ESS maximum sequence energy.
    Ess { e_max: u64 },
    /// CCDM amplitude composition.
    Ccdm { composition: Composition },
}

/// Every rate-adaptation scalar for one shaped scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShapingConfig {
    pub plan: RatePlan,
    pub tuning: MatcherTuning,
}

impl ShapingConfig {
    /// Tunes ESS to the smallest maximum energy that carries `k` bits.
    pub fn ess(plan: RatePlan) -> Result<Self> {
        let alphabet = AmplitudeAlphabet::new(plan.m)?;
        let e_max = min_emax_for_bits(&alphabet, plan.n, plan.k)?;
        Ok(Self { plan, tuning: MatcherTuning::Ess { e_max } })
    }

    /// Tunes CCDM to a minimum-energy composition that carries `k` bits.
    pub fn ccdm(plan: RatePlan) -> Result<Self> {
        let alphabet = AmplitudeAlphabet::new(plan.m)?;
        let composition = ccdm_composition_for_bits(&alphabet, plan.n, plan.k)?;
        Ok(Self { plan, tuning: MatcherTuning::Ccdm { composition } })
    }

    pub fn alphabet(&self) -> AmplitudeAlphabet {
        AmplitudeAlphabet::new(self.plan.m).expect("validated at planning time")
    }

    pub fn e_max(&self) -> Option<u64> {
        match &self.tuning {
            MatcherTuning::Ess { e_max } => Some(*e_max),
            MatcherTuning::Ccdm { .. } => None,
        }
    }

    pub fn composition(&self) -> Option<&Composition> {
        match &self.tuning {
            MatcherTuning::Ccdm { composition } => Some(composition),
            MatcherTuning::Ess { .. } => None,
        }
    }
}

/// Parity bits per frame of `n` amplitudes: `N(1 − R_c)m`.
pub fn parity_sign_bits(m: u32, fec_rate: Rational64, n: usize) -> Rational64 {
    Rational64::from_integer(n as i64) * (Rational64::one() - fec_rate) * (m as i64)
}

/// Extra information bits per frame of `n` amplitudes: `N(mR_c − m + 1)`.
pub fn extra_sign_bits(m: u32, fec_rate: Rational64, n: usize) -> Rational64 {
    Rational64::from_integer(n as i64) * (fec_rate * (m as i64) - (m as i64) + 1)
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a.lcm(&b)
}
