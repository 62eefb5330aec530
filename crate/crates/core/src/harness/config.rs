//! Flat `key = value` experiment files.
//!
//! `#` starts a comment, `include = path` pulls in another file (relative to
//! the including file) at that point, and later keys override earlier ones.
//! Numeric lists are comma-separated and may use `start:stop:step` ranges.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_rational::Rational64;
use sha2::{Digest, Sha256};

use crate::channel::{AmplifierParams, FiberParams, WdmConfig};
use crate::shaping::parse_rational;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Ess,
    Ccdm,
    Uniform,
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ess" => Ok(Self::Ess),
            "ccdm" => Ok(Self::Ccdm),
            "uniform" => Ok(Self::Uniform),
            other => Err(Error::InvalidParameter(format!("unknown scheme {other:?} (ess, ccdm, uniform)"))),
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Ess => "ess",
            Self::Ccdm => "ccdm",
            Self::Uniform => "uniform",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelKind {
    Awgn,
    Fiber,
}

/// Fully resolved experiment description.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub name: String,
    pub scheme: Scheme,
    pub blocklength: usize,
    /// information rate in bits per real dimension
    pub target_rate: Rational64,
    pub fec_rate: Rational64,
    pub m: u32,
    pub channel: ChannelKind,
    pub snr_db: Vec<f64>,
    pub power_dbm: Vec<f64>,
    pub spans: Vec<usize>,
    pub fiber: FiberParams,
    pub amplifier: AmplifierParams,
    pub step_km: f64,
    pub wdm: WdmConfig,
    pub sps: usize,
    pub rrc_span: usize,
    /// 4D (dual-polarization) symbols per grid point
    pub symbols: usize,
    pub seed: u64,
    /// propagation sample-steps above which a run is flagged as not desk scale
    pub sample_budget: f64,
    entries: BTreeMap<String, String>,
}

const KEYS: &[&str] = &[
    "name", "scheme", "blocklength", "target_rate", "fec_rate", "m", "channel", "snr_db", "power_dbm", "spans",
    "span_km", "alpha_db_km", "dispersion", "gamma_nl", "gain_db", "noise_figure_db", "ase", "step_km",
    "wdm_channels", "spacing_ghz", "symbol_rate_gbd", "roll_off", "sps", "rrc_span", "symbols", "seed",
    "sample_budget",
];

fn defaults() -> BTreeMap<String, String> {
    [
        ("name", "experiment"),
        ("scheme", "ess"),
        ("blocklength", "200"),
        ("target_rate", "2.5"),
        ("fec_rate", "5/6"),
        ("m", "4"),
        ("channel", "awgn"),
        ("snr_db", "10:16:1"),
        ("power_dbm", "0"),
        ("spans", "10"),
        ("span_km", "80"),
        ("alpha_db_km", "0.2"),
        ("dispersion", "17"),
        ("gamma_nl", "1.3"),
        ("noise_figure_db", "5"),
        ("ase", "true"),
        ("step_km", "0.1"),
        ("wdm_channels", "1"),
        ("spacing_ghz", "50"),
        ("symbol_rate_gbd", "45"),
        ("roll_off", "0.1"),
        ("sps", "16"),
        ("rrc_span", "256"),
        ("symbols", "65536"),
        ("seed", "1"),
        ("sample_budget", "5e11"),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v.to_string()))
    .collect()
}

/// Parses `"1, 2.5, 4:8:2"` into `[1, 2.5, 4, 6, 8]`.
pub fn parse_list(text: &str) -> Result<Vec<f64>> {
    let bad = || Error::InvalidParameter(format!("bad numeric list {text:?}"));
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [v] => out.push(v.parse().map_err(|_| bad())?),
            [a, b, step] => {
                let (a, b, step): (f64, f64, f64) =
                    (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?, step.parse().map_err(|_| bad())?);
                if !(step > 0.0) || b < a {
                    return Err(bad());
                }
                let count = ((b - a) / step + 1e-9).floor() as usize;
                out.extend((0..=count).map(|i| a + i as f64 * step));
            }
            _ => return Err(bad()),
        }
    }
    Ok(out)
}

fn read_entries(path: &Path, into: &mut BTreeMap<String, String>, stack: &mut Vec<PathBuf>) -> Result<()> {
    let canonical = path.canonicalize()?;
    if stack.contains(&canonical) {
        return Err(Error::Parse { path: path.into(), line: 0, message: "include cycle".into() });
    }
    stack.push(canonical);
    let text = std::fs::read_to_string(path)?;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Parse { path: path.into(), line: i + 1, message: format!("expected key = value, got {line:?}") });
        };
        let (key, value) = (key.trim(), value.trim());
        if key == "include" {
            let target = path.parent().unwrap_or(Path::new(".")).join(value);
            read_entries(&target, into, stack)?;
        } else if KEYS.contains(&key) {
            into.insert(key.to_string(), value.to_string());
        } else {
            return Err(Error::Parse { path: path.into(), line: i + 1, message: format!("unknown key {key:?}") });
        }
    }
    stack.pop();
    Ok(())
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let mut entries = defaults();
        read_entries(path, &mut entries, &mut Vec::new())?;
        Self::from_entries(entries)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut entries = defaults();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                path: "<inline>".into(),
                line: i + 1,
                message: format!("expected key = value, got {line:?}"),
            })?;
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(Error::Parse { path: "<inline>".into(), line: i + 1, message: format!("unknown key {key:?}") });
            }
            entries.insert(key.to_string(), value.trim().to_string());
        }
        Self::from_entries(entries)
    }

    /// Returns a copy with `key` overridden.
    pub fn with(&self, key: &str, value: impl fmt::Display) -> Result<Self> {
        if !KEYS.contains(&key) {
            return Err(Error::InvalidParameter(format!("unknown key {key:?}")));
        }
        let mut entries = self.entries.clone();
        entries.insert(key.to_string(), value.to_string());
        Self::from_entries(entries)
    }

    fn from_entries(entries: BTreeMap<String, String>) -> Result<Self> {
        let get = |k: &str| entries.get(k).map(String::as_str).unwrap_or("");
        let num = |k: &str| -> Result<f64> {
            get(k).parse().map_err(|_| Error::InvalidParameter(format!("{k} = {:?} is not a number", get(k))))
        };
        let int = |k: &str| -> Result<usize> {
            let v = num(k)?;
            if v < 0.0 || v.fract() != 0.0 {
                return Err(Error::InvalidParameter(format!("{k} = {v} is not a non-negative integer")));
            }
            Ok(v as usize)
        };
        let channel = match get("channel") {
            "awgn" => ChannelKind::Awgn,
            "fiber" => ChannelKind::Fiber,
            other => return Err(Error::InvalidParameter(format!("unknown channel {other:?} (awgn, fiber)"))),
        };
        let fiber = FiberParams {
            alpha_db_per_km: num("alpha_db_km")?,
            dispersion: num("dispersion")?,
            gamma_nl: num("gamma_nl")?,
            span_length_km: num("span_km")?,
        };
        let gain_db = match entries.get("gain_db") {
            Some(v) => v.parse().map_err(|_| Error::InvalidParameter(format!("gain_db = {v:?}")))?,
            None => fiber.span_loss_db(),
        };
        let ase = match get("ase") {
            "true" | "on" | "1" => true,
            "false" | "off" | "0" => false,
            other => return Err(Error::InvalidParameter(format!("ase = {other:?} is not a boolean"))),
        };
        let config = Self {
            name: get("name").to_string(),
            scheme: get("scheme").parse()?,
            blocklength: int("blocklength")?,
            target_rate: parse_rational(get("target_rate"))?,
            fec_rate: parse_rational(get("fec_rate"))?,
            m: int("m")? as u32,
            channel,
            snr_db: parse_list(get("snr_db"))?,
            power_dbm: parse_list(get("power_dbm"))?,
            spans: parse_list(get("spans"))?.into_iter().map(|s| s as usize).collect(),
            fiber,
            amplifier: AmplifierParams { gain_db, noise_figure_db: num("noise_figure_db")?, ase },
            step_km: num("step_km")?,
            wdm: WdmConfig {
                channel_count: int("wdm_channels")?,
                spacing: num("spacing_ghz")? * 1e9,
                symbol_rate: num("symbol_rate_gbd")? * 1e9,
                roll_off: num("roll_off")?,
            },
            sps: int("sps")?,
            rrc_span: int("rrc_span")?,
            symbols: int("symbols")?,
            seed: int("seed")? as u64,
            sample_budget: num("sample_budget")?,
            entries,
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<()> {
        if self.symbols == 0 {
            return Err(Error::InvalidParameter("symbols must be positive".into()));
        }
        if self.channel == ChannelKind::Fiber {
            self.fiber.validate()?;
            self.wdm.validate()?;
            if self.wdm.channel_count > 1 {
                self.wdm.check_sample_rate(self.wdm.symbol_rate * self.sps as f64)?;
            }
            if self.power_dbm.is_empty() || self.spans.is_empty() {
                return Err(Error::InvalidParameter("fiber sweeps need power_dbm and spans".into()));
            }
        } else if self.snr_db.is_empty() {
            return Err(Error::InvalidParameter("AWGN sweeps need snr_db".into()));
        }
        if self.scheme == Scheme::Uniform {
            let rate = Rational64::from_integer(self.m as i64) * self.fec_rate;
            if rate != self.target_rate {
                return Err(Error::InvalidParameter(format!(
                    "uniform {}-PAM at R_c = {} carries {rate} bits, not the target {}",
                    1u32 << self.m,
                    self.fec_rate,
                    self.target_rate
                )));
            }
        }
        Ok(())
    }

    /// Canonical `key = value` listing of every resolved key.
    pub fn canonical(&self) -> String {
        self.entries.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }

    /// First 12 hex digits of SHA-256 over [`ExperimentConfig::canonical`].
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical().as_bytes()))[..12].to_string()
    }

    /// Short label such as `ess-200` or `uniform-m3`.
    pub fn label(&self) -> String {
        match self.scheme {
            Scheme::Uniform => format!("uniform-m{}", self.m),
            s => format!("{s}-{}", self.blocklength),
        }
    }

    /// Propagation cost in sample-steps (samples × SSFM steps summed over the grid).
    pub fn propagation_cost(&self) -> f64 {
        if self.channel == ChannelKind::Awgn {
            return 0.0;
        }
        let samples = self.symbols as f64 * self.sps as f64;
        let steps_per_span = (self.fiber.span_length_km / self.step_km).ceil();
        let spans: f64 = self.spans.iter().map(|&s| s as f64).sum();
        samples * steps_per_span * spans * self.power_dbm.len() as f64
    }

    /// Warning text when the run exceeds the desk-scale budget.
    pub fn scale_warning(&self) -> Option<String> {
        let cost = self.propagation_cost();
        (cost > self.sample_budget).then(|| {
            format!(
                "warning: {} is not desk scale: {:.2e} sample-steps (budget {:.2e}), roughly {:.1} CPU-hours",
                self.name,
                cost,
                self.sample_budget,
                cost * 60e-9 / 3600.0
            )
        })
    }
}

#[cfg(test)]
mod tests {
    use std::fs;

    use super::*;

    #[test]
    fn lists_and_ranges() {
        assert_eq!(parse_list("1, 2.5,4:8:2").unwrap(), vec![1.0, 2.5, 4.0, 6.0, 8.0]);
        assert_eq!(parse_list("-2:0:1").unwrap(), vec![-2.0, -1.0, 0.0]);
        assert!(parse_list("1:0:1").is_err());
        assert!(parse_list("x").is_err());
    }

    #[test]
    fn includes_and_overrides() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("base.cfg"), "channel = awgn\nsnr_db = 10, 12\nblocklength = 100\n").unwrap();
        fs::write(dir.path().join("top.cfg"), "# comment\ninclude = base.cfg\nblocklength = 200 # trailing\n").unwrap();
        let c = ExperimentConfig::from_file(&dir.path().join("top.cfg")).unwrap();
        assert_eq!(c.blocklength, 200);
        assert_eq!(c.snr_db, vec![10.0, 12.0]);
        assert_eq!(c.hash().len(), 12);
        assert_ne!(c.hash(), c.with("seed", 2).unwrap().hash());
        assert_eq!(c.hash(), c.with("seed", 1).unwrap().hash());
    }

    #[test]
    fn include_cycle_and_unknown_keys() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("a.cfg"), "include = b.cfg\n").unwrap();
        fs::write(dir.path().join("b.cfg"), "include = a.cfg\n").unwrap();
        assert!(ExperimentConfig::from_file(&dir.path().join("a.cfg")).is_err());
        assert!(ExperimentConfig::from_text("colour = blue").is_err());
        assert!(matches!(ExperimentConfig::from_text("a b"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn uniform_rate_must_match() {
        assert!(ExperimentConfig::from_text("scheme = uniform\nm = 3").is_ok());
        assert!(ExperimentConfig::from_text("scheme = uniform\nm = 4").is_err());
    }

    #[test]
    fn gain_defaults_to_span_loss() {
        let c = ExperimentConfig::from_text("span_km = 100").unwrap();
        assert!((c.amplifier.gain_db - 20.0).abs() < 1e-12);
    }

    #[test]
    fn full_scale_warns() {
        let c = ExperimentConfig::from_text(
            "channel = fiber\nwdm_channels = 11\nspans = 20\nsymbols = 1000000\npower_dbm = -2:4:1",
        )
        .unwrap();
        assert!(c.scale_warning().is_some());
        let desk = c.with("symbols", 1024).unwrap().with("spans", 1).unwrap().with("power_dbm", 0).unwrap();
        assert!(desk.scale_warning().is_none());
    }
}
