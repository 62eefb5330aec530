use std::collections::HashSet;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use super::config::{ChannelKind, ExperimentConfig, Scheme};
use super::link::simulate_fiber_point;
use super::scheme::{pair_complex, Measurement, SchemeSetup};
use crate::channel::awgn;
use crate::metrics::{least_squares_gain, MetricsReport, CSV_HEADER};
use crate::{Error, Result};

/// Environment variable capping the number of concurrent grid points.
pub const WORKERS_ENV: &str = "PAS_WORKERS";

/// `PAS_WORKERS` if set, otherwise the available parallelism.
pub fn worker_budget() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Independent 64-bit seed for `(master, key)`.
pub fn derive_seed(master: u64, key: &str) -> u64 {
    let mut h = Sha256::new();
    h.update(master.to_le_bytes());
    h.update(key.as_bytes());
    let digest = h.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("8 bytes"))
}

/// One point of the sweep grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridPoint {
    Awgn { snr_db: f64 },
    Fiber { power_dbm: f64, spans: usize },
}

impl GridPoint {
    /// Scheme-independent key; noise seeds derive from it so every scheme
    /// sees the same noise realization at a grid point.
    pub fn key(&self) -> String {
        match self {
            Self::Awgn { snr_db } => format!("snr={snr_db}"),
            Self::Fiber { power_dbm, spans } => format!("power={power_dbm};spans={spans}"),
        }
    }
}

pub fn grid(config: &ExperimentConfig) -> Vec<GridPoint> {
    match config.channel {
        ChannelKind::Awgn => config.snr_db.iter().map(|&snr_db| GridPoint::Awgn { snr_db }).collect(),
        ChannelKind::Fiber => config
            .spans
            .iter()
            .flat_map(|&spans| config.power_dbm.iter().map(move |&power_dbm| GridPoint::Fiber { power_dbm, spans }))
            .collect(),
    }
}

fn skeleton(config: &ExperimentConfig, hash: &str, point: &GridPoint) -> MetricsReport {
    let mut r = MetricsReport {
        config_hash: hash.to_string(),
        scheme: config.label(),
        blocklength: (config.scheme != Scheme::Uniform).then_some(config.blocklength),
        ..Default::default()
    };
    match *point {
        GridPoint::Awgn { snr_db } => r.snr_db = Some(snr_db),
        GridPoint::Fiber { power_dbm, spans } => {
            r.power_dbm = Some(power_dbm);
            r.distance_km = Some(spans as f64 * config.fiber.span_length_km);
        }
    }
    r
}

/// AWGN back-to-back: unit-power QAM, noise at `snr_db`, least-squares
/// gain alignment, metrics.
pub fn simulate_awgn_point(setup: &SchemeSetup, symbols: usize, snr_db: f64, data_seed: u64, noise_seed: u64) -> Result<Measurement> {
    if snr_db.is_nan() {
        return Err(Error::InvalidParameter("SNR is NaN".into()));
    }
    let tx = pair_complex(&setup.pam_symbols(2 * symbols, data_seed)?);
    let norm = setup.normalization();
    let unit: Vec<_> = tx.iter().map(|s| s * norm).collect();
    let rx = awgn(&unit, snr_db, noise_seed);
    let gain = least_squares_gain(&rx, &unit);
    let aligned: Vec<_> = rx.iter().map(|s| s / (gain * norm)).collect();
    setup.measure(&tx, &aligned)
}

/// Runs one grid point; failures come back as error rows.
pub fn run_point(setup: &SchemeSetup, config: &ExperimentConfig, hash: &str, point: &GridPoint) -> MetricsReport {
    let skel = skeleton(config, hash, point);
    let data_seed = derive_seed(config.seed, "data");
    let noise_seed = derive_seed(config.seed, &point.key());
    let result = match *point {
        // symbols counts 4D symbols: two complex symbols each
        GridPoint::Awgn { snr_db } => simulate_awgn_point(setup, 2 * config.symbols, snr_db, data_seed, noise_seed),
        GridPoint::Fiber { power_dbm, spans } => simulate_fiber_point(setup, config, power_dbm, spans, data_seed, noise_seed),
    };
    match result {
        Ok(m) => {
            let mut r = setup.report(hash, skel.blocklength, &m);
            r.snr_db = skel.snr_db;
            r.power_dbm = skel.power_dbm;
            r.distance_km = skel.distance_km;
            r
        }
        Err(e) => MetricsReport { error: Some(e.to_string()), ..skel },
    }
}

fn completed_keys(path: &Path) -> Result<HashSet<String>> {
    let mut keys = HashSet::new();
    if !path.exists() {
        return Ok(keys);
    }
    let mut lines = BufReader::new(File::open(path)?).lines();
    match lines.next().transpose()? {
        None => return Ok(keys),
        Some(header) if header == CSV_HEADER => {}
        Some(header) => {
            return Err(Error::Incompatible(format!("{} has header {header:?}, expected the sweep schema", path.display())))
        }
    }
    for line in lines {
        let line = line?;
        if !line.trim().is_empty() {
            keys.insert(line.split(',').take(6).collect::<Vec<_>>().join(","));
        }
    }
    Ok(keys)
}

/// Sweeps every grid point of `config`. With `out`, rows are appended in
/// grid order and points already present in the file are skipped, so an
/// interrupted run resumes where it stopped. Returns the rows computed now.
pub fn run_sweep(config: &ExperimentConfig, out: Option<&Path>, workers: usize) -> Result<Vec<MetricsReport>> {
    if let Some(w) = config.scale_warning() {
        eprintln!("{w}");
    }
    let setup = SchemeSetup::new(config)?;
    let hash = config.hash();
    let done = match out {
        Some(p) => completed_keys(p)?,
        None => HashSet::new(),
    };
    let pending: Vec<GridPoint> =
        grid(config).into_iter().filter(|p| !done.contains(&skeleton(config, &hash, p).grid_key())).collect();
    let mut file = match out {
        Some(p) => {
            let fresh = !p.exists() || std::fs::metadata(p)?.len() == 0;
            let mut f = OpenOptions::new().create(true).append(true).open(p)?;
            if fresh {
                writeln!(f, "{CSV_HEADER}")?;
            }
            Some(f)
        }
        None => None,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    let mut rows = Vec::with_capacity(pending.len());
    for chunk in pending.chunks(workers.max(1)) {
        let batch: Vec<MetricsReport> = pool.install(|| chunk.par_iter().map(|p| run_point(&setup, config, &hash, p)).collect());
        if let Some(f) = file.as_mut() {
            for r in &batch {
                writeln!(f, "{}", r.csv_row())?;
            }
            f.flush()?;
        }
        rows.extend(batch);
    }
    Ok(rows)
}

/// SNR at which AIR_N crosses `target` on an AWGN sweep (linear
/// interpolation on increasing SNR).
pub fn snr_at_air(rows: &[MetricsReport], target: f64) -> Result<f64> {
    let mut pts: Vec<(f64, f64)> =
        rows.iter().filter(|r| r.error.is_none()).filter_map(|r| r.snr_db.map(|s| (s, r.air_4d))).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (min, max) = pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.1), hi.max(p.1)));
    for w in pts.windows(2) {
        let ((s0, a0), (s1, a1)) = (w[0], w[1]);
        if (a0 - target) * (a1 - target) <= 0.0 && a0 != a1 {
            return Ok(s0 + (target - a0) / (a1 - a0) * (s1 - s0));
        }
    }
    Err(Error::OutOfRange { target, min, max })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_are_stable_and_distinct() {
        assert_eq!(derive_seed(1, "a"), derive_seed(1, "a"));
        assert_ne!(derive_seed(1, "a"), derive_seed(1, "b"));
        assert_ne!(derive_seed(1, "a"), derive_seed(2, "a"));
    }

    #[test]
    fn fiber_grid_is_distance_major() {
        let c = ExperimentConfig::from_text("channel = fiber\nspans = 1, 2\npower_dbm = 0, 1, 2").unwrap();
        let g = grid(&c);
        assert_eq!(g.len(), 6);
        assert_eq!(g[3], GridPoint::Fiber { power_dbm: 0.0, spans: 2 });
    }

    #[test]
    fn interpolated_snr() {
        let row = |snr: f64, air: f64| MetricsReport { snr_db: Some(snr), air_4d: air, ..Default::default() };
        let rows = [row(12.0, 10.4), row(10.0, 9.0), row(11.0, 9.8)];
        assert!((snr_at_air(&rows, 10.0).unwrap() - (11.0 + 1.0 / 3.0)).abs() < 1e-12);
        assert!(snr_at_air(&rows, 11.0).is_err());
    }
}
