use std::io::Write;

use super::config::ExperimentConfig;
use super::sweep::{grid, run_sweep};
use crate::metrics::{MetricsReport, CSV_HEADER};
use crate::{Error, Result};

pub const COMPARISON_HEADER: &str = concat!(
    "config_hash,scheme,N,snr_db,power_dbm,distance_km,snr_eff_db,snr_eff_ci_db,bmd_4d,rate_loss_4d,air_4d,air_ci_4d,samples,error",
    ",delta_air_4d,delta_snr_eff_db"
);

/// A sweep row with its differences to uniform signalling at the same grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub report: MetricsReport,
    pub delta_air_4d: Option<f64>,
    pub delta_snr_eff_db: Option<f64>,
}

impl ComparisonRow {
    pub fn csv_row(&self) -> String {
        let cell = |v: Option<f64>| v.map(|d| format!("{d:.6}")).unwrap_or_default();
        format!("{},{},{}", self.report.csv_row(), cell(self.delta_air_4d), cell(self.delta_snr_eff_db))
    }
}

/// Sweeps every configuration over their common grid and joins the rows
/// point by point. All configurations must share the information rate, the
/// FEC rate, the channel and the grid.
pub fn compare_shapers(configs: &[ExperimentConfig], workers: usize) -> Result<Vec<ComparisonRow>> {
    let Some(first) = configs.first() else {
        return Ok(Vec::new());
    };
    for c in &configs[1..] {
        if c.target_rate != first.target_rate || c.fec_rate != first.fec_rate {
            return Err(Error::Incompatible(format!(
                "{} runs R = {} at R_c = {}, {} runs R = {} at R_c = {}",
                first.label(),
                first.target_rate,
                first.fec_rate,
                c.label(),
                c.target_rate,
                c.fec_rate
            )));
        }
        if c.channel != first.channel || grid(c) != grid(first) {
            return Err(Error::Incompatible(format!("{} and {} sweep different grids", first.label(), c.label())));
        }
    }
    let sweeps: Vec<Vec<MetricsReport>> = configs.iter().map(|c| run_sweep(c, None, workers)).collect::<Result<_>>()?;
    let uniform = configs.iter().position(|c| c.scheme == super::config::Scheme::Uniform);
    let points = sweeps[0].len();
    let mut rows = Vec::with_capacity(points * configs.len());
    for p in 0..points {
        let reference = uniform.map(|u| &sweeps[u][p]).filter(|r| r.error.is_none());
        for sweep in &sweeps {
            let r = &sweep[p];
            let delta = |f: fn(&MetricsReport) -> f64| reference.filter(|_| r.error.is_none()).map(|u| f(r) - f(u));
            rows.push(ComparisonRow {
                report: r.clone(),
                delta_air_4d: delta(|r| r.air_4d),
                delta_snr_eff_db: delta(|r| r.snr_eff_db),
            });
        }
    }
    Ok(rows)
}

pub fn write_comparison<W: Write>(mut out: W, rows: &[ComparisonRow]) -> Result<()> {
    debug_assert!(COMPARISON_HEADER.starts_with(CSV_HEADER));
    writeln!(out, "{COMPARISON_HEADER}")?;
    for r in rows {
        writeln!(out, "{}", r.csv_row())?;
    }
    Ok(())
}
