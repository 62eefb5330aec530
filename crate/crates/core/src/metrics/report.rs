use std::fmt::Write as _;

/// Column schema shared by every sweep CSV.
pub const CSV_HEADER: &str = "config_hash,scheme,N,snr_db,power_dbm,distance_km,snr_eff_db,snr_eff_ci_db,bmd_4d,rate_loss_4d,air_4d,air_ci_4d,samples,error";

/// One grid point's metrics.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MetricsReport {
    pub config_hash: String,
    pub scheme: String,
    /// shaper blocklength; `None` for uniform signalling
    pub blocklength: Option<usize>,
    /// channel SNR for AWGN sweeps
    pub snr_db: Option<f64>,
    pub power_dbm: Option<f64>,
    pub distance_km: Option<f64>,
    pub snr_eff_db: f64,
    pub snr_eff_ci_db: f64,
    pub h_c: f64,
    pub h_ci_given_y: Vec<f64>,
    pub bmd_4d: f64,
    pub rate_loss_per_amp: f64,
    pub air_4d: f64,
    pub air_ci_4d: f64,
    /// real-dimension samples behind the estimates
    pub samples: usize,
    pub error: Option<String>,
}

fn opt<T: std::fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

fn num(v: f64) -> String {
    if v.is_finite() { format!("{v:.6}") } else if v > 0.0 { "inf".into() } else { "nan".into() }
}

impl MetricsReport {
    pub fn rate_loss_4d(&self) -> f64 {
        super::DIMENSIONS_4D * self.rate_loss_per_amp
    }

    /// A row for a failed grid point; metric cells stay empty.
    pub fn failed(config_hash: &str, scheme: &str, message: impl Into<String>) -> Self {
        Self { config_hash: config_hash.into(), scheme: scheme.into(), error: Some(message.into()), ..Default::default() }
    }

    pub fn csv_row(&self) -> String {
        let mut row = String::new();
        let _ = write!(
            row,
            "{},{},{},{},{},{},",
            self.config_hash,
            self.scheme,
            opt(&self.blocklength),
            opt(&self.snr_db),
            opt(&self.power_dbm),
            opt(&self.distance_km)
        );
        match &self.error {
            Some(message) => {
                let clean: String = message.chars().map(|c| if c == ',' || c == '\n' { ';' } else { c }).collect();
                let _ = write!(row, ",,,,,,,{clean}");
            }
            None => {
                let _ = write!(
                    row,
                    "{},{},{},{},{},{},{},",
                    num(self.snr_eff_db),
                    num(self.snr_eff_ci_db),
                    num(self.bmd_4d),
                    num(self.rate_loss_4d()),
                    num(self.air_4d),
                    num(self.air_ci_4d),
                    self.samples
                );
            }
        }
        row
    }

    /// Grid key (scheme, N and grid columns) used for resuming and joining.
    pub fn grid_key(&self) -> String {
        self.csv_row().split(',').take(6).collect::<Vec<_>>().join(",")
    }
}
