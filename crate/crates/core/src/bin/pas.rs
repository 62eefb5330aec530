//! Command-line front end for the shaping library and the simulation harness.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pas_shaping::harness::{
    compare_shapers, deshape_file, run_sweep, shape_file, worker_budget, write_comparison, ChannelKind,
    ExperimentConfig, SchemeSetup, WORKERS_ENV,
};
use pas_shaping::metrics::CSV_HEADER;
use pas_shaping::shaping::{
    parse_rational, plan_rate, AmplitudeAlphabet, DistributionMatcher, EnergyTrellis, MatcherTuning, Shaper,
    ShapingConfig,
};
use pas_shaping::{Error, Result};

#[derive(Parser)]
#[command(name = "pas", version, about = "Probabilistic amplitude shaping toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the rate plan and tuned matcher for a target rate
    Plan(PlanArgs),
    /// Shape a packed bit file into an amplitude file
    Shape(FileArgs),
    /// Recover the bit file from an amplitude file
    Deshape(FileArgs),
    /// Sweep SNR on the AWGN channel and write CSV rows
    SweepAwgn(SweepArgs),
    /// Sweep launch power and distance over the fiber link and write CSV rows
    SweepFiber(SweepArgs),
    /// Sweep several schemes over a common grid and join the results
    Compare(CompareArgs),
    /// Write the ESS counting trellis as `n,e,count` CSV
    TrellisDump(TrellisArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum MatcherKind {
    Ess,
    Ccdm,
}

#[derive(Args)]
struct PlanArgs {
    /// information rate in bits per real dimension
    #[arg(long, default_value = "2.5")]
    rate: String,
    #[arg(long, default_value = "5/6")]
    fec_rate: String,
    /// bits per PAM symbol (2^m points)
    #[arg(short, long, default_value_t = 4)]
    m: u32,
    #[arg(short = 'n', long, default_value_t = 200)]
    blocklength: usize,
    #[arg(long, value_enum)]
    matcher: Option<MatcherKind>,
}

/// Configuration file plus overrides; every flag maps to one config key.
#[derive(Args)]
struct ConfigArgs {
    /// key = value experiment file
    config: Option<PathBuf>,
    #[arg(long)]
    scheme: Option<String>,
    #[arg(short = 'n', long)]
    blocklength: Option<usize>,
    #[arg(long)]
    target_rate: Option<String>,
    #[arg(long)]
    fec_rate: Option<String>,
    #[arg(short, long)]
    m: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    snr_db: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    power_dbm: Option<String>,
    #[arg(long)]
    spans: Option<String>,
    #[arg(long)]
    wdm_channels: Option<usize>,
    #[arg(long)]
    sps: Option<usize>,
    #[arg(long)]
    step_km: Option<f64>,
    /// 4D symbols per grid point
    #[arg(long)]
    symbols: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// any other key, as `key=value` (repeatable)
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

impl ConfigArgs {
    fn resolve(&self) -> Result<ExperimentConfig> {
        let mut config = match &self.config {
            Some(path) => ExperimentConfig::from_file(path)?,
            None => ExperimentConfig::from_text("")?,
        };
        let flags: [(&str, Option<String>); 13] = [
            ("scheme", self.scheme.clone()),
            ("blocklength", self.blocklength.map(|v| v.to_string())),
            ("target_rate", self.target_rate.clone()),
            ("fec_rate", self.fec_rate.clone()),
            ("m", self.m.map(|v| v.to_string())),
            ("snr_db", self.snr_db.clone()),
            ("power_dbm", self.power_dbm.clone()),
            ("spans", self.spans.clone()),
            ("wdm_channels", self.wdm_channels.map(|v| v.to_string())),
            ("sps", self.sps.map(|v| v.to_string())),
            ("step_km", self.step_km.map(|v| v.to_string())),
            ("symbols", self.symbols.map(|v| v.to_string())),
            ("seed", self.seed.map(|v| v.to_string())),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                config = config.with(key, v)?;
            }
        }
        for item in &self.overrides {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::InvalidParameter(format!("--set expects key=value, got {item:?}")))?;
            config = config.with(key.trim(), value.trim())?;
        }
        Ok(config)
    }
}

#[derive(Args)]
struct FileArgs {
    #[command(flatten)]
    config: ConfigArgs,
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// CSV output; existing rows are kept and their grid points skipped
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// concurrent grid points
    #[arg(long, env = WORKERS_ENV)]
    workers: Option<usize>,
}

#[derive(Args)]
struct CompareArgs {
    /// one experiment file per scheme
    #[arg(required = true)]
    configs: Vec<PathBuf>,
    #[arg(short, long)]
    out: Option<PathBuf>,
    #[arg(long, env = WORKERS_ENV)]
    workers: Option<usize>,
}

#[derive(Args)]
struct TrellisArgs {
    #[arg(short, long, default_value_t = 4)]
    m: u32,
    #[arg(short = 'n', long)]
    blocklength: usize,
    /// maximum sequence energy; planned from the rate flags when omitted
    #[arg(long)]
    e_max: Option<u64>,
    #[arg(long, default_value = "2.5")]
    rate: String,
    #[arg(long, default_value = "5/6")]
    fec_rate: String,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

fn output(path: Option<&PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn plan(args: &PlanArgs) -> Result<()> {
    let plan = plan_rate(parse_rational(&args.rate)?, args.m, parse_rational(&args.fec_rate)?, args.blocklength)?;
    println!("m = {}  R_c = {}  N = {}", plan.m, plan.fec_rate, plan.n);
    println!("gamma = {}  R_s target = {}  k = {}", plan.gamma, plan.target_shaping_rate, plan.k);
    println!("achieved rate = {} ({})", plan.achieved_rate(), if plan.is_exact() { "exact" } else { "floored" });
    let kinds: Vec<MatcherKind> = match args.matcher {
        Some(k) => vec![k],
        None => vec![MatcherKind::Ess, MatcherKind::Ccdm],
    };
    for kind in kinds {
        let config = match kind {
            MatcherKind::Ess => ShapingConfig::ess(plan.clone())?,
            MatcherKind::Ccdm => ShapingConfig::ccdm(plan.clone())?,
        };
        let shaper = Shaper::from_config(&config)?;
        let tuning = match &config.tuning {
            MatcherTuning::Ess { e_max } => format!("E_max = {e_max}"),
            MatcherTuning::Ccdm { composition } => format!("composition = {:?}", composition.counts()),
        };
        let dist: Vec<String> = shaper.distribution().iter().map(|p| format!("{p:.4}")).collect();
        println!(
            "{}: {tuning}  rate loss = {:.6} bit/amp  E[A^2] = {:.4}  P(A) = [{}]",
            shaper.name(),
            shaper.rate_loss(),
            shaper.mean_energy(),
            dist.join(", ")
        );
    }
    Ok(())
}

fn file_shaper(args: &ConfigArgs) -> Result<Shaper> {
    let config = args.resolve()?;
    SchemeSetup::new(&config)?
        .shaper
        .ok_or_else(|| Error::InvalidParameter("uniform signalling has no shaper".into()))
}

fn sweep(args: &SweepArgs, channel: ChannelKind) -> Result<()> {
    let mut config = args.config.resolve()?;
    if args.config.config.is_none() && channel == ChannelKind::Fiber {
        config = config.with("channel", "fiber")?;
    }
    if config.channel != channel {
        return Err(Error::InvalidParameter(format!(
            "{} is configured for the {:?} channel",
            config.name, config.channel
        )));
    }
    let workers = args.workers.unwrap_or_else(worker_budget);
    let rows = run_sweep(&config, args.out.as_deref(), workers)?;
    if args.out.is_none() {
        let mut out = output(None)?;
        writeln!(out, "{CSV_HEADER}")?;
        for r in &rows {
            writeln!(out, "{}", r.csv_row())?;
        }
    } else {
        eprintln!("{} new rows ({})", rows.len(), config.hash());
    }
    Ok(())
}

fn compare(args: &CompareArgs) -> Result<()> {
    let configs = args.configs.iter().map(|p| ExperimentConfig::from_file(p)).collect::<Result<Vec<_>>>()?;
    let rows = compare_shapers(&configs, args.workers.unwrap_or_else(worker_budget))?;
    write_comparison(output(args.out.as_ref())?, &rows)
}

fn trellis_dump(args: &TrellisArgs) -> Result<()> {
    let alphabet = AmplitudeAlphabet::new(args.m)?;
    let e_max = match args.e_max {
        Some(e) => e,
        None => {
            let plan = plan_rate(parse_rational(&args.rate)?, args.m, parse_rational(&args.fec_rate)?, args.blocklength)?;
            ShapingConfig::ess(plan)?.e_max().expect("ess tuning")
        }
    };
    let trellis = EnergyTrellis::build(&alphabet, args.blocklength, e_max)?;
    eprintln!("N = {}  E_max = {e_max}  sequences = {}", args.blocklength, trellis.num_sequences());
    let mut out = output(args.out.as_ref())?;
    trellis.write_table(&mut out)?;
    out.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Plan(a) => plan(&a),
        Command::Shape(a) => {
            let blocks = shape_file(&a.input, &a.output, &file_shaper(&a.config)?)?;
            eprintln!("shaped {blocks} blocks");
            Ok(())
        }
        Command::Deshape(a) => {
            let blocks = deshape_file(&a.input, &a.output, &file_shaper(&a.config)?)?;
            eprintln!("deshaped {blocks} blocks");
            Ok(())
        }
        Command::SweepAwgn(a) => sweep(&a, ChannelKind::Awgn),
        Command::SweepFiber(a) => sweep(&a, ChannelKind::Fiber),
        Command::Compare(a) => compare(&a),
        Command::TrellisDump(a) => trellis_dump(&a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
