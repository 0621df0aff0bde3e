//! Command-line front end for the `irs-noma` model: parameter sweeps of a
//! single pair, network campaigns and one-shot pairing, all written as CSV.

pub mod commands;
pub mod config;
pub mod error;
pub mod format;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use irs_noma::netsim::{Algorithm, InterferenceModel};
use irs_noma::AllocationPolicy;

use config::{Overrides, Range, RunConfig};
pub use error::CliError;
use format::Sink;

#[derive(Debug, Parser)]
#[command(
    name = "irs-noma",
    version,
    about = "IRS-assisted NOMA pairing and rate simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rates, bounds and feasibility of one pair over a range of phase errors.
    SweepDelta,
    /// Rates of one pair over a range of strong-user power fractions.
    SweepAlpha,
    /// Monte Carlo campaign over Poisson drops (or a fixed SINR list).
    Simulate,
    /// Pair the users listed in --sinr-file.
    Pair,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Format {
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Basis {
    /// OMA rates at --rmin-delta-deg for every row.
    Reference,
    /// OMA rates at each row's own phase error.
    Tracking,
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.parse().map_err(|e: irs_noma::Error| e.to_string())
}

fn parse_policy(s: &str) -> Result<AllocationPolicy, String> {
    s.parse().map_err(|e: irs_noma::Error| e.to_string())
}

fn parse_range(s: &str) -> Result<Range, String> {
    s.parse().map_err(|e: CliError| e.to_string())
}

fn parse_interference(s: &str) -> Result<InterferenceModel, String> {
    config::parse_interference(s).map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
pub struct Opts {
    /// key = value file; flags given here take precedence over it.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Maximum residual phase error in degrees.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub delta_deg: Option<f64>,
    #[arg(long, global = true)]
    pub drops: Option<usize>,
    #[arg(long, global = true)]
    pub area_km2: Option<f64>,
    #[arg(long, global = true)]
    pub bs_density: Option<f64>,
    #[arg(long, global = true)]
    pub user_density: Option<f64>,
    /// BS antennas.
    #[arg(long, global = true)]
    pub m: Option<usize>,
    /// IRS elements.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    #[arg(long, global = true)]
    pub carrier_ghz: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub tx_power_dbm: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub noise_dbm: Option<f64>,
    #[arg(long, global = true)]
    pub irs_offset_m: Option<f64>,
    /// reflected, direct-path or fixed:<watts>.
    #[arg(long, global = true, value_parser = parse_interference)]
    pub interference: Option<InterferenceModel>,
    /// aup-mpa, aup-fpa or near-far; simulate runs all three when omitted.
    #[arg(long, global = true, value_parser = parse_algorithm)]
    pub algorithm: Option<Algorithm>,
    /// Output directory; sweeps and pair print to stdout without it.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// One SINR in dB per line.
    #[arg(long, global = true, value_name = "PATH")]
    pub sinr_file: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "csv")]
    pub format: Format,
    /// Strong user SINR for the sweeps, dB.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub gamma1_db: Option<f64>,
    /// Weak user SINR for the sweeps, dB.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub gamma2_db: Option<f64>,
    /// start:stop:step in degrees.
    #[arg(long, global = true, value_parser = parse_range)]
    pub delta_range_deg: Option<Range>,
    /// start:stop:step inside (0, 1).
    #[arg(long, global = true, value_parser = parse_range)]
    pub alpha_range: Option<Range>,
    /// mpa, fpa or fixed:<alpha1>, for sweep-delta.
    #[arg(long, global = true, value_parser = parse_policy)]
    pub policy: Option<AllocationPolicy>,
    /// Minimum-rate basis of the sweeps.
    #[arg(long, global = true, value_enum)]
    pub rmin_basis: Option<Basis>,
    /// Phase error at which reference minimum rates are taken, degrees.
    #[arg(long, global = true)]
    pub rmin_delta_deg: Option<f64>,
    /// Points per curve in cdf.csv; 0 keeps every jump.
    #[arg(long, global = true)]
    pub cdf_points: Option<usize>,
}

impl Opts {
    fn overrides(&self) -> Overrides {
        Overrides {
            seed: self.seed,
            delta_deg: self.delta_deg,
            drops: self.drops,
            area_km2: self.area_km2,
            bs_density: self.bs_density,
            user_density: self.user_density,
            m: self.m,
            n: self.n,
            carrier_ghz: self.carrier_ghz,
            tx_power_dbm: self.tx_power_dbm,
            noise_dbm: self.noise_dbm,
            irs_offset_m: self.irs_offset_m,
            interference: self.interference,
            algorithm: self.algorithm,
            out: self.out.clone(),
            sinr_file: self.sinr_file.clone(),
            gamma1_db: self.gamma1_db,
            gamma2_db: self.gamma2_db,
            delta_range_deg: self.delta_range_deg,
            alpha_range: self.alpha_range,
            policy: self.policy,
            rmin_tracking: self.rmin_basis.map(|b| matches!(b, Basis::Tracking)),
            rmin_delta_deg: self.rmin_delta_deg,
            cdf_points: self.cdf_points,
        }
    }

    /// Defaults, then the config file, then flags.
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let file = match &self.config {
            Some(p) => Overrides::from_file(p)?,
            None => Overrides::default(),
        };
        RunConfig::resolve(&file.then(self.overrides()))
    }
}

fn sink_for(cfg: &RunConfig, name: &str) -> Result<Sink, CliError> {
    match &cfg.out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
                path: dir.clone(),
                source,
            })?;
            Sink::create(&dir.join(name))
        }
        None => Ok(Sink::from_writer(
            Box::new(std::io::stdout().lock()),
            Path::new("<stdout>"),
        )),
    }
}

/// Executes a parsed command line. Diagnostics go to `log`.
pub fn run(cli: &Cli, log: &mut dyn Write) -> Result<(), CliError> {
    let cfg = cli.opts.resolve()?;
    let delta_deg = cfg.network.delta.to_degrees();
    let note = |log: &mut dyn Write, msg: String| {
        // Diagnostics are best effort.
        let _ = writeln!(log, "{msg}");
    };
    match cli.command {
        Command::SweepDelta => {
            let rows = commands::sweep_delta(
                cfg.gamma1_db,
                cfg.gamma2_db,
                cfg.delta_range_deg,
                cfg.policy,
                cfg.rmin_basis,
            )?;
            if let Some(w) = rows.windows(2).find(|w| w[0].feasible != w[1].feasible) {
                note(
                    log,
                    format!(
                        "feasibility changes between {} and {} deg",
                        w[0].delta_deg, w[1].delta_deg
                    ),
                );
            }
            commands::write_sweep_delta(&rows, sink_for(&cfg, "sweep_delta.csv")?)
        }
        Command::SweepAlpha => {
            let (rows, m) = commands::sweep_alpha(
                cfg.gamma1_db,
                cfg.gamma2_db,
                delta_deg,
                cfg.alpha_range,
                cfg.rmin_basis,
            )?;
            note(
                log,
                format!(
                    "alpha_lb={} alpha_ub={} alpha_fpa={}",
                    format::num(m.lower),
                    format::num(m.upper),
                    format::num(m.fpa)
                ),
            );
            commands::write_sweep_alpha(&rows, sink_for(&cfg, "sweep_alpha.csv")?)
        }
        Command::Simulate => {
            let campaign = commands::simulate(&cfg)?;
            if campaign.resamples > 0 {
                note(log, format!("redrew {} empty layouts", campaign.resamples));
            }
            let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("results"));
            for p in commands::write_simulation(&campaign, cfg.cdf_points, &dir)? {
                note(log, format!("wrote {}", p.display()));
            }
            Ok(())
        }
        Command::Pair => {
            let path = cfg
                .sinr_file
                .clone()
                .ok_or_else(|| CliError::Usage("pair needs --sinr-file".into()))?;
            let population = commands::read_sinr_file(&path)?;
            let algorithm = cfg.algorithm.unwrap_or(Algorithm::AupMpa);
            let decisions = commands::pair(&population, delta_deg, algorithm)?;
            commands::write_pair(&decisions, sink_for(&cfg, "pair.csv")?)
        }
    }
}

/// Parses `args` (program name first) and runs them.
pub fn run_args<I, T>(args: I, log: &mut dyn Write) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::Usage(e.to_string()))?;
    run(&cli, log)
}
