//! `pinch-sim`: Monte Carlo sweeps and single-drop traces for the
//! pinching-antenna OFDMA simulator.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use pinch_ofdma::experiments::{self, ExperimentConfig, SweepAxis, SweepPoint};

#[derive(Parser)]
#[command(name = "pinch-sim", version, about = "Pinching-antenna OFDMA link-level simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the sweep described by a config file.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Minimum rate versus number of apertures.
    SweepN {
        #[command(flatten)]
        common: SweepArgs,
        /// Aperture counts to evaluate.
        #[arg(long, value_delimiter = ',')]
        n_values: Option<Vec<usize>>,
        /// Transmit power for every point (dBm).
        #[arg(long, allow_negative_numbers = true)]
        tx_power_dbm: Option<f64>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Minimum rate versus transmit power.
    SweepPower {
        #[command(flatten)]
        common: SweepArgs,
        /// Transmit powers to evaluate (dBm).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        power_values: Option<Vec<f64>>,
        /// Aperture count for every point.
        #[arg(long)]
        pa_count: Option<usize>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Dump one drop (geometry, taps, frame, allocation, rates) as JSON.
    TraceDrop {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        index: u64,
        /// Base config; only scenario constants are used.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        users: Option<usize>,
        #[arg(long)]
        pa_count: Option<usize>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        tx_power_dbm: Option<f64>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// CSV output path.
    #[arg(long)]
    out: PathBuf,
    /// Optional JSON mirror of the CSV.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Master seed (overrides the config).
    #[arg(long)]
    seed: Option<u64>,
    /// Monte Carlo drops per point (overrides the config).
    #[arg(long)]
    drops: Option<usize>,
    /// Worker threads; defaults to all cores.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct SweepArgs {
    /// Base config file; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// User counts, e.g. `2,4`.
    #[arg(long, value_delimiter = ',')]
    users: Option<Vec<usize>>,
    /// Blockage densities, e.g. `0.05,0.15`.
    #[arg(long, value_delimiter = ',')]
    betas: Option<Vec<f64>>,
}

fn load_or_default(path: Option<&Path>, default: ExperimentConfig) -> Result<ExperimentConfig> {
    match path {
        Some(p) => ExperimentConfig::load(p).with_context(|| format!("loading {}", p.display())),
        None => Ok(default),
    }
}

impl SweepArgs {
    fn base(&self, default: ExperimentConfig) -> Result<ExperimentConfig> {
        let mut config = load_or_default(self.config.as_deref(), default)?;
        if let Some(users) = &self.users {
            config.user_counts = users.clone();
        }
        if let Some(betas) = &self.betas {
            config.betas = betas.clone();
        }
        Ok(config)
    }
}

fn run(mut config: ExperimentConfig, args: &RunArgs) -> Result<()> {
    if let Some(seed) = args.seed {
        config.master_seed = seed;
    }
    if let Some(drops) = args.drops {
        config.drops = drops;
    }
    let result = experiments::run_sweep(&config, args.threads)?;
    experiments::emit_csv(&result, &args.out)?;
    if let Some(json) = &args.json {
        experiments::emit_json(&result, json)?;
    }
    eprintln!(
        "wrote {} rows ({} points x {} drops) to {}",
        result.rows.len(),
        config.points().len(),
        config.drops,
        args.out.display()
    );
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Simulate { config, run: args } => {
            let config = ExperimentConfig::load(&config).with_context(|| format!("loading {}", config.display()))?;
            run(config, &args)
        }
        Command::SweepN { common, n_values, tx_power_dbm, run: args } => {
            let mut config = common.base(ExperimentConfig::default())?;
            config.axis = SweepAxis::PaCount;
            if let Some(values) = n_values {
                config.axis_values = values.into_iter().map(|n| n as f64).collect();
            }
            if let Some(p) = tx_power_dbm {
                config.tx_power_dbm = p;
            }
            run(config, &args)
        }
        Command::SweepPower { common, power_values, pa_count, run: args } => {
            let mut config = common.base(ExperimentConfig::power_sweep())?;
            config.axis = SweepAxis::TxPower;
            if let Some(values) = power_values {
                config.axis_values = values;
            }
            if let Some(n) = pa_count {
                config.pa_count = n;
            }
            run(config, &args)
        }
        Command::TraceDrop { seed, index, config, users, pa_count, beta, tx_power_dbm } => {
            let mut config = load_or_default(config.as_deref(), ExperimentConfig::default())?;
            config.axis = SweepAxis::PaCount;
            if let Some(p) = tx_power_dbm {
                config.tx_power_dbm = p;
            }
            let point = SweepPoint {
                users: users.unwrap_or(config.user_counts[0]),
                beta: beta.unwrap_or(config.betas[0]),
                axis_value: pa_count.unwrap_or(config.pa_count) as f64,
            };
            let scenario = config.scenario(&point)?;
            let trace = experiments::trace_drop(&scenario, seed, index)?;
            println!("{}", serde_json::to_string_pretty(&trace)?);
            Ok(())
        }
    }
}
