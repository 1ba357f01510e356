use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use uav_icic::channel::ChannelMode;
use uav_icic::geometry::build_grid;
use uav_icic::harness::runner::realize_snapshot;
use uav_icic::harness::{emit_csv, run_experiment, run_experiment_with_threads, ExperimentConfig, Preset};
use uav_icic::scenario::Scenario;
use uav_icic::Result;

#[derive(Parser)]
#[command(name = "uav-icic", about = "UAV-sensing-assisted ICIC simulator", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Parser)]
struct ConfigArgs {
    /// JSON config file; keys are ExperimentConfig field names
    #[arg(long)]
    config: Option<PathBuf>,
    /// Experiment preset
    #[arg(long)]
    preset: Option<Preset>,
    /// Master seed override
    #[arg(long)]
    seed: Option<u64>,
    /// Channel mode override
    #[arg(long)]
    mode: Option<ChannelMode>,
    /// Realization count override
    #[arg(long)]
    realizations: Option<u64>,
}

impl ConfigArgs {
    fn resolve(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::from_json_str(&std::fs::read_to_string(path)?)?,
            None => ExperimentConfig::preset(self.preset.unwrap_or(Preset::Fig3a)),
        };
        if let Some(p) = self.preset {
            cfg.preset = p;
        }
        if let Some(s) = self.seed {
            cfg.master_seed = s;
        }
        if let Some(m) = self.mode {
            cfg.mode = m;
        }
        if let Some(r) = self.realizations {
            cfg.realizations = r;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write aggregate results as CSV
    Run {
        #[command(flatten)]
        config: ConfigArgs,
        /// Output CSV path
        #[arg(long, default_value = "results.csv")]
        out: PathBuf,
        /// Worker thread count (default: rayon's choice)
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Parse and validate a config file
    ValidateConfig {
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Emit one scenario snapshot as JSON
    DumpScenario {
        #[command(flatten)]
        config: ConfigArgs,
        /// Realization index
        #[arg(long, default_value_t = 0)]
        index: u64,
    },
}

#[derive(Serialize)]
struct SnapshotDump<'a> {
    master_seed: u64,
    index: u64,
    #[serde(flatten)]
    scenario: &'a Scenario,
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run {
            config,
            out,
            threads,
        } => {
            let cfg = config.resolve()?;
            let rows = match threads {
                Some(t) => run_experiment_with_threads(&cfg, t)?,
                None => run_experiment(&cfg)?,
            };
            emit_csv(&rows, &out)?;
            eprintln!(
                "wrote {} rows ({} realizations) to {}",
                rows.len(),
                cfg.realizations,
                out.display()
            );
        }
        Command::ValidateConfig { config } => {
            let cfg = config.resolve()?;
            eprintln!("config ok: preset {:?}, {} realizations", cfg.preset, cfg.realizations);
        }
        Command::DumpScenario { config, index } => {
            let cfg = config.resolve()?;
            let grid = build_grid(cfg.tiers, cfg.cell_radius_m, cfg.bs_height_m)?;
            let (scenario, _) = realize_snapshot(&cfg, &grid, index)?;
            let dump = SnapshotDump {
                master_seed: cfg.master_seed,
                index,
                scenario: &scenario,
            };
            println!("{}", serde_json::to_string_pretty(&dump)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
