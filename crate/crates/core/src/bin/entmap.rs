use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use entmap::concurrence::SimulationMode;
use entmap::gate_error::Gate;
use entmap::runner::{self, ExperimentConfig, GateErrorArgs, RunArtifacts};
use entmap::{Error, Result};

#[derive(Parser)]
#[command(
    version,
    about = "Two-qubit Heisenberg coupling characterization from simulated entanglement dynamics"
)]
struct Cli {
    /// JSON experiment config.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed; overrides ENTMAP_SEED and the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeArg>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Noiseless,
    Sampled,
}

#[derive(Clone, Copy, ValueEnum)]
enum GateArg {
    Ising,
    Heisenberg,
}

#[derive(Subcommand)]
enum Command {
    /// Write the concurrence series of the four input states.
    Simulate,
    /// Write spectra and detected peaks.
    Spectrum {
        /// Read series from a previous `simulate` output instead of simulating.
        #[arg(long)]
        from: Option<PathBuf>,
    },
    /// Run the full protocol and reconstruct the couplings.
    Characterize,
    /// Gate error against measurement budget.
    GateError {
        /// Time points per run; repeat for several curves.
        #[arg(long = "nt", required = true)]
        nts: Vec<usize>,
        /// Log-spaced Ne values, START:STOP[:COUNT].
        #[arg(long)]
        ne_range: String,
        #[arg(long, value_enum, default_value = "ising")]
        gate: GateArg,
        /// Also solve for the smallest budget reaching this error.
        #[arg(long)]
        p_target: Option<f64>,
    },
    /// Sweep the input-state imperfection of the first input.
    Robustness,
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig> {
    let path = cli
        .config
        .as_deref()
        .ok_or_else(|| Error::InvalidArgument("--config is required for this command".into()))?;
    let mut config = ExperimentConfig::from_path(path)?;
    if let Some(seed) = cli.seed {
        config.seed = seed;
    } else if let Ok(text) = std::env::var("ENTMAP_SEED") {
        config.seed = text.trim().parse().map_err(|_| {
            Error::InvalidArgument(format!("ENTMAP_SEED is not an unsigned integer: {text:?}"))
        })?;
    }
    if let Some(mode) = cli.mode {
        config.mode = match mode {
            ModeArg::Noiseless => SimulationMode::Noiseless,
            ModeArg::Sampled => SimulationMode::Sampled,
        };
    }
    Ok(config)
}

fn out_dir(cli: &Cli, config: Option<&ExperimentConfig>) -> PathBuf {
    cli.out
        .clone()
        .or_else(|| config.and_then(|c| c.outputs.clone()))
        .unwrap_or_else(|| PathBuf::from("entmap-out"))
}

fn run(cli: &Cli) -> Result<RunArtifacts> {
    match &cli.command {
        Command::GateError {
            nts,
            ne_range,
            gate,
            p_target,
        } => {
            let args = GateErrorArgs {
                nts: nts.clone(),
                ne_values: runner::parse_ne_range(ne_range)?,
                gate: match gate {
                    GateArg::Ising => Gate::IsingCnot,
                    GateArg::Heisenberg => Gate::HeisenbergSqrtswap,
                },
                p_target: *p_target,
            };
            runner::cmd_gate_error(&args, &out_dir(cli, None))
        }
        command => {
            let config = load_config(cli)?;
            let out = out_dir(cli, Some(&config));
            match command {
                Command::Simulate => runner::cmd_simulate(&config, &out),
                Command::Spectrum { from } => {
                    runner::cmd_spectrum(&config, &out, from.as_deref().map(Path::new))
                }
                Command::Characterize => runner::cmd_characterize(&config, &out),
                Command::Robustness => runner::cmd_robustness(&config, &out),
                Command::GateError { .. } => unreachable!(),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(artifacts) => {
            let text =
                serde_json::to_string_pretty(&artifacts.summary).expect("summary serializes");
            let _ = writeln!(std::io::stdout(), "{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("entmap: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
