use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use dispersmooth::io::{read_config, run_experiment, write_outputs, Experiment, RunConfig};
use dispersmooth::{Error, Result};

#[derive(Parser)]
#[command(name = "dispersmooth", version, about = "Smoothing and long-time diagnostics for KGS and Zakharov systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one trajectory and log conserved quantities.
    Simulate(RunArgs),
    /// Ensemble measurement of Duhamel-residual smoothing.
    SmoothingScan(RunArgs),
    /// Box-pair ratios showing the half-derivative limit.
    Counterexample(RunArgs),
    /// High-low frequency splitting with a direct-solver oracle.
    Highlow(RunArgs),
    /// Damped, forced system: absorbing ball and compactness probes.
    Attractor(RunArgs),
    /// Empirical bilinear constant over random packets.
    XsbConstant(RunArgs),
    /// Resonant shell sampling and the weighted-integral check.
    ResonanceGeometry(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// TOML configuration file; defaults are used when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the configured output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Suppress the summary on stdout.
    #[arg(long)]
    quiet: bool,
}

impl Command {
    fn split(self) -> (Experiment, RunArgs) {
        match self {
            Command::Simulate(a) => (Experiment::Simulate, a),
            Command::SmoothingScan(a) => (Experiment::SmoothingScan, a),
            Command::Counterexample(a) => (Experiment::Counterexample, a),
            Command::Highlow(a) => (Experiment::Highlow, a),
            Command::Attractor(a) => (Experiment::Attractor, a),
            Command::XsbConstant(a) => (Experiment::XsbConstant, a),
            Command::ResonanceGeometry(a) => (Experiment::ResonanceGeometry, a),
        }
    }
}

fn init_threads() -> Result<()> {
    let Ok(value) = std::env::var("DISPERSMOOTH_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|n| *n >= 1)
        .ok_or_else(|| Error::Config(format!("DISPERSMOOTH_THREADS must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Config(e.to_string()))
}

fn run(experiment: Experiment, args: RunArgs) -> Result<()> {
    init_threads()?;
    let mut config = match &args.config {
        // Validated by run_experiment, after the overrides below.
        Some(path) => read_config(path)?,
        None => RunConfig::default(),
    };
    if let Some(file_exp) = config.experiment {
        if file_exp != experiment {
            return Err(Error::Config(format!(
                "config sets experiment = {file_exp} but the subcommand is {experiment}"
            )));
        }
    }
    config.experiment = Some(experiment);
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(out) = &args.out {
        config.output.dir = out.to_string_lossy().into_owned();
    }
    let start = Instant::now();
    let report = run_experiment(&config)?;
    let files = write_outputs(&report, &config, config.output.dir.as_ref(), start.elapsed().as_secs_f64())?;
    if !args.quiet {
        for note in &report.notes {
            println!("{note}");
        }
        for f in &files {
            println!("wrote {}", f.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (experiment, args) = cli.command.split();
    match run(experiment, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
