use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use strikesim_cli::{
    cmd_benchmark, cmd_diagnose, cmd_fit, cmd_generate, cmd_sweep, CliError, ExperimentSpec,
};

#[derive(Parser)]
#[command(
    name = "strikesim",
    version,
    about = "Anticipatory strike-point prediction and interception benchmarking"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Experiment spec (TOML or JSON).
    #[arg(long)]
    config: PathBuf,
    /// Override the spec's seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Worker threads; defaults to the core count.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic segment dataset.
    Generate(Common),
    /// Fit the predictor and uncertainty estimators.
    Fit(Common),
    /// Run the controller-comparison benchmark on the test split.
    Benchmark(Common),
    /// Emit confidence/residual scatters and the per-frame error table.
    Diagnose(Common),
    /// Sweep (alpha1, alpha2) on the calibration split.
    Sweep(Common),
}

fn run(common: &Common, f: impl FnOnce(&ExperimentSpec, &PathBuf) -> Result<(), CliError>) -> i32 {
    if let Some(jobs) = common.jobs {
        // ignore failure when a pool already exists (e.g. repeat invocation
        // in tests); parallelism only affects wall time, never output bytes
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    let spec = match ExperimentSpec::load(&common.config, common.seed) {
        Ok(spec) => spec,
        Err(err) => {
            eprintln!("config error: {err:#}");
            return 2;
        }
    };
    match f(&spec, &common.out) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("{err}");
            err.exit_code()
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match &cli.command {
        Command::Generate(c) => run(c, |s, out| cmd_generate(s, out)),
        Command::Fit(c) => run(c, |s, out| cmd_fit(s, out)),
        Command::Benchmark(c) => run(c, |s, out| cmd_benchmark(s, out)),
        Command::Diagnose(c) => run(c, |s, out| cmd_diagnose(s, out)),
        Command::Sweep(c) => run(c, |s, out| cmd_sweep(s, out)),
    };
    std::process::exit(code);
}
