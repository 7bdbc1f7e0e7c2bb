use std::path::PathBuf;
use std::process::ExitCode;

use bandlab::experiments::ExperimentKind;
use bandlab::io::{parse_config, run_to_dir, Overrides};
use bandlab::{BandError, Result};
use clap::{Args, Parser, Subcommand};

/// Monte Carlo laboratory for block-tridiagonal Gaussian band matrices.
#[derive(Parser)]
#[command(name = "bandlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Raw draws of the block model
    Sample(RunArgs),
    /// Exponential decay of the corner block in N
    Decay(RunArgs),
    /// Conditional variance of log S_k and the log-concavity checks
    Fluctuations(RunArgs),
    /// Full-matrix estimates for GOE and Gaussian blocks
    Lemma21(RunArgs),
    /// Typical sizes of the chain variables at mid-chain
    Lemma22(RunArgs),
    /// Variance of the log corner norm against summed conditional variances
    Decompose(RunArgs),
    /// Power-law exponent of the conditional variance in M
    Conjecture(RunArgs),
    /// Analytic and oracle self-checks
    Selftest(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON config file
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    replicas: Option<u64>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (0 = all cores)
    #[arg(long, env = "BANDLAB_WORKERS", default_value_t = 0)]
    workers: usize,
    /// Block sizes, comma separated
    #[arg(long = "m", value_delimiter = ',')]
    m_list: Option<Vec<usize>>,
    /// Chain lengths, comma separated
    #[arg(long = "n", value_delimiter = ',')]
    n_list: Option<Vec<usize>>,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
}

impl Command {
    fn split(self) -> (ExperimentKind, RunArgs) {
        match self {
            Command::Sample(a) => (ExperimentKind::Sample, a),
            Command::Decay(a) => (ExperimentKind::Decay, a),
            Command::Fluctuations(a) => (ExperimentKind::Fluctuations, a),
            Command::Lemma21(a) => (ExperimentKind::Lemma21, a),
            Command::Lemma22(a) => (ExperimentKind::Lemma22, a),
            Command::Decompose(a) => (ExperimentKind::Decomposition, a),
            Command::Conjecture(a) => (ExperimentKind::ConjectureScan, a),
            Command::Selftest(a) => (ExperimentKind::Selftest, a),
        }
    }
}

fn run(command: Command) -> Result<()> {
    let (kind, args) = command.split();
    let overrides = Overrides {
        seed: args.seed,
        replicas: args.replicas,
        out: args.out,
        m_list: args.m_list,
        n_list: args.n_list,
        lambda: args.lambda,
        epsilon: args.epsilon,
    };
    let cfg = parse_config(kind, args.config.as_deref(), &overrides)?;
    let (output, manifest) = run_to_dir(&cfg, args.workers)?;
    for f in &manifest.files {
        println!("{}", cfg.output_dir.join(f).display());
    }
    if kind == ExperimentKind::Selftest && !output.selftest_passed() {
        return Err(BandError::CheckFailed(
            "selftest: see selftest_summary.csv".into(),
        ));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments");
            eprintln!("error[usage]: {}", first.trim_start_matches("error: "));
            return ExitCode::from(2);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = e.to_string().replace('\n', " ");
            eprintln!("error[{}]: {msg}", e.kind());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
