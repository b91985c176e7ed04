//! `sparseproc`: run an experiment and write its tables to a directory.
//!
//! On success a JSON summary listing the written files goes to stdout. On
//! failure a JSON error object goes to stderr, the exit code is nonzero and
//! no output file is created or modified.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use sparseproc::experiments::run;
use sparseproc::{Error, ExperimentConfig, ExperimentKind, OutputFormat};

#[derive(Debug, Parser)]
#[command(name = "sparseproc", version, about = "Sparse processes driven by Lévy white noise")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample paths of `L^{-1}w` on a grid.
    Simulate(RunArgs),
    /// First-order density of the process at one time.
    Pdf(RunArgs),
    /// Autocorrelation, power spectrum, marginal pdf and wavelet exponents.
    Stats(RunArgs),
    /// M-term approximation error curves of AR(1) signals.
    Mterm(RunArgs),
    /// Lévy motion paths with increment histograms.
    LevyGallery(RunArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// TOML configuration; defaults are used for anything left out.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory, created if missing.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Overrides the configured number of realizations.
    #[arg(long)]
    realizations: Option<usize>,
    /// Overrides the configured output format.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

impl Command {
    fn split(&self) -> (ExperimentKind, &RunArgs) {
        match self {
            Command::Simulate(a) => (ExperimentKind::Simulate, a),
            Command::Pdf(a) => (ExperimentKind::Pdf, a),
            Command::Stats(a) => (ExperimentKind::Stats, a),
            Command::Mterm(a) => (ExperimentKind::Mterm, a),
            Command::LevyGallery(a) => (ExperimentKind::LevyGallery, a),
        }
    }
}

fn resolve(args: &RunArgs) -> Result<ExperimentConfig, Error> {
    let mut cfg = match &args.config {
        Some(path) => ExperimentConfig::from_path(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(r) = args.realizations {
        if r == 0 {
            return Err(Error::Config {
                message: "realizations must be at least 1".into(),
                line: None,
                key: Some("realizations".into()),
            });
        }
        cfg.realizations = Some(r);
    }
    if let Some(f) = args.format {
        cfg.format = match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        };
    }
    Ok(cfg)
}

fn execute(command: &Command) -> Result<Vec<PathBuf>, output::Failure> {
    let (kind, args) = command.split();
    let cfg = resolve(args)?;
    let tables = run(kind, &cfg)?;
    let config_json = cfg.resolved_json();
    let files: Vec<(String, String)> = tables
        .iter()
        .map(|t| match cfg.format {
            OutputFormat::Csv => (format!("{}.csv", t.name), t.to_csv(&config_json)),
            OutputFormat::Json => (format!("{}.json", t.name), t.to_json(&cfg)),
        })
        .collect();
    output::write_all(&args.out, &files)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let message = e.kind().to_string();
            let detail = e.render().to_string();
            eprintln!("{}", json!({ "error": { "kind": "usage", "message": message, "detail": detail.trim() } }));
            return ExitCode::from(2);
        }
    };
    match execute(&cli.command) {
        Ok(files) => {
            let files: Vec<String> = files.iter().map(|p| p.display().to_string()).collect();
            println!("{}", json!({ "status": "ok", "files": files }));
            ExitCode::SUCCESS
        }
        Err(failure) => {
            eprintln!("{}", failure.to_json());
            ExitCode::from(failure.exit_code())
        }
    }
}
