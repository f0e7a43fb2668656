use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qsim::runner::{
    parse_config, parse_config_str, resolve_output_dir, run, verify_suite, Backend, ExperimentConfig, ExperimentKind, RunnerError,
};

#[derive(Parser)]
#[command(name = "qsim", version, about = "Spectra and open-system dynamics of small quantum-dot networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues over a K or J grid.
    SpectrumSweep(RunArgs),
    /// Evolve one initial state under the configured backend.
    Evolve(RunArgs),
    /// Transverse-field annealing towards an Ising problem.
    Anneal(RunArgs),
    /// Subspace leakage across the four 3-qubit topology classes.
    DfsScan(RunArgs),
    /// Built-in invariant suite.
    Verify(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON experiment config.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the config's output directory.
    #[arg(long)]
    output_dir: Option<PathBuf>,
    /// closed, lindblad or exact-bath.
    #[arg(long)]
    backend: Option<String>,
    /// Reserved; no run is stochastic.
    #[arg(long)]
    seed: Option<u64>,
    /// Also run the built-in invariant suite.
    #[arg(long)]
    verify: bool,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let (kind, args) = match cli.command {
        Command::SpectrumSweep(a) => (ExperimentKind::SpectrumSweep, a),
        Command::Evolve(a) => (ExperimentKind::Evolve, a),
        Command::Anneal(a) => (ExperimentKind::Anneal, a),
        Command::DfsScan(a) => (ExperimentKind::DfsScan, a),
        Command::Verify(a) => (ExperimentKind::Verify, a),
    };
    match execute(kind, &args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qsim: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(kind: ExperimentKind, args: &RunArgs) -> Result<(), RunnerError> {
    let mut config = match &args.config {
        Some(path) => parse_config(path)?,
        None if kind == ExperimentKind::Verify => default_verify_config(),
        None => {
            return Err(RunnerError::Parse { message: format!("{} needs --config <path>", kind.name()) });
        }
    };
    if config.kind != kind {
        return Err(RunnerError::Validation {
            path: "kind".into(),
            message: format!("config is '{}' but the subcommand is '{}'", config.kind.name(), kind.name()),
        });
    }
    if let Some(name) = &args.backend {
        config.backend = Backend::from_name(name).ok_or_else(|| RunnerError::Validation {
            path: "backend".into(),
            message: format!("unknown backend '{name}'"),
        })?;
    }
    if args.seed.is_some() {
        log::info!("--seed has no effect: every run is deterministic");
    }
    let out_dir = resolve_output_dir(args.output_dir.as_deref(), &config);
    let manifest = run(&config, &out_dir)?;
    println!("{} run written to {} ({} files)", kind.name(), out_dir.display(), manifest.outputs.len() + 1);
    for (name, value) in &manifest.results {
        println!("  {name} = {value:.6e}");
    }
    for w in &manifest.warnings {
        log::warn!("{w}");
    }
    if args.verify {
        let checks = verify_suite()?;
        let failed: Vec<String> = checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect();
        println!("verify: {}/{} checks passed", checks.len() - failed.len(), checks.len());
        if !failed.is_empty() {
            return Err(RunnerError::ChecksFailed(failed.join(", ")));
        }
    }
    Ok(())
}

fn default_verify_config() -> ExperimentConfig {
    parse_config_str(r#"{"kind":"verify"}"#).expect("static config parses")
}
