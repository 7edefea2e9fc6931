use clap::Parser;
use std::path::PathBuf;
use std::process::ExitCode;
use tsmlab::experiment::{self, ConfigSources, ExperimentConfig, ExperimentName, Outcome, CHECKS};
use tsmlab::TsmError;

/// Batch experiments on twisted spherical means.
#[derive(Debug, Parser)]
#[command(name = "tsmlab", version)]
struct Cli {
    /// TOML configuration with flat `section.key = value` entries.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,

    /// verify-identities, tsm-eval, project, expand-qk, counterexample or probe.
    #[arg(long, value_name = "NAME")]
    experiment: Option<String>,

    /// Output directory.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Overrides a configuration key; repeatable.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,

    /// Lists every check and exits.
    #[arg(long)]
    list_checks: bool,
}

fn list_checks() {
    for e in ExperimentName::ALL {
        println!("{e}:");
        for c in CHECKS.iter().filter(|c| c.experiment == e) {
            println!("  {:<38} {}", c.id, c.description);
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if cli.list_checks {
        list_checks();
        return ExitCode::SUCCESS;
    }
    if let Err(e) = tsmlab::exec::init_threads_from_env() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let sources = ConfigSources { file: cli.config, experiment: cli.experiment, out: cli.out, overrides: cli.overrides };
    let cfg = match ExperimentConfig::load(&sources) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match experiment::run(&cfg) {
        Ok(summary) => {
            for c in &summary.checks {
                let tag = match c.outcome {
                    Outcome::Pass => "PASS",
                    Outcome::Fail => "FAIL",
                    Outcome::Skipped => "SKIP",
                };
                println!("{tag} {:<38} value={:e} threshold={:e}  {}", c.id, c.value, c.threshold, c.detail);
            }
            if summary.passed {
                println!("{}: all checks passed; results in {}", summary.experiment, cfg.out_dir().display());
                ExitCode::SUCCESS
            } else {
                println!("{}: failing checks: {}", summary.experiment, summary.failing.join(", "));
                ExitCode::from(1)
            }
        }
        Err(TsmError::Config(msg)) => {
            eprintln!("error: config error: {msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
