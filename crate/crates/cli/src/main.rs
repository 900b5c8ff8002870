use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use spinfactor_cli::{exit, parse_time_grid, Analysis, ConfigError, RunConfig, Verdict};

#[derive(Parser)]
#[command(name = "spinfactor", version, about = "Spin-chain map classification laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Run the analyses listed in the config file.
    Run,
    /// Check the Pauli, CAR and spin-factor identities.
    Verify,
    /// Check the structure and positivity of the projection onto the spin factor.
    Project,
    /// Classify the projection, or the reduced map at each time in the grid.
    Classify,
    /// Tabulate the reduced map over the time grid into sweep.csv.
    Sweep,
    /// Test reversibility of the spin factor.
    Reversibility,
    /// Search for a non-decomposability witness.
    Witness,
}

#[derive(Args)]
struct Overrides {
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    n_sites: Option<usize>,
    /// ising_transverse, xy, heisenberg or custom.
    #[arg(long, global = true)]
    potential: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    j: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    h: Option<f64>,
    /// `start:stop:step` or a comma-separated list.
    #[arg(long, global = true)]
    t_grid: Option<String>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory for report.json and sweep.csv.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for the sweep (0 = all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

fn resolve(cli: &Cli) -> Result<RunConfig, ConfigError> {
    let o = &cli.overrides;
    let mut cfg = match &o.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(n) = o.n_sites {
        cfg.n_sites = n;
    }
    if let Some(kind) = &o.potential {
        cfg.potential.kind = kind.clone();
    }
    if let Some(j) = o.j {
        cfg.potential.j = j;
    }
    if let Some(h) = o.h {
        cfg.potential.h = h;
    }
    if let Some(spec) = &o.t_grid {
        cfg.time_grid = Some(parse_time_grid(spec)?);
    }
    if let Some(seed) = o.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &o.out {
        cfg.output_dir = out.clone();
    }
    if let Some(jobs) = o.jobs {
        cfg.jobs = jobs;
    }
    let single = match cli.command {
        Command::Run => None,
        Command::Verify => Some(Analysis::VerifyAlgebra),
        Command::Project => Some(Analysis::Project),
        Command::Classify => Some(Analysis::Classify),
        Command::Sweep => Some(Analysis::Sweep),
        Command::Reversibility => Some(Analysis::Reversibility),
        Command::Witness => Some(Analysis::Witness),
    };
    match single {
        Some(a) => cfg.analyses = vec![a],
        None if cfg.analyses.is_empty() => {
            return Err(ConfigError::Invalid("`run` needs a non-empty `analyses` list".into()))
        }
        None => {}
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let cfg = match resolve(&cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit::CONFIG_ERROR as u8);
        }
    };
    let outcome = match spinfactor_cli::run(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit::CONFIG_ERROR as u8);
        }
    };
    for check in &outcome.report.checks {
        let tag = match check.verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Info => "INFO",
            Verdict::Error => "ERROR",
        };
        println!("{tag:5} {} {} ({:.1} ms)", check.name, check.outcome, check.runtime_ms);
    }
    match spinfactor_cli::emit(&outcome.report, &outcome.sweep, &cfg.output_dir) {
        Ok((report, csv)) => println!("wrote {} and {}", report.display(), csv.display()),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit::CHECK_FAILED as u8);
        }
    }
    if outcome.report.any_failed() {
        ExitCode::from(exit::CHECK_FAILED as u8)
    } else {
        ExitCode::from(exit::OK as u8)
    }
}
