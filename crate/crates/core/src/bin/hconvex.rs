use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use hconvex::cli::{execute, Command, RunConfig};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Sub {
    Simulate,
    Verify,
    Scan,
    Quermass,
    RateFit,
    BallMap,
}

impl From<Sub> for Command {
    fn from(s: Sub) -> Self {
        match s {
            Sub::Simulate => Command::Simulate,
            Sub::Verify => Command::Verify,
            Sub::Scan => Command::Scan,
            Sub::Quermass => Command::Quermass,
            Sub::RateFit => Command::RateFit,
            Sub::BallMap => Command::BallMap,
        }
    }
}

/// Curvature flow and quermassintegral checks for h-convex geometry.
#[derive(Debug, Parser)]
#[command(version)]
struct Args {
    command: Sub,
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides the config).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for random families (overrides the config).
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for scans.
    #[arg(long)]
    threads: Option<usize>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let mut cfg = match RunConfig::load(&args.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let command = Command::from(args.command);
    if cfg.command.is_some_and(|c| c != command) {
        eprintln!(
            "error: config is for `{}` but `{}` was requested",
            cfg.command.unwrap().name(),
            command.name()
        );
        return ExitCode::from(2);
    }
    cfg.command = Some(command);
    if let Some(out) = args.out {
        cfg.out = out;
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(n) = args.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    ExitCode::from(execute(&cfg) as u8)
}
