use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use kitaev_zb::cli::{self, CliError, EngineChoice};

/// Environment variable overriding the worker thread count.
const THREADS_ENV: &str = "KITAEV_ZB_THREADS";

#[derive(Parser)]
#[command(name = "kitaev-zb", version, about = "Particle-hole Zitterbewegung in the periodic Kitaev chain")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a config and write trajectory, snapshot and comparison CSVs.
    Simulate { config: PathBuf },
    /// Print ZB amplitude and period of a trajectory CSV's separation column.
    ZbExtract { csv: PathBuf },
    /// Run a config on both engines and print their largest deviation.
    OracleCheck { config: PathBuf },
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| format!("{THREADS_ENV} must be a positive integer, got {raw:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| format!("{THREADS_ENV}: {e}"))
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Simulate { config } => {
            let cfg = cli::load_config(&config)?;
            let (_, written) = cli::run(&cfg)?;
            for p in written {
                log::info!("wrote {}", p.display());
            }
        }
        Command::ZbExtract { csv } => {
            let z = cli::zb_extract_file(&csv)?;
            println!("amplitude={:.9} period={:.9}", z.amplitude, z.period);
        }
        Command::OracleCheck { config } => {
            let mut cfg = cli::load_config(&config)?;
            cfg.engine = EngineChoice::Both;
            let out = cli::execute(&cfg)?;
            println!("max_state_diff={:e}", out.max_state_diff().unwrap_or(0.0));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = Args::parse();
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    match dispatch(args.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
