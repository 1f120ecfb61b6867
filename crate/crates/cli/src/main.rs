use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use floquet_kick_sim::{
    render_coeffs, render_error_scan, render_sweep, render_timeseries, run_coeffs, run_compile, run_error_scan,
    run_sweep, run_timeseries, Config, RunError,
};

#[derive(Parser, Debug)]
#[command(name = "floquet-kick-sim", version, about = "Driven spin-lattice simulations with kick operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Run configuration (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file; stdout when omitted. Written only on success.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Master seed, overriding the config's.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// For `compile`: print only the gate counts line.
    #[arg(long, global = true)]
    counts: bool,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Correlation function along a time grid.
    Timeseries,
    /// Correlation function on an h × κ grid.
    Sweep,
    /// Infidelities and overhead ratios along t, ω or n.
    ErrorScan,
    /// Gate-level first-order QHiFFS circuit.
    Compile,
    /// Exact quadratic-error coefficient table.
    Coeffs,
}

fn load(path: Option<&PathBuf>) -> Result<Config, RunError> {
    let path = path.ok_or_else(|| RunError::Config("--config is required".into()))?;
    let text = std::fs::read_to_string(path).map_err(|e| RunError::Config(format!("{}: {e}", path.display())))?;
    Config::parse(&text)
}

fn run(cli: &Cli) -> Result<(), RunError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| RunError::Config(format!("--threads: {e}")))?;
    }
    let seed_of = |cfg: &Config| cli.seed.or(cfg.seed).unwrap_or(0);
    let mut stdout_extra = None;
    let text = match cli.command {
        Command::Coeffs => render_coeffs(&run_coeffs())?,
        Command::Timeseries => {
            let cfg = load(cli.config.as_ref())?;
            render_timeseries(&run_timeseries(&cfg, seed_of(&cfg))?)?
        }
        Command::Sweep => {
            let cfg = load(cli.config.as_ref())?;
            render_sweep(&run_sweep(&cfg, seed_of(&cfg))?)?
        }
        Command::ErrorScan => {
            let cfg = load(cli.config.as_ref())?;
            render_error_scan(&run_error_scan(&cfg, seed_of(&cfg))?)?
        }
        Command::Compile => {
            let cfg = load(cli.config.as_ref())?;
            let out = run_compile(&cfg)?;
            if cli.counts {
                stdout_extra = Some(out.counts.to_string());
            }
            out.text
        }
    };
    match (&cli.out, stdout_extra) {
        (Some(path), extra) => {
            std::fs::write(path, text).map_err(|e| RunError::Runtime(format!("{}: {e}", path.display())))?;
            if let Some(line) = extra {
                println!("{line}");
            }
        }
        (None, Some(line)) => println!("{line}"),
        (None, None) => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
