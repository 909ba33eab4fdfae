//! Command-line frontend. Every run reads a JSON config (with `--set`
//! overrides), writes its outputs plus a run record into the output
//! directory, and exits 0 on success, 2 on configuration errors, 3 on
//! method failures.

mod config;
mod run;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "scatter", about = "Direct and inverse scattering workbench")]
struct Cli {
    /// JSON configuration file.
    #[arg(long, global = true)]
    config: Option<String>,
    /// Override a config entry by dot path, e.g. --set hsd.t_max=500.
    #[arg(long = "set", global = true)]
    set: Vec<String>,
    /// Random seed.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Parallelism budget (1 = fully deterministic outputs).
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Clone)]
enum Command {
    /// Generate synthetic datasets (subsurface, potential shifts, layered fields).
    MakeSynthetic,
    /// Recover point inclusions from surface data by the hybrid search.
    InvertSubsurface,
    /// Total field of a layered disc on its measurement circle.
    ForwardLayers,
    /// Recover a layered profile by clustered multistart.
    InvertLayers,
    /// Fixed-energy phase shifts of a radial potential.
    PhaseShifts,
    /// Recover a radial potential from phase shifts with the stability index.
    InvertPotential,
    /// Direct obstacle solve by random multi-point boundary fitting.
    MrcSolve,
    /// Support-function localization from far-field data.
    SfmIdentify,
    /// Sampling-indicator grid from a far-field matrix.
    LsmScan,
    /// Re-emit benchmark tables and compare against stored expectations.
    ReproducePaperTables {
        /// Table id: subsurface-exp1 | kirchhoff-ratios | sfm-robin.
        #[arg(long)]
        table: String,
    },
}

fn main() {
    let cli = Cli::parse();
    if cli.threads > 0 {
        // The global pool can only be installed once; later calls are a
        // no-op, which is fine for a single-run process.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }
    let ctx = run::Context {
        config_path: cli.config.clone(),
        sets: cli.set.clone(),
        seed: cli.seed,
        threads: cli.threads,
        out_dir: cli.out.clone(),
    };
    let outcome = match &cli.command {
        Command::MakeSynthetic => run::make_synthetic(&ctx),
        Command::InvertSubsurface => run::invert_subsurface(&ctx),
        Command::ForwardLayers => run::forward_layers(&ctx),
        Command::InvertLayers => run::invert_layers(&ctx),
        Command::PhaseShifts => run::phase_shifts(&ctx),
        Command::InvertPotential => run::invert_potential(&ctx),
        Command::MrcSolve => run::mrc_solve(&ctx),
        Command::SfmIdentify => run::sfm_identify(&ctx),
        Command::LsmScan => run::lsm_scan(&ctx),
        Command::ReproducePaperTables { table } => run::reproduce_tables(&ctx, table),
    };
    match outcome {
        Ok(()) => {}
        Err(run::CliError::Config(msg)) => {
            eprintln!("configuration error: {msg}");
            std::process::exit(2);
        }
        Err(run::CliError::Method(msg)) => {
            eprintln!("method failure: {msg}");
            std::process::exit(3);
        }
    }
}
