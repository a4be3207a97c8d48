//! Command-line front end: one-off trials, MSE sweeps, and bound tables.

use clap::{Args, Parser, Subcommand};
use hmct::{
    crlb, csv_string, db_to_linear, parse_config, run_sweep, run_trial, ChannelKind, EpsMode,
    HmctError, ScatteringProfile, SimConfig,
};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "hmct",
    about = "Hexagonal multicarrier CFO-estimation simulator",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one trial and print its estimates.
    Single(RunArgs),
    /// Run the Monte Carlo sweep and emit the CSV table.
    Sweep(RunArgs),
    /// Print the estimation-variance lower bound per SNR.
    Crlb(CrlbArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Config file of key = value lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed overriding the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Trials per cell overriding the config.
    #[arg(long)]
    trials: Option<usize>,
    /// SNR grid in dB, comma-separated; "inf" is accepted. `single` uses
    /// the first entry.
    #[arg(long = "snr-db", value_delimiter = ',', allow_negative_numbers = true)]
    snr_db: Vec<f64>,
    /// Channel family: awgn or dd.
    #[arg(long)]
    channel: Option<String>,
    /// Fixed normalized CFO for every trial.
    #[arg(long, allow_negative_numbers = true)]
    eps: Option<f64>,
    /// CSV output path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CrlbArgs {
    /// SNR grid in dB, comma-separated.
    #[arg(
        long = "snr-db",
        value_delimiter = ',',
        allow_negative_numbers = true,
        required = true
    )]
    snr_db: Vec<f64>,
    /// Subcarrier count.
    #[arg(long, default_value_t = 40)]
    n: usize,
    /// Samples per symbol period.
    #[arg(long, default_value_t = 100)]
    m: usize,
}

fn build_config(args: &RunArgs) -> hmct::Result<SimConfig> {
    let mut cfg = match &args.config {
        Some(path) => parse_config(&std::fs::read_to_string(path)?)?,
        None => SimConfig::default(),
    };
    if let Some(seed) = args.seed {
        cfg.master_seed = seed;
    }
    if let Some(trials) = args.trials {
        cfg.trials = trials;
    }
    if !args.snr_db.is_empty() {
        cfg.snr_db_list = args.snr_db.clone();
    }
    if let Some(channel) = &args.channel {
        match channel.as_str() {
            "awgn" => cfg.channel = ChannelKind::Awgn,
            "dd" => {
                if cfg.channel.tag() != "dd" {
                    cfg.channel =
                        ChannelKind::Dd(ScatteringProfile::default_dd(cfg.lattice.ts));
                }
            }
            other => {
                return Err(HmctError::Config(format!(
                    "channel must be awgn or dd, got {other:?}"
                )))
            }
        }
    }
    if let Some(eps) = args.eps {
        cfg.eps_mode = EpsMode::Fixed(eps);
    }
    if let Some(out) = &args.out {
        cfg.output = Some(out.clone());
    }
    Ok(cfg)
}

fn run(cli: Cli) -> hmct::Result<()> {
    match cli.command {
        Command::Single(args) => {
            let cfg = build_config(&args)?;
            let snr = cfg.snr_db_list.first().copied().unwrap_or(f64::INFINITY);
            let t = run_trial(&cfg, snr, 0)?;
            println!(
                "eps_true={:.8e} eps_hat_pd={:.8e} eps_hat_ls={:.8e} snr_db={} channel={} seed={}",
                t.eps_true, t.eps_hat_pd, t.eps_hat_ls, t.snr_db, t.channel, t.seed
            );
        }
        Command::Sweep(args) => {
            let cfg = build_config(&args)?;
            let cells = run_sweep(&cfg)?;
            match &cfg.output {
                Some(path) => eprintln!("wrote {} cells to {}", cells.len(), path.display()),
                None => print!("{}", csv_string(&cells)),
            }
        }
        Command::Crlb(args) => {
            println!("snr_db,crlb");
            for &snr in &args.snr_db {
                let bound = crlb(args.n, args.m, db_to_linear(snr))?;
                println!("{snr},{bound:.8e}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
