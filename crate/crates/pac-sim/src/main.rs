//! `pac-sim`: Monte Carlo FER simulation of PAC codes.

mod output;

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use pac_core::decoder::{list_decode, DecodeOptions};
use pac_core::sim::{parse_snr_list, DecoderKind, Simulation, StopRule};
use pac_core::{CodeConfig, ConvTaps, LlrMode};

#[derive(Parser)]
#[command(
    name = "pac-sim",
    version,
    about = "PAC code list / bit-flipping list decoding simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep SNR points and write FER/BER rows as CSV plus a JSON manifest.
    Sweep(SweepArgs),
    /// Run a single trial and report the outcome, optionally tracing the list.
    Trial(TrialArgs),
}

#[derive(Args, Clone)]
struct CodeArgs {
    /// Block length N.
    #[arg(long = "n", default_value_t = 128)]
    block_len: usize,
    /// Message length K.
    #[arg(long = "k", default_value_t = 64)]
    message_len: usize,
    /// Rate profile; only Reed-Muller (`rm`) is available.
    #[arg(long, default_value = "rm")]
    profile: String,
    /// Convolution taps: octal (`133`), binary (`0b101101`) or a bit list (`1,0,1,1,0,1`).
    #[arg(long, default_value = "133")]
    g: String,
    /// List size L (power of two).
    #[arg(long = "list", default_value_t = 32)]
    list_size: usize,
    #[arg(long, value_parser = ["sc", "scl", "sclf"], default_value = "scl")]
    decoder: String,
    /// Maximum number of flip attempts T.
    #[arg(long, default_value_t = 5)]
    flips: usize,
    /// Confidence exponent alpha (>= 1).
    #[arg(long, default_value_t = 1.25)]
    alpha: f64,
    #[arg(long = "llr-mode", value_parser = ["min_sum", "exact"], default_value = "min_sum")]
    llr_mode: String,
    /// Skip noise injection (debugging aid).
    #[arg(long)]
    noiseless: bool,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

impl CodeArgs {
    fn simulation(&self) -> Result<Simulation> {
        if self.profile != "rm" {
            bail!("unsupported rate profile {:?}", self.profile);
        }
        let taps: ConvTaps = self.g.parse().context("parsing --g")?;
        let llr_mode: LlrMode = self.llr_mode.parse()?;
        let code = CodeConfig::rm(self.block_len, self.message_len)?
            .with_taps(taps)
            .with_list_size(self.list_size)?
            .with_alpha(self.alpha)?
            .with_max_flips(self.flips)
            .with_llr_mode(llr_mode);
        let decoder: DecoderKind = self.decoder.parse()?;
        Ok(Simulation::new(code, decoder).noiseless(self.noiseless))
    }
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    code: CodeArgs,
    /// SNR points in dB: `start:step:stop` or a comma list.
    #[arg(long)]
    snr: String,
    /// Run exactly this many trials per point instead of the error-count rule.
    #[arg(long, conflicts_with = "min_errors")]
    trials: Option<u64>,
    #[arg(long = "min-errors", default_value_t = 200)]
    min_errors: u64,
    #[arg(long = "max-trials", default_value_t = 10_000_000)]
    max_trials: u64,
    /// Worker threads (defaults to all cores).
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, default_value = "results.csv")]
    out: PathBuf,
    /// Also write a gnuplot script next to the CSV.
    #[arg(long)]
    gnuplot: bool,
}

#[derive(Args)]
struct TrialArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[arg(long)]
    snr: f64,
    #[arg(long, default_value_t = 0)]
    index: u64,
    /// Write a per-bit list trace of the first list decode to this file.
    #[arg(long)]
    trace: Option<PathBuf>,
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Sweep(args) => sweep(args),
        Command::Trial(args) => trial(args),
    }
}

fn sweep(args: SweepArgs) -> Result<()> {
    let sim = args.code.simulation()?;
    let snr_list = parse_snr_list(&args.snr)?;
    let stop = match args.trials {
        Some(n) => StopRule::FixedTrials(n),
        None => StopRule::MinFrameErrors {
            min_errors: args.min_errors,
            max_trials: args.max_trials,
        },
    };
    if let Some(threads) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .context("configuring thread pool")?;
    }

    let manifest = output::Manifest::new(&sim, &args.code, &snr_list, stop);
    output::write_manifest(&manifest, &output::manifest_path(&args.out))?;
    if args.gnuplot {
        output::write_gnuplot(&args.out, &manifest)?;
    }

    let mut rows = Vec::with_capacity(snr_list.len());
    for &snr in &snr_list {
        let row = sim.run_point(snr, stop, args.code.seed)?;
        eprintln!(
            "snr {:>6.2} dB  trials {:>9}  errors {:>6}  fer {:.3e}  ber {:.3e}  attempts {:.3}  {:.1}s",
            row.snr_db, row.trials, row.frame_errors, row.fer, row.ber, row.mean_attempts, row.wall_seconds
        );
        rows.push(row);
        output::write_rows(&rows, &args.out)?;
    }
    Ok(())
}

fn trial(args: TrialArgs) -> Result<()> {
    let sim = args.code.simulation()?;
    let seed = args.code.seed;
    let result = sim.run_trial(args.snr, seed, args.index)?;
    println!(
        "trial {} snr {} dB: frame_error={} bit_errors={} attempts_used={}",
        result.trial_index, args.snr, result.frame_error, result.bit_errors, result.attempts_used
    );
    if let Some(path) = args.trace {
        let data = sim.transmit(args.snr, seed, args.index)?;
        let out = list_decode(
            &data.llrs,
            &sim.code,
            DecodeOptions {
                flip_index: None,
                trace: true,
            },
        )?;
        output::write_trace(&out.trace, &path)?;
    }
    Ok(())
}
