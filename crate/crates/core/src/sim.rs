//! Monte Carlo FER/BER simulation over BPSK/AWGN.
//!
//! Every trial draws its message and noise from its own ChaCha8 stream:
//! the generator is seeded with the master seed and the stream id is set to
//! the trial index. Results therefore do not depend on thread count or
//! scheduling. Trials run in fixed-size batches on the rayon pool and are
//! folded back in index order, so early stopping is also deterministic.

use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{add_awgn, bpsk_modulate, channel_llr, compute_sigma, ChannelObservation};
use crate::codec::{demapping, profile_map};
use crate::config::CodeConfig;
use crate::conv::conv;
use crate::decoder::{forced_path_metrics, pac_sc_decode, pac_scl_decode};
use crate::encode_profiled;
use crate::error::{PacError, Result};
use crate::flip::pac_sclf_decode;

/// Largest message length accepted by [`ml_oracle_decode`].
pub const ML_MAX_K: usize = 16;

const BATCH: u64 = 2048;
const WILSON_Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecoderKind {
    Sc,
    Scl,
    Sclf,
}

impl FromStr for DecoderKind {
    type Err = PacError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sc" => Ok(Self::Sc),
            "scl" => Ok(Self::Scl),
            "sclf" => Ok(Self::Sclf),
            other => Err(PacError::Invalid(format!("unknown decoder {other:?}"))),
        }
    }
}

/// RNG for one trial.
pub fn trial_rng(master_seed: u64, trial_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial_index);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TrialResult {
    pub trial_index: u64,
    pub frame_error: bool,
    pub bit_errors: usize,
    pub attempts_used: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopRule {
    FixedTrials(u64),
    MinFrameErrors { min_errors: u64, max_trials: u64 },
}

impl Default for StopRule {
    fn default() -> Self {
        StopRule::MinFrameErrors {
            min_errors: 200,
            max_trials: 10_000_000,
        }
    }
}

/// Aggregated counters for one SNR point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub snr_db: f64,
    pub trials: u64,
    pub frame_errors: u64,
    pub bit_errors: u64,
    pub fer: f64,
    pub ber: f64,
    pub wilson_ci_95: (f64, f64),
    pub mean_attempts: f64,
    pub wall_seconds: f64,
}

/// Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

pub fn wilson_95(successes: u64, trials: u64) -> (f64, f64) {
    wilson_interval(successes, trials, WILSON_Z95)
}

/// Exhaustive minimum-metric decoder over all `2^K` messages.
///
/// Each candidate's precoded sequence is scored with the accumulated path
/// metric along its own SC path. Message `m` puts its most significant bit
/// in `d[0]`; ties keep the smallest `m`.
pub fn ml_oracle_decode(llrs: &[f64], cfg: &CodeConfig) -> Result<Vec<u8>> {
    let k = cfg.message_len();
    if k > ML_MAX_K {
        return Err(PacError::TooManyMessages { k, max: ML_MAX_K });
    }
    if llrs.len() != cfg.block_len() {
        return Err(PacError::LengthMismatch {
            expected: cfg.block_len(),
            actual: llrs.len(),
        });
    }
    let mut best: Option<(f64, Vec<u8>)> = None;
    for m in 0u32..(1 << k) {
        let d: Vec<u8> = (0..k).map(|j| ((m >> (k - 1 - j)) & 1) as u8).collect();
        let v = profile_map(&d, cfg.info_set(), cfg.block_len())?;
        let u = conv(&v, cfg.taps());
        let metric = *forced_path_metrics(llrs, &u, cfg.llr_mode())
            .last()
            .expect("nonempty block");
        if best.as_ref().is_none_or(|(b, _)| metric < *b) {
            best = Some((metric, v));
        }
    }
    Ok(best.expect("at least one message").1)
}

/// A code plus the decoder and channel settings of one simulation.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub code: CodeConfig,
    pub decoder: DecoderKind,
    /// Skip noise injection; LLRs still use the SNR-derived sigma.
    pub noiseless: bool,
}

/// Everything one trial produced, for inspection and tracing.
#[derive(Debug, Clone)]
pub struct TrialData {
    pub message: Vec<u8>,
    pub profiled: Vec<u8>,
    pub llrs: Vec<f64>,
}

impl Simulation {
    pub fn new(code: CodeConfig, decoder: DecoderKind) -> Self {
        Self {
            code,
            decoder,
            noiseless: false,
        }
    }

    pub fn noiseless(mut self, noiseless: bool) -> Self {
        self.noiseless = noiseless;
        self
    }

    /// Draws the message and channel output of a trial without decoding.
    pub fn transmit(&self, snr_db: f64, master_seed: u64, trial_index: u64) -> Result<TrialData> {
        let cfg = &self.code;
        let mut rng = trial_rng(master_seed, trial_index);
        let message: Vec<u8> = (0..cfg.message_len())
            .map(|_| u8::from(rng.random::<bool>()))
            .collect();
        let profiled = profile_map(&message, cfg.info_set(), cfg.block_len())?;
        let symbols = bpsk_modulate(&encode_profiled(&profiled, cfg)?);
        let sigma = compute_sigma(cfg.rate(), snr_db)?;
        let obs = if self.noiseless {
            ChannelObservation::noiseless(symbols, sigma)
        } else {
            add_awgn(&symbols, sigma, &mut rng)
        };
        Ok(TrialData {
            message,
            profiled,
            llrs: channel_llr(&obs),
        })
    }

    /// Decodes `llrs`; returns the profiled estimate and the number of
    /// flip attempts.
    pub fn decode(&self, llrs: &[f64], truth: &[u8]) -> Result<(Vec<u8>, usize)> {
        match self.decoder {
            DecoderKind::Sc => Ok((pac_sc_decode(llrs, &self.code)?, 0)),
            DecoderKind::Scl => Ok((pac_scl_decode(llrs, &self.code)?.v_hat, 0)),
            DecoderKind::Sclf => {
                let out = pac_sclf_decode(llrs, &self.code, truth)?;
                Ok((out.v_hat, out.attempts_used))
            }
        }
    }

    pub fn run_trial(
        &self,
        snr_db: f64,
        master_seed: u64,
        trial_index: u64,
    ) -> Result<TrialResult> {
        let data = self.transmit(snr_db, master_seed, trial_index)?;
        let (v_hat, attempts_used) = self.decode(&data.llrs, &data.profiled)?;
        let decoded = demapping(&v_hat, self.code.info_set())?;
        let bit_errors = decoded
            .iter()
            .zip(&data.message)
            .filter(|(a, b)| a != b)
            .count();
        Ok(TrialResult {
            trial_index,
            frame_error: bit_errors > 0,
            bit_errors,
            attempts_used,
        })
    }

    /// Runs one SNR point until the stop rule is met.
    pub fn run_point(&self, snr_db: f64, stop: StopRule, master_seed: u64) -> Result<SweepRow> {
        let (min_errors, max_trials) = match stop {
            StopRule::FixedTrials(n) => (u64::MAX, n),
            StopRule::MinFrameErrors {
                min_errors,
                max_trials,
            } => (min_errors, max_trials),
        };
        let started = Instant::now();
        let (mut trials, mut frame_errors, mut bit_errors, mut attempts) = (0u64, 0u64, 0u64, 0u64);
        'batches: while trials < max_trials && frame_errors < min_errors {
            let end = max_trials.min(trials + BATCH);
            let results = (trials..end)
                .into_par_iter()
                .map(|t| self.run_trial(snr_db, master_seed, t))
                .collect::<Result<Vec<_>>>()?;
            for r in results {
                trials += 1;
                frame_errors += u64::from(r.frame_error);
                bit_errors += r.bit_errors as u64;
                attempts += r.attempts_used as u64;
                if frame_errors >= min_errors {
                    break 'batches;
                }
            }
        }
        let n = trials.max(1) as f64;
        Ok(SweepRow {
            snr_db,
            trials,
            frame_errors,
            bit_errors,
            fer: frame_errors as f64 / n,
            ber: bit_errors as f64 / (n * self.code.message_len() as f64),
            wilson_ci_95: wilson_95(frame_errors, trials),
            mean_attempts: attempts as f64 / n,
            wall_seconds: started.elapsed().as_secs_f64(),
        })
    }

    /// One row per SNR point, in input order.
    pub fn run_sweep(
        &self,
        snr_list: &[f64],
        stop: StopRule,
        master_seed: u64,
    ) -> Result<Vec<SweepRow>> {
        if snr_list.is_empty() {
            return Err(PacError::Invalid("empty SNR list".into()));
        }
        snr_list
            .iter()
            .map(|&snr| self.run_point(snr, stop, master_seed))
            .collect()
    }
}

/// Column order of the results CSV.
pub const CSV_HEADER: [&str; 10] = [
    "snr_db",
    "trials",
    "frame_errors",
    "bit_errors",
    "fer",
    "ber",
    "ci_lo",
    "ci_hi",
    "mean_attempts",
    "wall_seconds",
];

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let io = |e: csv::Error| PacError::Invalid(format!("csv: {e}"));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in rows {
        w.write_record([
            r.snr_db.to_string(),
            r.trials.to_string(),
            r.frame_errors.to_string(),
            r.bit_errors.to_string(),
            format!("{:e}", r.fer),
            format!("{:e}", r.ber),
            format!("{:e}", r.wilson_ci_95.0),
            format!("{:e}", r.wilson_ci_95.1),
            r.mean_attempts.to_string(),
            format!("{:.3}", r.wall_seconds),
        ])
        .map_err(io)?;
    }
    w.flush()
        .map_err(|e| PacError::Invalid(format!("csv: {e}")))?;
    Ok(())
}

/// SNR where the FER curve crosses `target`, interpolating `log10(FER)`
/// linearly between the first pair of adjacent rows that brackets it.
/// Rows must be sorted by SNR.
pub fn crossing_snr(rows: &[SweepRow], target: f64) -> Option<f64> {
    rows.windows(2).find_map(|w| {
        let (a, b) = (&w[0], &w[1]);
        if a.fer >= target && b.fer <= target && a.fer > 0.0 && b.fer > 0.0 {
            let (la, lb, lt) = (a.fer.log10(), b.fer.log10(), target.log10());
            if la == lb {
                return Some(a.snr_db);
            }
            Some(a.snr_db + (la - lt) / (la - lb) * (b.snr_db - a.snr_db))
        } else {
            None
        }
    })
}

/// Expands `start:step:stop` (inclusive) or a comma list into SNR values.
pub fn parse_snr_list(spec: &str) -> Result<Vec<f64>> {
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| PacError::Invalid(format!("bad SNR value {t:?}")))
    };
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [start, step, stop] => {
            let (start, step, stop) = (num(start)?, num(step)?, num(stop)?);
            if step.is_nan() || step <= 0.0 || stop < start {
                return Err(PacError::Invalid(format!("bad SNR range {spec:?}")));
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            Ok((0..count)
                .map(|j| {
                    let x = start + j as f64 * step;
                    (x * 1e9).round() / 1e9
                })
                .collect())
        }
        [_] => spec.split(',').map(num).collect(),
        _ => Err(PacError::Invalid(format!("bad SNR list {spec:?}"))),
    }
}
