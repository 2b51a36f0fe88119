//! Bit-flipping list decoding: path-competition confidence, flip-set
//! construction and the re-decoding loop.

use crate::config::CodeConfig;
use crate::decoder::{list_decode, CompetitionRecord, DecodeOptions};
use crate::error::{PacError, Result};

/// Magnitude used in place of infinite confidences.
pub const CONFIDENCE_SATURATION: f64 = 1e300;

/// `ln sum_l exp(-pm_l)`, shifted by the smallest metric. `-inf` when empty.
fn log_sum_exp_neg(pms: &[f64]) -> f64 {
    let min = pms.iter().copied().fold(f64::INFINITY, f64::min);
    if !min.is_finite() {
        return f64::NEG_INFINITY;
    }
    -min + pms.iter().map(|&pm| (min - pm).exp()).sum::<f64>().ln()
}

/// `E(alpha) = ln sum exp(-survivor) - alpha ln sum exp(-removed)`.
///
/// Low values mark a competition the decoder was unsure about. Infinite
/// results clamp to `±CONFIDENCE_SATURATION`; two empty sets give 0.
pub fn confidence(survivor_pms: &[f64], removed_pms: &[f64], alpha: f64) -> f64 {
    let kept = log_sum_exp_neg(survivor_pms);
    let removed = log_sum_exp_neg(removed_pms);
    let e = match (kept.is_finite(), removed.is_finite()) {
        (true, true) => kept - alpha * removed,
        (false, false) => 0.0,
        (true, false) => f64::INFINITY,
        (false, true) => f64::NEG_INFINITY,
    };
    e.clamp(-CONFIDENCE_SATURATION, CONFIDENCE_SATURATION)
}

/// Information indices to flip, least confident first.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FlipSet {
    pub indices: Vec<usize>,
    pub confidences: Vec<f64>,
}

impl FlipSet {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// Picks the `max_flips` records with the smallest confidence, ascending;
/// equal confidences go to the smaller bit index first.
pub fn gen_flip(records: &[CompetitionRecord], max_flips: usize) -> FlipSet {
    let mut order: Vec<&CompetitionRecord> = records.iter().collect();
    order.sort_by(|a, b| {
        a.confidence
            .total_cmp(&b.confidence)
            .then(a.index.cmp(&b.index))
    });
    order.truncate(max_flips);
    FlipSet {
        indices: order.iter().map(|r| r.index).collect(),
        confidences: order.iter().map(|r| r.confidence).collect(),
    }
}

/// Decides whether a decoded profiled vector is acceptable.
pub trait FailureOracle {
    fn accepts(&self, v_hat: &[u8]) -> bool;
}

/// Simulation-only oracle comparing against the transmitted vector.
#[derive(Debug, Clone, Copy)]
pub struct GenieOracle<'a> {
    truth: &'a [u8],
}

impl<'a> GenieOracle<'a> {
    pub fn new(truth: &'a [u8]) -> Self {
        Self { truth }
    }
}

impl FailureOracle for GenieOracle<'_> {
    fn accepts(&self, v_hat: &[u8]) -> bool {
        v_hat == self.truth
    }
}

/// One re-decoding attempt with the pruning inverted at `flip_index`.
pub fn pac_sclf_attempt(llrs: &[f64], cfg: &CodeConfig, flip_index: usize) -> Result<Vec<u8>> {
    if flip_index >= cfg.block_len() || !cfg.is_flippable(flip_index) {
        return Err(PacError::FlipIndex(flip_index));
    }
    let out = list_decode(
        llrs,
        cfg,
        DecodeOptions {
            flip_index: Some(flip_index),
            trace: false,
        },
    )?;
    Ok(out.v_hat)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SclfOutcome {
    pub v_hat: Vec<u8>,
    /// Re-decoding attempts after the initial list decode.
    pub attempts_used: usize,
    /// Flip set built from the initial decode; empty when it succeeded.
    pub flip_set: FlipSet,
}

/// Bit-flipping list decode with a caller-provided failure check.
///
/// The flip set comes from the first decode's records and is reused for
/// every attempt. If no attempt is accepted, the last attempt's output is
/// returned.
pub fn sclf_decode_with<O: FailureOracle + ?Sized>(
    llrs: &[f64],
    cfg: &CodeConfig,
    oracle: &O,
) -> Result<SclfOutcome> {
    let first = list_decode(llrs, cfg, DecodeOptions::default())?;
    if oracle.accepts(&first.v_hat) {
        return Ok(SclfOutcome {
            v_hat: first.v_hat,
            attempts_used: 0,
            flip_set: FlipSet::default(),
        });
    }
    let flip_set = gen_flip(&first.records, cfg.max_flips());
    let mut v_hat = first.v_hat;
    let mut attempts_used = 0;
    for &index in &flip_set.indices {
        v_hat = pac_sclf_attempt(llrs, cfg, index)?;
        attempts_used += 1;
        if oracle.accepts(&v_hat) {
            break;
        }
    }
    Ok(SclfOutcome {
        v_hat,
        attempts_used,
        flip_set,
    })
}

/// Genie-aided bit-flipping list decode against the transmitted `truth`.
pub fn pac_sclf_decode(llrs: &[f64], cfg: &CodeConfig, truth: &[u8]) -> Result<SclfOutcome> {
    if truth.len() != cfg.block_len() {
        return Err(PacError::LengthMismatch {
            expected: cfg.block_len(),
            actual: truth.len(),
        });
    }
    sclf_decode_with(llrs, cfg, &GenieOracle::new(truth))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(index: usize, confidence: f64) -> CompetitionRecord {
        CompetitionRecord {
            index,
            survivor_pms: vec![],
            removed_pms: vec![],
            confidence,
        }
    }

    #[test]
    fn confidence_examples() {
        let ln4 = 4f64.ln();
        assert_eq!(confidence(&[0.0, 0.0], &[0.0, 0.0], 1.0), 0.0);
        assert!((confidence(&[0.0, 0.0], &[ln4, ln4], 1.0) - ln4).abs() < 1e-12);
        assert!((confidence(&[0.0, 0.0], &[ln4, ln4], 2.0) - 8f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn confidence_is_stable_for_large_metrics() {
        // naive exp(-900) underflows to zero
        let e = confidence(&[900.0, 901.0], &[905.0, 910.0], 1.0);
        let expected =
            (-900f64 + (1.0 + (-1f64).exp()).ln()) - (-905f64 + (1.0 + (-5f64).exp()).ln());
        assert!((e - expected).abs() < 1e-9);
        assert!(e.is_finite());
    }

    #[test]
    fn confidence_saturates_instead_of_nan() {
        assert_eq!(confidence(&[1.0], &[], 1.0), CONFIDENCE_SATURATION);
        assert_eq!(confidence(&[], &[1.0], 1.0), -CONFIDENCE_SATURATION);
        assert_eq!(confidence(&[], &[], 1.5), 0.0);
    }

    #[test]
    fn alpha_shift_preserves_order_for_equal_removed_sets() {
        let removed = [3.0, 4.5, 7.0];
        let a = ([0.5, 1.0, 2.0], &removed);
        let b = ([0.2, 2.5, 2.6], &removed);
        let mut prev_gap: Option<f64> = None;
        for alpha in [1.0, 1.25, 1.5, 2.0, 4.0] {
            let ea = confidence(&a.0, a.1, alpha);
            let eb = confidence(&b.0, b.1, alpha);
            let gap = ea - eb;
            if let Some(prev) = prev_gap {
                assert!((gap - prev).abs() < 1e-12);
            }
            prev_gap = Some(gap);
        }
    }

    #[test]
    fn gen_flip_examples() {
        let records = [record(5, 0.2), record(9, -1.0), record(12, 0.7)];
        assert_eq!(gen_flip(&records, 2).indices, vec![9, 5]);
        assert_eq!(gen_flip(&records, 2).confidences, vec![-1.0, 0.2]);
        assert!(gen_flip(&records, 0).is_empty());
        assert_eq!(gen_flip(&records, 10).len(), 3);
        assert_eq!(
            gen_flip(&[record(4, 1.0), record(3, 1.0)], 1).indices,
            vec![3]
        );
        assert!(gen_flip(&[], 5).is_empty());
    }

    #[test]
    fn attempt_rejects_unflippable_indices() {
        let cfg = CodeConfig::rm(128, 64).unwrap();
        let llrs = vec![1.0; 128];
        // index 0 is frozen; the first five information indices fill the list
        assert_eq!(
            pac_sclf_attempt(&llrs, &cfg, 0),
            Err(PacError::FlipIndex(0))
        );
        let first_info = cfg.info_set()[0];
        assert!(pac_sclf_attempt(&llrs, &cfg, first_info).is_err());
        assert!(pac_sclf_attempt(&llrs, &cfg, 500).is_err());
        assert!(pac_sclf_attempt(&llrs, &cfg, cfg.flippable_indices()[0]).is_ok());
    }
}
