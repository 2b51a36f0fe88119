//! Immutable code and decoder parameters.

use serde::{Deserialize, Serialize};

use crate::codec::{check_block_len, rm_profile};
use crate::conv::ConvTaps;
use crate::error::{PacError, Result};

/// Check-node update used by the SC recursions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LlrMode {
    #[default]
    MinSum,
    Exact,
}

impl std::str::FromStr for LlrMode {
    type Err = PacError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min_sum" | "min-sum" | "minsum" => Ok(Self::MinSum),
            "exact" => Ok(Self::Exact),
            other => Err(PacError::Invalid(format!("unknown llr mode {other:?}"))),
        }
    }
}

pub const DEFAULT_LIST_SIZE: usize = 32;
pub const DEFAULT_ALPHA: f64 = 1.25;
pub const DEFAULT_MAX_FLIPS: usize = 5;

/// A PAC code together with the list / flip decoder settings.
#[derive(Debug, Clone, PartialEq)]
pub struct CodeConfig {
    log_n: u32,
    info_set: Vec<usize>,
    info_mask: Vec<bool>,
    taps: ConvTaps,
    list_size: usize,
    alpha: f64,
    max_flips: usize,
    llr_mode: LlrMode,
}

impl CodeConfig {
    /// Builds a code from an explicit information set with default decoder
    /// settings (`L = 32`, `alpha = 1.25`, `T = 5`, min-sum).
    pub fn new(block_len: usize, info_set: Vec<usize>, taps: ConvTaps) -> Result<Self> {
        check_block_len(block_len)?;
        if info_set.is_empty() || info_set.len() > block_len {
            return Err(PacError::MessageLength {
                k: info_set.len(),
                n: block_len,
            });
        }
        if info_set.windows(2).any(|w| w[0] >= w[1]) {
            return Err(PacError::InfoSet(
                "indices must be strictly increasing".into(),
            ));
        }
        if info_set[info_set.len() - 1] >= block_len {
            return Err(PacError::InfoSet(format!(
                "index {} out of range",
                info_set[info_set.len() - 1]
            )));
        }
        let mut info_mask = vec![false; block_len];
        for &i in &info_set {
            info_mask[i] = true;
        }
        Ok(Self {
            log_n: block_len.trailing_zeros(),
            info_set,
            info_mask,
            taps,
            list_size: DEFAULT_LIST_SIZE,
            alpha: DEFAULT_ALPHA,
            max_flips: DEFAULT_MAX_FLIPS,
            llr_mode: LlrMode::MinSum,
        })
    }

    /// Reed-Muller profiled code with the default taps (octal 133).
    pub fn rm(block_len: usize, k: usize) -> Result<Self> {
        Self::new(
            block_len,
            rm_profile(block_len, k)?,
            ConvTaps::pac_default(),
        )
    }

    pub fn with_taps(mut self, taps: ConvTaps) -> Self {
        self.taps = taps;
        self
    }

    pub fn with_list_size(mut self, list_size: usize) -> Result<Self> {
        if list_size == 0 || !list_size.is_power_of_two() {
            return Err(PacError::ListSize(list_size));
        }
        self.list_size = list_size;
        Ok(self)
    }

    pub fn with_alpha(mut self, alpha: f64) -> Result<Self> {
        if !(alpha >= 1.0 && alpha.is_finite()) {
            return Err(PacError::Alpha(alpha));
        }
        self.alpha = alpha;
        Ok(self)
    }

    pub fn with_max_flips(mut self, max_flips: usize) -> Self {
        self.max_flips = max_flips;
        self
    }

    pub fn with_llr_mode(mut self, llr_mode: LlrMode) -> Self {
        self.llr_mode = llr_mode;
        self
    }

    /// `n = log2 N`.
    pub fn log_n(&self) -> u32 {
        self.log_n
    }

    /// Block length `N`.
    pub fn block_len(&self) -> usize {
        self.info_mask.len()
    }

    /// Message length `K`.
    pub fn message_len(&self) -> usize {
        self.info_set.len()
    }

    pub fn rate(&self) -> f64 {
        self.message_len() as f64 / self.block_len() as f64
    }

    pub fn info_set(&self) -> &[usize] {
        &self.info_set
    }

    #[inline]
    pub fn is_info(&self, index: usize) -> bool {
        self.info_mask[index]
    }

    pub fn taps(&self) -> &ConvTaps {
        &self.taps
    }

    pub fn list_size(&self) -> usize {
        self.list_size
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn max_flips(&self) -> usize {
        self.max_flips
    }

    pub fn llr_mode(&self) -> LlrMode {
        self.llr_mode
    }

    /// Number of leading information indices decided without competition
    /// while the list fills up: `min(log2 L, K)`.
    pub fn fill_count(&self) -> usize {
        (self.list_size.trailing_zeros() as usize).min(self.message_len())
    }

    /// Information indices where pruning takes place, i.e. `A` minus its
    /// first `log2 L` entries. Only these may be flipped.
    pub fn flippable_indices(&self) -> &[usize] {
        &self.info_set[self.fill_count()..]
    }

    pub fn is_flippable(&self, index: usize) -> bool {
        self.flippable_indices().binary_search(&index).is_ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rm_defaults() {
        let cfg = CodeConfig::rm(128, 64).unwrap();
        assert_eq!(cfg.block_len(), 128);
        assert_eq!(cfg.log_n(), 7);
        assert_eq!(cfg.message_len(), 64);
        assert_eq!(cfg.list_size(), 32);
        assert_eq!(cfg.max_flips(), 5);
        assert_eq!(cfg.alpha(), 1.25);
        assert_eq!(cfg.taps().bits(), &[1, 0, 1, 1, 0, 1, 1]);
        assert_eq!(cfg.flippable_indices().len(), 64 - 5);
        assert_eq!(cfg.rate(), 0.5);
    }

    #[test]
    fn fill_count_saturates_at_k() {
        let cfg = CodeConfig::rm(8, 4).unwrap().with_list_size(32).unwrap();
        assert_eq!(cfg.fill_count(), 4);
        assert!(cfg.flippable_indices().is_empty());
        let cfg = cfg.with_list_size(1).unwrap();
        assert_eq!(cfg.flippable_indices(), &[3, 5, 6, 7]);
    }

    #[test]
    fn rejects_invalid_parameters() {
        let taps = ConvTaps::pac_default();
        assert!(CodeConfig::new(8, vec![], taps.clone()).is_err());
        assert!(CodeConfig::new(8, vec![3, 3], taps.clone()).is_err());
        assert!(CodeConfig::new(8, vec![5, 3], taps.clone()).is_err());
        assert!(CodeConfig::new(8, vec![3, 8], taps.clone()).is_err());
        assert!(CodeConfig::new(12, vec![3], taps).is_err());
        let cfg = CodeConfig::rm(8, 4).unwrap();
        assert!(cfg.clone().with_list_size(3).is_err());
        assert!(cfg.clone().with_list_size(0).is_err());
        assert!(cfg.clone().with_alpha(0.5).is_err());
        assert!(cfg.clone().with_alpha(f64::NAN).is_err());
        assert!(cfg.with_alpha(1.0).is_ok());
    }

    #[test]
    fn parses_llr_mode() {
        assert_eq!("min_sum".parse::<LlrMode>().unwrap(), LlrMode::MinSum);
        assert_eq!("exact".parse::<LlrMode>().unwrap(), LlrMode::Exact);
        assert!("bp".parse::<LlrMode>().is_err());
    }
}
