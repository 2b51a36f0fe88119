//! BPSK over AWGN: modulation, noise and channel LLRs.
//!
//! Noise samples come from `rand_distr::StandardNormal` (Ziggurat) scaled by
//! `sigma`, drawn from whatever RNG the caller supplies.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{PacError, Result};

/// Received soft values together with the noise level that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelObservation {
    pub y: Vec<f64>,
    pub sigma: f64,
}

impl ChannelObservation {
    /// Observation without noise; `sigma` only scales the LLRs.
    pub fn noiseless(symbols: Vec<f64>, sigma: f64) -> Self {
        Self { y: symbols, sigma }
    }
}

/// `sigma = 10^(-snr/20) / sqrt(2R)`.
pub fn compute_sigma(rate: f64, snr_db: f64) -> Result<f64> {
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(PacError::Rate(rate));
    }
    Ok(10f64.powf(-snr_db / 20.0) / (2.0 * rate).sqrt())
}

/// `0 -> +1`, `1 -> -1`.
pub fn bpsk_modulate(bits: &[u8]) -> Vec<f64> {
    bits.iter()
        .map(|&b| if b == 0 { 1.0 } else { -1.0 })
        .collect()
}

pub fn add_awgn<R: Rng + ?Sized>(symbols: &[f64], sigma: f64, rng: &mut R) -> ChannelObservation {
    let y = symbols
        .iter()
        .map(|&s| {
            let z: f64 = rng.sample(StandardNormal);
            s + sigma * z
        })
        .collect();
    ChannelObservation { y, sigma }
}

/// `2y / sigma^2`; positive values favour bit 0.
pub fn channel_llr(obs: &ChannelObservation) -> Vec<f64> {
    let scale = 2.0 / (obs.sigma * obs.sigma);
    obs.y.iter().map(|&y| scale * y).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sigma_examples() {
        assert_eq!(compute_sigma(0.5, 0.0).unwrap(), 1.0);
        assert!((compute_sigma(0.5, 2.0).unwrap() - 0.794_328_234_724_281_5).abs() < 1e-12);
        assert!((compute_sigma(1.0, 0.0).unwrap() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!(compute_sigma(0.0, 1.0).is_err());
        assert!(compute_sigma(-0.5, 1.0).is_err());
        assert!(compute_sigma(1.5, 1.0).is_err());
    }

    #[test]
    fn sigma_is_strictly_decreasing() {
        let mut prev = f64::INFINITY;
        for step in 0..40 {
            let s = compute_sigma(0.5, -2.0 + 0.25 * step as f64).unwrap();
            assert!(s < prev);
            prev = s;
        }
        let mut prev = f64::INFINITY;
        for step in 1..=20 {
            let s = compute_sigma(step as f64 / 20.0, 1.0).unwrap();
            assert!(s < prev);
            prev = s;
        }
    }

    #[test]
    fn bpsk_examples() {
        assert_eq!(bpsk_modulate(&[0, 1, 0]), vec![1.0, -1.0, 1.0]);
        assert_eq!(bpsk_modulate(&[0; 4]), vec![1.0; 4]);
        assert_eq!(bpsk_modulate(&[1; 4]), vec![-1.0; 4]);
    }

    #[test]
    fn llr_examples() {
        let obs = ChannelObservation {
            y: vec![0.0, 1.0],
            sigma: 1.0,
        };
        assert_eq!(channel_llr(&obs), vec![0.0, 2.0]);
        let obs = ChannelObservation {
            y: vec![-0.5],
            sigma: 2.0,
        };
        assert_eq!(channel_llr(&obs), vec![-0.25]);
    }

    #[test]
    fn noiseless_hard_decision_recovers_bits() {
        let bits = [0u8, 1, 1, 0, 1, 0, 0, 0];
        let obs = ChannelObservation::noiseless(bpsk_modulate(&bits), 0.8);
        assert_eq!(obs.y, bpsk_modulate(&bits));
        let hard: Vec<u8> = channel_llr(&obs)
            .iter()
            .map(|&l| u8::from(l < 0.0))
            .collect();
        assert_eq!(hard, bits);
    }

    #[test]
    fn awgn_is_deterministic_per_seed() {
        let s = bpsk_modulate(&[0, 1, 0, 1, 1, 1, 0, 0]);
        let a = add_awgn(&s, 0.7, &mut ChaCha8Rng::seed_from_u64(9));
        let b = add_awgn(&s, 0.7, &mut ChaCha8Rng::seed_from_u64(9));
        let c = add_awgn(&s, 0.7, &mut ChaCha8Rng::seed_from_u64(10));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn awgn_moments() {
        let n = 1_000_000;
        let sigma = 0.8;
        let obs = add_awgn(&vec![0.0; n], sigma, &mut ChaCha8Rng::seed_from_u64(1));
        let mean = obs.y.iter().sum::<f64>() / n as f64;
        let var = obs.y.iter().map(|y| (y - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!(mean.abs() < 5.0 * sigma / (n as f64).sqrt(), "mean {mean}");
        assert!(
            (var.sqrt() - sigma).abs() < 0.01 * sigma,
            "std {}",
            var.sqrt()
        );
    }
}
