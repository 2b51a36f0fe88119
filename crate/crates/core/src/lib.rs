//! Polarization-adjusted convolutional (PAC) codes.
//!
//! Encoding is rate profiling, convolutional precoding and the polar
//! transform. Decoding is successive cancellation, SC list, and SC list
//! with single-bit flipping driven by a path-competition confidence metric.
//! [`sim`] drives Monte Carlo FER simulations over BPSK/AWGN.

pub mod channel;
pub mod codec;
pub mod config;
pub mod conv;
pub mod decoder;
pub mod error;
pub mod flip;
pub mod sim;

pub use config::{CodeConfig, LlrMode};
pub use conv::{ConvState, ConvTaps};
pub use error::{PacError, Result};

/// Encodes a profiled vector: precoding followed by the polar transform.
pub fn encode_profiled(v: &[u8], cfg: &CodeConfig) -> Result<Vec<u8>> {
    let u = conv::conv(v, cfg.taps());
    codec::polar_transform(&u)
}
