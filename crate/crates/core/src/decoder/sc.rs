//! Recursive successive-cancellation walk and the single-path PAC decoder.
//!
//! This is written independently of the list decoder's buffer layout: it
//! splits slices recursively and allocates at every node. The list decoder
//! and the exhaustive oracle are both checked against it.

use crate::config::{CodeConfig, LlrMode};
use crate::error::{PacError, Result};

use super::llr::{calc_pm, llr_f, llr_g};

/// Walks the SC tree over `llrs`. At every leaf `i` the callback receives the
/// bit-channel LLR and returns the decided `u_i`. Returns the re-encoded
/// codeword of the decided bits.
pub fn sc_walk<F>(llrs: &[f64], mode: LlrMode, decide: &mut F) -> Vec<u8>
where
    F: FnMut(usize, f64) -> u8,
{
    walk(llrs, 0, mode, decide)
}

fn walk<F>(llrs: &[f64], offset: usize, mode: LlrMode, decide: &mut F) -> Vec<u8>
where
    F: FnMut(usize, f64) -> u8,
{
    if llrs.len() == 1 {
        return vec![decide(offset, llrs[0])];
    }
    let half = llrs.len() / 2;
    let (a, b) = llrs.split_at(half);
    let left: Vec<f64> = a.iter().zip(b).map(|(&x, &y)| llr_f(x, y, mode)).collect();
    let c1 = walk(&left, offset, mode, decide);
    let right: Vec<f64> = a
        .iter()
        .zip(b)
        .zip(&c1)
        .map(|((&x, &y), &s)| llr_g(x, y, s))
        .collect();
    let c2 = walk(&right, offset + half, mode, decide);
    c1.iter()
        .zip(&c2)
        .map(|(p, q)| p ^ q)
        .chain(c2.iter().copied())
        .collect()
}

/// Running path metric of a fixed `u` sequence. Entry `i` is the metric
/// after bit `i`.
pub fn forced_path_metrics(llrs: &[f64], u: &[u8], mode: LlrMode) -> Vec<f64> {
    let mut pm = 0.0;
    let mut trail = Vec::with_capacity(u.len());
    sc_walk(llrs, mode, &mut |i, llr| {
        pm = calc_pm(pm, llr, u[i]);
        trail.push(pm);
        u[i]
    });
    trail
}

pub(crate) fn check_llrs(llrs: &[f64], cfg: &CodeConfig) -> Result<()> {
    if llrs.len() != cfg.block_len() {
        return Err(PacError::LengthMismatch {
            expected: cfg.block_len(),
            actual: llrs.len(),
        });
    }
    Ok(())
}

/// Single-path PAC decoding. Frozen positions take `v = 0`; at information
/// positions the `v` whose precoded bit has the smaller metric wins, `v = 0`
/// on a tie. Returns the profiled vector.
pub fn pac_sc_decode(llrs: &[f64], cfg: &CodeConfig) -> Result<Vec<u8>> {
    check_llrs(llrs, cfg)?;
    let taps = cfg.taps();
    let mut state = taps.zero_state();
    let mut v_hat = vec![0u8; cfg.block_len()];
    sc_walk(llrs, cfg.llr_mode(), &mut |i, llr| {
        let (u0, _) = taps.step(0, state);
        let v = if cfg.is_info(i) && calc_pm(0.0, llr, u0 ^ 1) < calc_pm(0.0, llr, u0) {
            1
        } else {
            0
        };
        let (u, next) = taps.step(v, state);
        state = next;
        v_hat[i] = v;
        u
    });
    Ok(v_hat)
}
