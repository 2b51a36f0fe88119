//! SC building blocks: the f/g LLR updates and the path-metric increment.

use crate::config::LlrMode;

/// Min-sum check-node update `sign(a) sign(b) min(|a|, |b|)`.
#[inline]
pub fn f_min_sum(a: f64, b: f64) -> f64 {
    let m = a.abs().min(b.abs());
    if (a < 0.0) != (b < 0.0) {
        -m
    } else {
        m
    }
}

/// Exact check-node update `2 atanh(tanh(a/2) tanh(b/2))`, evaluated as the
/// min-sum value plus two correction terms so that large inputs don't
/// saturate `tanh`.
#[inline]
pub fn f_exact(a: f64, b: f64) -> f64 {
    f_min_sum(a, b) + (-(a + b).abs()).exp().ln_1p() - (-(a - b).abs()).exp().ln_1p()
}

#[inline]
pub fn llr_f(a: f64, b: f64, mode: LlrMode) -> f64 {
    match mode {
        LlrMode::MinSum => f_min_sum(a, b),
        LlrMode::Exact => f_exact(a, b),
    }
}

/// Variable-node update `b + (1 - 2s) a`.
#[inline]
pub fn llr_g(a: f64, b: f64, s: u8) -> f64 {
    if s == 0 {
        b + a
    } else {
        b - a
    }
}

/// Bit favoured by an LLR, with `sign(0) = +1` so zero decides 0.
#[inline]
pub fn hard_decision(llr: f64) -> u8 {
    u8::from(llr < 0.0)
}

/// Path-metric update: no cost when `u` agrees with the LLR, `|llr|` otherwise.
#[inline]
pub fn calc_pm(pm_prev: f64, llr: f64, u: u8) -> f64 {
    if u == hard_decision(llr) {
        pm_prev
    } else {
        pm_prev + llr.abs()
    }
}
