//! Rate-1 convolutional precoder `v -> u` with `u_i = sum_j g_j v_{i-j}`.

use std::fmt;
use std::str::FromStr;

use crate::error::{PacError, Result};

const MAX_MEMORY: usize = 63;

/// Generator taps `g = (g_0, ..., g_m)` with `g_0 = g_m = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvTaps {
    bits: Vec<u8>,
    // bit j-1 set iff g_j = 1, for j in 1..=m
    memory_mask: u64,
}

impl ConvTaps {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.is_empty() {
            return Err(PacError::Taps("empty tap sequence".into()));
        }
        if bits.iter().any(|&b| b > 1) {
            return Err(PacError::Taps("taps must be 0 or 1".into()));
        }
        if bits[0] != 1 || bits[bits.len() - 1] != 1 {
            return Err(PacError::Taps("first and last taps must be 1".into()));
        }
        if bits.len() - 1 > MAX_MEMORY {
            return Err(PacError::Taps(format!("memory exceeds {MAX_MEMORY}")));
        }
        let memory_mask = bits[1..]
            .iter()
            .enumerate()
            .fold(0u64, |acc, (j, &b)| acc | (u64::from(b) << j));
        Ok(Self { bits, memory_mask })
    }

    /// Parses an octal literal, most significant bit first (`"133"` is
    /// `1011011`). Leading zero bits are dropped.
    pub fn from_octal(text: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(3 * text.len());
        for c in text.chars() {
            let digit = c
                .to_digit(8)
                .ok_or_else(|| PacError::Taps(format!("bad octal digit {c:?}")))?;
            bits.extend([(digit >> 2) & 1, (digit >> 1) & 1, digit & 1].map(|b| b as u8));
        }
        let first = bits
            .iter()
            .position(|&b| b == 1)
            .ok_or_else(|| PacError::Taps("all-zero taps".into()))?;
        Self::new(bits.split_off(first))
    }

    /// The polynomial `1 + x^2 + x^3 + x^5 + x^6` (octal 133).
    pub fn pac_default() -> Self {
        Self::new(vec![1, 0, 1, 1, 0, 1, 1]).expect("valid taps")
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    /// Register length `m`.
    pub fn memory(&self) -> usize {
        self.bits.len() - 1
    }

    pub fn zero_state(&self) -> ConvState {
        ConvState {
            register: 0,
            len: self.memory(),
        }
    }

    /// One shift-register step: returns the output bit and the next state.
    #[inline]
    pub fn step(&self, v: u8, state: ConvState) -> (u8, ConvState) {
        let u = (v & self.bits[0]) ^ ((state.register & self.memory_mask).count_ones() & 1) as u8;
        let register = if state.len == 0 {
            0
        } else {
            ((state.register << 1) | u64::from(v)) & ((1u64 << state.len) - 1)
        };
        (
            u,
            ConvState {
                register,
                len: state.len,
            },
        )
    }
}

impl Default for ConvTaps {
    fn default() -> Self {
        Self::pac_default()
    }
}

impl FromStr for ConvTaps {
    type Err = PacError;

    /// Accepts an octal literal (`133`), a binary literal (`0b101101`) or a
    /// comma-separated bit list (`1,0,1,1,0,1`).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(bin) = s.strip_prefix("0b") {
            let bits = bin
                .chars()
                .map(|c| match c {
                    '0' => Ok(0),
                    '1' => Ok(1),
                    _ => Err(PacError::Taps(format!("bad binary digit {c:?}"))),
                })
                .collect::<Result<Vec<u8>>>()?;
            Self::new(bits)
        } else if s.contains(',') {
            let bits = s
                .split(',')
                .map(|t| match t.trim() {
                    "0" => Ok(0),
                    "1" => Ok(1),
                    other => Err(PacError::Taps(format!("bad tap {other:?}"))),
                })
                .collect::<Result<Vec<u8>>>()?;
            Self::new(bits)
        } else {
            Self::from_octal(s)
        }
    }
}

impl fmt::Display for ConvTaps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// Shift-register contents, most recent input first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ConvState {
    register: u64,
    len: usize,
}

impl ConvState {
    /// Register contents as bits, `state[0]` being the most recent input.
    pub fn bits(&self) -> Vec<u8> {
        (0..self.len)
            .map(|j| ((self.register >> j) & 1) as u8)
            .collect()
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        if bits.len() > MAX_MEMORY || bits.iter().any(|&b| b > 1) {
            return Err(PacError::Invalid("bad register contents".into()));
        }
        let register = bits
            .iter()
            .enumerate()
            .fold(0u64, |acc, (j, &b)| acc | (u64::from(b) << j));
        Ok(Self {
            register,
            len: bits.len(),
        })
    }
}

/// Single precoder step, see [`ConvTaps::step`].
#[inline]
pub fn subconv(v: u8, state: ConvState, taps: &ConvTaps) -> (u8, ConvState) {
    taps.step(v, state)
}

/// Precodes a whole vector from the all-zero state. No tail bits.
pub fn conv(v: &[u8], taps: &ConvTaps) -> Vec<u8> {
    let mut state = taps.zero_state();
    v.iter()
        .map(|&bit| {
            let (u, next) = taps.step(bit, state);
            state = next;
            u
        })
        .collect()
}

/// Inverse of [`conv`]; exists because `g_0 = 1`.
pub fn deconv(u: &[u8], taps: &ConvTaps) -> Vec<u8> {
    let mut state = taps.zero_state();
    u.iter()
        .map(|&out| {
            // step(0, state) yields the contribution of the register alone
            let (feedback, _) = taps.step(0, state);
            let v = out ^ feedback;
            state = taps.step(v, state).1;
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn state(bits: &[u8]) -> ConvState {
        ConvState::from_bits(bits).unwrap()
    }

    #[test]
    fn parses_octal_and_lists() {
        let g = ConvTaps::from_octal("133").unwrap();
        assert_eq!(g.bits(), &[1, 0, 1, 1, 0, 1, 1]);
        assert_eq!(g, ConvTaps::pac_default());
        assert_eq!("133".parse::<ConvTaps>().unwrap(), g);
        assert_eq!(
            "1,0,1,1,0,1".parse::<ConvTaps>().unwrap().bits(),
            &[1, 0, 1, 1, 0, 1]
        );
        assert_eq!("0b101101".parse::<ConvTaps>().unwrap().memory(), 5);
        assert!("0".parse::<ConvTaps>().is_err());
        assert!("19".parse::<ConvTaps>().is_err());
        assert!("1,0".parse::<ConvTaps>().is_err());
        assert_eq!(g.to_string(), "1011011");
    }

    #[test]
    fn subconv_examples() {
        let g = ConvTaps::pac_default();
        let (u, next) = subconv(1, state(&[0; 6]), &g);
        assert_eq!((u, next.bits()), (1, vec![1, 0, 0, 0, 0, 0]));
        let (u, next) = subconv(0, state(&[1, 0, 0, 0, 0, 0]), &g);
        assert_eq!((u, next.bits()), (0, vec![0, 1, 0, 0, 0, 0]));
        let (u, next) = subconv(0, state(&[0, 1, 0, 0, 0, 0]), &g);
        assert_eq!((u, next.bits()), (1, vec![0, 0, 1, 0, 0, 0]));
    }

    #[test]
    fn conv_examples() {
        let g = ConvTaps::pac_default();
        assert_eq!(
            conv(&[1, 0, 0, 0, 0, 0, 0, 0], &g),
            vec![1, 0, 1, 1, 0, 1, 1, 0]
        );
        assert_eq!(conv(&[0; 8], &g), vec![0; 8]);
        assert_eq!(
            conv(&[1, 1, 0, 0, 0, 0, 0, 0], &g),
            vec![1, 1, 1, 0, 1, 1, 0, 1]
        );
    }

    #[test]
    fn deconv_examples() {
        let g = ConvTaps::pac_default();
        assert_eq!(
            deconv(&[1, 0, 1, 1, 0, 1, 1, 0], &g),
            vec![1, 0, 0, 0, 0, 0, 0, 0]
        );
        assert_eq!(deconv(&[0; 8], &g), vec![0; 8]);
    }

    #[test]
    fn memoryless_taps_are_identity() {
        let g = ConvTaps::new(vec![1]).unwrap();
        assert_eq!(conv(&[1, 0, 1, 1], &g), vec![1, 0, 1, 1]);
    }

    /// Direct evaluation of `u_i = sum_j g_j v_{i-j}`.
    fn conv_direct(v: &[u8], g: &[u8]) -> Vec<u8> {
        (0..v.len())
            .map(|i| {
                (0..g.len())
                    .filter(|&j| j <= i)
                    .fold(0u8, |acc, j| acc ^ (g[j] & v[i - j]))
            })
            .collect()
    }

    fn taps_strategy() -> impl Strategy<Value = ConvTaps> {
        prop_oneof![
            Just(ConvTaps::pac_default()),
            Just(ConvTaps::new(vec![1, 0, 1, 1, 0, 1]).unwrap()),
            proptest::collection::vec(0u8..=1, 0..10).prop_map(|mid| {
                let mut bits = vec![1];
                bits.extend(mid);
                bits.push(1);
                ConvTaps::new(bits).unwrap()
            }),
        ]
    }

    proptest! {
        #[test]
        fn conv_matches_direct_sum(g in taps_strategy(), v in proptest::collection::vec(0u8..=1, 0..130)) {
            prop_assert_eq!(conv(&v, &g), conv_direct(&v, g.bits()));
        }

        #[test]
        fn conv_is_linear(g in taps_strategy(), pair in proptest::collection::vec((0u8..=1, 0u8..=1), 0..130)) {
            let (a, b): (Vec<u8>, Vec<u8>) = pair.into_iter().unzip();
            let sum: Vec<u8> = a.iter().zip(&b).map(|(p, q)| p ^ q).collect();
            let lhs = conv(&sum, &g);
            let rhs: Vec<u8> = conv(&a, &g).iter().zip(conv(&b, &g)).map(|(p, q)| p ^ q).collect();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn conv_is_causal(g in taps_strategy(), v in proptest::collection::vec(0u8..=1, 1..130), pos in any::<prop::sample::Index>()) {
            let i = pos.index(v.len());
            let mut w = v.clone();
            w[i] ^= 1;
            prop_assert_eq!(&conv(&v, &g)[..i], &conv(&w, &g)[..i]);
        }

        #[test]
        fn conv_prefix_consistent(g in taps_strategy(), v in proptest::collection::vec(0u8..=1, 0..130), cut in any::<prop::sample::Index>()) {
            let c = if v.is_empty() { 0 } else { cut.index(v.len() + 1) };
            prop_assert_eq!(conv(&v[..c], &g), conv(&v, &g)[..c].to_vec());
        }

        #[test]
        fn stateful_fold_matches_conv(g in taps_strategy(), v in proptest::collection::vec(0u8..=1, 0..130)) {
            let mut st = g.zero_state();
            let mut out = Vec::new();
            for &bit in &v {
                let (u, next) = subconv(bit, st, &g);
                out.push(u);
                st = next;
            }
            prop_assert_eq!(out, conv(&v, &g));
        }

    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn deconv_inverts_conv(g in taps_strategy(), v in proptest::collection::vec(0u8..=1, 128)) {
            prop_assert_eq!(deconv(&conv(&v, &g), &g), v);
        }
    }
}
