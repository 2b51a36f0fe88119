//! Polar transform, Reed-Muller rate profile and the message <-> profiled
//! vector mapping.
//!
//! Bit vectors are plain `u8` slices holding 0 or 1. The transform uses the
//! kernel `[[1, 0], [1, 1]]` in natural (non bit-reversed) order, with the
//! row-vector convention `x = u * F^{(x)n}`.

use crate::error::{PacError, Result};

/// Hamming weight of the binary expansion of `index`.
#[inline]
pub fn index_weight(index: usize) -> u32 {
    index.count_ones()
}

pub(crate) fn check_block_len(n: usize) -> Result<()> {
    if n < 2 || !n.is_power_of_two() {
        return Err(PacError::BlockLength(n));
    }
    Ok(())
}

/// Reed-Muller rate profile: the `k` indices of largest binary weight.
///
/// Inside the boundary weight class, larger indices are taken first. The
/// ordering is a fixed total order, so profiles are nested in `k`. The
/// returned set is sorted ascending.
pub fn rm_profile(n: usize, k: usize) -> Result<Vec<usize>> {
    check_block_len(n)?;
    if k < 1 || k > n {
        return Err(PacError::MessageLength { k, n });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        index_weight(b)
            .cmp(&index_weight(a))
            .then_with(|| b.cmp(&a))
    });
    let mut set = order[..k].to_vec();
    set.sort_unstable();
    Ok(set)
}

/// Places message bits on the information set; every other position is 0.
pub fn profile_map(message: &[u8], info_set: &[usize], n: usize) -> Result<Vec<u8>> {
    if message.is_empty() {
        return Err(PacError::MessageLength { k: 0, n });
    }
    if message.len() != info_set.len() {
        return Err(PacError::LengthMismatch {
            expected: info_set.len(),
            actual: message.len(),
        });
    }
    let mut v = vec![0u8; n];
    for (&bit, &idx) in message.iter().zip(info_set) {
        if idx >= n {
            return Err(PacError::InfoSet(format!("index {idx} >= {n}")));
        }
        v[idx] = bit;
    }
    Ok(v)
}

/// Reads the message back out of a profiled vector.
pub fn demapping(profiled: &[u8], info_set: &[usize]) -> Result<Vec<u8>> {
    if let Some(&bad) = info_set.iter().find(|&&i| i >= profiled.len()) {
        return Err(PacError::LengthMismatch {
            expected: bad + 1,
            actual: profiled.len(),
        });
    }
    Ok(info_set.iter().map(|&i| profiled[i]).collect())
}

/// In-place polar transform. The length must be a power of two.
pub fn polar_transform_in_place(bits: &mut [u8]) -> Result<()> {
    check_block_len(bits.len())?;
    let n = bits.len();
    let mut half = 1;
    while half < n {
        for block in bits.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter()) {
                *a ^= *b;
            }
        }
        half <<= 1;
    }
    Ok(())
}

/// `x = u * G_N` over GF(2). The map is linear and its own inverse.
pub fn polar_transform(u: &[u8]) -> Result<Vec<u8>> {
    let mut x = u.to_vec();
    polar_transform_in_place(&mut x)?;
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rm_profile_examples() {
        assert_eq!(rm_profile(8, 4).unwrap(), vec![3, 5, 6, 7]);
        assert_eq!(rm_profile(2, 1).unwrap(), vec![1]);
        assert_eq!(rm_profile(4, 4).unwrap(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn rm_profile_tie_break_prefers_larger_indices() {
        // weight-2 class of N=8 is {3, 5, 6}; with K=3 only 7 plus two of them fit
        assert_eq!(rm_profile(8, 3).unwrap(), vec![5, 6, 7]);
    }

    #[test]
    fn rm_128_64_is_the_weight_at_least_four_set() {
        let set = rm_profile(128, 64).unwrap();
        assert_eq!(set.len(), 64);
        assert!(set.iter().all(|&i| index_weight(i) >= 4));
    }

    #[test]
    fn rm_profile_rejects_bad_k() {
        assert!(rm_profile(8, 0).is_err());
        assert!(rm_profile(8, 9).is_err());
        assert!(rm_profile(6, 2).is_err());
    }

    #[test]
    fn rm_profile_weight_ordering() {
        for n in [2usize, 4, 8, 16, 32, 64, 128] {
            for k in 1..=n {
                let set = rm_profile(n, k).unwrap();
                let min_in = set.iter().map(|&i| index_weight(i)).min().unwrap();
                let max_out = (0..n).filter(|i| !set.contains(i)).map(index_weight).max();
                if let Some(max_out) = max_out {
                    assert!(min_in >= max_out, "n={n} k={k}");
                }
            }
        }
    }

    #[test]
    fn rm_profile_nested() {
        for n in [8usize, 32, 128] {
            for k in 1..n {
                let small = rm_profile(n, k).unwrap();
                let big = rm_profile(n, k + 1).unwrap();
                assert!(small.iter().all(|i| big.contains(i)));
            }
        }
    }

    #[test]
    fn profile_map_examples() {
        let v = profile_map(&[1, 0, 1, 1], &[3, 5, 6, 7], 8).unwrap();
        assert_eq!(v, vec![0, 0, 0, 1, 0, 0, 1, 1]);
        assert_eq!(profile_map(&[1], &[1], 2).unwrap(), vec![0, 1]);
        assert!(profile_map(&[], &[], 8).is_err());
        assert!(profile_map(&[1, 0], &[3, 5, 6], 8).is_err());
    }

    #[test]
    fn demapping_examples() {
        let d = demapping(&[0, 0, 0, 1, 0, 0, 1, 1], &[3, 5, 6, 7]).unwrap();
        assert_eq!(d, vec![1, 0, 1, 1]);
        assert_eq!(demapping(&[0; 8], &[3, 5, 6, 7]).unwrap(), vec![0; 4]);
        assert!(demapping(&[0; 4], &[3, 5]).is_err());
    }

    #[test]
    fn demapping_inverts_profile_map_exhaustively() {
        for k in 1..=10usize {
            let set = rm_profile(16, k).unwrap();
            for word in 0u32..(1 << k) {
                let d: Vec<u8> = (0..k).map(|j| ((word >> j) & 1) as u8).collect();
                let v = profile_map(&d, &set, 16).unwrap();
                assert_eq!(demapping(&v, &set).unwrap(), d);
            }
        }
    }

    #[test]
    fn polar_transform_examples() {
        assert_eq!(polar_transform(&[0; 8]).unwrap(), vec![0; 8]);
        assert_eq!(polar_transform(&[1, 0]).unwrap(), vec![1, 0]);
        assert_eq!(polar_transform(&[0, 1]).unwrap(), vec![1, 1]);
        assert_eq!(polar_transform(&[0, 0, 0, 1]).unwrap(), vec![1, 1, 1, 1]);
        assert!(polar_transform(&[0, 1, 1]).is_err());
    }

    /// Row `i` of the Kronecker power, built entrywise: with kernel
    /// [[1,0],[1,1]], G[i][j] = 1 iff the bits of j are a subset of the bits of i.
    fn generator_row(i: usize, n: usize) -> Vec<u8> {
        (0..n).map(|j| u8::from(j & !i == 0)).collect()
    }

    #[test]
    fn polar_transform_matches_kronecker_rows() {
        for n in [2usize, 4, 8, 16, 32] {
            for i in 0..n {
                let mut u = vec![0u8; n];
                u[i] = 1;
                assert_eq!(polar_transform(&u).unwrap(), generator_row(i, n));
            }
        }
    }

    fn bits_strategy() -> impl Strategy<Value = (Vec<u8>, Vec<u8>)> {
        (1u32..=7).prop_flat_map(|p| {
            let n = 1usize << p;
            (
                proptest::collection::vec(0u8..=1, n),
                proptest::collection::vec(0u8..=1, n),
            )
        })
    }

    proptest! {
        #[test]
        fn polar_transform_is_involution((a, _b) in bits_strategy()) {
            let x = polar_transform(&a).unwrap();
            prop_assert_eq!(polar_transform(&x).unwrap(), a);
        }

        #[test]
        fn polar_transform_is_linear((a, b) in bits_strategy()) {
            let sum: Vec<u8> = a.iter().zip(&b).map(|(p, q)| p ^ q).collect();
            let xa = polar_transform(&a).unwrap();
            let xb = polar_transform(&b).unwrap();
            let xs: Vec<u8> = xa.iter().zip(&xb).map(|(p, q)| p ^ q).collect();
            prop_assert_eq!(polar_transform(&sum).unwrap(), xs);
        }

        #[test]
        fn demapping_round_trip_random(d in proptest::collection::vec(0u8..=1, 11..=64)) {
            let set = rm_profile(128, d.len()).unwrap();
            let v = profile_map(&d, &set, 128).unwrap();
            prop_assert_eq!(demapping(&v, &set).unwrap(), d);
        }
    }
}
