//! Exhaustive minimum-PSL search for short lengths.
//!
//! Sequences are bit masks with element 0 in the top bit and `1` meaning
//! `+1`. Negation is removed by fixing element 0 to `+1`. Reversal is
//! removed by skipping any mask whose reversal (re-normalised to start with
//! `+1`) is a smaller mask.

use crate::error::{Error, Result};
use crate::seqcore::BinarySequence;

pub const DEFAULT_EXHAUSTIVE_CAP: usize = 24;

/// PSL of a mask, or `None` as soon as some sidelobe reaches `bound`.
#[inline]
fn psl_below(mask: u64, n: usize, bound: u32) -> Option<u32> {
    let mut peak = 0u32;
    for u in 1..n {
        let terms = (n - u) as u32;
        // |C_u| <= n - u, so no later shift can raise the peak.
        if terms <= peak {
            break;
        }
        let window = (1u64 << (n - u)) - 1;
        let disagree = ((mask ^ (mask >> u)) & window).count_ones();
        let c = (terms as i32 - 2 * disagree as i32).unsigned_abs();
        if c >= bound {
            return None;
        }
        peak = peak.max(c);
    }
    Some(peak)
}

#[inline]
fn canonical_reverse(mask: u64, n: usize) -> u64 {
    let full = (1u64 << n) - 1;
    let rev = mask.reverse_bits() >> (64 - n);
    if rev >> (n - 1) & 1 == 1 {
        rev
    } else {
        !rev & full
    }
}

fn mask_to_sequence(mask: u64, n: usize) -> BinarySequence {
    BinarySequence::from_vec_unchecked((0..n).map(|k| if mask >> (n - 1 - k) & 1 == 1 { 1 } else { -1 }).collect())
}

pub fn exhaustive_psl(n: usize) -> Result<(u32, BinarySequence)> {
    exhaustive_psl_with_cap(n, DEFAULT_EXHAUSTIVE_CAP)
}

/// Minimum PSL over all `2^n` sequences and the smallest canonical witness.
pub fn exhaustive_psl_with_cap(n: usize, cap: usize) -> Result<(u32, BinarySequence)> {
    if n < 2 {
        return Err(Error::LengthTooShort(n));
    }
    if n > cap || n > 40 {
        return Err(Error::ExhaustiveCap { n, cap: cap.min(40) });
    }
    let top = 1u64 << (n - 1);
    let mut best = u32::MAX;
    let mut witness = top;
    for mask in top..(top << 1) {
        if canonical_reverse(mask, n) < mask {
            continue;
        }
        if let Some(p) = psl_below(mask, n, best) {
            best = p;
            witness = mask;
        }
    }
    Ok((best, mask_to_sequence(witness, n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqcore::{psl, transform, Transform};

    /// Plain enumeration of all 2^n sequences with the direct PSL.
    fn brute_force(n: usize) -> u32 {
        (0u64..1 << n).map(|m| psl(&BinarySequence::from_bits((0..n).map(|k| m >> k & 1 == 1)).unwrap())).min().unwrap()
    }

    #[test]
    fn bitmask_psl_matches_direct() {
        for n in 2..=12 {
            for mask in 0u64..1 << n {
                let b = mask_to_sequence(mask, n);
                assert_eq!(psl_below(mask, n, u32::MAX), Some(psl(&b)));
            }
        }
    }

    #[test]
    fn canonical_reverse_is_a_symmetry_image() {
        for n in 2..=10 {
            for mask in (1u64 << (n - 1))..(1u64 << n) {
                let b = mask_to_sequence(mask, n);
                let r = mask_to_sequence(canonical_reverse(mask, n), n);
                let rev = transform(&b, Transform::Reverse);
                assert!(r == rev || r == transform(&rev, Transform::Negate));
            }
        }
    }

    #[test]
    fn pruned_search_agrees_with_brute_force() {
        for n in 2..=14 {
            let (p, w) = exhaustive_psl(n).unwrap();
            assert_eq!(p, brute_force(n), "n={n}");
            assert_eq!(psl(&w), p);
            assert_eq!(w.len(), n);
        }
    }

    #[test]
    fn known_small_values() {
        assert_eq!(exhaustive_psl(2).unwrap().0, 1);
        assert_eq!(exhaustive_psl(11).unwrap().0, 1);
        assert_eq!(exhaustive_psl(13).unwrap().0, 1);
        assert_eq!(exhaustive_psl(19).unwrap().0, 2);
        assert_eq!(exhaustive_psl(21).unwrap().0, 2);
        // Brute force over all 1024 sequences: length 10 admits PSL 2.
        assert_eq!(exhaustive_psl(10).unwrap().0, 2);
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(exhaustive_psl(25), Err(Error::ExhaustiveCap { n: 25, cap: 24 })));
        assert!(matches!(exhaustive_psl_with_cap(41, 64), Err(Error::ExhaustiveCap { .. })));
        assert!(exhaustive_psl(1).is_err());
    }
}
