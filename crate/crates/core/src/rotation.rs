//! Cyclic rotations and the incremental all-rotations PSL scan.
//!
//! Going from rotation `ρ - 1` to `ρ` changes hat-ordered sidelobe `i` by
//! `b[(ρ-1) mod n] * (b[(i+ρ) mod n] - b[(n-i+ρ-2) mod n])`, so the whole
//! profile costs one direct sidelobe computation plus `O(n)` per rotation.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seqcore::{sidelobes_raw, BinarySequence};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RotationScanResult {
    /// PSL of `B ← ρ` for `ρ = 0..n`.
    pub psl_per_rotation: Vec<u32>,
    /// Smallest rotation index achieving `min_psl`.
    pub rho_max: usize,
    pub min_psl: u32,
}

impl RotationScanResult {
    fn from_profile(psl_per_rotation: Vec<u32>) -> Self {
        let (rho_max, min_psl) =
            psl_per_rotation.iter().copied().enumerate().min_by_key(|&(rho, p)| (p, rho)).expect("non-empty profile");
        Self { psl_per_rotation, rho_max, min_psl }
    }
}

/// `B ← ρ`: element `i` of the result is `b[(i + ρ) mod n]`.
pub fn rotate_left(b: &BinarySequence, rho: usize) -> BinarySequence {
    let s = b.as_slice();
    let r = rho % s.len();
    let mut out = Vec::with_capacity(s.len());
    out.extend_from_slice(&s[r..]);
    out.extend_from_slice(&s[..r]);
    BinarySequence::from_vec_unchecked(out)
}

/// `Ĉ_i(B ← ρ) - Ĉ_i(B ← (ρ-1))` for `ρ >= 1`.
pub fn rotation_delta(b: &BinarySequence, rho: usize, i: usize) -> Result<i32> {
    let n = b.len();
    if rho == 0 {
        return Err(Error::ShiftOutOfRange { shift: rho, len: n });
    }
    if i >= n - 1 {
        return Err(Error::SidelobeIndexOutOfRange { index: i, len: n });
    }
    let s = b.as_slice();
    let at = |k: usize| s[k % n] as i32;
    Ok(at(rho - 1) * (at(i + rho) - at(n - i + rho - 2)))
}

/// Profiles the PSL of every cyclic rotation of `b`.
pub fn scan_rotations(b: &BinarySequence) -> RotationScanResult {
    let n = b.len();
    RotationScanResult::from_profile(scan_range(b.as_slice(), 0, n))
}

/// Same result as [`scan_rotations`], with the rotation range split into
/// `chunks` contiguous pieces scanned on the rayon pool. Each piece starts
/// from a direct sidelobe computation at its first rotation.
pub fn scan_rotations_parallel(b: &BinarySequence, chunks: usize) -> RotationScanResult {
    let n = b.len();
    let chunks = chunks.clamp(1, n);
    let step = n.div_ceil(chunks);
    let pieces: Vec<Vec<u32>> = (0..n)
        .step_by(step)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|start| scan_range(b.as_slice(), start, (start + step).min(n)))
        .collect();
    RotationScanResult::from_profile(pieces.concat())
}

fn scan_range(s: &[i8], start: usize, end: usize) -> Vec<u32> {
    let n = s.len();
    let mut out = Vec::with_capacity(end - start);
    if start >= end {
        return out;
    }
    let rotated = rotate_left(&BinarySequence::from_vec_unchecked(s.to_vec()), start);
    let mut omega = sidelobes_raw(rotated.as_slice());
    out.push(peak(&omega));

    // Doubled copy so that every index below stays under 2n without a modulo.
    let doubled: Vec<i32> = s.iter().chain(s.iter()).map(|&x| x as i32).collect();
    for rho in start + 1..end {
        let lead = doubled[rho - 1];
        let forward = &doubled[rho..rho + n - 1];
        let mut best = 0u32;
        for (i, (w, &f)) in omega.iter_mut().zip(forward).enumerate() {
            *w += lead * (f - doubled[n + rho - 2 - i]);
            best = best.max(w.unsigned_abs());
        }
        out.push(best);
    }
    out
}

#[inline]
fn peak(values: &[i32]) -> u32 {
    values.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0)
}
