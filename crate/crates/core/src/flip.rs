//! Linear-time single-element flip and the `Σ|x|^α` fitness family.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seqcore::{peak_of, sidelobes_raw, BinarySequence, SidelobeArray};

/// A sequence together with its sidelobe array in hat order.
///
/// `omega == sidelobes(psi)` holds after every public operation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SidelobeState {
    psi: Vec<i8>,
    omega: Vec<i32>,
}

impl SidelobeState {
    pub fn new(sequence: BinarySequence) -> Self {
        let omega = sidelobes_raw(sequence.as_slice());
        Self { psi: sequence.into_inner(), omega }
    }

    pub fn len(&self) -> usize {
        self.psi.len()
    }

    /// Always false for a valid state.
    pub fn is_empty(&self) -> bool {
        self.psi.is_empty()
    }

    pub fn elements(&self) -> &[i8] {
        &self.psi
    }

    pub fn sidelobe_values(&self) -> &[i32] {
        &self.omega
    }

    pub fn sequence(&self) -> BinarySequence {
        BinarySequence::from_vec_unchecked(self.psi.clone())
    }

    pub fn sidelobes(&self) -> SidelobeArray {
        SidelobeArray::from_raw(self.omega.clone())
    }

    pub fn psl(&self) -> u32 {
        peak_of(&self.omega)
    }

    pub fn into_sequence(self) -> BinarySequence {
        BinarySequence::from_vec_unchecked(self.psi)
    }

    /// Negates element `f` and updates the sidelobes in `O(n)`.
    pub fn flip(&mut self, f: usize) -> Result<()> {
        if f >= self.psi.len() {
            return Err(Error::PositionOutOfRange { position: f, len: self.psi.len() });
        }
        self.flip_unchecked(f);
        Ok(())
    }

    /// In-memory flip. The index arithmetic follows the two-branch form
    /// exactly, including the asymmetric loop bounds of each branch.
    #[inline]
    pub(crate) fn flip_unchecked(&mut self, f: usize) {
        update_sidelobes(&self.psi, &mut self.omega, f);
        self.psi[f] = -self.psi[f];
    }

    /// Writes the sidelobes that flipping `f` would produce into `scratch`,
    /// leaving the state untouched.
    #[inline]
    pub(crate) fn probe_into(&self, f: usize, scratch: &mut [i32]) {
        scratch.copy_from_slice(&self.omega);
        update_sidelobes(&self.psi, scratch, f);
    }

    /// Fitness after a prospective flip of `f`, or `None` once the partial sum
    /// reaches `bound`. Nothing is written. `prefix[k]` must hold the fitness
    /// of the first `k` current sidelobes: a flip leaves the entries below
    /// `min(f, n - f - 1)` unchanged and the two update families cover the rest.
    #[inline]
    pub(crate) fn probe_fitness(&self, f: usize, table: &[u64], prefix: &[u64], bound: u64) -> Option<u64> {
        let (psi, omega) = (&self.psi, &self.omega);
        let n = psi.len();
        let d_min = (n - f - 1).min(f);
        let d_max = (n - f).max(f);
        let twice = 2 * psi[f] as i32;
        let term = |k: usize, delta: i32| table[(omega[k] - twice * delta).unsigned_abs() as usize];

        let mut acc = prefix[d_min];
        if acc >= bound {
            return None;
        }
        let complete = if 2 * f < n {
            sum_blocks(&mut acc, d_max - d_min - 1, bound, |q| term(d_min + q, psi[n - q - 1] as i32))
                && sum_blocks(&mut acc, n - d_max, bound, |q| {
                    term(d_max + q - 1, psi[2 * f - q] as i32 + psi[q] as i32)
                })
        } else {
            let offset = d_max - d_min;
            sum_blocks(&mut acc, offset, bound, |q| term(d_min + q, psi[q] as i32))
                && sum_blocks(&mut acc, n - d_max - 1, bound, |q| {
                    term(d_max + q, psi[offset + q] as i32 + psi[n - q - 1] as i32)
                })
        };
        complete.then_some(acc)
    }

    /// Fills `prefix` so that `prefix[k]` is the fitness of the first `k`
    /// sidelobes, saturating at `u64::MAX`.
    pub(crate) fn fill_prefix(&self, table: &[u64], prefix: &mut Vec<u64>) {
        prefix.clear();
        prefix.push(0);
        let mut acc = 0u64;
        for &x in &self.omega {
            acc = acc.saturating_add(table[x.unsigned_abs() as usize]);
            prefix.push(acc);
        }
    }

    /// Commits a probe made with [`Self::probe_into`] for the same `f`.
    #[inline]
    pub(crate) fn commit_probe(&mut self, f: usize, scratch: &mut Vec<i32>) {
        std::mem::swap(&mut self.omega, scratch);
        self.psi[f] = -self.psi[f];
    }
}

const BLOCK: usize = 64;

/// Adds `term(0..len)` to `acc` in blocks, giving up once `acc` reaches `bound`.
#[inline(always)]
fn sum_blocks(acc: &mut u64, len: usize, bound: u64, term: impl Fn(usize) -> u64) -> bool {
    let mut start = 0;
    while start < len {
        let end = (start + BLOCK).min(len);
        *acc += (start..end).map(&term).sum::<u64>();
        if *acc >= bound {
            return false;
        }
        start = end;
    }
    true
}

#[inline]
fn update_sidelobes(psi: &[i8], omega: &mut [i32], f: usize) {
    {
        let n = psi.len();
        debug_assert!(f < n);
        let d_min = (n - f - 1).min(f);
        let d_max = (n - f).max(f);
        let twice = 2 * psi[f] as i32;
        let left_half = 2 * f < n;

        if left_half {
            let span = d_max - d_min - 1;
            for (q, w) in omega[d_min..d_min + span].iter_mut().enumerate() {
                *w -= twice * psi[n - q - 1] as i32;
            }
        } else {
            let span = d_max - d_min;
            for (w, &p) in omega[d_min..d_min + span].iter_mut().zip(psi.iter()) {
                *w -= twice * p as i32;
            }
        }

        if left_half {
            for q in 0..n - d_max {
                omega[d_max + q - 1] -= twice * (psi[2 * f - q] as i32 + psi[q] as i32);
            }
        } else {
            let offset = d_max - d_min;
            for q in 0..n - d_max - 1 {
                omega[d_max + q] -= twice * (psi[offset + q] as i32 + psi[n - q - 1] as i32);
            }
        }
    }
}

/// Exponent of the fitness `F = Σ |x|^α`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct FitnessSpec {
    alpha: u32,
}

impl FitnessSpec {
    pub fn new(alpha: u32) -> Result<Self> {
        if alpha == 0 {
            return Err(Error::InvalidAlpha);
        }
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> u32 {
        self.alpha
    }
}

impl TryFrom<u32> for FitnessSpec {
    type Error = Error;
    fn try_from(alpha: u32) -> Result<Self> {
        Self::new(alpha)
    }
}

impl From<FitnessSpec> for u32 {
    fn from(spec: FitnessSpec) -> u32 {
        spec.alpha
    }
}

#[inline]
fn abs_pow(x: i32, alpha: u32) -> u128 {
    (x.unsigned_abs() as u128).saturating_pow(alpha)
}

/// `Σ |x|^α` over the sidelobes, accumulated in 128 bits.
///
/// Exact whenever the true sum is below `2^128`; larger sums saturate at
/// `u128::MAX`.
pub fn fitness(omega: &SidelobeArray, spec: FitnessSpec) -> u128 {
    fitness_of(omega.values(), spec)
}

pub(crate) fn fitness_of(values: &[i32], spec: FitnessSpec) -> u128 {
    values.iter().fold(0u128, |acc, &x| acc.saturating_add(abs_pow(x, spec.alpha)))
}

/// Table-driven fitness for a fixed length, used by the search kernel.
///
/// `|x| <= n - 1` for every sidelobe, so `|x|^α` is looked up rather than
/// recomputed. When the worst-case total fits in 64 bits the sum runs in
/// `u64`.
#[derive(Clone, Debug)]
pub(crate) struct FitnessTable {
    wide: Vec<u128>,
    /// Entries as `u64`, when the largest one fits.
    small: Option<Vec<u64>>,
    /// Whether every possible total fits in `u64`.
    narrow: bool,
}

impl FitnessTable {
    pub(crate) fn new(n: usize, spec: FitnessSpec) -> Self {
        let wide: Vec<u128> = (0..n as u32).map(|x| (x as u128).saturating_pow(spec.alpha())).collect();
        let largest = wide.last().copied().unwrap_or(0);
        let small = (largest <= u64::MAX as u128).then(|| wide.iter().map(|&v| v as u64).collect());
        let narrow = largest.checked_mul(n as u128).is_some_and(|w| w <= u64::MAX as u128);
        Self { wide, small, narrow }
    }

    /// Entries as `u64`, for use with [`SidelobeState::fill_prefix`].
    pub(crate) fn small(&self) -> Option<&[u64]> {
        self.small.as_deref()
    }

    /// The `u64` table if a probe against `bound` cannot overflow: a partial
    /// sum below `bound` grows by at most one block before it is checked.
    pub(crate) fn probe_table(&self, bound: u128) -> Option<&[u64]> {
        let t = self.small.as_deref()?;
        let headroom = (*t.last().unwrap_or(&0) as u128) * BLOCK as u128;
        (bound.saturating_add(headroom) <= u64::MAX as u128).then_some(t)
    }

    #[inline]
    pub(crate) fn eval(&self, values: &[i32]) -> u128 {
        match self.small.as_ref().filter(|_| self.narrow) {
            Some(t) => values.iter().map(|&x| t[x.unsigned_abs() as usize]).sum::<u64>() as u128,
            None => values.iter().fold(0u128, |acc, &x| acc.saturating_add(self.wide[x.unsigned_abs() as usize])),
        }
    }

    /// Returns the fitness if it is strictly below `bound`, else `None`.
    /// Stops summing once the partial sum reaches `bound`.
    #[inline]
    pub(crate) fn eval_below(&self, values: &[i32], bound: u128) -> Option<u128> {
        const CHUNK: usize = 64;
        match self.small.as_ref().filter(|_| self.narrow) {
            Some(t) => {
                let bound = bound.min(u64::MAX as u128) as u64;
                let mut acc = 0u64;
                for chunk in values.chunks(CHUNK) {
                    acc += chunk.iter().map(|&x| t[x.unsigned_abs() as usize]).sum::<u64>();
                    if acc >= bound {
                        return None;
                    }
                }
                Some(acc as u128)
            }
            None => {
                let mut acc = 0u128;
                for chunk in values.chunks(CHUNK) {
                    acc = chunk.iter().fold(acc, |a, &x| a.saturating_add(self.wide[x.unsigned_abs() as usize]));
                    if acc >= bound {
                        return None;
                    }
                }
                Some(acc)
            }
        }
    }
}
