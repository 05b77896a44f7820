//! Seed sequences: m-sequences from a Fibonacci LFSR, Legendre sequences and
//! uniform random sequences.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seqcore::BinarySequence;

/// Largest supported LFSR degree; a degree-`m` sequence holds `2^m - 1` elements.
pub const MAX_LFSR_DEGREE: u32 = 32;

/// A feedback polynomial over GF(2) and an initial register state.
///
/// `poly` has bit `k` set when `x^k` appears, so `x^3 + x + 1` is `0b1011`.
/// The degree is the position of the highest set bit. Bit `j` of
/// `initial_state` is output bit `s_j`; the register then follows
/// `s_{k+m} = Σ c_j s_{k+j}` over the lower coefficients `c_j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LfsrSpec {
    poly: u64,
    initial_state: u64,
}

impl LfsrSpec {
    pub fn new(poly: u64, initial_state: u64) -> Result<Self> {
        if poly < 2 {
            return Err(Error::InvalidPolynomial { poly, reason: "degree must be at least 1" });
        }
        let degree = 63 - poly.leading_zeros();
        if degree > MAX_LFSR_DEGREE {
            return Err(Error::InvalidPolynomial { poly, reason: "degree above 32" });
        }
        if poly & 1 == 0 {
            return Err(Error::InvalidPolynomial { poly, reason: "constant term must be 1" });
        }
        if initial_state == 0 {
            return Err(Error::ZeroState);
        }
        if initial_state >> degree != 0 {
            return Err(Error::StateTooWide { state: initial_state, degree });
        }
        Ok(Self { poly, initial_state })
    }

    /// Builds a spec from the exponents of the polynomial, e.g. `[17, 14, 12, 10, 9, 1, 0]`.
    pub fn from_exponents(exponents: &[u32], initial_state: u64) -> Result<Self> {
        let mut poly = 0u64;
        for &e in exponents {
            if e >= 64 {
                return Err(Error::InvalidPolynomial { poly, reason: "exponent above 63" });
            }
            poly |= 1 << e;
        }
        Self::new(poly, initial_state)
    }

    pub fn degree(&self) -> u32 {
        63 - self.poly.leading_zeros()
    }

    pub fn poly(&self) -> u64 {
        self.poly
    }

    pub fn initial_state(&self) -> u64 {
        self.initial_state
    }

    pub fn period(&self) -> u64 {
        (1u64 << self.degree()) - 1
    }
}

/// Iterates LFSR register states, starting with the initial state.
#[derive(Clone, Debug)]
struct Lfsr {
    taps: u64,
    top: u32,
    register: u64,
}

impl Lfsr {
    fn new(spec: &LfsrSpec) -> Self {
        let m = spec.degree();
        Self { taps: spec.poly & ((1u64 << m) - 1), top: m - 1, register: spec.initial_state }
    }

    #[inline]
    fn step(&mut self) -> bool {
        let out = self.register & 1 == 1;
        let feedback = (self.register & self.taps).count_ones() as u64 & 1;
        self.register = (self.register >> 1) | (feedback << self.top);
        out
    }
}

/// Expands the LFSR for one full period, mapping bit 1 to `+1`.
///
/// Returns [`Error::NotPrimitive`] if the register returns to its initial
/// state before `2^m - 1` steps.
pub fn mseq(spec: &LfsrSpec) -> Result<BinarySequence> {
    let period = spec.period();
    if period < 2 {
        return Err(Error::InvalidPolynomial { poly: spec.poly, reason: "degree 1 gives length 1" });
    }
    let mut lfsr = Lfsr::new(spec);
    let mut out = Vec::with_capacity(period as usize);
    for step in 1..=period {
        out.push(if lfsr.step() { 1 } else { -1 });
        if lfsr.register == spec.initial_state && step < period {
            return Err(Error::NotPrimitive { poly: spec.poly, period: step, expected: period });
        }
    }
    if lfsr.register != spec.initial_state {
        return Err(Error::NotPrimitive { poly: spec.poly, period: 0, expected: period });
    }
    Ok(BinarySequence::from_vec_unchecked(out))
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Legendre sequence of length `p`: element `j` (for `i = j + 1`) is `+1`
/// when `i` is a nonzero quadratic residue mod `p`, else `-1`. The last
/// element, `i = p`, is therefore `-1`.
pub fn legendre(p: u64) -> Result<BinarySequence> {
    if p == 2 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    let len = usize::try_from(p).map_err(|_| Error::NotOddPrime(p))?;
    let mut out = vec![-1i8; len];
    for k in 1..=(p - 1) / 2 {
        let residue = mul_mod(k, k, p);
        out[residue as usize - 1] = 1;
    }
    Ok(BinarySequence::from_vec_unchecked(out))
}

/// Each element independently `±1` with probability ½.
pub fn random_sequence<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<BinarySequence> {
    if n < 2 {
        return Err(Error::LengthTooShort(n));
    }
    Ok(BinarySequence::from_vec_unchecked((0..n).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect()))
}
