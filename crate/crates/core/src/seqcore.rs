//! Sequence representation, direct autocorrelation and the hexadecimal codec.
//!
//! Hex convention: the text is an unsigned integer written as an `n`-bit
//! big-endian bit string. The most significant bit is element 0, bit 1 maps
//! to `+1` and bit 0 maps to `-1`. Leading zero digits are omitted on encode.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An ordered sequence of `±1` elements with length at least 2.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct BinarySequence(Vec<i8>);

impl BinarySequence {
    pub fn new(elements: Vec<i8>) -> Result<Self> {
        if elements.len() < 2 {
            return Err(Error::LengthTooShort(elements.len()));
        }
        if let Some((index, &value)) = elements.iter().enumerate().find(|(_, &v)| v != 1 && v != -1) {
            return Err(Error::InvalidElement { index, value: value as i64 });
        }
        Ok(Self(elements))
    }

    /// Builds a sequence from booleans, `true` mapping to `+1`.
    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Result<Self> {
        Self::new(bits.into_iter().map(|b| if b { 1 } else { -1 }).collect())
    }

    /// All-`+1` sequence of length `n`.
    pub fn ones(n: usize) -> Result<Self> {
        Self::new(vec![1; n])
    }

    /// Parses a string of `+` and `-` characters; ASCII whitespace is ignored.
    pub fn parse_signs(text: &str) -> Result<Self> {
        let mut out = Vec::with_capacity(text.len());
        for c in text.chars() {
            match c {
                '+' => out.push(1),
                '-' => out.push(-1),
                c if c.is_ascii_whitespace() => {}
                c => return Err(Error::InvalidSymbol(c)),
            }
        }
        Self::new(out)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; a valid sequence has at least two elements.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<i8> {
        self.0
    }

    /// Renders the sequence as `+`/`-` characters.
    pub fn to_signs(&self) -> String {
        self.0.iter().map(|&b| if b > 0 { '+' } else { '-' }).collect()
    }

    pub(crate) fn from_vec_unchecked(elements: Vec<i8>) -> Self {
        debug_assert!(elements.len() >= 2 && elements.iter().all(|&b| b == 1 || b == -1));
        Self(elements)
    }
}

impl fmt::Debug for BinarySequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinarySequence({})", self.to_signs())
    }
}

impl fmt::Display for BinarySequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_signs())
    }
}

impl TryFrom<Vec<i8>> for BinarySequence {
    type Error = Error;

    fn try_from(value: Vec<i8>) -> Result<Self> {
        Self::new(value)
    }
}

impl From<BinarySequence> for Vec<i8> {
    fn from(value: BinarySequence) -> Self {
        value.0
    }
}

impl AsRef<[i8]> for BinarySequence {
    fn as_ref(&self) -> &[i8] {
        &self.0
    }
}

/// Sidelobes in "hat" order: `values[i] = C_{n-i-1}`.
///
/// Entry `i` is a sum of `i + 1` products, so it has the parity of `i + 1`
/// and magnitude at most `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SidelobeArray(Vec<i32>);

impl SidelobeArray {
    pub fn values(&self) -> &[i32] {
        &self.0
    }

    pub(crate) fn from_raw(values: Vec<i32>) -> Self {
        Self(values)
    }

    /// Length of the underlying sequence, one more than the number of sidelobes.
    pub fn sequence_len(&self) -> usize {
        self.0.len() + 1
    }

    /// Largest magnitude, which is the PSL of the paired sequence.
    pub fn peak(&self) -> u32 {
        peak_of(&self.0)
    }

    /// `C_u` for `1 <= u < n`.
    pub fn at_shift(&self, u: usize) -> Option<i32> {
        let n = self.sequence_len();
        if u == 0 || u >= n {
            return None;
        }
        Some(self.0[n - u - 1])
    }
}

#[inline]
pub(crate) fn peak_of(values: &[i32]) -> u32 {
    values.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0)
}

#[inline]
pub(crate) fn correlate(b: &[i8], u: usize) -> i32 {
    b[..b.len() - u].iter().zip(&b[u..]).map(|(&x, &y)| (x * y) as i32).sum()
}

#[inline]
pub(crate) fn sidelobes_raw(b: &[i8]) -> Vec<i32> {
    let n = b.len();
    (0..n - 1).map(|i| correlate(b, n - i - 1)).collect()
}

/// Aperiodic autocorrelation `C_u = Σ b_j b_{j+u}`; `u = 0` is the mainlobe `n`.
pub fn autocorrelation(b: &BinarySequence, u: usize) -> Result<i32> {
    if u >= b.len() {
        return Err(Error::ShiftOutOfRange { shift: u, len: b.len() });
    }
    Ok(correlate(b.as_slice(), u))
}

/// All sidelobes computed directly in `O(n²)`.
pub fn sidelobes(b: &BinarySequence) -> SidelobeArray {
    SidelobeArray(sidelobes_raw(b.as_slice()))
}

/// Peak sidelobe level `max_{0<u<n} |C_u|`.
pub fn psl(b: &BinarySequence) -> u32 {
    let s = b.as_slice();
    (1..s.len()).map(|u| correlate(s, u).unsigned_abs()).max().unwrap_or(0)
}

/// Decodes `text` as an `n`-element sequence.
pub fn decode_hex(text: &str, n: usize) -> Result<BinarySequence> {
    if n < 2 {
        return Err(Error::LengthTooShort(n));
    }
    if text.is_empty() {
        return Err(Error::EmptyHex);
    }
    let mut nibbles = Vec::with_capacity(text.len());
    for (offset, c) in text.chars().enumerate() {
        match c.to_digit(16) {
            Some(d) => nibbles.push(d as u8),
            None => return Err(Error::InvalidHex { digit: c, offset }),
        }
    }
    let first = nibbles.iter().position(|&d| d != 0);
    let significant = match first {
        Some(start) => &nibbles[start..],
        None => &[][..],
    };
    let bits = match significant.first() {
        Some(&lead) => 4 * (significant.len() - 1) + (8 - lead.leading_zeros() as usize),
        None => 0,
    };
    if bits > n {
        return Err(Error::HexTooLong { bits, len: n });
    }
    let mut out = vec![-1i8; n];
    // Walk nibbles from the least significant end, filling from the back.
    for (k, &d) in significant.iter().rev().enumerate() {
        for bit in 0..4 {
            let pos = 4 * k + bit;
            if pos >= n {
                break;
            }
            if (d >> bit) & 1 == 1 {
                out[n - 1 - pos] = 1;
            }
        }
    }
    Ok(BinarySequence(out))
}

/// Lower-case hex without leading zeros; the all-`-1` sequence encodes as `"0"`.
pub fn encode_hex(b: &BinarySequence) -> String {
    let s = b.as_slice();
    let n = s.len();
    let digits = n.div_ceil(4);
    let mut out = String::with_capacity(digits);
    for k in (0..digits).rev() {
        let mut d = 0u32;
        for bit in 0..4 {
            let pos = 4 * k + bit;
            if pos < n && s[n - 1 - pos] > 0 {
                d |= 1 << bit;
            }
        }
        if d == 0 && out.is_empty() {
            continue;
        }
        out.push(char::from_digit(d, 16).expect("nibble"));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Transform {
    Negate,
    Reverse,
}

pub fn transform(b: &BinarySequence, kind: Transform) -> BinarySequence {
    let out = match kind {
        Transform::Negate => b.0.iter().map(|&x| -x).collect(),
        Transform::Reverse => b.0.iter().rev().copied().collect(),
    };
    BinarySequence(out)
}
