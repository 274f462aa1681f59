//! Packed truth tables of `±1`-valued functions on `{-1,1}^n`.
//!
//! Input index `k` encodes `x` by `x_i = +1` iff bit `i - 1` of `k` is set,
//! and table bit `k` is set iff `f(x) = +1`. Coordinates are 1-based in the
//! public API, matching the usual `x_1, ..., x_n` notation.

use std::fmt;

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};

pub const MAX_ARITY: usize = 32;

/// Bits whose position has bit `b` clear, for `b < 6`.
const LOW_HALF: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0f0f_0f0f_0f0f_0f0f,
    0x00ff_00ff_00ff_00ff,
    0x0000_ffff_0000_ffff,
    0x0000_0000_ffff_ffff,
];

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BooleanFunction {
    arity: usize,
    words: Vec<u64>,
}

impl BooleanFunction {
    /// Builds a table from a predicate on input indices (`true` means `+1`).
    pub fn from_fn(arity: usize, mut f: impl FnMut(u64) -> bool) -> Result<Self> {
        let mut g = Self::constant(arity, false)?;
        for k in 0..g.len() {
            if f(k) {
                g.words[(k >> 6) as usize] |= 1 << (k & 63);
            }
        }
        Ok(g)
    }

    /// Builds a table from the raw bits of a single word (`arity <= 6`).
    pub fn from_word(arity: usize, bits: u64) -> Result<Self> {
        if arity == 0 || arity > 6 {
            return Err(Error::UnsupportedArity(arity));
        }
        let mask = valid_mask(arity);
        if bits & !mask != 0 {
            return Err(Error::DimensionMismatch(format!(
                "bits beyond 2^{arity} set in {bits:#x}"
            )));
        }
        Ok(BooleanFunction {
            arity,
            words: vec![bits],
        })
    }

    pub fn constant(arity: usize, value: bool) -> Result<Self> {
        if arity == 0 || arity > MAX_ARITY {
            return Err(Error::UnsupportedArity(arity));
        }
        let nwords = (1u64 << arity).div_ceil(64);
        let fill = if value { valid_mask(arity.min(6)) } else { 0 };
        Ok(BooleanFunction {
            arity,
            words: vec![fill; nwords as usize],
        })
    }

    /// The dictator `x_i`.
    pub fn dictator(arity: usize, coord: usize) -> Result<Self> {
        check_coord(coord, arity)?;
        Self::from_fn(arity, |k| k >> (coord - 1) & 1 == 1)
    }

    /// `prod_i x_i`.
    pub fn parity(arity: usize) -> Result<Self> {
        // x_i = -1 on clear bits, so the product is +1 iff the number of
        // clear bits is even.
        Self::from_fn(arity, move |k| (arity as u32 - k.count_ones()).is_multiple_of(2))
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Number of inputs, `2^n`.
    pub fn len(&self) -> u64 {
        1u64 << self.arity
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// The table as one word, when it fits.
    pub fn as_word(&self) -> Option<u64> {
        (self.arity <= 6).then(|| self.words[0])
    }

    #[inline]
    pub fn bit(&self, k: u64) -> bool {
        self.words[(k >> 6) as usize] >> (k & 63) & 1 == 1
    }

    /// `f(x)` at input index `k`, as `±1`.
    pub fn evaluate(&self, k: u64) -> Result<i8> {
        if k >= self.len() {
            return Err(Error::IndexOutOfRange {
                index: k,
                arity: self.arity,
            });
        }
        Ok(if self.bit(k) { 1 } else { -1 })
    }

    /// Number of unordered hypercube edges in direction `coord` along which
    /// `f` changes value.
    pub fn boundary_edges(&self, coord: usize) -> Result<u64> {
        check_coord(coord, self.arity)?;
        let b = coord - 1;
        if b < 6 {
            let mask = LOW_HALF[b] & valid_mask(self.arity.min(6));
            let shift = 1u32 << b;
            Ok(self
                .words
                .iter()
                .map(|&w| ((w ^ (w >> shift)) & mask).count_ones() as u64)
                .sum())
        } else {
            let stride = 1usize << (b - 6);
            Ok((0..self.words.len())
                .filter(|j| j & stride == 0)
                .map(|j| (self.words[j] ^ self.words[j + stride]).count_ones() as u64)
                .sum())
        }
    }

    /// `Inf_i[f] = Pr_x[f(x) != f(x^{(+)i})]`.
    pub fn influence(&self, coord: usize) -> Result<Dyadic> {
        let edges = self.boundary_edges(coord)?;
        Ok(Dyadic::new(edges, self.arity as u32 - 1))
    }

    pub fn influences(&self) -> Vec<Dyadic> {
        (1..=self.arity)
            .map(|i| self.influence(i).expect("coordinate in range"))
            .collect()
    }

    pub fn total_influence(&self) -> Dyadic {
        let edges: u64 = (1..=self.arity)
            .map(|i| self.boundary_edges(i).expect("coordinate in range"))
            .sum();
        Dyadic::new(edges, self.arity as u32 - 1)
    }

    /// `D_i f(y) = (f(y^{i->1}) - f(y^{i->-1})) / 2` over the other `n - 1`
    /// coordinates, kept in ascending order.
    pub fn discrete_derivative(&self, coord: usize) -> Result<TernaryFunction> {
        self.split_on(coord, |hi, lo| (hi - lo) / 2)
    }

    /// `E_i f(y) = (f(y^{i->1}) + f(y^{i->-1})) / 2`.
    pub fn expectation(&self, coord: usize) -> Result<TernaryFunction> {
        self.split_on(coord, |hi, lo| (hi + lo) / 2)
    }

    fn split_on(&self, coord: usize, op: impl Fn(i8, i8) -> i8) -> Result<TernaryFunction> {
        check_coord(coord, self.arity)?;
        let b = coord - 1;
        let values = (0..1u64 << (self.arity - 1))
            .map(|y| {
                let lo = insert_bit(y, b, false);
                let hi = lo | 1 << b;
                op(sign(self.bit(hi)), sign(self.bit(lo)))
            })
            .collect();
        Ok(TernaryFunction {
            arity: self.arity - 1,
            values,
        })
    }

    /// The restriction `f_{J|z}`: coordinates outside `keep` are fixed to
    /// `fixed` (`±1` values, ascending coordinate order), and the kept
    /// coordinates become `x_1, ..., x_|J|` in ascending order.
    pub fn restrict(&self, keep: &[usize], fixed: &[i8]) -> Result<Self> {
        let n = self.arity;
        let mut keep_mask = 0u64;
        for &c in keep {
            check_coord(c, n)?;
            if keep_mask >> (c - 1) & 1 == 1 {
                return Err(Error::InvalidArgument(format!("coordinate {c} repeated")));
            }
            keep_mask |= 1 << (c - 1);
        }
        if keep.is_empty() {
            return Err(Error::InvalidArgument("restriction to no coordinates".into()));
        }
        let free: Vec<usize> = (0..n).filter(|b| keep_mask >> b & 1 == 1).collect();
        let others: Vec<usize> = (0..n).filter(|b| keep_mask >> b & 1 == 0).collect();
        if fixed.len() != others.len() {
            return Err(Error::DimensionMismatch(format!(
                "restriction fixes {} coordinates but {} values were given",
                others.len(),
                fixed.len()
            )));
        }
        let mut base = 0u64;
        for (&b, &v) in others.iter().zip(fixed) {
            match v {
                1 => base |= 1 << b,
                -1 => {}
                _ => {
                    return Err(Error::InvalidArgument(format!(
                        "assignment value {v} is not ±1"
                    )))
                }
            }
        }
        Self::from_fn(free.len(), |y| {
            let x = free
                .iter()
                .enumerate()
                .fold(base, |acc, (j, &b)| acc | (y >> j & 1) << b);
            self.bit(x)
        })
    }

    /// Lowercase hex, least-significant bit = input index 0, exactly
    /// `ceil(2^n / 4)` digits.
    pub fn to_hex(&self) -> String {
        let digits = hex_digits(self.arity);
        let mut out = String::with_capacity(digits);
        for d in (0..digits).rev() {
            let word = self.words[d / 16];
            let nibble = (word >> ((d % 16) * 4)) & 0xf;
            out.push(char::from_digit(nibble as u32, 16).unwrap());
        }
        out
    }

    pub fn from_hex(arity: usize, hex: &str) -> Result<Self> {
        if arity == 0 || arity > MAX_ARITY {
            return Err(Error::UnsupportedArity(arity));
        }
        let hex = hex.trim();
        let hex = hex.strip_prefix("0x").unwrap_or(hex);
        let expected = hex_digits(arity);
        if hex.len() != expected {
            return Err(Error::TableLength {
                arity,
                expected,
                got: hex.len(),
            });
        }
        let mut g = Self::constant(arity, false)?;
        for (pos, ch) in hex.chars().rev().enumerate() {
            let nibble = ch
                .to_digit(16)
                .ok_or_else(|| Error::MalformedHex(format!("invalid digit {ch:?}")))?
                as u64;
            g.words[pos / 16] |= nibble << ((pos % 16) * 4);
        }
        if arity < 2 && g.words[0] & !valid_mask(arity) != 0 {
            return Err(Error::MalformedHex(format!(
                "value {hex} exceeds 2^{} table bits",
                1u64 << arity
            )));
        }
        Ok(g)
    }

    /// `f(x)` for an explicit `±1` vector.
    pub fn evaluate_point(&self, x: &[i8]) -> Result<i8> {
        if x.len() != self.arity {
            return Err(Error::DimensionMismatch(format!(
                "point has {} coordinates, function has arity {}",
                x.len(),
                self.arity
            )));
        }
        self.evaluate(point_index(x))
    }
}

impl fmt::Debug for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BooleanFunction({}, {})", self.arity, self.to_hex())
    }
}

/// A `{-1, 0, 1}`-valued function, the image of `D_i` or `E_i` on a `±1`
/// function. Arity may be zero (a single value).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TernaryFunction {
    arity: usize,
    values: Vec<i8>,
}

impl TernaryFunction {
    pub fn new(arity: usize, values: Vec<i8>) -> Result<Self> {
        if values.len() as u64 != 1u64 << arity {
            return Err(Error::DimensionMismatch(format!(
                "{} values for arity {arity}",
                values.len()
            )));
        }
        if values.iter().any(|v| !(-1..=1).contains(v)) {
            return Err(Error::InvalidArgument("values must lie in {-1,0,1}".into()));
        }
        Ok(TernaryFunction { arity, values })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn values(&self) -> &[i8] {
        &self.values
    }

    pub fn value(&self, k: u64) -> i8 {
        self.values[k as usize]
    }

    /// `E_y[|g(y)|]`.
    pub fn mean_abs(&self) -> Dyadic {
        let nonzero = self.values.iter().filter(|&&v| v != 0).count();
        Dyadic::new(nonzero as u64, self.arity as u32)
    }
}

/// Input index of a `±1` point.
pub fn point_index(x: &[i8]) -> u64 {
    x.iter()
        .enumerate()
        .fold(0, |acc, (b, &v)| if v > 0 { acc | 1 << b } else { acc })
}

/// `x_i` at input index `k` (1-based coordinate).
#[inline]
pub fn coordinate(k: u64, coord: usize) -> i8 {
    sign(k >> (coord - 1) & 1 == 1)
}

#[inline]
fn sign(bit: bool) -> i8 {
    if bit {
        1
    } else {
        -1
    }
}

/// Inserts `bit` at position `b`, shifting higher bits up.
#[inline]
pub(crate) fn insert_bit(y: u64, b: usize, bit: bool) -> u64 {
    let low = y & ((1u64 << b) - 1);
    let high = (y >> b) << (b + 1);
    high | low | (bit as u64) << b
}

fn valid_mask(arity: usize) -> u64 {
    if arity >= 6 {
        u64::MAX
    } else {
        (1u64 << (1u32 << arity)) - 1
    }
}

fn hex_digits(arity: usize) -> usize {
    (1u64 << arity).div_ceil(4) as usize
}

pub(crate) fn check_coord(coord: usize, arity: usize) -> Result<()> {
    if coord == 0 || coord > arity {
        return Err(Error::CoordinateOutOfRange { coord, arity });
    }
    Ok(())
}
