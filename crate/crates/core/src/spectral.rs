//! Exact Walsh–Hadamard (Fourier) transform over `{-1,1}^n`.
//!
//! Coefficients are stored densely as integer numerators over a shared
//! power-of-two denominator, so every identity below is checked exactly.

use num_bigint::BigInt;

use crate::boolean::{BooleanFunction, TernaryFunction};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};

/// Largest arity for which dense spectra are built.
pub const MAX_DENSE_ARITY: usize = 20;

/// `f̂(S) = numerators[S] / 2^exponent`, with `S` a subset bitmask
/// (bit `i - 1` set iff `i ∈ S`).
#[derive(Clone, Debug)]
pub struct SpectralVector {
    arity: usize,
    exponent: u32,
    numerators: Vec<i64>,
}

/// Equality of values, independent of the shared denominator chosen.
impl PartialEq for SpectralVector {
    fn eq(&self, other: &Self) -> bool {
        let k = self.exponent.max(other.exponent);
        let (sa, sb) = (k - self.exponent, k - other.exponent);
        self.arity == other.arity
            && self
                .numerators
                .iter()
                .zip(&other.numerators)
                .all(|(&a, &b)| (a as i128) << sa == (b as i128) << sb)
    }
}

impl Eq for SpectralVector {}

impl SpectralVector {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn coefficient(&self, mask: u64) -> Dyadic {
        Dyadic::new(self.numerators[mask as usize], self.exponent)
    }

    /// Nonzero coefficients in ascending mask order.
    pub fn nonzero(&self) -> impl Iterator<Item = (u64, Dyadic)> + '_ {
        self.numerators
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(s, &v)| (s as u64, Dyadic::new(v, self.exponent)))
    }

    /// `Σ_S f̂(S)^2`.
    pub fn squared_norm(&self) -> Dyadic {
        self.sum_squares(|_| true)
    }

    /// `Inf_i[f] = Σ_{S ∋ i} f̂(S)^2`.
    pub fn influence(&self, coord: usize) -> Result<Dyadic> {
        crate::boolean::check_coord(coord, self.arity)?;
        let bit = 1usize << (coord - 1);
        Ok(self.sum_squares(|s| s & bit != 0))
    }

    /// `Σ_i |f̂({i})|`, which equals the total influence for an LTF.
    pub fn level_one_mass(&self) -> Dyadic {
        (0..self.arity)
            .map(|b| Dyadic::new(self.numerators[1 << b].abs(), self.exponent))
            .sum()
    }

    /// Spectrum of `D_i f`: the coefficients with `i ∈ S`, re-indexed to
    /// `S \ {i}` on the remaining `n - 1` coordinates.
    pub fn derivative(&self, coord: usize) -> Result<SpectralVector> {
        self.project(coord, true)
    }

    /// Spectrum of `E_i f`: the coefficients with `i ∉ S`.
    pub fn expectation(&self, coord: usize) -> Result<SpectralVector> {
        self.project(coord, false)
    }

    /// Inverse transform; fails unless the spectrum is that of a `±1` function.
    pub fn to_function(&self) -> Result<BooleanFunction> {
        let mut v = self.numerators.clone();
        butterfly(&mut v, |a, b| (a - b, a + b));
        let unit = 1i64 << self.exponent;
        if v.iter().any(|&x| x != unit && x != -unit) {
            return Err(Error::InvalidArgument(
                "spectrum does not describe a ±1-valued function".into(),
            ));
        }
        BooleanFunction::from_fn(self.arity, |k| v[k as usize] > 0)
    }

    fn project(&self, coord: usize, containing: bool) -> Result<SpectralVector> {
        crate::boolean::check_coord(coord, self.arity)?;
        let b = coord - 1;
        let numerators = (0..1u64 << (self.arity - 1))
            .map(|t| {
                let s = crate::boolean::insert_bit(t, b, containing);
                self.numerators[s as usize]
            })
            .collect();
        Ok(SpectralVector {
            arity: self.arity - 1,
            exponent: self.exponent,
            numerators,
        })
    }

    fn sum_squares(&self, keep: impl Fn(usize) -> bool) -> Dyadic {
        let total: i128 = self
            .numerators
            .iter()
            .enumerate()
            .filter(|(s, _)| keep(*s))
            .map(|(_, &v)| (v as i128) * (v as i128))
            .sum();
        Dyadic::new(BigInt::from(total), 2 * self.exponent)
    }
}

/// `f̂(S) = E_x[f(x) x_S]` for every `S`, by the fast butterfly.
pub fn wht(f: &BooleanFunction) -> Result<SpectralVector> {
    check_dense(f.arity())?;
    let values = (0..f.len()).map(|k| if f.bit(k) { 1 } else { -1 }).collect();
    Ok(transform(f.arity(), values))
}

/// Transform of a `{-1,0,1}`-valued function such as `D_i f` or `E_i f`.
pub fn wht_ternary(g: &TernaryFunction) -> Result<SpectralVector> {
    check_dense(g.arity())?;
    Ok(transform(
        g.arity(),
        g.values().iter().map(|&v| v as i64).collect(),
    ))
}

fn transform(arity: usize, mut values: Vec<i64>) -> SpectralVector {
    // One coordinate: f̂(∅) = (f(-1) + f(1)) / 2, f̂({1}) = (f(1) - f(-1)) / 2.
    butterfly(&mut values, |lo, hi| (lo + hi, hi - lo));
    SpectralVector {
        arity,
        exponent: arity as u32,
        numerators: values,
    }
}

fn butterfly(v: &mut [i64], op: impl Fn(i64, i64) -> (i64, i64)) {
    let mut half = 1;
    while half < v.len() {
        for block in v.chunks_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = op(*a, *b);
                *a = x;
                *b = y;
            }
        }
        half *= 2;
    }
}

fn check_dense(arity: usize) -> Result<()> {
    if arity > MAX_DENSE_ARITY {
        return Err(Error::SizeCap(format!(
            "dense spectrum limited to arity {MAX_DENSE_ARITY}, got {arity}"
        )));
    }
    Ok(())
}
