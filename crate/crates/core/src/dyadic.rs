//! Exact rationals of the form `numerator / 2^exponent`.
//!
//! Every probability over the uniform hypercube is dyadic, so influences,
//! Fourier coefficients and the closed-form bounds all live here. Values are
//! kept canonical (odd numerator or zero with exponent 0), which makes
//! structural equality coincide with numeric equality.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    numerator: BigInt,
    exponent: u32,
}

impl Dyadic {
    /// Builds `numerator / 2^exponent` and reduces it.
    pub fn new(numerator: impl Into<BigInt>, exponent: u32) -> Self {
        let mut value = Dyadic {
            numerator: numerator.into(),
            exponent,
        };
        value.normalize();
        value
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Dyadic::new(n, 0)
    }

    pub fn zero() -> Self {
        Dyadic {
            numerator: BigInt::zero(),
            exponent: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic::from_integer(1)
    }

    pub fn numerator(&self) -> &BigInt {
        &self.numerator
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn denominator(&self) -> BigInt {
        BigInt::one() << self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            numerator: self.numerator.abs(),
            exponent: self.exponent,
        }
    }

    /// Multiplies by `2^-k`.
    pub fn halve(&self, k: u32) -> Self {
        Dyadic::new(self.numerator.clone(), self.exponent + k)
    }

    /// Converts a rational whose reduced denominator is a power of two.
    pub fn from_ratio(r: &BigRational) -> Option<Self> {
        let denom = r.denom();
        let bits = denom.bits();
        if bits == 0 || denom != &(BigInt::one() << (bits - 1)) {
            return None;
        }
        Some(Dyadic::new(r.numer().clone(), (bits - 1) as u32))
    }

    pub fn to_ratio(&self) -> BigRational {
        BigRational::new(self.numerator.clone(), self.denominator())
    }

    /// Nearest-ish float; exact up to the 62 leading bits of the numerator,
    /// and safe for exponents far beyond the `f64` range.
    pub fn to_f64(&self) -> f64 {
        let drop = self.numerator.bits().saturating_sub(62);
        let top = (&self.numerator >> drop).to_f64().unwrap_or(f64::NAN);
        let mut e = drop as i64 - self.exponent as i64;
        let mut value = top;
        while e != 0 && value != 0.0 && value.is_finite() {
            let step = e.clamp(-1000, 1000);
            value *= 2f64.powi(step as i32);
            e -= step;
        }
        value
    }

    /// Full decimal expansion; always finite for a dyadic.
    pub fn to_decimal(&self) -> String {
        let k = self.exponent;
        if k == 0 {
            return self.numerator.to_string();
        }
        // n / 2^k = n * 5^k / 10^k
        let scaled = self.numerator.abs() * num_traits::pow(BigInt::from(5), k as usize);
        let mut digits = scaled.to_string();
        let k = k as usize;
        if digits.len() <= k {
            digits = format!("{}{}", "0".repeat(k + 1 - digits.len()), digits);
        }
        let (int_part, frac_part) = digits.split_at(digits.len() - k);
        let sign = if self.numerator.is_negative() { "-" } else { "" };
        format!("{sign}{int_part}.{frac_part}")
    }

    fn normalize(&mut self) {
        if self.numerator.is_zero() {
            self.exponent = 0;
            return;
        }
        let twos = self.numerator.trailing_zeros().unwrap_or(0);
        let shift = twos.min(self.exponent as u64) as u32;
        if shift > 0 {
            self.numerator >>= shift;
            self.exponent -= shift;
        }
    }

    fn aligned(&self, other: &Dyadic) -> (BigInt, BigInt, u32) {
        let k = self.exponent.max(other.exponent);
        (
            &self.numerator << (k - self.exponent),
            &other.numerator << (k - other.exponent),
            k,
        )
    }
}

impl Default for Dyadic {
    fn default() -> Self {
        Dyadic::zero()
    }
}

impl From<i64> for Dyadic {
    fn from(n: i64) -> Self {
        Dyadic::from_integer(n)
    }
}

/// Always `numerator/denominator`, integers included (`3/1`).
impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator())
    }
}

impl FromStr for Dyadic {
    type Err = Error;

    /// Accepts `a/b` with `b` a power of two, or a plain integer.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || Error::Parse(format!("not a dyadic fraction: {s:?}"));
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        if !den.is_positive() {
            return Err(bad());
        }
        Dyadic::from_ratio(&BigRational::new(num, den)).ok_or_else(bad)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        let (a, b, k) = self.aligned(rhs);
        Dyadic::new(a + b, k)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        let (a, b, k) = self.aligned(rhs);
        Dyadic::new(a - b, k)
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.numerator * &rhs.numerator, self.exponent + rhs.exponent)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            numerator: -&self.numerator,
            exponent: self.exponent,
        }
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait for Dyadic {
            type Output = Dyadic;
            fn $method(self, rhs: Dyadic) -> Dyadic {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Dyadic> for Dyadic {
            type Output = Dyadic;
            fn $method(self, rhs: &Dyadic) -> Dyadic {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        -&self
    }
}

impl Sum for Dyadic {
    fn sum<I: Iterator<Item = Dyadic>>(iter: I) -> Self {
        iter.fold(Dyadic::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Dyadic> for Dyadic {
    fn sum<I: Iterator<Item = &'a Dyadic>>(iter: I) -> Self {
        iter.fold(Dyadic::zero(), |acc, x| acc + x)
    }
}

/// Formats any rational as `numerator/denominator`.
pub fn ratio_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Binomial coefficient `C(n, k)`, zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;
    use proptest::prelude::*;

    #[test]
    fn canonical_form() {
        let d = Dyadic::new(12, 4);
        assert_eq!(d.numerator(), &BigInt::from(3));
        assert_eq!(d.exponent(), 2);
        assert_eq!(Dyadic::new(0, 9), Dyadic::zero());
        assert_eq!(Dyadic::new(8, 2), Dyadic::from_integer(2));
    }

    #[test]
    fn display_and_parse() {
        assert_eq!(Dyadic::new(51, 4).to_string(), "51/16");
        assert_eq!(Dyadic::from_integer(3).to_string(), "3/1");
        assert_eq!("25/8".parse::<Dyadic>().unwrap(), Dyadic::new(25, 3));
        assert_eq!("6/4".parse::<Dyadic>().unwrap(), Dyadic::new(3, 1));
        assert_eq!("-2".parse::<Dyadic>().unwrap(), Dyadic::from_integer(-2));
        assert!("1/3".parse::<Dyadic>().is_err());
        assert!("1/0".parse::<Dyadic>().is_err());
        assert!("x".parse::<Dyadic>().is_err());
    }

    #[test]
    fn decimal_expansion() {
        assert_eq!(Dyadic::new(25, 3).to_decimal(), "3.125");
        assert_eq!(Dyadic::new(51, 4).to_decimal(), "3.1875");
        assert_eq!(Dyadic::new(-1, 2).to_decimal(), "-0.25");
        assert_eq!(Dyadic::new(1, 5).to_decimal(), "0.03125");
        assert_eq!(Dyadic::from_integer(7).to_decimal(), "7");
    }

    #[test]
    fn exact_comparison() {
        assert!(Dyadic::new(51, 4) > Dyadic::new(25, 3));
        assert!(Dyadic::new(249, 6) > Dyadic::new(245, 6));
        assert_eq!(Dyadic::new(1, 1).cmp(&Dyadic::new(2, 2)), Ordering::Equal);
    }

    #[test]
    fn huge_exponent_to_float() {
        let x = Dyadic::new(BigInt::from(3) << 10_000usize, 10_001);
        assert_eq!(x.to_f64(), 1.5);
        assert_eq!(Dyadic::new(-5, 2).to_f64(), -1.25);
        assert_eq!(Dyadic::new(1, 2000).to_f64(), 0.0);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(4, -1), BigInt::zero());
        assert_eq!(binomial(4, 5), BigInt::zero());
        assert_eq!(binomial(40, 20), BigInt::from(137_846_528_820u64));
    }

    proptest! {
        #[test]
        fn ring_ops_match_rationals(a in -1000i64..1000, ka in 0u32..12, b in -1000i64..1000, kb in 0u32..12) {
            let x = Dyadic::new(a, ka);
            let y = Dyadic::new(b, kb);
            let (rx, ry) = (x.to_ratio(), y.to_ratio());
            prop_assert_eq!((&x + &y).to_ratio(), &rx + &ry);
            prop_assert_eq!((&x - &y).to_ratio(), &rx - &ry);
            prop_assert_eq!((&x * &y).to_ratio(), &rx * &ry);
            prop_assert_eq!(x.cmp(&y), rx.cmp(&ry));
            let sum = &x + &y;
            prop_assert!(sum.is_zero() || sum.exponent() == 0 || sum.numerator().is_odd());
        }
    }
}
