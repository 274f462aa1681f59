//! The family `f_n(x) = sgn(p(x_1, x_2 + ... + x_{n-2}, x_{n-1} + x_n))`
//! for odd `n >= 5`, its influence computed over symmetry classes, the
//! closed binomial sums, and the ratio against `I_GL(n, 2)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::boolean::BooleanFunction;
use crate::dyadic::{binomial, Dyadic};
use crate::error::{Error, Result};
use crate::qtf::{igl, QuadraticPolynomial};

/// Largest `n` for which an explicit truth table is built.
pub const MAX_TABLE_ARITY: usize = 25;

/// `p(x, y, z) = 2x(1 - 7y + z) + 4y - 7y^2 + 4yz + 6z + 3z^2`.
pub fn family_polynomial(x: i64, y: i64, z: i64) -> i64 {
    2 * x * (1 - 7 * y + z) + 4 * y - 7 * y * y + 4 * y * z + 6 * z + 3 * z * z
}

/// The five-variable member written out as a multilinear quadratic.
pub fn explicit_n5() -> QuadraticPolynomial {
    QuadraticPolynomial::from_integers(
        5,
        -4,
        &[1, 2, 2, 3, 3],
        &[
            ((1, 2), -7),
            ((1, 3), -7),
            ((1, 4), 1),
            ((1, 5), 1),
            ((2, 3), -7),
            ((2, 4), 2),
            ((2, 5), 2),
            ((3, 4), 2),
            ((3, 5), 2),
            ((4, 5), 3),
        ],
    )
    .expect("valid coefficients")
}

fn check_arity(n: usize) -> Result<()> {
    if n < 5 || n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "the family is defined for odd n >= 5, got {n}"
        )));
    }
    Ok(())
}

/// One class `(x_1, s, u)` with `s` the middle sum and `u = x_{n-1} + x_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyClass {
    pub x1: i64,
    pub s: i64,
    pub u: i64,
    /// Probability of the class under the uniform distribution.
    pub weight: Dyadic,
    pub value: bool,
}

/// Symbolic form of `f_n`: its value on each class with the class weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyInstance {
    n: usize,
    classes: Vec<FamilyClass>,
}

impl FamilyInstance {
    pub fn new(n: usize) -> Result<Self> {
        check_arity(n)?;
        let m = (n - 3) as i64;
        let mut classes = Vec::new();
        for x1 in [-1i64, 1] {
            for j in 0..=m {
                let s = 2 * j - m;
                for (u, w) in [(-2i64, 1i64), (0, 2), (2, 1)] {
                    let p = family_polynomial(x1, s, u);
                    if p == 0 {
                        return Err(Error::Internal(format!(
                            "p vanishes at x = {x1}, y = {s}, z = {u}"
                        )));
                    }
                    classes.push(FamilyClass {
                        x1,
                        s,
                        u,
                        weight: Dyadic::new(binomial(m, j) * BigInt::from(w), n as u32),
                        value: p > 0,
                    });
                }
            }
        }
        Ok(FamilyInstance { n, classes })
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn classes(&self) -> &[FamilyClass] {
        &self.classes
    }

    fn value(&self, x1: i64, s: i64, u: i64) -> bool {
        family_polynomial(x1, s, u) > 0
    }

    /// `Inf_1`, the middle block's total, and `Inf_{n-1} = Inf_n`, counted
    /// class by class.
    pub fn influence_parts(&self) -> FamilyInfluence {
        let n = self.n;
        let m = (n - 3) as i64;
        let scale = n as u32 - 1;
        let mut first = BigInt::zero();
        let mut middle = BigInt::zero();
        let mut last = BigInt::zero();
        for j in 0..=m {
            let s = 2 * j - m;
            let c = binomial(m, j);
            for (u, w) in [(-2i64, 1i64), (0, 2), (2, 1)] {
                // Flipping x_1: pairs over the other n - 1 coordinates.
                if self.value(1, s, u) != self.value(-1, s, u) {
                    first += &c * w;
                }
                // Flipping one middle coordinate from -1 to +1: level j to j + 1.
                for x1 in [-1i64, 1] {
                    if j < m && self.value(x1, s, u) != self.value(x1, s + 2, u) {
                        middle += &c * BigInt::from(m - j) * w;
                    }
                }
            }
            // Flipping x_{n-1} with x_n fixed moves u between -2 and 0 or 0 and 2.
            for x1 in [-1i64, 1] {
                for (a, b) in [(-2i64, 0i64), (0, 2)] {
                    if self.value(x1, s, a) != self.value(x1, s, b) {
                        last += &c;
                    }
                }
            }
        }
        let first = Dyadic::new(first, scale);
        let middle = Dyadic::new(middle, scale);
        let last = Dyadic::new(last, scale);
        let total = &first + &middle + &last + &last;
        FamilyInfluence {
            first,
            middle,
            last,
            total,
        }
    }
}

/// Influence of `f_n` split by coordinate block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyInfluence {
    pub first: Dyadic,
    /// `Σ_{i=2}^{n-2} Inf_i`.
    pub middle: Dyadic,
    /// `Inf_{n-1} = Inf_n`.
    pub last: Dyadic,
    pub total: Dyadic,
}

/// Explicit truth table of `f_n` for `n <= 25`.
pub fn build_family(n: usize) -> Result<BooleanFunction> {
    check_arity(n)?;
    if n > MAX_TABLE_ARITY {
        return Err(Error::SizeCap(format!(
            "explicit tables limited to n <= {MAX_TABLE_ARITY}; use FamilyInstance"
        )));
    }
    let mid_mask = ((1u64 << (n - 3)) - 1) << 1;
    let m = (n - 3) as i64;
    BooleanFunction::from_fn(n, |k| {
        let x1 = if k & 1 == 1 { 1 } else { -1 };
        let s = 2 * (k & mid_mask).count_ones() as i64 - m;
        let u = 2 * (k >> (n - 2)).count_ones() as i64 - 2;
        family_polynomial(x1, s, u) > 0
    })
}

pub fn family_influence_parts(n: usize) -> Result<FamilyInfluence> {
    Ok(FamilyInstance::new(n)?.influence_parts())
}

/// Exact `I[f_n]` in time polynomial in `n`.
pub fn family_influence_fast(n: usize) -> Result<Dyadic> {
    Ok(family_influence_parts(n)?.total)
}

fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// `2^{-m} Σ_k C(m, m/2 - k) (a_k m + b_k)` with `m = n - 3` and
/// `C(m, j) = 0` for `j < 0`.
fn binomial_sum(n: usize, terms: &[(BigRational, BigRational)]) -> BigRational {
    let m = (n - 3) as i64;
    let sum = terms
        .iter()
        .enumerate()
        .fold(BigRational::zero(), |acc, (k, (a, b))| {
            let c = BigRational::from_integer(binomial(m, m / 2 - k as i64));
            acc + c * (a * BigRational::from_integer(m.into()) + b)
        });
    sum / BigRational::from_integer(BigInt::one() << (m as usize))
}

/// Denominator of the last middle-block term, `C(m, m/2 - 3)(m + 6)/d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MiddleDenominator {
    Fifteen,
    Sixteen,
}

/// The middle block's displayed binomial sum, with either denominator in
/// its last term.
pub fn closed_middle(n: usize, last_term: MiddleDenominator) -> Result<BigRational> {
    check_arity(n)?;
    let d = match last_term {
        MiddleDenominator::Fifteen => 15,
        MiddleDenominator::Sixteen => 16,
    };
    Ok(binomial_sum(
        n,
        &[
            (frac(11, 16), frac(0, 1)),
            (frac(15, 16), frac(7, 8)),
            (frac(5, 16), frac(3, 4)),
            (frac(1, d), frac(6, d)),
        ],
    ))
}

/// Displayed sum for `Inf_1`.
pub fn closed_first(n: usize) -> Result<BigRational> {
    check_arity(n)?;
    Ok(binomial_sum(
        n,
        &[(frac(0, 1), frac(3, 4)), (frac(0, 1), frac(5, 4)), (frac(0, 1), frac(1, 4))],
    ))
}

/// Displayed sum for `Inf_{n-1} = Inf_n`.
pub fn closed_last(n: usize) -> Result<BigRational> {
    check_arity(n)?;
    Ok(binomial_sum(
        n,
        &[(frac(0, 1), frac(3, 4)), (frac(0, 1), frac(3, 4)), (frac(0, 1), frac(1, 4))],
    ))
}

/// The total binomial sum for `I[f_n]`.
pub fn family_influence_closed(n: usize) -> Result<Dyadic> {
    check_arity(n)?;
    let total = binomial_sum(
        n,
        &[
            (frac(11, 16), frac(9, 4)),
            (frac(15, 16), frac(29, 8)),
            (frac(5, 16), frac(3, 2)),
            (frac(1, 16), frac(3, 8)),
        ],
    );
    Dyadic::from_ratio(&total)
        .ok_or_else(|| Error::Internal(format!("closed sum {total} is not dyadic")))
}

/// `I_GL(n, 2) = 2^{-m} C(m + 3, m/2 + 1)(m + 3)/4` with `m = n - 3`.
pub fn igl2_m_form(n: usize) -> Result<Dyadic> {
    check_arity(n)?;
    let m = (n - 3) as i64;
    let v = binomial(m + 3, m / 2 + 1) * BigInt::from(m + 3);
    Ok(Dyadic::new(v, m as u32 + 2))
}

/// `1 + 7/(32n) - 3/(32(n-2)) + 3/(16n^2)`.
pub fn ratio_expression(n: usize) -> BigRational {
    let n = n as i64;
    BigRational::one() + frac(7, 32 * n) - frac(3, 32 * (n - 2)) + frac(3, 16 * n * n)
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilyRatio {
    pub influence: Dyadic,
    pub igl: Dyadic,
    /// `I[f_n] / I_GL(n, 2)`, exact.
    pub ratio: BigRational,
    pub expression: BigRational,
    /// `ratio - expression`.
    pub residual: BigRational,
}

pub fn family_ratio(n: usize) -> Result<FamilyRatio> {
    let influence = family_influence_fast(n)?;
    let igl = igl(n, 2)?;
    let m_form = igl2_m_form(n)?;
    if m_form != igl {
        return Err(Error::Internal(format!(
            "I_GL({n}, 2): binomial sum {igl} but m-form {m_form}"
        )));
    }
    let ratio = influence.to_ratio() / igl.to_ratio();
    let expression = ratio_expression(n);
    let residual = &ratio - &expression;
    Ok(FamilyRatio {
        influence,
        igl,
        ratio,
        expression,
        residual,
    })
}
