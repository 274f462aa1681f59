//! Quadratic threshold functions: representability by exact LP, supports,
//! symmetric PTFs, majority, and the conjectured maximum `I_GL(n, d)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::boolean::{coordinate, BooleanFunction};
use crate::dyadic::{binomial, Dyadic};
use crate::error::{Error, Result};
use crate::graphs::SupportGraph;
use crate::lp::{LinearProgram, LpOutcome, Solver};

/// `q(x) = c + Σ b_i x_i + Σ_{i<j} a_ij x_i x_j`, coordinates 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticPolynomial {
    arity: usize,
    constant: BigRational,
    linear: Vec<BigRational>,
    quadratic: BTreeMap<(usize, usize), BigRational>,
}

/// A monomial of a multilinear quadratic: `1`, `x_i`, or `x_i x_j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Monomial {
    Constant,
    Linear(usize),
    Pair(usize, usize),
}

impl Monomial {
    /// Value at input index `k`.
    pub fn evaluate(self, k: u64) -> i8 {
        match self {
            Monomial::Constant => 1,
            Monomial::Linear(i) => coordinate(k, i),
            Monomial::Pair(i, j) => coordinate(k, i) * coordinate(k, j),
        }
    }
}

/// Monomials in column order: constant, `x_1..x_n`, then the allowed pairs
/// in lexicographic order (all pairs when `support` is `None`).
pub fn monomials(arity: usize, support: Option<&SupportGraph>) -> Vec<Monomial> {
    let mut out = vec![Monomial::Constant];
    out.extend((1..=arity).map(Monomial::Linear));
    for i in 1..=arity {
        for j in i + 1..=arity {
            if support.is_none_or(|g| g.has_edge(i, j)) {
                out.push(Monomial::Pair(i, j));
            }
        }
    }
    out
}

impl QuadraticPolynomial {
    pub fn zero(arity: usize) -> Self {
        QuadraticPolynomial {
            arity,
            constant: BigRational::zero(),
            linear: vec![BigRational::zero(); arity],
            quadratic: BTreeMap::new(),
        }
    }

    pub fn from_integers(
        arity: usize,
        constant: i64,
        linear: &[i64],
        quadratic: &[((usize, usize), i64)],
    ) -> Result<Self> {
        if linear.len() != arity {
            return Err(Error::DimensionMismatch(format!(
                "{} linear coefficients for arity {arity}",
                linear.len()
            )));
        }
        let mut q = Self::zero(arity);
        q.constant = BigRational::from_integer(constant.into());
        q.linear = linear
            .iter()
            .map(|&b| BigRational::from_integer(b.into()))
            .collect();
        for &((i, j), a) in quadratic {
            q.set(Monomial::Pair(i, j), BigRational::from_integer(a.into()))?;
        }
        Ok(q)
    }

    /// Assembles a polynomial from coefficients listed against `monomials`.
    pub fn from_coefficients(
        arity: usize,
        monomials: &[Monomial],
        coefficients: &[BigRational],
    ) -> Result<Self> {
        if monomials.len() != coefficients.len() {
            return Err(Error::DimensionMismatch(
                "monomial and coefficient counts differ".into(),
            ));
        }
        let mut q = Self::zero(arity);
        for (&m, c) in monomials.iter().zip(coefficients) {
            q.set(m, c.clone())?;
        }
        Ok(q)
    }

    pub fn set(&mut self, monomial: Monomial, value: BigRational) -> Result<()> {
        match monomial {
            Monomial::Constant => self.constant = value,
            Monomial::Linear(i) => {
                crate::boolean::check_coord(i, self.arity)?;
                self.linear[i - 1] = value;
            }
            Monomial::Pair(i, j) => {
                let (i, j) = (i.min(j), i.max(j));
                crate::boolean::check_coord(j, self.arity)?;
                if i == 0 || i == j {
                    return Err(Error::InvalidArgument(format!(
                        "({i},{j}) is not a pair of distinct coordinates"
                    )));
                }
                if value.is_zero() {
                    self.quadratic.remove(&(i, j));
                } else {
                    self.quadratic.insert((i, j), value);
                }
            }
        }
        Ok(())
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn coefficient(&self, monomial: Monomial) -> BigRational {
        match monomial {
            Monomial::Constant => self.constant.clone(),
            Monomial::Linear(i) => self.linear[i - 1].clone(),
            Monomial::Pair(i, j) => self
                .quadratic
                .get(&(i.min(j), i.max(j)))
                .cloned()
                .unwrap_or_else(BigRational::zero),
        }
    }

    /// Nonzero quadratic coefficients keyed by `(i, j)`, `i < j`.
    pub fn quadratic_terms(&self) -> &BTreeMap<(usize, usize), BigRational> {
        &self.quadratic
    }

    /// `q(x)` at input index `k`.
    pub fn evaluate(&self, k: u64) -> BigRational {
        let mut acc = self.constant.clone();
        for (i, b) in self.linear.iter().enumerate() {
            if !b.is_zero() {
                acc += b * BigRational::from_integer(coordinate(k, i + 1).into());
            }
        }
        for (&(i, j), a) in &self.quadratic {
            acc += a * BigRational::from_integer((coordinate(k, i) * coordinate(k, j)).into());
        }
        acc
    }

    /// `sgn(q(x))` as a truth table; fails if `q` vanishes on the cube.
    pub fn sign_function(&self) -> Result<BooleanFunction> {
        let mut zero_at = None;
        let f = BooleanFunction::from_fn(self.arity, |k| {
            let v = self.evaluate(k);
            if v.is_zero() {
                zero_at.get_or_insert(k);
            }
            v.is_positive()
        })?;
        match zero_at {
            Some(k) => Err(Error::InvalidArgument(format!(
                "polynomial vanishes at input index {k}"
            ))),
            None => Ok(f),
        }
    }

    /// Whether `sgn(q(x)) = f(x)` at every input.
    pub fn represents(&self, f: &BooleanFunction) -> bool {
        f.arity() == self.arity
            && (0..f.len()).all(|k| {
                let v = self.evaluate(k);
                !v.is_zero() && v.is_positive() == f.bit(k)
            })
    }

    /// `{(i, j) : a_ij != 0}`.
    pub fn support(&self) -> SupportGraph {
        SupportGraph::new(self.arity, self.quadratic.keys().copied())
            .expect("stored pairs are valid edges")
    }

    /// Scales by a positive rational so every coefficient is an integer and
    /// their gcd is 1. The sign function is unchanged.
    pub fn integer_cleared(&self) -> QuadraticPolynomial {
        let all: Vec<&BigRational> = std::iter::once(&self.constant)
            .chain(&self.linear)
            .chain(self.quadratic.values())
            .collect();
        let lcm = all
            .iter()
            .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let gcd = all
            .iter()
            .map(|r| (r.numer() * (&lcm / r.denom())).abs())
            .fold(BigInt::zero(), |acc, v| acc.gcd(&v));
        let scale = if gcd.is_zero() {
            BigRational::one()
        } else {
            BigRational::new(lcm, gcd)
        };
        QuadraticPolynomial {
            arity: self.arity,
            constant: &self.constant * &scale,
            linear: self.linear.iter().map(|b| b * &scale).collect(),
            quadratic: self
                .quadratic
                .iter()
                .map(|(&k, a)| (k, a * &scale))
                .collect(),
        }
    }

    /// Integer coefficients in full monomial order (constant, linear, every
    /// pair lexicographically, zeros included). Clears denominators first.
    pub fn integer_coefficients(&self) -> Vec<BigInt> {
        let q = self.integer_cleared();
        monomials(self.arity, None)
            .into_iter()
            .map(|m| q.coefficient(m).to_integer())
            .collect()
    }

    /// Inverse of [`integer_coefficients`](Self::integer_coefficients).
    pub fn from_coefficient_list(arity: usize, coefficients: &[BigInt]) -> Result<Self> {
        let mons = monomials(arity, None);
        if coefficients.len() != mons.len() {
            return Err(Error::DimensionMismatch(format!(
                "arity {arity} needs {} coefficients, got {}",
                mons.len(),
                coefficients.len()
            )));
        }
        let rats: Vec<BigRational> = coefficients
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        Self::from_coefficients(arity, &mons, &rats)
    }
}

impl fmt::Display for QuadraticPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for ((i, j), a) in &self.quadratic {
            terms.push(format!("{a}*x{i}*x{j}"));
        }
        for (i, b) in self.linear.iter().enumerate() {
            if !b.is_zero() {
                terms.push(format!("{b}*x{}", i + 1));
            }
        }
        if !self.constant.is_zero() || terms.is_empty() {
            terms.push(self.constant.to_string());
        }
        write!(f, "{}", terms.join(" + ").replace("+ -", "- "))
    }
}

/// `{(i, j) : a_ij != 0}` as a graph on the polynomial's coordinates.
pub fn support_of(q: &QuadraticPolynomial) -> SupportGraph {
    q.support()
}

/// Result of a representability test.
#[derive(Clone, Debug, PartialEq)]
pub enum Representability {
    /// A polynomial with `sgn(q(x)) = f(x)` everywhere.
    Feasible(QuadraticPolynomial),
    /// Farkas multipliers over the rows `f_x q(x) >= 1`, one per input.
    Infeasible(Vec<BigRational>),
}

impl Representability {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Representability::Feasible(_))
    }

    pub fn witness(&self) -> Option<&QuadraticPolynomial> {
        match self {
            Representability::Feasible(q) => Some(q),
            Representability::Infeasible(_) => None,
        }
    }
}

/// The LP `f_x q(x) >= 1` over the monomials allowed by `support`.
pub fn representability_lp(
    f: &BooleanFunction,
    support: Option<&SupportGraph>,
) -> Result<(LinearProgram, Vec<Monomial>)> {
    if let Some(g) = support {
        if g.num_vertices() != f.arity() {
            return Err(Error::DimensionMismatch(format!(
                "support has {} vertices but the function has arity {}",
                g.num_vertices(),
                f.arity()
            )));
        }
    }
    let mons = monomials(f.arity(), support);
    let rows: Vec<Vec<i64>> = (0..f.len())
        .map(|k| {
            let fx: i64 = if f.bit(k) { 1 } else { -1 };
            mons.iter().map(|m| fx * m.evaluate(k) as i64).collect()
        })
        .collect();
    let rhs = vec![1; rows.len()];
    Ok((LinearProgram::from_integers(&rows, &rhs)?, mons))
}

/// Decides whether `f` is the sign of a quadratic supported on `support`.
pub fn qtf_representable(
    f: &BooleanFunction,
    support: Option<&SupportGraph>,
) -> Result<Representability> {
    representable_with(&Solver::default(), f, support)
}

pub fn representable_with(
    solver: &Solver,
    f: &BooleanFunction,
    support: Option<&SupportGraph>,
) -> Result<Representability> {
    let (lp, mons) = representability_lp(f, support)?;
    match solver.feasibility(&lp)?.outcome {
        LpOutcome::Feasible(q) => {
            let q = QuadraticPolynomial::from_coefficients(f.arity(), &mons, &q)?.integer_cleared();
            if !q.represents(f) {
                return Err(Error::Internal("QTF witness disagrees with truth table".into()));
            }
            Ok(Representability::Feasible(q))
        }
        LpOutcome::Infeasible(y) => Ok(Representability::Infeasible(y)),
        other => Err(Error::Internal(format!(
            "unexpected feasibility outcome {other:?}"
        ))),
    }
}

/// Roots of the alternating symmetric polynomial `p_d`, in factor order:
/// `0, 2, -2, 4, -4, ...` for odd `n`, each shifted by `-1` for even `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricPtfSpec {
    arity: usize,
    degree: usize,
    roots: Vec<i64>,
}

impl SymmetricPtfSpec {
    pub fn new(arity: usize, degree: usize) -> Result<Self> {
        if degree == 0 || degree > arity {
            return Err(Error::InvalidArgument(format!(
                "degree {degree} outside 1..={arity}"
            )));
        }
        let shift = if arity.is_multiple_of(2) { -1 } else { 0 };
        let roots = (0..degree as i64)
            .map(|j| {
                // 0, 2, -2, 4, -4, ...
                let magnitude = 2 * ((j + 1) / 2);
                let r = if j % 2 == 1 { magnitude } else { -magnitude };
                r + shift
            })
            .collect();
        Ok(SymmetricPtfSpec {
            arity,
            degree,
            roots,
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn roots(&self) -> &[i64] {
        &self.roots
    }

    /// `p_d(t)` evaluated exactly.
    pub fn evaluate(&self, t: i64) -> BigInt {
        self.roots
            .iter()
            .fold(BigInt::one(), |acc, &r| acc * BigInt::from(t - r))
    }

    /// Truth table of `sgn(p_d(x_1 + ... + x_n))`.
    pub fn to_function(&self) -> Result<BooleanFunction> {
        let n = self.arity as i64;
        for t in (-n..=n).step_by(2) {
            if self.evaluate(t).is_zero() {
                return Err(Error::Internal(format!(
                    "root of p_{} coincides with attainable sum {t}",
                    self.degree
                )));
            }
        }
        BooleanFunction::from_fn(self.arity, |k| {
            let t = 2 * k.count_ones() as i64 - n;
            self.evaluate(t).is_positive()
        })
    }
}

pub fn symmetric_ptf(n: usize, d: usize) -> Result<BooleanFunction> {
    SymmetricPtfSpec::new(n, d)?.to_function()
}

/// The conjectured maximum influence `I_GL(n, d)` for `2 <= d <= n`, as the
/// binomial sum with the floor branch for even `n` and ceiling for odd `n`.
///
/// The sum agrees with the symmetric PTF's influence at `d = 2`; larger `d`
/// repeats boundary terms and is returned as written.
pub fn igl(n: usize, d: usize) -> Result<Dyadic> {
    if d < 2 || d > n {
        return Err(Error::InvalidArgument(format!(
            "I_GL(n, d) is defined for 2 <= d <= n, got n = {n}, d = {d}"
        )));
    }
    let n_i = n as i64;
    let sum: BigInt = (0..d as i64)
        .map(|k| {
            let j = if n.is_multiple_of(2) {
                (n_i - k).div_euclid(2)
            } else {
                (n_i - k + 1).div_euclid(2)
            };
            binomial(n_i, j) * BigInt::from(n_i - j)
        })
        .sum();
    Ok(Dyadic::new(sum, n as u32 - 1))
}

/// Closed form of `I_GL(n, 2)`: `n 2^{1-n} C(n, (n-1)/2)` for odd `n`, and
/// `n 2^{-n} [C(n, n/2) + 2 C(n-1, (n-2)/2)]` for even `n`.
pub fn igl2_closed(n: usize) -> Result<Dyadic> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need n >= 2, got {n}")));
    }
    let n_i = n as i64;
    if n % 2 == 1 {
        let v = BigInt::from(n_i) * binomial(n_i, (n_i - 1) / 2);
        Ok(Dyadic::new(v, n as u32 - 1))
    } else {
        Ok(igl2_even_form(n))
    }
}

/// The even-`n` expression `n 2^{-n} [C(n, ⌊n/2⌋) + 2 C(n-1, ⌊(n-1)/2⌋)]`
/// written with central binomials, so it can also be evaluated at odd `n`.
/// At `n = 5` it gives 55/16 = 3.4375, which no symmetric QTF attains.
pub fn igl2_even_form(n: usize) -> Dyadic {
    let n_i = n as i64;
    let bracket = binomial(n_i, n_i / 2) + BigInt::from(2) * binomial(n_i - 1, (n_i - 1) / 2);
    Dyadic::new(BigInt::from(n_i) * bracket, n as u32)
}

/// `MAJ_n(x) = sgn(x_1 + ... + x_n)` for odd `n`.
pub fn maj(n: usize) -> Result<BooleanFunction> {
    if n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "majority needs an odd number of variables, got {n}"
        )));
    }
    BooleanFunction::from_fn(n, |k| 2 * k.count_ones() as usize > n)
}

/// Largest total influence of an `n`-variable LTF,
/// `n 2^{-(n-1)} C(n-1, ⌊(n-1)/2⌋)`; equals `I[MAJ_n]` for odd `n`.
pub fn maj_influence(n: usize) -> Result<Dyadic> {
    if n == 0 {
        return Err(Error::InvalidArgument("need n >= 1".into()));
    }
    let n_i = n as i64;
    let v = BigInt::from(n_i) * binomial(n_i - 1, (n_i - 1) / 2);
    Ok(Dyadic::new(v, n as u32 - 1))
}
