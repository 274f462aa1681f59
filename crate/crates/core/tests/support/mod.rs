//! Brute-force oracles shared by the integration tests. None of these call
//! into the routines they check.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ptflab::{BooleanFunction, Dyadic};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_function(rng: &mut ChaCha8Rng, n: usize) -> BooleanFunction {
    BooleanFunction::from_fn(n, |_| rng.gen::<bool>()).unwrap()
}

/// The `±1` point with input index `k`.
pub fn point(n: usize, k: u64) -> Vec<i8> {
    (0..n).map(|b| if k >> b & 1 == 1 { 1 } else { -1 }).collect()
}

/// `Pr_x[f(x) != f(x with coordinate i flipped)]`, by walking every point.
pub fn influence_by_flips(f: &BooleanFunction, coord: usize) -> Dyadic {
    let n = f.arity();
    let mut changes = 0u64;
    for k in 0..1u64 << n {
        let mut x = point(n, k);
        let before = f.evaluate_point(&x).unwrap();
        x[coord - 1] = -x[coord - 1];
        if f.evaluate_point(&x).unwrap() != before {
            changes += 1;
        }
    }
    Dyadic::new(changes, n as u32)
}

pub fn total_influence_by_flips(f: &BooleanFunction) -> Dyadic {
    (1..=f.arity()).map(|i| influence_by_flips(f, i)).sum()
}

/// `E_x[f(x) Π_{i∈S} x_i]` term by term over explicit points.
pub fn fourier_coefficient(f: &BooleanFunction, set: &[usize]) -> Dyadic {
    let n = f.arity();
    let mut sum = 0i64;
    for k in 0..1u64 << n {
        let x = point(n, k);
        let chi: i64 = set.iter().map(|&i| x[i - 1] as i64).product();
        sum += f.evaluate_point(&x).unwrap() as i64 * chi;
    }
    Dyadic::new(sum, n as u32)
}

/// Feasibility of `A q >= r` over free `q` by Fourier–Motzkin elimination.
pub fn fourier_motzkin_feasible(a: &[Vec<BigRational>], r: &[BigRational]) -> bool {
    let d = a.first().map_or(0, |row| row.len());
    let mut rows: Vec<(Vec<BigRational>, BigRational)> =
        a.iter().cloned().zip(r.iter().cloned()).collect();
    for j in 0..d {
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for (row, rhs) in rows {
            if row[j].is_positive() {
                pos.push((row, rhs));
            } else if row[j].is_negative() {
                neg.push((row, rhs));
            } else {
                rest.push((row, rhs));
            }
        }
        for (p, pr) in &pos {
            for (q, qr) in &neg {
                let (sp, sq) = (q[j].abs(), p[j].clone());
                let row: Vec<BigRational> =
                    p.iter().zip(q).map(|(x, y)| x * &sp + y * &sq).collect();
                rest.push((row, pr * &sp + qr * &sq));
            }
        }
        rows = rest;
    }
    rows.iter().all(|(_, rhs)| !rhs.is_positive())
}

pub fn rational(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// `q(x)` for integer coefficients in the order constant, `x_1..x_n`, then
/// pairs `(i, j)`, `i < j`, lexicographically.
pub fn evaluate_coefficients(n: usize, coefficients: &[i64], k: u64) -> i64 {
    let x = point(n, k);
    let mut value = coefficients[0];
    let mut idx = 1;
    for xi in &x {
        value += coefficients[idx] * *xi as i64;
        idx += 1;
    }
    for i in 0..n {
        for j in i + 1..n {
            value += coefficients[idx] * (x[i] * x[j]) as i64;
            idx += 1;
        }
    }
    assert_eq!(idx, coefficients.len(), "coefficient count for arity {n}");
    value
}

/// Whether `sgn(q(x)) = f(x)` at every input.
pub fn coefficients_represent(f: &BooleanFunction, coefficients: &[i64]) -> bool {
    (0..f.len()).all(|k| {
        let v = evaluate_coefficients(f.arity(), coefficients, k);
        v != 0 && (v > 0) == f.bit(k)
    })
}

pub fn is_zero_or_positive(r: &BigRational) -> bool {
    r.is_zero() || r.is_positive()
}
