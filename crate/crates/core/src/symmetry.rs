//! Signed permutations of the cube acting on small truth tables and on
//! quadratic polynomials. Influence and QTF-ness (for a support closed
//! under the permutation) are invariant under this action, which lets the
//! searches test one representative per orbit.

use num_rational::BigRational;

use crate::qtf::{Monomial, QuadraticPolynomial};

/// `x ↦ z` with `z_{π(i)} = (-1)^{s_i} x_i`, and the output negated when
/// `negate_output` is set. Coordinates here are 0-based bit positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedPermutation {
    perm: Vec<usize>,
    flips: u64,
    negate_output: bool,
    /// `index_map[k]` is the image of input index `k`.
    index_map: Vec<u8>,
}

impl SignedPermutation {
    pub fn new(perm: Vec<usize>, flips: u64, negate_output: bool) -> Self {
        let n = perm.len();
        assert!(n <= 6, "signed permutations act on at most 6 coordinates");
        let index_map = (0..1u64 << n)
            .map(|k| {
                let x = k ^ flips;
                (0..n).fold(0u64, |z, i| z | (x >> i & 1) << perm[i]) as u8
            })
            .collect();
        SignedPermutation {
            perm,
            flips,
            negate_output,
            index_map,
        }
    }

    /// Image of a truth table stored in the low `2^n` bits of a word.
    pub fn apply_table(&self, table: u64) -> u64 {
        let mut out = 0u64;
        for (k, &z) in self.index_map.iter().enumerate() {
            out |= (table >> k & 1) << z;
        }
        if self.negate_output {
            out ^= low_mask(self.perm.len());
        }
        out
    }

    /// Image of a polynomial: `sgn(q) = f` implies `sgn(g·q) = g·f`.
    pub fn apply_polynomial(&self, q: &QuadraticPolynomial) -> QuadraticPolynomial {
        let n = self.perm.len();
        let mut out = QuadraticPolynomial::zero(n);
        let sign = |bits: &[usize]| {
            let flips = bits.iter().filter(|&&b| self.flips >> b & 1 == 1).count();
            if (flips + self.negate_output as usize).is_multiple_of(2) {
                1
            } else {
                -1
            }
        };
        let scaled = |c: BigRational, s: i32| if s < 0 { -c } else { c };
        out.set(Monomial::Constant, scaled(q.coefficient(Monomial::Constant), sign(&[])))
            .expect("constant");
        for i in 1..=n {
            let c = q.coefficient(Monomial::Linear(i));
            out.set(Monomial::Linear(self.perm[i - 1] + 1), scaled(c, sign(&[i - 1])))
                .expect("linear");
        }
        for (&(i, j), a) in q.quadratic_terms() {
            let (pi, pj) = (self.perm[i - 1] + 1, self.perm[j - 1] + 1);
            out.set(Monomial::Pair(pi, pj), scaled(a.clone(), sign(&[i - 1, j - 1])))
                .expect("pair");
        }
        out
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }
}

pub fn low_mask(n: usize) -> u64 {
    if n >= 6 {
        u64::MAX
    } else {
        (1u64 << (1u32 << n)) - 1
    }
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        out.push(current.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).unwrap();
        current.swap(i - 1, j);
        current[i..].reverse();
    }
    out
}

/// A finite group of signed permutations with orbit canonicalization.
#[derive(Clone, Debug)]
pub struct TableGroup {
    elements: Vec<SignedPermutation>,
}

impl TableGroup {
    /// Every combination of the given permutations, flip masks and output
    /// negation. The caller is responsible for the set being a group.
    pub fn generate(perms: &[Vec<usize>], flip_masks: &[u64], with_output_negation: bool) -> Self {
        let outputs: &[bool] = if with_output_negation {
            &[false, true]
        } else {
            &[false]
        };
        let mut elements = Vec::new();
        for p in perms {
            for &s in flip_masks {
                for &o in outputs {
                    elements.push(SignedPermutation::new(p.clone(), s, o));
                }
            }
        }
        TableGroup { elements }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[SignedPermutation] {
        &self.elements
    }

    /// Smallest table in the orbit.
    pub fn canonical(&self, table: u64) -> u64 {
        self.elements
            .iter()
            .map(|g| g.apply_table(table))
            .min()
            .unwrap_or(table)
    }

    /// An element carrying `from` to `to`, if the two share an orbit.
    pub fn carrier(&self, from: u64, to: u64) -> Option<&SignedPermutation> {
        self.elements.iter().find(|g| g.apply_table(from) == to)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolean::BooleanFunction;

    #[test]
    fn permutation_count() {
        assert_eq!(permutations(4).len(), 24);
        assert_eq!(permutations(1), vec![vec![0]]);
        assert_eq!(permutations(3)[1], vec![0, 2, 1]);
    }

    #[test]
    fn polynomial_action_matches_table_action() {
        let q = QuadraticPolynomial::from_integers(
            3,
            -1,
            &[2, -3, 1],
            &[((1, 2), 5), ((2, 3), -2)],
        )
        .unwrap();
        let f = q.sign_function().unwrap().as_word().unwrap();
        for p in permutations(3) {
            for s in 0..8 {
                for o in [false, true] {
                    let g = SignedPermutation::new(p.clone(), s, o);
                    let image = g.apply_polynomial(&q).sign_function().unwrap();
                    assert_eq!(image.as_word().unwrap(), g.apply_table(f));
                }
            }
        }
    }

    #[test]
    fn influence_is_invariant() {
        let f = BooleanFunction::from_word(4, 0x6a5c).unwrap();
        let g = SignedPermutation::new(vec![2, 0, 3, 1], 0b0101, true);
        let h = BooleanFunction::from_word(4, g.apply_table(0x6a5c)).unwrap();
        assert_eq!(f.total_influence(), h.total_influence());
    }
}
