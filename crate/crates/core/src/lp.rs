//! Exact rational linear programming.
//!
//! Problems have the form `A q >= r` with `q` free, optionally minimizing
//! `c·q`. The solver is a dense tableau simplex over [`BigRational`] using
//! Bland's rule. Phase 1 introduces a single artificial column `t` and
//! minimizes it over `A q + t·1 - s = r`, `s, t >= 0`; when the optimum is
//! positive the slack reduced costs form a Farkas certificate `y >= 0`,
//! `yᵀA = 0`, `yᵀr > 0`. Every answer is re-checked by exact substitution
//! before it is returned.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Default ceiling on simplex pivots per solve.
pub const DEFAULT_PIVOT_LIMIT: usize = 100_000;

/// Rows `A_i · q >= r_i`; optional objective `c` to minimize.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearProgram {
    constraints: Vec<Vec<BigRational>>,
    rhs: Vec<BigRational>,
    objective: Option<Vec<BigRational>>,
}

impl LinearProgram {
    pub fn new(constraints: Vec<Vec<BigRational>>, rhs: Vec<BigRational>) -> Result<Self> {
        let m = constraints.len();
        if m == 0 {
            return Err(Error::DimensionMismatch("no constraints".into()));
        }
        let d = constraints[0].len();
        if d == 0 {
            return Err(Error::DimensionMismatch("no variables".into()));
        }
        if let Some((i, row)) = constraints.iter().enumerate().find(|(_, r)| r.len() != d) {
            return Err(Error::DimensionMismatch(format!(
                "row {i} has {} entries, expected {d}",
                row.len()
            )));
        }
        if rhs.len() != m {
            return Err(Error::DimensionMismatch(format!(
                "{m} rows but {} right-hand sides",
                rhs.len()
            )));
        }
        Ok(LinearProgram {
            constraints,
            rhs,
            objective: None,
        })
    }

    /// Builds from integer data, which is how most callers state their rows.
    pub fn from_integers(constraints: &[Vec<i64>], rhs: &[i64]) -> Result<Self> {
        let rat = |v: &i64| BigRational::from_integer((*v).into());
        Self::new(
            constraints.iter().map(|r| r.iter().map(rat).collect()).collect(),
            rhs.iter().map(rat).collect(),
        )
    }

    pub fn with_objective(mut self, objective: Vec<BigRational>) -> Result<Self> {
        if objective.len() != self.num_vars() {
            return Err(Error::DimensionMismatch(format!(
                "objective has {} entries, expected {}",
                objective.len(),
                self.num_vars()
            )));
        }
        self.objective = Some(objective);
        Ok(self)
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn num_vars(&self) -> usize {
        self.constraints[0].len()
    }

    pub fn constraints(&self) -> &[Vec<BigRational>] {
        &self.constraints
    }

    pub fn rhs(&self) -> &[BigRational] {
        &self.rhs
    }

    pub fn objective(&self) -> Option<&[BigRational]> {
        self.objective.as_deref()
    }

    /// Whether `q` satisfies every row exactly.
    pub fn is_feasible_point(&self, q: &[BigRational]) -> bool {
        q.len() == self.num_vars()
            && self
                .constraints
                .iter()
                .zip(&self.rhs)
                .all(|(row, r)| &dot(row, q) >= r)
    }

    /// Whether `y` is a Farkas certificate: `y >= 0`, `yᵀA = 0`, `yᵀr > 0`.
    pub fn is_farkas_certificate(&self, y: &[BigRational]) -> bool {
        if y.len() != self.num_constraints() || y.iter().any(|v| v.is_negative()) {
            return false;
        }
        let combined_rhs = dot(y, &self.rhs);
        combined_rhs.is_positive()
            && (0..self.num_vars()).all(|j| {
                self.constraints
                    .iter()
                    .zip(y)
                    .fold(BigRational::zero(), |acc, (row, yi)| acc + &row[j] * yi)
                    .is_zero()
            })
    }

    pub fn objective_value(&self, q: &[BigRational]) -> Option<BigRational> {
        self.objective.as_ref().map(|c| dot(c, q))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Feasible(Vec<BigRational>),
    Infeasible(Vec<BigRational>),
    Optimal {
        value: BigRational,
        witness: Vec<BigRational>,
    },
    Unbounded,
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, LpOutcome::Feasible(_) | LpOutcome::Optimal { .. } | LpOutcome::Unbounded)
    }
}

/// Simplex driver with a configurable pivot ceiling.
#[derive(Clone, Debug)]
pub struct Solver {
    pub pivot_limit: usize,
}

impl Default for Solver {
    fn default() -> Self {
        Solver {
            pivot_limit: DEFAULT_PIVOT_LIMIT,
        }
    }
}

/// An outcome plus the number of pivots it took.
#[derive(Clone, Debug)]
pub struct Solved {
    pub outcome: LpOutcome,
    pub pivots: usize,
}

impl Solver {
    /// Phase 1 only: a witness or a Farkas certificate.
    pub fn feasibility(&self, lp: &LinearProgram) -> Result<Solved> {
        let mut tab = Tableau::phase_one(lp, self.pivot_limit);
        tab.run()?;
        let outcome = if tab.objective().is_positive() {
            let y = tab.slack_duals();
            if !lp.is_farkas_certificate(&y) {
                return Err(Error::Internal("Farkas certificate failed verification".into()));
            }
            LpOutcome::Infeasible(y)
        } else {
            let q = tab.primal();
            check_witness(lp, &q)?;
            LpOutcome::Feasible(q)
        };
        Ok(Solved {
            outcome,
            pivots: tab.pivots,
        })
    }

    /// Phase 1 then Phase 2 on the objective.
    pub fn minimize(&self, lp: &LinearProgram) -> Result<Solved> {
        let objective = lp
            .objective()
            .ok_or_else(|| Error::InvalidArgument("minimization needs an objective".into()))?;
        let mut tab = Tableau::phase_one(lp, self.pivot_limit);
        tab.run()?;
        if tab.objective().is_positive() {
            let y = tab.slack_duals();
            if !lp.is_farkas_certificate(&y) {
                return Err(Error::Internal("Farkas certificate failed verification".into()));
            }
            return Ok(Solved {
                outcome: LpOutcome::Infeasible(y),
                pivots: tab.pivots,
            });
        }
        tab.drop_artificial();
        tab.set_objective(objective);
        let bounded = tab.run()?;
        let outcome = if bounded {
            let q = tab.primal();
            check_witness(lp, &q)?;
            let value = lp.objective_value(&q).expect("objective present");
            if value != tab.objective() {
                return Err(Error::Internal("objective value mismatch".into()));
            }
            LpOutcome::Optimal { value, witness: q }
        } else {
            LpOutcome::Unbounded
        };
        Ok(Solved {
            outcome,
            pivots: tab.pivots,
        })
    }
}

pub fn solve_feasibility(lp: &LinearProgram) -> Result<LpOutcome> {
    Solver::default().feasibility(lp).map(|s| s.outcome)
}

pub fn solve_min(lp: &LinearProgram) -> Result<LpOutcome> {
    Solver::default().minimize(lp).map(|s| s.outcome)
}

fn check_witness(lp: &LinearProgram, q: &[BigRational]) -> Result<()> {
    if lp.is_feasible_point(q) {
        Ok(())
    } else {
        Err(Error::Internal("LP witness failed substitution check".into()))
    }
}

fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

/// Column layout: `q_1..q_d` (free), `s_1..s_m`, `t`; the last entry of
/// each row is the right-hand side.
struct Tableau {
    rows: Vec<Vec<BigRational>>,
    /// Reduced costs; the last entry is minus the objective value.
    costs: Vec<BigRational>,
    basis: Vec<usize>,
    num_vars: usize,
    num_slacks: usize,
    /// Free columns currently stored negated.
    flipped: Vec<bool>,
    banned: Vec<bool>,
    pivots: usize,
    pivot_limit: usize,
}

impl Tableau {
    fn phase_one(lp: &LinearProgram, pivot_limit: usize) -> Self {
        let (m, d) = (lp.num_constraints(), lp.num_vars());
        let ncols = d + m + 1;
        let t_col = d + m;
        let zero = BigRational::zero();
        let one = BigRational::from_integer(1.into());
        let mut rows: Vec<Vec<BigRational>> = (0..m)
            .map(|i| {
                let mut row = vec![zero.clone(); ncols + 1];
                row[..d].clone_from_slice(&lp.constraints[i]);
                row[d + i] = -one.clone();
                row[t_col] = one.clone();
                row[ncols] = lp.rhs[i].clone();
                row
            })
            .collect();
        let mut costs = vec![zero.clone(); ncols + 1];
        costs[t_col] = one.clone();

        // Largest right-hand side; Bland-style lowest index on ties.
        let top = (0..m)
            .max_by(|&a, &b| lp.rhs[a].cmp(&lp.rhs[b]).then(b.cmp(&a)))
            .expect("m >= 1");
        let mut basis = vec![0; m];
        if lp.rhs[top].is_positive() {
            // t enters at row `top`; every other row then has its slack at
            // value t - r_i >= 0 once negated.
            let pivot_row = rows[top].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != top {
                    for (x, p) in row.iter_mut().zip(&pivot_row) {
                        *x = -(&*x - p);
                    }
                    basis[i] = d + i;
                }
            }
            for (x, p) in costs.iter_mut().zip(&pivot_row) {
                *x -= p;
            }
            basis[top] = t_col;
        } else {
            // q = 0 already satisfies every row.
            for (i, row) in rows.iter_mut().enumerate() {
                for x in row.iter_mut() {
                    *x = -&*x;
                }
                basis[i] = d + i;
            }
            // t enters at level 0 with zero reduced cost if it is never used.
        }
        Tableau {
            rows,
            costs,
            basis,
            num_vars: d,
            num_slacks: m,
            flipped: vec![false; ncols],
            banned: vec![false; ncols],
            pivots: 0,
            pivot_limit,
        }
    }

    fn ncols(&self) -> usize {
        self.num_vars + self.num_slacks + 1
    }

    fn t_col(&self) -> usize {
        self.num_vars + self.num_slacks
    }

    fn is_free(&self, col: usize) -> bool {
        col < self.num_vars
    }

    fn objective(&self) -> BigRational {
        -self.costs[self.ncols()].clone()
    }

    /// Runs simplex to optimality; `Ok(false)` means unbounded.
    fn run(&mut self) -> Result<bool> {
        let mut in_basis = vec![false; self.ncols()];
        for &b in &self.basis {
            in_basis[b] = true;
        }
        loop {
            let Some(col) = self.entering(&in_basis) else {
                return Ok(true);
            };
            let Some(row) = self.leaving(col) else {
                return Ok(false);
            };
            if self.pivots >= self.pivot_limit {
                return Err(Error::Internal(format!(
                    "simplex exceeded {} pivots",
                    self.pivot_limit
                )));
            }
            in_basis[self.basis[row]] = false;
            in_basis[col] = true;
            self.pivot(row, col);
        }
    }

    /// Bland: lowest-index improving column. A free column with positive
    /// reduced cost is negated so that it improves by increasing.
    fn entering(&mut self, in_basis: &[bool]) -> Option<usize> {
        let col = (0..self.ncols()).find(|&j| {
            !in_basis[j]
                && !self.banned[j]
                && (self.costs[j].is_negative() || (self.is_free(j) && self.costs[j].is_positive()))
        })?;
        if self.costs[col].is_positive() {
            for row in &mut self.rows {
                row[col] = -row[col].clone();
            }
            self.costs[col] = -self.costs[col].clone();
            self.flipped[col] = !self.flipped[col];
        }
        Some(col)
    }

    /// Minimum ratio over rows with a bounded basic variable; ties broken by
    /// lowest basic index.
    fn leaving(&self, col: usize) -> Option<usize> {
        let rhs = self.ncols();
        let mut best: Option<(usize, BigRational)> = None;
        for (i, row) in self.rows.iter().enumerate() {
            if self.is_free(self.basis[i]) || !row[col].is_positive() {
                continue;
            }
            let ratio = &row[rhs] / &row[col];
            let better = match &best {
                None => true,
                Some((j, r)) => ratio < *r || (ratio == *r && self.basis[i] < self.basis[*j]),
            };
            if better {
                best = Some((i, ratio));
            }
        }
        best.map(|(i, _)| i)
    }

    fn pivot(&mut self, r: usize, c: usize) {
        self.pivots += 1;
        let p = self.rows[r][c].clone();
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x /= &p;
            }
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let support: Vec<usize> = (0..pivot_row.len())
            .filter(|&j| !pivot_row[j].is_zero())
            .collect();
        let eliminate = |row: &mut Vec<BigRational>| {
            let factor = row[c].clone();
            if factor.is_zero() {
                return;
            }
            for &j in &support {
                row[j] -= &factor * &pivot_row[j];
            }
        };
        for row in self.rows.iter_mut() {
            if !row.is_empty() {
                eliminate(row);
            }
        }
        eliminate(&mut self.costs);
        self.rows[r] = pivot_row;
        self.basis[r] = c;
    }

    /// `π_i` read off the slack reduced costs (slack column is `-e_i`).
    fn slack_duals(&self) -> Vec<BigRational> {
        (0..self.num_slacks)
            .map(|i| self.costs[self.num_vars + i].clone())
            .collect()
    }

    fn primal(&self) -> Vec<BigRational> {
        let rhs = self.ncols();
        let mut q = vec![BigRational::zero(); self.num_vars];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if b < self.num_vars {
                q[b] = if self.flipped[b] {
                    -row[rhs].clone()
                } else {
                    row[rhs].clone()
                };
            }
        }
        q
    }

    /// Removes the artificial column after a zero-valued Phase 1.
    fn drop_artificial(&mut self) {
        let t = self.t_col();
        if let Some(r) = self.basis.iter().position(|&b| b == t) {
            let replacement = (0..self.ncols()).find(|&j| {
                j != t && !self.banned[j] && !self.basis.contains(&j) && !self.rows[r][j].is_zero()
            });
            match replacement {
                Some(j) => self.pivot(r, j),
                None => {
                    // 0 = 0 after elimination: the row is redundant.
                    self.rows.remove(r);
                    self.basis.remove(r);
                }
            }
        }
        self.banned[t] = true;
    }

    /// Installs `c` as the cost vector and prices out the basis.
    fn set_objective(&mut self, objective: &[BigRational]) {
        let ncols = self.ncols();
        let cost = |j: usize| -> BigRational {
            if j < self.num_vars {
                if self.flipped[j] {
                    -objective[j].clone()
                } else {
                    objective[j].clone()
                }
            } else {
                BigRational::zero()
            }
        };
        let mut costs: Vec<BigRational> = (0..ncols).map(cost).collect();
        costs.push(BigRational::zero());
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = cost(b);
            if cb.is_zero() {
                continue;
            }
            for (x, a) in costs.iter_mut().zip(row) {
                if !a.is_zero() {
                    *x -= &cb * a;
                }
            }
        }
        self.costs = costs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn single_row_feasible() {
        let lp = LinearProgram::from_integers(&[vec![1]], &[1]).unwrap();
        match solve_feasibility(&lp).unwrap() {
            LpOutcome::Feasible(q) => assert!(q[0] >= rat(1, 1)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn contradictory_rows() {
        let lp = LinearProgram::from_integers(&[vec![1], vec![-1]], &[1, 0]).unwrap();
        match solve_feasibility(&lp).unwrap() {
            LpOutcome::Infeasible(y) => {
                assert!(lp.is_farkas_certificate(&y));
                // y is determined up to scale: y_1 = y_2.
                assert_eq!(y[0], y[1]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn trivially_feasible_at_origin() {
        let lp = LinearProgram::from_integers(&[vec![1, 2], vec![3, -1]], &[0, -5]).unwrap();
        assert_eq!(
            solve_feasibility(&lp).unwrap(),
            LpOutcome::Feasible(vec![rat(0, 1), rat(0, 1)])
        );
    }

    #[test]
    fn minimize_simple() {
        let lp = LinearProgram::from_integers(&[vec![1]], &[1])
            .unwrap()
            .with_objective(vec![rat(1, 1)])
            .unwrap();
        match solve_min(&lp).unwrap() {
            LpOutcome::Optimal { value, witness } => {
                assert_eq!(value, rat(1, 1));
                assert_eq!(witness, vec![rat(1, 1)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn minimize_unbounded_and_infeasible() {
        let lp = LinearProgram::from_integers(&[vec![1]], &[1])
            .unwrap()
            .with_objective(vec![rat(-1, 1)])
            .unwrap();
        assert_eq!(solve_min(&lp).unwrap(), LpOutcome::Unbounded);
        let lp = LinearProgram::from_integers(&[vec![1], vec![-1]], &[1, 0])
            .unwrap()
            .with_objective(vec![rat(1, 1)])
            .unwrap();
        assert!(matches!(solve_min(&lp).unwrap(), LpOutcome::Infeasible(_)));
    }

    #[test]
    fn minimize_with_free_variable_and_fraction() {
        // min x + y  s.t.  x + 2y >= 3,  2x + y >= 3,  x, y >= 0  -> 2 at (1, 1)
        let lp = LinearProgram::from_integers(
            &[vec![1, 2], vec![2, 1], vec![1, 0], vec![0, 1]],
            &[3, 3, 0, 0],
        )
        .unwrap()
        .with_objective(vec![rat(1, 1), rat(1, 1)])
        .unwrap();
        match solve_min(&lp).unwrap() {
            LpOutcome::Optimal { value, witness } => {
                assert_eq!(value, rat(2, 1));
                assert_eq!(witness, vec![rat(1, 1), rat(1, 1)]);
            }
            other => panic!("{other:?}"),
        }
        // min y  s.t.  3y >= 1 - x, 3y >= x - 1, with x free -> 0 at x = 1
        let lp = LinearProgram::from_integers(&[vec![1, 3], vec![-1, 3]], &[1, -1])
            .unwrap()
            .with_objective(vec![rat(0, 1), rat(1, 1)])
            .unwrap();
        match solve_min(&lp).unwrap() {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, rat(0, 1)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn redundant_rows_in_phase_two() {
        // Two identical tight rows leave the artificial basic at zero.
        let lp = LinearProgram::from_integers(&[vec![1], vec![1], vec![-1]], &[2, 2, -2])
            .unwrap()
            .with_objective(vec![rat(1, 1)])
            .unwrap();
        match solve_min(&lp).unwrap() {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, rat(2, 1)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn dimension_errors() {
        assert!(LinearProgram::new(vec![], vec![]).is_err());
        assert!(LinearProgram::from_integers(&[vec![1, 2], vec![1]], &[0, 0]).is_err());
        assert!(LinearProgram::from_integers(&[vec![1]], &[0, 0]).is_err());
        let lp = LinearProgram::from_integers(&[vec![1]], &[0]).unwrap();
        assert!(lp.clone().with_objective(vec![]).is_err());
        assert!(solve_min(&lp).is_err());
    }

    #[test]
    fn pivot_ceiling_enforced() {
        let lp = LinearProgram::from_integers(&[vec![1, 1], vec![1, -1]], &[1, 1]).unwrap();
        let solver = Solver { pivot_limit: 0 };
        assert!(matches!(solver.feasibility(&lp), Err(Error::Internal(_))));
    }
}
