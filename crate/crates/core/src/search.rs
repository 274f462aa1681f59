//! Exhaustive and screened searches over truth tables: the small-n
//! conjecture check, the five-variable hunt over functions symmetric in the
//! last two coordinates, and maximum influence per four-vertex support.
//!
//! Every search tests one representative per orbit of a signed-permutation
//! group that preserves both influence and the allowed support.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::Signed;
use rayon::prelude::*;

use crate::boolean::BooleanFunction;
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::graphs::SupportGraph;
use crate::lp::Solver;
use crate::qtf::{igl, representable_with, QuadraticPolynomial, Representability};
use crate::symmetry::{low_mask, permutations, TableGroup};

/// Largest arity for which all `2^(2^n)` truth tables are enumerated.
pub const MAX_EXHAUSTIVE_ARITY: usize = 4;

const HALF_MASKS: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0f0f_0f0f_0f0f_0f0f,
    0x00ff_00ff_00ff_00ff,
    0x0000_ffff_0000_ffff,
    0x0000_0000_ffff_ffff,
];

/// Number of boundary edges of a table on at most 6 coordinates.
pub fn boundary_edges_word(n: usize, table: u64) -> u32 {
    let low = low_mask(n);
    (0..n)
        .map(|i| ((table ^ (table >> (1u32 << i))) & HALF_MASKS[i] & low).count_ones())
        .sum()
}

/// Smallest edge count `e` with `e / 2^(n-1) > threshold`.
fn edge_cutoff(n: usize, threshold: &Dyadic) -> u64 {
    let scaled = threshold.to_ratio() * num_rational::BigRational::from_integer(BigInt::from(1u64 << (n - 1)));
    if scaled.is_negative() {
        return 0;
    }
    let floor = scaled.floor().to_integer();
    u64::try_from(floor).map_or(u64::MAX, |f| f + 1)
}

/// A QTF found by a search, with its verified witness.
#[derive(Clone, Debug, PartialEq)]
pub struct ConfirmedQtf {
    pub table: BooleanFunction,
    pub influence: Dyadic,
    pub witness: QuadraticPolynomial,
}

#[derive(Clone, Debug)]
pub struct SearchReport {
    pub space: String,
    pub scanned: u64,
    pub threshold: Dyadic,
    pub survivors: u64,
    /// LPs actually solved, one per orbit of survivors.
    pub lp_calls: u64,
    pub confirmed: Vec<ConfirmedQtf>,
    /// Largest influence of any QTF in the space, when it was computed.
    pub max_qtf: Option<ConfirmedQtf>,
    pub elapsed: Duration,
    pub workers: usize,
}

fn run_in_pool<T: Send>(workers: usize, job: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Internal(format!("worker pool: {e}")))?;
    Ok(pool.install(job))
}

/// Orbit labels for every table on `n <= 4` coordinates.
struct Orbits {
    label: Vec<u32>,
    representative: Vec<u64>,
}

impl Orbits {
    fn new(n: usize, group: &TableGroup) -> Orbits {
        let size = 1usize << (1 << n);
        let mut label = vec![u32::MAX; size];
        let mut representative = Vec::new();
        for t in 0..size {
            if label[t] != u32::MAX {
                continue;
            }
            let id = representative.len() as u32;
            representative.push(t as u64);
            for g in group.elements() {
                label[g.apply_table(t as u64) as usize] = id;
            }
        }
        Orbits {
            label,
            representative,
        }
    }
}

/// Signed permutations preserving `g`: automorphisms, any input negation,
/// and output negation.
fn support_group(g: &SupportGraph) -> TableGroup {
    let n = g.num_vertices();
    let automorphisms: Vec<Vec<usize>> = permutations(n)
        .into_iter()
        .filter(|p| g.edges().all(|(i, j)| g.has_edge(p[i - 1] + 1, p[j - 1] + 1)))
        .collect();
    let flips: Vec<u64> = (0..1u64 << n).collect();
    TableGroup::generate(&automorphisms, &flips, true)
}

fn table_function(n: usize, table: u64) -> BooleanFunction {
    BooleanFunction::from_word(n, table).expect("arity at most 6")
}

fn confirm(f: BooleanFunction, witness: QuadraticPolynomial) -> Result<ConfirmedQtf> {
    if !witness.represents(&f) {
        return Err(Error::Internal(format!(
            "witness {witness} does not represent table {}",
            f.to_hex()
        )));
    }
    Ok(ConfirmedQtf {
        influence: f.total_influence(),
        table: f,
        witness,
    })
}

/// `I[G]`: the largest influence of a QTF supported on `G`, with a
/// witness. Tables are tried in decreasing influence (ties by table value)
/// until one is representable.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportMaximum {
    pub graph: SupportGraph,
    pub best: ConfirmedQtf,
    pub lp_calls: u64,
}

impl SupportMaximum {
    pub fn influence(&self) -> &Dyadic {
        &self.best.influence
    }
}

pub fn max_qtf_influence(g: &SupportGraph) -> Result<SupportMaximum> {
    let n = g.num_vertices();
    if n == 0 || n > MAX_EXHAUSTIVE_ARITY {
        return Err(Error::SizeCap(format!(
            "exhaustive support search needs 1..={MAX_EXHAUSTIVE_ARITY} vertices, got {n}"
        )));
    }
    let group = support_group(g);
    let orbits = Orbits::new(n, &group);
    let solver = Solver::default();
    let mut order: Vec<(u32, u64)> = (0..1u64 << (1 << n))
        .map(|t| (boundary_edges_word(n, t), t))
        .collect();
    order.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut verdict: Vec<Option<bool>> = vec![None; orbits.representative.len()];
    let mut lp_calls = 0;
    for &(_, t) in &order {
        let id = orbits.label[t as usize] as usize;
        let feasible = match verdict[id] {
            Some(v) => v,
            None => {
                let rep = table_function(n, orbits.representative[id]);
                lp_calls += 1;
                let v = representable_with(&solver, &rep, Some(g))?.is_feasible();
                verdict[id] = Some(v);
                v
            }
        };
        if feasible {
            let f = table_function(n, t);
            lp_calls += 1;
            let Representability::Feasible(q) = representable_with(&solver, &f, Some(g))? else {
                return Err(Error::Internal("orbit verdict not reproduced".into()));
            };
            if q.support().edges().any(|(i, j)| !g.has_edge(i, j)) {
                return Err(Error::Internal("witness leaves the support".into()));
            }
            return Ok(SupportMaximum {
                graph: g.clone(),
                best: confirm(f, q)?,
                lp_calls,
            });
        }
    }
    Err(Error::Internal("no representable table found".into()))
}

/// Tests every table on `n <= 4` coordinates with influence above
/// `I_GL(n, 2)` for representability, and records the largest QTF
/// influence overall.
pub fn verify_conjecture_small(n: usize) -> Result<SearchReport> {
    if !(2..=MAX_EXHAUSTIVE_ARITY).contains(&n) {
        return Err(Error::SizeCap(format!(
            "exhaustive verification covers 2 <= n <= {MAX_EXHAUSTIVE_ARITY}, got {n}"
        )));
    }
    let start = Instant::now();
    let threshold = igl(n, 2)?;
    let cutoff = edge_cutoff(n, &threshold);
    let complete = SupportGraph::complete(n);
    let group = support_group(&complete);
    let orbits = Orbits::new(n, &group);
    let solver = Solver::default();
    let size = 1u64 << (1 << n);
    let survivors: Vec<u64> = (0..size)
        .filter(|&t| boundary_edges_word(n, t) as u64 >= cutoff)
        .collect();
    let mut verdict: BTreeMap<u32, Representability> = BTreeMap::new();
    for &t in &survivors {
        let id = orbits.label[t as usize];
        if let std::collections::btree_map::Entry::Vacant(e) = verdict.entry(id) {
            let rep = table_function(n, orbits.representative[id as usize]);
            e.insert(representable_with(&solver, &rep, None)?);
        }
    }
    let lp_calls = verdict.len() as u64;
    let mut confirmed = Vec::new();
    for &t in &survivors {
        let id = orbits.label[t as usize];
        if verdict[&id].is_feasible() {
            let f = table_function(n, t);
            if let Representability::Feasible(q) = representable_with(&solver, &f, None)? {
                confirmed.push(confirm(f, q)?);
            }
        }
    }
    let max = max_qtf_influence(&complete)?;
    Ok(SearchReport {
        space: format!("all {size} functions on {n} variables"),
        scanned: size,
        threshold,
        survivors: survivors.len() as u64,
        lp_calls: lp_calls + max.lp_calls,
        confirmed,
        max_qtf: Some(max.best),
        elapsed: start.elapsed(),
        workers: 1,
    })
}

/// Five-variable functions symmetric in `(x_4, x_5)`, indexed by 24-bit
/// words: bit `a + 8b` is the value at `(x_1, x_2, x_3)` encoded by `a`
/// with `b` of `x_4, x_5` equal to `+1`.
#[derive(Clone, Copy, Debug, Default)]
pub struct SymmetryReducedIndex;

impl SymmetryReducedIndex {
    pub const CLASSES: usize = 24;
    pub const SIZE: u64 = 1 << 24;

    /// Class of the 5-variable input index `k`.
    pub fn class_of(k: u64) -> usize {
        (k & 7) as usize + 8 * (k >> 3 & 3).count_ones() as usize
    }

    /// Full 32-entry truth table.
    pub fn expand(index: u32) -> u32 {
        let low = index & 0xff;
        let mid = index >> 8 & 0xff;
        let high = index >> 16 & 0xff;
        low | mid << 8 | mid << 16 | high << 24
    }

    /// Inverse of [`expand`](Self::expand) on symmetric tables.
    pub fn compress(table: u32) -> Option<u32> {
        if table >> 8 & 0xff != table >> 16 & 0xff {
            return None;
        }
        Some(table & 0xffff | (table >> 24) << 16)
    }
}

/// Signed permutations of five coordinates that keep a function symmetric
/// in the last two: permutations and negations of `x_1..x_3`, joint
/// negation of `x_4, x_5`, and output negation.
fn hunt_group() -> TableGroup {
    let perms: Vec<Vec<usize>> = permutations(3)
        .into_iter()
        .map(|mut p| {
            p.extend([3, 4]);
            p
        })
        .collect();
    let flips: Vec<u64> = (0..8u64).flat_map(|s| [s, s | 0b11000]).collect();
    TableGroup::generate(&perms, &flips, true)
}

/// Screens all `2^24` symmetric five-variable tables for influence above
/// `threshold`, then decides representability of the survivors.
pub fn hunt_n5(threshold: &Dyadic, workers: usize) -> Result<SearchReport> {
    let start = Instant::now();
    let n = 5;
    let cutoff = edge_cutoff(n, threshold) as u32;
    let group = hunt_group();
    let survivors: Vec<u32> = run_in_pool(workers, || {
        (0..256u32)
            .into_par_iter()
            .flat_map_iter(|chunk| {
                (chunk << 16..(chunk + 1) << 16).filter(move |&i| {
                    boundary_edges_word(n, SymmetryReducedIndex::expand(i) as u64) >= cutoff
                })
            })
            .collect()
    })?;
    let canonical: Vec<u64> = run_in_pool(workers, || {
        survivors
            .par_iter()
            .map(|&i| group.canonical(SymmetryReducedIndex::expand(i) as u64))
            .collect()
    })?;
    let mut reps: Vec<u64> = canonical.clone();
    reps.sort_unstable();
    reps.dedup();
    let solver = Solver::default();
    let verdicts: Vec<Representability> = run_in_pool(workers, || {
        reps.par_iter()
            .map(|&r| representable_with(&solver, &table_function(n, r), None))
            .collect::<Result<Vec<_>>>()
    })??;
    let verdict: BTreeMap<u64, &Representability> = reps.iter().copied().zip(&verdicts).collect();
    let mut confirmed = Vec::new();
    for (&i, rep) in survivors.iter().zip(&canonical) {
        let Representability::Feasible(q) = verdict[rep] else {
            continue;
        };
        let table = SymmetryReducedIndex::expand(i) as u64;
        let g = group
            .carrier(*rep, table)
            .ok_or_else(|| Error::Internal("orbit carrier missing".into()))?;
        let witness = g.apply_polynomial(q).integer_cleared();
        confirmed.push(confirm(table_function(n, table), witness)?);
    }
    Ok(SearchReport {
        space: "2^24 functions on 5 variables symmetric in the last two".into(),
        scanned: SymmetryReducedIndex::SIZE,
        threshold: threshold.clone(),
        survivors: survivors.len() as u64,
        lp_calls: reps.len() as u64,
        confirmed,
        max_qtf: None,
        elapsed: start.elapsed(),
        workers: workers.max(1),
    })
}

/// The seven supports with their maxima as tabulated for four vertices.
pub fn reference_table1() -> Vec<(SupportGraph, Dyadic)> {
    let half = |n: i64| Dyadic::new(n, 1);
    let g = |edges: &[(usize, usize)]| SupportGraph::new(4, edges.iter().copied()).expect("valid");
    vec![
        (g(&[(1, 2), (3, 4)]), Dyadic::from_integer(2)),
        (g(&[(1, 2), (1, 4), (2, 3), (3, 4)]), Dyadic::from_integer(2)),
        (g(&[(1, 2), (1, 3), (2, 3), (3, 4)]), half(5)),
        (SupportGraph::complete(4), Dyadic::from_integer(3)),
        (g(&[(1, 2), (2, 3), (3, 4)]), Dyadic::from_integer(2)),
        (g(&[(1, 4), (2, 4), (3, 4)]), half(5)),
        (g(&[(1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]), half(5)),
    ]
}

/// Brute-force isomorphism test, for at most 6 vertices.
pub fn isomorphic(a: &SupportGraph, b: &SupportGraph) -> bool {
    let n = a.num_vertices();
    if n != b.num_vertices() || a.num_edges() != b.num_edges() || n > 6 {
        return false;
    }
    permutations(n)
        .iter()
        .any(|p| a.edges().all(|(i, j)| b.has_edge(p[i - 1] + 1, p[j - 1] + 1)))
}

/// One representative per isomorphism class of `n`-vertex graphs
/// (`n <= 5`), chosen with the smallest edge bitmask over pairs in
/// lexicographic order, sorted by edge count then bitmask.
pub fn graph_classes(n: usize) -> Result<Vec<SupportGraph>> {
    if n > 5 {
        return Err(Error::SizeCap(format!("graph classes enumerated for n <= 5, got {n}")));
    }
    let pairs: Vec<(usize, usize)> = (1..=n)
        .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
        .collect();
    let perms = permutations(n);
    let mask_of = |edges: &dyn Fn(usize, usize) -> bool| -> u32 {
        pairs
            .iter()
            .enumerate()
            .filter(|(_, &(i, j))| edges(i, j))
            .fold(0, |m, (b, _)| m | 1 << b)
    };
    let mut reps: Vec<u32> = (0..1u32 << pairs.len())
        .filter(|&mask| {
            let has = |i: usize, j: usize| {
                let pos = pairs.iter().position(|&e| e == (i.min(j), i.max(j))).unwrap();
                mask >> pos & 1 == 1
            };
            perms.iter().all(|p| {
                let image = mask_of(&|i, j| has(perm_inverse(p, i), perm_inverse(p, j)));
                image >= mask
            })
        })
        .collect();
    reps.sort_by_key(|&m| (m.count_ones(), m));
    Ok(reps
        .into_iter()
        .map(|mask| {
            let edges = pairs
                .iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .map(|(_, &e)| e);
            SupportGraph::new(n, edges).expect("valid")
        })
        .collect())
}

fn perm_inverse(p: &[usize], v: usize) -> usize {
    p.iter().position(|&x| x + 1 == v).expect("permutation") + 1
}

/// A row of the four-vertex support table.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportRow {
    pub maximum: SupportMaximum,
    /// Index into [`reference_table1`] of the isomorphic tabulated graph.
    pub reference: Option<usize>,
}

/// `I[G]` for every isomorphism class of `n`-vertex graphs (`n <= 4`).
pub fn max_influence_per_support(n: usize, workers: usize) -> Result<Vec<SupportRow>> {
    if n == 0 || n > MAX_EXHAUSTIVE_ARITY {
        return Err(Error::SizeCap(format!(
            "support table covers 1..={MAX_EXHAUSTIVE_ARITY} vertices, got {n}"
        )));
    }
    let classes = graph_classes(n)?;
    let reference = if n == 4 { reference_table1() } else { vec![] };
    let maxima = run_in_pool(workers, || {
        classes
            .par_iter()
            .map(max_qtf_influence)
            .collect::<Result<Vec<_>>>()
    })??;
    Ok(maxima
        .into_iter()
        .map(|m| {
            let r = reference.iter().position(|(g, _)| isomorphic(g, &m.graph));
            SupportRow {
                maximum: m,
                reference: r,
            }
        })
        .collect())
}

/// Symmetric QTFs `sgn(a + b t + c t^2)` with `t = x_1 + ... + x_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricQtfScan {
    /// Sign patterns over `t = -n, -n+2, ..., n` that are representable,
    /// with their influence.
    pub representable: Vec<(Vec<bool>, Dyadic)>,
    pub maximum: Dyadic,
}

impl SymmetricQtfScan {
    pub fn attains(&self, value: &Dyadic) -> bool {
        self.representable.iter().any(|(_, v)| v == value)
    }
}

/// Influence of the symmetric function with `pattern[j]` its value on
/// inputs with `j` coordinates equal to `+1`.
pub fn symmetric_influence(pattern: &[bool]) -> Dyadic {
    let n = pattern.len() - 1;
    let edges: BigInt = (0..n)
        .filter(|&j| pattern[j] != pattern[j + 1])
        .map(|j| crate::dyadic::binomial(n as i64, j as i64) * BigInt::from(n - j))
        .sum();
    Dyadic::new(edges, n as u32 - 1)
}

pub fn symmetric_qtf_scan(n: usize) -> Result<SymmetricQtfScan> {
    if n == 0 || n > 20 {
        return Err(Error::SizeCap(format!("symmetric scan covers 1..=20 variables, got {n}")));
    }
    let solver = Solver::default();
    let mut representable = Vec::new();
    for code in 0..1u64 << (n + 1) {
        let pattern: Vec<bool> = (0..=n).map(|j| code >> j & 1 == 1).collect();
        let rows: Vec<Vec<i64>> = (0..=n)
            .map(|j| {
                let t = 2 * j as i64 - n as i64;
                let s = if pattern[j] { 1 } else { -1 };
                vec![s, s * t, s * t * t]
            })
            .collect();
        let lp = crate::lp::LinearProgram::from_integers(&rows, &vec![1; n + 1])?;
        if matches!(solver.feasibility(&lp)?.outcome, crate::lp::LpOutcome::Feasible(_)) {
            let v = symmetric_influence(&pattern);
            representable.push((pattern, v));
        }
    }
    let maximum = representable
        .iter()
        .map(|(_, v)| v.clone())
        .max()
        .ok_or_else(|| Error::Internal("no representable pattern".into()))?;
    Ok(SymmetricQtfScan {
        representable,
        maximum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_edges_match_counting() {
        for t in [0u64, 0x6996, 0xe8, 0x1234_5678] {
            let n = if t > 0xffff { 5 } else { 4 };
            let f = table_function(n, t);
            let direct: u64 = (1..=n).map(|i| f.boundary_edges(i).unwrap()).sum();
            assert_eq!(boundary_edges_word(n, t) as u64, direct);
        }
    }

    #[test]
    fn cutoff_is_strict() {
        assert_eq!(edge_cutoff(5, &Dyadic::new(25, 3)), 51);
        assert_eq!(edge_cutoff(4, &Dyadic::from_integer(3)), 25);
        assert_eq!(edge_cutoff(4, &Dyadic::new(-1, 0)), 0);
    }

    #[test]
    fn reduced_index_expansion() {
        for i in [0u32, 1, 0xabcdef, 0xffffff, 0x00ff00] {
            let t = SymmetryReducedIndex::expand(i);
            assert_eq!(SymmetryReducedIndex::compress(t), Some(i));
            let f = table_function(5, t as u64);
            for k in 0..32 {
                assert_eq!(f.bit(k), i >> SymmetryReducedIndex::class_of(k) & 1 == 1);
                let swapped = (k & 7) | (k >> 4 & 1) << 3 | (k >> 3 & 1) << 4;
                assert_eq!(f.bit(k), f.bit(swapped));
            }
        }
        assert_eq!(SymmetryReducedIndex::compress(1 << 8), None);
    }

    #[test]
    fn hunt_group_preserves_symmetry() {
        let g = hunt_group();
        assert_eq!(g.len(), 192);
        let t = SymmetryReducedIndex::expand(0x5a3c91) as u64;
        for e in g.elements() {
            assert!(SymmetryReducedIndex::compress(e.apply_table(t) as u32).is_some());
        }
    }

    #[test]
    fn small_supports() {
        let single = max_qtf_influence(&SupportGraph::empty(1)).unwrap();
        assert_eq!(single.influence(), &Dyadic::one());
        let edge = max_qtf_influence(&SupportGraph::complete(2)).unwrap();
        assert_eq!(edge.influence(), &Dyadic::from_integer(2));
        let two = max_qtf_influence(&SupportGraph::empty(2)).unwrap();
        assert_eq!(two.influence(), &Dyadic::one());
        let three = max_qtf_influence(&SupportGraph::empty(3)).unwrap();
        assert_eq!(three.influence(), &Dyadic::new(3, 1));
    }

    #[test]
    fn class_counts() {
        let counts: Vec<usize> = (1..=5).map(|n| graph_classes(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 2, 4, 11, 34]);
    }

    #[test]
    fn small_conjecture_cases() {
        let r = verify_conjecture_small(2).unwrap();
        assert_eq!(r.survivors, 0);
        assert!(r.confirmed.is_empty());
        let r = verify_conjecture_small(3).unwrap();
        assert!(r.confirmed.is_empty());
        assert!(verify_conjecture_small(5).is_err());
    }

    #[test]
    fn symmetric_influence_of_majority() {
        assert_eq!(symmetric_influence(&[false, false, true, true]), Dyadic::new(3, 1));
        assert_eq!(symmetric_influence(&[true; 4]), Dyadic::zero());
    }

    #[test]
    fn isomorphism() {
        let star = SupportGraph::star(4);
        let other = SupportGraph::new(4, [(1, 2), (1, 3), (1, 4)]).unwrap();
        assert!(isomorphic(&star, &other));
        assert!(!isomorphic(&star, &SupportGraph::path(4)));
    }
}
