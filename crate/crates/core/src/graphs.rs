//! Support graphs and the graph-based influence bounds: chromatic and
//! fractional chromatic numbers, the fractional-chromatic and edge bounds,
//! covering sums, excision, and the thinned independent-set distribution.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::lp::{solve_min, LinearProgram, LpOutcome};
use crate::qtf::maj_influence;

/// Largest graph handled by the exact chromatic number routine.
pub const MAX_CHROMATIC_VERTICES: usize = 16;
/// Largest graph whose maximal independent sets are enumerated.
pub const MAX_FRACTIONAL_VERTICES: usize = 20;

/// Undirected simple graph on vertices `1..=n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SupportGraph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl SupportGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n > 64 {
            return Err(Error::InvalidGraph(format!("{n} vertices exceeds 64")));
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            let (i, j) = (a.min(b), a.max(b));
            if i == j {
                return Err(Error::InvalidGraph(format!("loop at vertex {i}")));
            }
            if i == 0 || j > n {
                return Err(Error::InvalidGraph(format!("edge ({a},{b}) outside 1..={n}")));
            }
            if !set.insert((i, j)) {
                return Err(Error::InvalidGraph(format!("repeated edge ({i},{j})")));
            }
        }
        Ok(SupportGraph { n, edges: set })
    }

    pub fn empty(n: usize) -> Self {
        SupportGraph::new(n, []).expect("no edges")
    }

    pub fn complete(n: usize) -> Self {
        let edges = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j)));
        SupportGraph::new(n, edges).expect("valid")
    }

    pub fn cycle(n: usize) -> Self {
        SupportGraph::new(n, (1..=n).map(|i| (i, i % n + 1))).expect("n >= 3")
    }

    pub fn path(n: usize) -> Self {
        SupportGraph::new(n, (1..n).map(|i| (i, i + 1))).expect("valid")
    }

    /// `K_{1,n-1}` centred at vertex `n`.
    pub fn star(n: usize) -> Self {
        SupportGraph::new(n, (1..n).map(|i| (i, n))).expect("valid")
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges.contains(&(i.min(j), i.max(j)))
    }

    pub fn is_edgeless(&self) -> bool {
        self.edges.is_empty()
    }

    /// Neighbour masks, bit `v - 1` for vertex `v`.
    pub fn adjacency(&self) -> Vec<u64> {
        let mut adj = vec![0u64; self.n];
        for &(i, j) in &self.edges {
            adj[i - 1] |= 1 << (j - 1);
            adj[j - 1] |= 1 << (i - 1);
        }
        adj
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(i, j)| i == v || j == v).count()
    }

    /// The subgraph induced on `vertices`, relabelled `1..=|vertices|` in
    /// ascending order of the original labels.
    pub fn induced(&self, vertices: &[usize]) -> Result<SupportGraph> {
        let mut sorted: Vec<usize> = vertices.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != vertices.len() {
            return Err(Error::InvalidGraph("repeated vertex in induced set".into()));
        }
        if let Some(&v) = sorted.iter().find(|&&v| v == 0 || v > self.n) {
            return Err(Error::InvalidGraph(format!("vertex {v} outside 1..={}", self.n)));
        }
        let position = |v: usize| sorted.iter().position(|&u| u == v);
        let edges = self
            .edges
            .iter()
            .filter_map(|&(i, j)| Some((position(i)? + 1, position(j)? + 1)));
        SupportGraph::new(sorted.len(), edges)
    }

    /// `G \ H`: the subgraph induced on the complement of `removed`.
    pub fn without(&self, removed: &[usize]) -> Result<SupportGraph> {
        let rest: Vec<usize> = (1..=self.n).filter(|v| !removed.contains(v)).collect();
        self.induced(&rest)
    }

    pub fn is_independent(&self, mask: u64) -> bool {
        self.edges
            .iter()
            .all(|&(i, j)| mask >> (i - 1) & 1 == 0 || mask >> (j - 1) & 1 == 0)
    }

    /// Text form: `n m` on the first line, then one `i j` line per edge.
    pub fn to_file_string(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for (i, j) in &self.edges {
            out.push_str(&format!("{i} {j}\n"));
        }
        out
    }

    pub fn parse(text: &str) -> Result<SupportGraph> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty graph file".into()))?;
        let (n, m) = parse_pair(header)?;
        let mut edges = Vec::with_capacity(m);
        for line in lines {
            let (i, j) = parse_pair(line)?;
            if i >= j {
                return Err(Error::Parse(format!("edge line {line:?} needs i < j")));
            }
            edges.push((i, j));
        }
        if edges.len() != m {
            return Err(Error::Parse(format!(
                "header announces {m} edges, found {}",
                edges.len()
            )));
        }
        SupportGraph::new(n, edges)
    }
}

impl fmt::Debug for SupportGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SupportGraph(n={}, {:?})", self.n, self.edges)
    }
}

fn parse_pair(line: &str) -> Result<(usize, usize)> {
    let parts: Vec<&str> = line.split_whitespace().collect();
    if parts.len() != 2 {
        return Err(Error::Parse(format!("expected two integers in {line:?}")));
    }
    let p = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| Error::Parse(format!("bad integer {s:?}")))
    };
    Ok((p(parts[0])?, p(parts[1])?))
}

/// Exact chromatic number with a witness colouring (colours `1..=χ`).
pub fn chromatic_number(g: &SupportGraph) -> Result<(usize, Vec<usize>)> {
    if g.n > MAX_CHROMATIC_VERTICES {
        return Err(Error::SizeCap(format!(
            "chromatic number limited to {MAX_CHROMATIC_VERTICES} vertices"
        )));
    }
    if g.n == 0 {
        return Ok((0, vec![]));
    }
    let adj = g.adjacency();
    for k in 1..=g.n {
        let mut colour = vec![0usize; g.n];
        if colour_from(&adj, k, 0, 0, &mut colour) {
            return Ok((k, colour));
        }
    }
    unreachable!("n colours always suffice")
}

/// Backtracking with colours introduced in order, so the first vertex
/// taking a new colour fixes the colour permutation.
fn colour_from(adj: &[u64], k: usize, v: usize, used: usize, colour: &mut [usize]) -> bool {
    if v == adj.len() {
        return true;
    }
    for c in 1..=(used + 1).min(k) {
        let clash = (0..v).any(|u| adj[v] >> u & 1 == 1 && colour[u] == c);
        if !clash {
            colour[v] = c;
            if colour_from(adj, k, v + 1, used.max(c), colour) {
                return true;
            }
        }
    }
    colour[v] = 0;
    false
}

/// Maximal independent sets as vertex masks, in ascending mask order.
pub fn maximal_independent_sets(g: &SupportGraph) -> Vec<u64> {
    let adj = g.adjacency();
    let all = if g.n == 64 { u64::MAX } else { (1u64 << g.n) - 1 };
    let mut out = Vec::new();
    // Bron–Kerbosch on the complement graph.
    fn expand(adj: &[u64], all: u64, r: u64, mut p: u64, mut x: u64, out: &mut Vec<u64>) {
        if p == 0 && x == 0 {
            out.push(r);
            return;
        }
        let pivot = (p | x).trailing_zeros() as usize;
        let non_nbrs = |v: usize| all & !adj[v] & !(1u64 << v);
        let mut candidates = p & !non_nbrs(pivot);
        while candidates != 0 {
            let v = candidates.trailing_zeros() as usize;
            candidates &= candidates - 1;
            let bit = 1u64 << v;
            expand(adj, all, r | bit, p & non_nbrs(v), x & non_nbrs(v), out);
            p &= !bit;
            x |= bit;
        }
    }
    if g.n > 0 {
        expand(&adj, all, 0, all, 0, &mut out);
    }
    out.sort_unstable();
    out
}

/// Weights on independent sets covering every vertex at least once.
#[derive(Clone, Debug, PartialEq)]
pub struct FractionalColoring {
    /// `(vertex mask, weight)` with positive weights, ascending mask order.
    pub weights: Vec<(u64, BigRational)>,
}

impl FractionalColoring {
    pub fn total(&self) -> BigRational {
        self.weights
            .iter()
            .fold(BigRational::zero(), |acc, (_, w)| acc + w)
    }

    /// `Σ_{S ∋ v} x_S` for vertex `v` (1-based).
    pub fn coverage(&self, v: usize) -> BigRational {
        self.weights
            .iter()
            .filter(|(s, _)| s >> (v - 1) & 1 == 1)
            .fold(BigRational::zero(), |acc, (_, w)| acc + w)
    }
}

/// `χ_f(G)` by exact LP over the maximal independent sets.
pub fn fractional_chromatic(g: &SupportGraph) -> Result<(BigRational, FractionalColoring)> {
    if g.n > MAX_FRACTIONAL_VERTICES {
        return Err(Error::SizeCap(format!(
            "fractional chromatic number limited to {MAX_FRACTIONAL_VERTICES} vertices"
        )));
    }
    if g.n == 0 {
        return Ok((BigRational::zero(), FractionalColoring { weights: vec![] }));
    }
    let sets = maximal_independent_sets(g);
    let k = sets.len();
    let mut rows: Vec<Vec<i64>> = (0..g.n)
        .map(|v| sets.iter().map(|s| (s >> v & 1) as i64).collect())
        .collect();
    let mut rhs = vec![1i64; g.n];
    for j in 0..k {
        let mut row = vec![0; k];
        row[j] = 1;
        rows.push(row);
        rhs.push(0);
    }
    let lp = LinearProgram::from_integers(&rows, &rhs)?
        .with_objective(vec![BigRational::one(); k])?;
    match solve_min(&lp)? {
        LpOutcome::Optimal { value, witness } => {
            let weights = sets
                .into_iter()
                .zip(witness)
                .filter(|(_, w)| !w.is_zero())
                .collect();
            let colouring = FractionalColoring { weights };
            debug_assert!((1..=g.n).all(|v| colouring.coverage(v) >= BigRational::one()));
            Ok((value, colouring))
        }
        other => Err(Error::Internal(format!(
            "fractional colouring LP returned {other:?}"
        ))),
    }
}

/// `√(χ_f(G)) · √n`, with the exact radicand `χ_f(G) · n`.
#[derive(Clone, Debug, PartialEq)]
pub struct FractionalChromaticBound {
    pub chi_f: BigRational,
    pub radicand: BigRational,
    pub value: f64,
}

impl FractionalChromaticBound {
    /// Exact test of `influence <= √radicand`.
    pub fn admits(&self, influence: &Dyadic) -> bool {
        let i = influence.to_ratio();
        !i.is_positive() || &i * &i <= self.radicand
    }
}

pub fn fracch_bound(g: &SupportGraph) -> Result<FractionalChromaticBound> {
    let (chi_f, _) = fractional_chromatic(g)?;
    let radicand = &chi_f * BigRational::from_integer(g.n.into());
    let value = ratio_to_f64(&radicand).sqrt();
    Ok(FractionalChromaticBound {
        chi_f,
        radicand,
        value,
    })
}

/// `√(n + √(2|E|n))`, with the exact inner radicand `2|E|n`.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeBound {
    pub n: usize,
    pub edges: usize,
    pub inner_radicand: BigInt,
    pub value: f64,
}

impl EdgeBound {
    /// Exact test of `I <= √(n + √(2|E|n))`, i.e. `I² - n <= √(2|E|n)`.
    pub fn admits(&self, influence: &Dyadic) -> bool {
        let i = influence.to_ratio();
        if i.is_negative() {
            return true;
        }
        let excess = &i * &i - BigRational::from_integer(self.n.into());
        !excess.is_positive() || &excess * &excess <= BigRational::from_integer(self.inner_radicand.clone())
    }
}

pub fn edge_bound(g: &SupportGraph) -> EdgeBound {
    let inner = BigInt::from(2 * g.num_edges() * g.n);
    let value = (g.n as f64 + inner.to_f64().unwrap_or(f64::INFINITY).sqrt()).sqrt();
    EdgeBound {
        n: g.n,
        edges: g.num_edges(),
        inner_radicand: inner,
        value,
    }
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

/// Checks that `parts` are disjoint, nonempty and cover `1..=n`.
pub fn check_partition(n: usize, parts: &[Vec<usize>]) -> Result<()> {
    let mut seen = vec![false; n + 1];
    for part in parts {
        if part.is_empty() {
            return Err(Error::InvalidArgument("empty part in cover".into()));
        }
        for &v in part {
            if v == 0 || v > n {
                return Err(Error::InvalidArgument(format!("vertex {v} outside 1..={n}")));
            }
            if seen[v] {
                return Err(Error::InvalidArgument(format!("vertex {v} in two parts")));
            }
            seen[v] = true;
        }
    }
    if let Some(v) = (1..=n).find(|&v| !seen[v]) {
        return Err(Error::InvalidArgument(format!("vertex {v} not covered")));
    }
    Ok(())
}

/// `Σ_i I[G_i]` over a partition into induced subgraphs. A missing part
/// bound defaults to the LTF maximum when the part is edgeless, and to the
/// trivial `|part|` otherwise.
pub fn covering_bound(
    g: &SupportGraph,
    parts: &[Vec<usize>],
    part_bounds: &[Option<Dyadic>],
) -> Result<Dyadic> {
    check_partition(g.n, parts)?;
    if part_bounds.len() != parts.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} parts but {} part bounds",
            parts.len(),
            part_bounds.len()
        )));
    }
    let mut total = Dyadic::zero();
    for (part, bound) in parts.iter().zip(part_bounds) {
        let b = match bound {
            Some(b) => b.clone(),
            None if g.induced(part)?.is_edgeless() => maj_influence(part.len())?,
            None => Dyadic::from_integer(part.len() as i64),
        };
        total = total + b;
    }
    Ok(total)
}

/// Largest `|H|` for which `I[H]` is computed exactly by search.
pub const MAX_EXACT_EXCISION: usize = 4;

/// Bound obtained by excising the vertex set `H` through the covering sum.
#[derive(Clone, Debug, PartialEq)]
pub struct ExcisionBound {
    pub rest_edge_bound: f64,
    pub rest_fracch_bound: f64,
    /// `I[G \ H]` itself when the rest is edgeless.
    pub rest_exact: Option<Dyadic>,
    pub excised: Dyadic,
    /// Whether `excised` is the exact `I[H]` rather than the trivial `|H|`.
    pub excised_exact: bool,
    pub value: f64,
}

/// `min(edge_bound(G \ H), fracch_bound(G \ H)) + I[H]`.
pub fn excision_bound(g: &SupportGraph, removed: &[usize]) -> Result<ExcisionBound> {
    let rest = g.without(removed)?;
    let h = g.induced(removed)?;
    let rest_edge = edge_bound(&rest).value;
    let rest_frac = fracch_bound(&rest)?.value;
    let rest_exact = if rest.is_edgeless() {
        Some(if rest.n == 0 {
            Dyadic::zero()
        } else {
            maj_influence(rest.n)?
        })
    } else {
        None
    };
    let (excised, excised_exact) = if h.n == 0 {
        (Dyadic::zero(), true)
    } else if h.n <= MAX_EXACT_EXCISION {
        (crate::search::max_qtf_influence(&h)?.best.influence, true)
    } else {
        (Dyadic::from_integer(h.n as i64), false)
    };
    let rest_value = rest_exact
        .as_ref()
        .map(Dyadic::to_f64)
        .unwrap_or(f64::INFINITY)
        .min(rest_edge)
        .min(rest_frac);
    Ok(ExcisionBound {
        rest_edge_bound: rest_edge,
        rest_fracch_bound: rest_frac,
        rest_exact,
        value: rest_value + excised.to_f64(),
        excised,
        excised_exact,
    })
}

/// The independent-set distribution behind the fractional bound, thinned
/// so that every vertex is kept with probability exactly `1/χ_f`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverDistribution {
    pub chi_f: BigRational,
    /// `(mask, p_S)`, summing to one.
    pub set_probabilities: Vec<(u64, BigRational)>,
    /// `p_v = Pr[v ∈ S]`.
    pub vertex_probabilities: Vec<BigRational>,
    /// `q_v` with `p_v (1 - q_v) = 1/χ_f`.
    pub thinning: Vec<BigRational>,
    /// `E[|S̃|] = n / χ_f`.
    pub expected_size: BigRational,
}

pub fn thinned_distribution(g: &SupportGraph) -> Result<CoverDistribution> {
    if g.n == 0 {
        return Err(Error::InvalidGraph("thinning needs at least one vertex".into()));
    }
    let (chi_f, colouring) = fractional_chromatic(g)?;
    let set_probabilities: Vec<(u64, BigRational)> = colouring
        .weights
        .iter()
        .map(|(s, w)| (*s, w / &chi_f))
        .collect();
    let target = chi_f.recip();
    let mut vertex_probabilities = Vec::with_capacity(g.n);
    let mut thinning = Vec::with_capacity(g.n);
    for v in 0..g.n {
        let p = set_probabilities
            .iter()
            .filter(|(s, _)| s >> v & 1 == 1)
            .fold(BigRational::zero(), |acc, (_, w)| acc + w);
        if p < target {
            return Err(Error::Internal(format!(
                "vertex {} covered with probability {p} < 1/χ_f",
                v + 1
            )));
        }
        thinning.push(BigRational::one() - &target / &p);
        vertex_probabilities.push(p);
    }
    let expected_size = vertex_probabilities
        .iter()
        .zip(&thinning)
        .fold(BigRational::zero(), |acc, (p, q)| acc + p * (BigRational::one() - q));
    let sum_p = set_probabilities
        .iter()
        .fold(BigRational::zero(), |acc, (_, w)| acc + w);
    if !sum_p.is_one() || expected_size != BigRational::from_integer(g.n.into()) / &chi_f {
        return Err(Error::Internal("thinned distribution arithmetic failed".into()));
    }
    Ok(CoverDistribution {
        chi_f,
        set_probabilities,
        vertex_probabilities,
        thinning,
        expected_size,
    })
}
