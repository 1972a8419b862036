//! Strong quasi-n-partite graphs and the ideals built from them.
//!
//! The generalized graph ideal `I_t` is computed from its composition
//! formula: a sum, over degree profiles `(q_1, ..., q_n)` with `Σ q_i = t`
//! and no `q_i = t`, of products of bounded Veronese-type ideals. Walk
//! enumeration is kept separately as an oracle for that formula.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::ideal::MonomialIdeal;
use crate::monomial::{BlockShape, Monomial};

/// Default per-variable exponent cap of the Veronese-type factors.
pub const DEFAULT_CAP: u32 = 2;

/// Which pairs of blocks are joined by edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum EdgeSemantics {
    /// Every two vertices in different blocks are adjacent.
    #[default]
    CompleteMultipartite,
    /// Only vertices in blocks `i` and `i + 1` are adjacent.
    ConsecutiveParts,
}

impl EdgeSemantics {
    pub fn joins(self, block_a: usize, block_b: usize) -> bool {
        match self {
            EdgeSemantics::CompleteMultipartite => block_a != block_b,
            EdgeSemantics::ConsecutiveParts => block_a.abs_diff(block_b) == 1,
        }
    }
}

impl fmt::Display for EdgeSemantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdgeSemantics::CompleteMultipartite => "complete",
            EdgeSemantics::ConsecutiveParts => "consecutive",
        })
    }
}

impl FromStr for EdgeSemantics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "complete" => Ok(EdgeSemantics::CompleteMultipartite),
            "consecutive" => Ok(EdgeSemantics::ConsecutiveParts),
            other => Err(Error::Parse(format!(
                "edges must be 'complete' or 'consecutive', got {other:?}"
            ))),
        }
    }
}

/// `K'_{m_1,...,m_n}`: a multipartite graph with a loop at every vertex.
/// The vertices are the variables of `shape`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StrongQuasiGraph {
    shape: BlockShape,
    edges: EdgeSemantics,
}

impl StrongQuasiGraph {
    pub fn new(shape: BlockShape, edges: EdgeSemantics) -> Self {
        Self { shape, edges }
    }

    pub fn complete(sizes: &[usize]) -> Result<Self> {
        Ok(Self::new(
            BlockShape::new(sizes)?,
            EdgeSemantics::CompleteMultipartite,
        ))
    }

    pub fn shape(&self) -> &BlockShape {
        &self.shape
    }

    pub fn edge_semantics(&self) -> EdgeSemantics {
        self.edges
    }

    /// Whether the distinct vertices at flat positions `a` and `b` are adjacent.
    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        a != b
            && self
                .edges
                .joins(self.shape.block_of(a), self.shape.block_of(b))
    }
}

impl fmt::Display for StrongQuasiGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "shape={};edges={}", self.shape, self.edges)
    }
}

impl FromStr for StrongQuasiGraph {
    type Err = Error;

    /// Parses `shape=m1,...,mn;edges=complete|consecutive`; `edges` is optional.
    fn from_str(s: &str) -> Result<Self> {
        let mut shape = None;
        let mut edges = EdgeSemantics::default();
        for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part.split_once('=').ok_or_else(|| {
                Error::Parse(format!("expected key=value in graph spec, got {part:?}"))
            })?;
            match key.trim() {
                "shape" => shape = Some(value.parse::<BlockShape>()?),
                "edges" => edges = value.parse()?,
                other => return Err(Error::Parse(format!("unknown graph key {other:?}"))),
            }
        }
        let shape = shape.ok_or_else(|| Error::Parse(format!("graph spec {s:?} has no shape")))?;
        Ok(Self::new(shape, edges))
    }
}

/// One summand index of `I_t`: block degrees `q` with `Σ q_i = t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Composition {
    pub t: u32,
    pub cap: u32,
    pub q: Vec<u32>,
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q: Vec<String> = self.q.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", q.join(","))
    }
}

/// All vectors of length `parts` with entries in `0..=cap` summing to `total`,
/// in lexicographic order.
pub fn bounded_compositions(total: u32, parts: usize, cap: u32) -> Vec<Vec<u32>> {
    fn go(total: u32, parts: usize, cap: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 0 {
            if total == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        let room = u64::from(cap) * (parts as u64 - 1);
        let low = u64::from(total).saturating_sub(room) as u32;
        for x in low..=cap.min(total) {
            prefix.push(x);
            go(total - x, parts - 1, cap, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(total, parts, cap, &mut Vec::with_capacity(parts), &mut out);
    out
}

/// `L_{block,q,cap}`: monomials of block degree `q` supported in `block`
/// with every exponent at most `cap`. `q = 0` gives the unit ideal.
pub fn veronese_type(shape: &BlockShape, block: usize, q: u32, cap: u32) -> Result<MonomialIdeal> {
    let range = shape.block_range(block)?;
    let max = u64::from(cap) * range.len() as u64;
    if u64::from(q) > max {
        return Err(Error::InvalidArgument(format!(
            "degree {q} exceeds {max} for block {block} with cap {cap}"
        )));
    }
    let gens = bounded_compositions(q, range.len(), cap)
        .into_iter()
        .map(|local| {
            let mut e = vec![0; shape.variables()];
            e[range.clone()].copy_from_slice(&local);
            Monomial::from_raw(shape, e)
        });
    Ok(MonomialIdeal::minimalize_unchecked(shape, gens.collect()))
}

/// Valid compositions of `t`: `0 ≤ q_i ≤ cap·m_i`, `q_i ≠ t`, in
/// lexicographic order of `q`.
pub fn compositions(shape: &BlockShape, t: u32, cap: u32) -> Vec<Composition> {
    fn go(
        sizes: &[usize],
        remaining: u32,
        t: u32,
        cap: u32,
        prefix: &mut Vec<u32>,
        out: &mut Vec<Composition>,
    ) {
        let Some((&m, rest)) = sizes.split_first() else {
            if remaining == 0 {
                out.push(Composition {
                    t,
                    cap,
                    q: prefix.clone(),
                });
            }
            return;
        };
        let room: u64 = rest.iter().map(|&r| u64::from(cap) * r as u64).sum();
        let low = u64::from(remaining).saturating_sub(room);
        let high = (u64::from(cap) * m as u64).min(u64::from(remaining));
        for q in low..=high {
            let q = q as u32;
            if q == t {
                continue;
            }
            prefix.push(q);
            go(rest, remaining - q, t, cap, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(shape.block_sizes(), t, t, cap, &mut Vec::new(), &mut out);
    out
}

/// Product of the Veronese-type factors of one composition.
fn composition_summand(shape: &BlockShape, c: &Composition) -> Result<MonomialIdeal> {
    let mut acc = MonomialIdeal::unit(shape);
    for (i, &q) in c.q.iter().enumerate() {
        acc = acc.product(&veronese_type(shape, i + 1, q, c.cap)?)?;
    }
    Ok(acc)
}

/// The generalized graph ideal `I_t(G)` with exponent cap `cap`.
pub fn generalized_graph_ideal(
    graph: &StrongQuasiGraph,
    t: u32,
    cap: u32,
) -> Result<MonomialIdeal> {
    if t < 2 {
        return Err(Error::InvalidArgument(format!(
            "t must be at least 2, got {t}"
        )));
    }
    let shape = graph.shape();
    let mut acc = MonomialIdeal::zero(shape);
    for c in compositions(shape, t, cap) {
        acc = acc.add(&composition_summand(shape, &c)?)?;
    }
    Ok(acc)
}

/// Range of `t` for which `I_t` is stated to be nontrivial: `2 ≤ t ≤ cap·N − 1`.
pub fn nontrivial_range(shape: &BlockShape, cap: u32) -> std::ops::RangeInclusive<u64> {
    2..=(u64::from(cap) * shape.variables() as u64).saturating_sub(1)
}

/// Diagnostics for a requested `t`, empty when `t` is in the stated range.
pub fn degree_warnings(shape: &BlockShape, t: u32, cap: u32) -> Vec<String> {
    let range = nontrivial_range(shape, cap);
    if range.contains(&u64::from(t)) {
        return Vec::new();
    }
    let count = compositions(shape, t, cap).len();
    vec![format!(
        "t={t} is outside the nontrivial range {}..={} (formula yields {count} composition(s))",
        range.start(),
        range.end()
    )]
}

/// Edge ideal `I(G)`: `x_u·x_v` for every edge and `x_v²` for every loop.
pub fn edge_ideal(graph: &StrongQuasiGraph) -> MonomialIdeal {
    let shape = graph.shape();
    let n = shape.variables();
    let mut gens = Vec::new();
    for a in 0..n {
        for b in a..n {
            if a == b || graph.adjacent(a, b) {
                let mut e = vec![0; n];
                e[a] += 1;
                e[b] += 1;
                gens.push(Monomial::from_raw(shape, e));
            }
        }
    }
    MonomialIdeal::minimalize_unchecked(shape, gens)
}

/// `I_t^k` evaluated term by term from the composition formula:
/// `Σ_{k_1+...+k_r=k} Π_i Π_h L_{i,q_{h,i},cap}^{k_h}`, where each power of a
/// Veronese-type factor is taken as `L_{i, k_h·q_{h,i}, k_h·cap}`.
pub fn power_via_compositions(
    graph: &StrongQuasiGraph,
    t: u32,
    k: u32,
    cap: u32,
) -> Result<MonomialIdeal> {
    if k == 0 {
        return Err(Error::InvalidArgument(
            "power exponent must be at least 1".into(),
        ));
    }
    if t < 2 {
        return Err(Error::InvalidArgument(format!(
            "t must be at least 2, got {t}"
        )));
    }
    let shape = graph.shape();
    let comps = compositions(shape, t, cap);
    let mut acc = MonomialIdeal::zero(shape);
    if comps.is_empty() {
        return Ok(acc);
    }
    for ks in bounded_compositions(k, comps.len(), k) {
        let mut summand = MonomialIdeal::unit(shape);
        for block in 1..=shape.blocks() {
            for (c, &kh) in comps.iter().zip(&ks) {
                if kh == 0 {
                    continue;
                }
                let q = c.q[block - 1].checked_mul(kh).ok_or(Error::Overflow)?;
                let factor =
                    veronese_type(shape, block, q, cap.checked_mul(kh).ok_or(Error::Overflow)?)?;
                summand = summand.product(&factor)?;
            }
        }
        acc = acc.add(&summand)?;
    }
    Ok(acc)
}

/// Rules applied when enumerating walks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WalkPolicy {
    /// No edge or loop may be traversed twice.
    pub trail: bool,
    /// Block indices along the walk never decrease.
    pub monotone: bool,
}

impl Default for WalkPolicy {
    fn default() -> Self {
        Self {
            trail: true,
            monotone: true,
        }
    }
}

/// Vertex-product monomials of all walks of length `length` (so degree
/// `length + 1`), dropping monomials supported in a single block.
pub fn enumerate_walk_monomials(
    graph: &StrongQuasiGraph,
    length: usize,
    policy: WalkPolicy,
) -> Result<Vec<Monomial>> {
    if length == 0 {
        return Err(Error::InvalidArgument(
            "walk length must be at least 1".into(),
        ));
    }
    struct Search<'a> {
        graph: &'a StrongQuasiGraph,
        policy: WalkPolicy,
        length: usize,
        exponents: Vec<u32>,
        used: Vec<(usize, usize)>,
        found: BTreeSet<Vec<u32>>,
    }

    impl Search<'_> {
        fn step(&mut self, at: usize, depth: usize) {
            if depth == self.length {
                self.found.insert(self.exponents.clone());
                return;
            }
            let shape = self.graph.shape();
            for next in 0..shape.variables() {
                if next != at && !self.graph.adjacent(at, next) {
                    continue;
                }
                if self.policy.monotone && shape.block_of(next) < shape.block_of(at) {
                    continue;
                }
                let edge = (at.min(next), at.max(next));
                if self.policy.trail && self.used.contains(&edge) {
                    continue;
                }
                self.used.push(edge);
                self.exponents[next] += 1;
                self.step(next, depth + 1);
                self.exponents[next] -= 1;
                self.used.pop();
            }
        }
    }

    let shape = graph.shape();
    let mut search = Search {
        graph,
        policy,
        length,
        exponents: vec![0; shape.variables()],
        used: Vec::with_capacity(length),
        found: BTreeSet::new(),
    };
    for start in 0..shape.variables() {
        search.exponents[start] += 1;
        search.step(start, 0);
        search.exponents[start] -= 1;
    }
    let mut out: Vec<Monomial> = search
        .found
        .into_iter()
        .map(|e| Monomial::from_raw(shape, e))
        .filter(|m| {
            let blocks: BTreeSet<usize> = m.support().map(|k| shape.block_of(k)).collect();
            blocks.len() > 1
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Set-wise comparison of walk monomials against `G(I_{length+1})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkComparison {
    pub length: usize,
    pub policy: WalkPolicy,
    pub walk_monomials: Vec<Monomial>,
    pub formula: MonomialIdeal,
    pub only_walks: Vec<Monomial>,
    pub only_formula: Vec<Monomial>,
}

impl WalkComparison {
    pub fn agree(&self) -> bool {
        self.only_walks.is_empty() && self.only_formula.is_empty()
    }
}

pub fn compare_walks_with_formula(
    graph: &StrongQuasiGraph,
    length: usize,
    policy: WalkPolicy,
    cap: u32,
) -> Result<WalkComparison> {
    let walk_monomials = enumerate_walk_monomials(graph, length, policy)?;
    let t = u32::try_from(length + 1).map_err(|_| Error::Overflow)?;
    let formula = generalized_graph_ideal(graph, t, cap)?;
    let walks: BTreeSet<&Monomial> = walk_monomials.iter().collect();
    let gens: BTreeSet<&Monomial> = formula.generators().iter().collect();
    let only_walks = walks.difference(&gens).map(|m| (*m).clone()).collect();
    let only_formula = gens.difference(&walks).map(|m| (*m).clone()).collect();
    Ok(WalkComparison {
        length,
        policy,
        walk_monomials,
        formula,
        only_walks,
        only_formula,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(sizes: &[usize]) -> StrongQuasiGraph {
        StrongQuasiGraph::complete(sizes).unwrap()
    }

    fn parse_all(shape: &BlockShape, gens: &[&str]) -> MonomialIdeal {
        MonomialIdeal::minimalize(
            shape,
            gens.iter().map(|g| Monomial::parse(shape, g).unwrap()),
        )
        .unwrap()
    }

    #[test]
    fn graph_spec_round_trip() {
        let g: StrongQuasiGraph = "shape=2,2,2;edges=complete".parse().unwrap();
        assert_eq!(g.to_string(), "shape=2,2,2;edges=complete");
        let c: StrongQuasiGraph = "shape=1,2,3;edges=consecutive".parse().unwrap();
        assert_eq!(c.edge_semantics(), EdgeSemantics::ConsecutiveParts);
        let d: StrongQuasiGraph = "shape=3".parse().unwrap();
        assert_eq!(d.edge_semantics(), EdgeSemantics::CompleteMultipartite);
        assert!("edges=complete".parse::<StrongQuasiGraph>().is_err());
        assert!("shape=2,2;edges=weird".parse::<StrongQuasiGraph>().is_err());
        assert!("shape=2,0".parse::<StrongQuasiGraph>().is_err());
    }

    #[test]
    fn veronese_examples() {
        let s = BlockShape::new(&[2, 2, 2]).unwrap();
        assert_eq!(
            veronese_type(&s, 1, 1, 2).unwrap(),
            parse_all(&s, &["x[1,1]", "x[1,2]"])
        );
        assert_eq!(
            veronese_type(&s, 2, 3, 2).unwrap(),
            parse_all(&s, &["x[2,1]^2*x[2,2]", "x[2,1]*x[2,2]^2"])
        );
        assert_eq!(
            veronese_type(&s, 3, 4, 2).unwrap(),
            parse_all(&s, &["x[3,1]^2*x[3,2]^2"])
        );
        assert!(veronese_type(&s, 1, 0, 2).unwrap().is_unit());
        assert!(veronese_type(&s, 1, 5, 2).is_err());
        assert!(veronese_type(&s, 4, 1, 2).is_err());
    }

    #[test]
    fn composition_lists() {
        let s = BlockShape::new(&[2, 2, 2]).unwrap();
        let nine: Vec<Vec<u32>> = compositions(&s, 9, 2).into_iter().map(|c| c.q).collect();
        assert_eq!(
            nine,
            vec![
                vec![1, 4, 4],
                vec![2, 3, 4],
                vec![2, 4, 3],
                vec![3, 2, 4],
                vec![3, 3, 3],
                vec![3, 4, 2],
                vec![4, 1, 4],
                vec![4, 2, 3],
                vec![4, 3, 2],
                vec![4, 4, 1],
            ]
        );
        let eleven: Vec<Vec<u32>> = compositions(&s, 11, 2).into_iter().map(|c| c.q).collect();
        assert_eq!(eleven, vec![vec![3, 4, 4], vec![4, 3, 4], vec![4, 4, 3]]);
        let s22 = BlockShape::new(&[2, 2]).unwrap();
        let two: Vec<Vec<u32>> = compositions(&s22, 2, 2).into_iter().map(|c| c.q).collect();
        assert_eq!(two, vec![vec![1, 1]]);
        assert!(compositions(&BlockShape::new(&[3]).unwrap(), 2, 2).is_empty());
    }

    #[test]
    fn bounded_composition_counts() {
        assert_eq!(bounded_compositions(3, 2, 2).len(), 2);
        assert_eq!(bounded_compositions(0, 3, 2), vec![vec![0, 0, 0]]);
        assert_eq!(bounded_compositions(7, 3, 2).len(), 0);
        assert_eq!(bounded_compositions(3, 3, 2).len(), 7);
        assert_eq!(bounded_compositions(2, 0, 2).len(), 0);
    }

    #[test]
    fn small_generalized_graph_ideals() {
        let g = k(&[2, 2]);
        let s = g.shape().clone();
        assert_eq!(
            generalized_graph_ideal(&g, 2, 2).unwrap(),
            parse_all(
                &s,
                &[
                    "x[1,1]*x[2,1]",
                    "x[1,1]*x[2,2]",
                    "x[1,2]*x[2,1]",
                    "x[1,2]*x[2,2]"
                ]
            )
        );
        assert!(generalized_graph_ideal(&g, 1, 2).is_err());
        assert!(generalized_graph_ideal(&g, 9, 2).unwrap().is_zero());
        // t = 2N still has the single composition (2m_1, ..., 2m_n)
        assert_eq!(generalized_graph_ideal(&g, 8, 2).unwrap().len(), 1);
        assert_eq!(degree_warnings(&s, 8, 2).len(), 1);
        assert!(degree_warnings(&s, 7, 2).is_empty());
        assert!(generalized_graph_ideal(&k(&[3]), 3, 2).unwrap().is_zero());
    }

    #[test]
    fn tripartite_t2_is_all_cross_pairs() {
        let g = k(&[2, 2, 2]);
        let i2 = generalized_graph_ideal(&g, 2, 2).unwrap();
        assert_eq!(i2.len(), 12);
        assert!(i2.generators().iter().all(|m| m.support().count() == 2));
    }

    #[test]
    fn edge_ideals() {
        let g = k(&[2, 2]);
        let s = g.shape().clone();
        assert_eq!(
            edge_ideal(&g),
            parse_all(
                &s,
                &[
                    "x[1,1]*x[2,1]",
                    "x[1,1]*x[2,2]",
                    "x[1,2]*x[2,1]",
                    "x[1,2]*x[2,2]",
                    "x[1,1]^2",
                    "x[1,2]^2",
                    "x[2,1]^2",
                    "x[2,2]^2"
                ]
            )
        );
        let g11 = k(&[1, 1]);
        assert_eq!(
            edge_ideal(&g11),
            parse_all(g11.shape(), &["x[1,1]*x[2,1]", "x[1,1]^2", "x[2,1]^2"])
        );
        assert_eq!(edge_ideal(&k(&[2, 2, 2])).len(), 18);
        let path: StrongQuasiGraph = "shape=1,1,1;edges=consecutive".parse().unwrap();
        // x11*x31 is not an edge of the consecutive reading
        assert_eq!(edge_ideal(&path).len(), 5);
    }

    #[test]
    fn formula_power_matches_naive_power_small() {
        let g = k(&[2, 2]);
        let i3 = generalized_graph_ideal(&g, 3, 2).unwrap();
        assert_eq!(
            power_via_compositions(&g, 3, 2, 2).unwrap(),
            i3.power(2).unwrap()
        );
        assert_eq!(power_via_compositions(&g, 3, 1, 2).unwrap(), i3);
        assert!(power_via_compositions(&g, 3, 0, 2).is_err());
    }

    #[test]
    fn walk_oracle_small_cases() {
        let g = k(&[2, 2]);
        let walks = enumerate_walk_monomials(&g, 1, WalkPolicy::default()).unwrap();
        assert_eq!(
            walks,
            generalized_graph_ideal(&g, 2, 2).unwrap().generators()
        );

        let g11 = k(&[1, 1]);
        let walks = enumerate_walk_monomials(&g11, 2, WalkPolicy::default()).unwrap();
        let expected = vec![
            Monomial::parse(g11.shape(), "x[1,1]^2*x[2,1]").unwrap(),
            Monomial::parse(g11.shape(), "x[1,1]*x[2,1]^2").unwrap(),
        ];
        assert_eq!(walks, expected);
        assert!(enumerate_walk_monomials(&g11, 0, WalkPolicy::default()).is_err());
    }

    #[test]
    fn walk_policies_widen_the_set() {
        let g = k(&[1, 1]);
        let free = WalkPolicy {
            trail: false,
            monotone: false,
        };
        let walks = enumerate_walk_monomials(&g, 3, free).unwrap();
        // x11^3*x21 comes from repeating the loop at x11
        assert!(walks.contains(&Monomial::parse(g.shape(), "x[1,1]^3*x[2,1]").unwrap()));
        let trail = enumerate_walk_monomials(&g, 3, WalkPolicy::default()).unwrap();
        assert!(trail.iter().all(|m| m.exponents().iter().all(|&e| e <= 2)));
    }
}
