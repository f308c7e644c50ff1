//! Admissible state sequences, state-cover entropies, cell decompositions,
//! entropic co-trees and computational forests.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::amc::{realiser_word, Word};
use crate::graphings::symbolic::{path_condition, EmptinessOracle, InputSpace};
use crate::graphings::{Emptiness, GraphingRep, Region, StateId};

/// Which sequences count as admissible.
#[derive(Clone, Copy)]
pub enum Admissibility<'a> {
    /// Walks in the state digraph.
    Syntactic,
    /// Walks realised by a nonempty set of points; unknown counts as nonempty.
    Semantic {
        oracle: &'a dyn EmptinessOracle,
        space: &'a InputSpace,
    },
}

/// `log2(n)` accurate to double precision for arbitrarily large `n > 0`.
pub fn log2_big(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 64 {
        return n.to_u64().unwrap().to_f64().unwrap().log2();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_u64().unwrap() as f64;
    top.log2() + shift as f64
}

/// Successor lists of the state digraph.
fn successors(g: &GraphingRep) -> Vec<Vec<StateId>> {
    let mut succ = vec![Vec::new(); g.states.len()];
    for (s, t) in g.state_arcs() {
        succ[s].push(t);
    }
    succ
}

/// State sequences of length `k` (walks with `k - 1` arcs).
pub fn admissible_sequences(g: &GraphingRep, k: usize) -> Vec<Vec<StateId>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let succ = successors(g);
    let mut seqs: Vec<Vec<StateId>> = (0..g.states.len()).map(|s| vec![s]).collect();
    for _ in 1..k {
        seqs = seqs
            .iter()
            .flat_map(|s| {
                succ[*s.last().unwrap()].iter().map(move |t| {
                    let mut n = s.clone();
                    n.push(*t);
                    n
                })
            })
            .collect();
    }
    seqs
}

/// `|Adm_k|` for the syntactic tier, by dynamic programming.
pub fn count_admissible(g: &GraphingRep, k: usize) -> BigUint {
    if k == 0 {
        return BigUint::from(1u32);
    }
    let succ = successors(g);
    let mut ending: Vec<BigUint> = vec![BigUint::from(1u32); g.states.len()];
    for _ in 1..k {
        let mut next = vec![BigUint::zero(); g.states.len()];
        for (s, c) in ending.iter().enumerate() {
            for &t in &succ[s] {
                next[t] += c;
            }
        }
        ending = next;
    }
    ending.into_iter().sum()
}

/// Edge paths of length `len` from `start` whose point set is not known to be empty.
fn live_paths(
    g: &GraphingRep,
    oracle: &dyn EmptinessOracle,
    space: &InputSpace,
    start: StateId,
    len: usize,
) -> Vec<(Vec<usize>, Emptiness)> {
    let mut frontier: Vec<(Vec<usize>, StateId, Emptiness)> = vec![(Vec::new(), start, Emptiness::Nonempty)];
    for _ in 0..len {
        frontier = frontier
            .par_iter()
            .flat_map_iter(|(path, state, _)| {
                g.outgoing(*state).filter_map(move |(id, e)| {
                    let mut p = path.clone();
                    p.push(id);
                    match oracle.emptiness(g, space, start, &p) {
                        Emptiness::Empty => None,
                        em => Some((p, e.to, em)),
                    }
                })
            })
            .collect();
    }
    frontier.into_iter().map(|(p, _, em)| (p, em)).collect()
}

fn states_of(g: &GraphingRep, start: StateId, path: &[usize]) -> Vec<StateId> {
    let mut s = vec![start];
    s.extend(path.iter().map(|&id| g.edges[id].to));
    s
}

/// Number of admissible sequences of length `k` in the chosen tier.
pub fn adm_count(g: &GraphingRep, k: usize, mode: Admissibility<'_>) -> BigUint {
    match mode {
        Admissibility::Syntactic => count_admissible(g, k),
        Admissibility::Semantic { oracle, space } => {
            if k == 0 {
                return BigUint::from(1u32);
            }
            let seqs: BTreeSet<Vec<StateId>> = (0..g.states.len())
                .flat_map(|s| {
                    live_paths(g, oracle, space, s, k - 1)
                        .into_iter()
                        .map(move |(p, _)| states_of(g, s, &p))
                })
                .collect();
            BigUint::from(seqs.len())
        }
    }
}

/// `H^k = log2 |Adm_k| / k`, kept with the exact count it comes from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverEntropy {
    pub k: usize,
    #[serde(with = "biguint_str")]
    pub count: BigUint,
}

impl CoverEntropy {
    /// Unnormalised `H_k = log2 |Adm_k|`, zero when there is no sequence.
    pub fn unnormalized(&self) -> f64 {
        if self.count.is_zero() {
            0.0
        } else {
            log2_big(&self.count)
        }
    }

    pub fn value(&self) -> f64 {
        if self.k == 0 {
            0.0
        } else {
            self.unnormalized() / self.k as f64
        }
    }
}

mod biguint_str {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn state_cover_hk(g: &GraphingRep, k: usize, mode: Admissibility<'_>) -> CoverEntropy {
    CoverEntropy {
        k,
        count: adm_count(g, k, mode),
    }
}

/// Fekete-style estimate of `h0`: the least `H^k` over `1 <= k <= kmax`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct H0Estimate {
    pub value: f64,
    pub argmin: usize,
    pub entropies: Vec<CoverEntropy>,
}

pub fn h0_estimate(g: &GraphingRep, kmax: usize, mode: Admissibility<'_>) -> H0Estimate {
    let entropies: Vec<CoverEntropy> = (1..=kmax.max(1)).map(|k| state_cover_hk(g, k, mode)).collect();
    let (argmin, value) = entropies
        .iter()
        .map(|e| (e.k, e.value()))
        .fold((1, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best });
    H0Estimate {
        value: if value.is_finite() { value } else { 0.0 },
        argmin,
        entropies,
    }
}

/// Set of points at `states[0]` that follow `edges`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cell {
    pub states: Vec<StateId>,
    pub edges: Vec<usize>,
    /// Edge sources and realiser words in path order.
    pub constraints: Vec<(Region, Word)>,
    /// Pulled-back condition on the inputs, when symbolic execution succeeds.
    pub condition: Option<Region>,
    pub emptiness: Emptiness,
}

fn make_cell(g: &GraphingRep, space: &InputSpace, start: StateId, edges: Vec<usize>, emptiness: Emptiness) -> Cell {
    Cell {
        states: states_of(g, start, &edges),
        constraints: edges
            .iter()
            .map(|&id| (g.edges[id].source.clone(), realiser_word(&g.edges[id].realiser)))
            .collect(),
        condition: path_condition(g, space, start, &edges).ok(),
        edges,
        emptiness,
    }
}

/// Cells of the `k`-step decomposition from the given start states.
pub fn cells_from(
    g: &GraphingRep,
    starts: &[StateId],
    k: usize,
    oracle: &dyn EmptinessOracle,
    space: &InputSpace,
) -> Vec<Cell> {
    starts
        .iter()
        .flat_map(|&s| {
            live_paths(g, oracle, space, s, k)
                .into_iter()
                .map(move |(p, em)| make_cell(g, space, s, p, em))
        })
        .collect()
}

/// Cells of the `k`-step decomposition of the initial state (every state
/// when there is none). Distinct edge paths give disjoint cells.
pub fn cell_decomposition(g: &GraphingRep, k: usize, oracle: &dyn EmptinessOracle, space: &InputSpace) -> Vec<Cell> {
    let starts: Vec<StateId> = match g.init {
        Some(s) => vec![s],
        None => (0..g.states.len()).collect(),
    };
    cells_from(g, &starts, k, oracle, space)
}

/// Node `n^π_ē`: points at `π[0]` reaching the top state through `ē`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoTreeNode {
    pub states: Vec<StateId>,
    pub edges: Vec<usize>,
    pub parent: Option<usize>,
    /// Realiser word of the leading edge.
    pub label: Vec<String>,
    pub depth: usize,
}

impl CoTreeNode {
    pub fn key(&self, g: &GraphingRep) -> String {
        let s: Vec<&str> = self.states.iter().map(|&s| g.states[s].as_str()).collect();
        let e: Vec<String> = self.edges.iter().map(ToString::to_string).collect();
        format!("{}|{}", s.join("."), e.join("."))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoTree {
    pub top: StateId,
    pub nodes: Vec<CoTreeNode>,
}

impl CoTree {
    pub fn depth_count(&self, m: usize) -> usize {
        self.nodes.iter().filter(|n| n.depth == m).count()
    }

    pub fn max_depth(&self) -> usize {
        self.nodes.iter().map(|n| n.depth).max().unwrap_or(0)
    }

    pub fn to_dot(&self, g: &GraphingRep) -> String {
        let mut out = String::from("digraph cotree {\n");
        for (i, n) in self.nodes.iter().enumerate() {
            out.push_str(&format!("  n{i} [label=\"{}\"];\n", n.key(g)));
            if let Some(p) = n.parent {
                out.push_str(&format!("  n{i} -> n{p} [label=\"{}\"];\n", n.label.join(" ")));
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Co-tree of depth `k` rooted at `top`; nodes whose emptiness is unknown are kept.
pub fn entropic_cotree(
    g: &GraphingRep,
    k: usize,
    top: StateId,
    oracle: &dyn EmptinessOracle,
    space: &InputSpace,
) -> CoTree {
    let mut nodes = vec![CoTreeNode {
        states: Vec::new(),
        edges: Vec::new(),
        parent: None,
        label: Vec::new(),
        depth: 0,
    }];
    let mut frontier = vec![0usize];
    for depth in 1..=k {
        let level: Vec<CoTreeNode> = frontier
            .par_iter()
            .flat_map_iter(|&pid| {
                let parent = &nodes[pid];
                let head = parent.states.first().copied().unwrap_or(top);
                g.edges
                    .iter()
                    .enumerate()
                    .filter(move |(_, e)| e.to == head)
                    .filter_map(move |(id, e)| {
                        let mut edges = vec![id];
                        edges.extend(&parent.edges);
                        if oracle.emptiness(g, space, e.from, &edges) == Emptiness::Empty {
                            return None;
                        }
                        let mut states = vec![e.from];
                        states.extend(&parent.states);
                        Some(CoTreeNode {
                            states,
                            edges,
                            parent: Some(pid),
                            label: realiser_word(&e.realiser).iter().map(ToString::to_string).collect(),
                            depth,
                        })
                    })
            })
            .collect();
        let start = nodes.len();
        nodes.extend(level);
        frontier = (start..nodes.len()).collect();
    }
    CoTree { top, nodes }
}

/// Node `N_e^m`: the co-tree nodes of depth `m` whose leading edge is `e`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForestNode {
    pub depth: usize,
    pub edge: Option<usize>,
    pub members: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Forest {
    pub nodes: Vec<ForestNode>,
    /// Arcs from depth `m` to depth `m - 1`.
    pub arcs: BTreeSet<(usize, usize)>,
}

impl Forest {
    /// Whether every node has at most one outgoing arc.
    pub fn is_tree(&self) -> bool {
        let mut out: BTreeMap<usize, usize> = BTreeMap::new();
        for (a, _) in &self.arcs {
            *out.entry(*a).or_default() += 1;
        }
        out.values().all(|&c| c <= 1)
    }

    pub fn is_acyclic(&self) -> bool {
        self.arcs
            .iter()
            .all(|&(a, b)| self.nodes[a].depth == self.nodes[b].depth + 1)
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph forest {\n");
        for (i, n) in self.nodes.iter().enumerate() {
            let e = n.edge.map(|e| format!("e{e}")).unwrap_or_else(|| "root".into());
            out.push_str(&format!("  f{i} [label=\"{e}^{}\"];\n", n.depth));
        }
        for (a, b) in &self.arcs {
            out.push_str(&format!("  f{a} -> f{b};\n"));
        }
        out.push_str("}\n");
        out
    }
}

pub fn computational_forest(tree: &CoTree) -> Forest {
    let mut index: BTreeMap<(usize, Option<usize>), usize> = BTreeMap::new();
    let mut nodes: Vec<ForestNode> = Vec::new();
    let mut of_member = vec![0usize; tree.nodes.len()];
    for (i, n) in tree.nodes.iter().enumerate() {
        let key = (n.depth, n.edges.first().copied());
        let id = *index.entry(key).or_insert_with(|| {
            nodes.push(ForestNode {
                depth: key.0,
                edge: key.1,
                members: Vec::new(),
            });
            nodes.len() - 1
        });
        nodes[id].members.push(i);
        of_member[i] = id;
    }
    let arcs = tree
        .nodes
        .iter()
        .enumerate()
        .filter_map(|(i, n)| n.parent.map(|p| (of_member[i], of_member[p])))
        .collect();
    Forest { nodes, arcs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amc::{Amc, Loc, ValueKind};
    use crate::graphings::symbolic::SymbolicOracle;
    use crate::graphings::Edge;
    use crate::realalg::Cmp;

    fn four_state() -> GraphingRep {
        let mut g = GraphingRep::new(Amc::trivial(ValueKind::Real), ["a", "b", "c", "d"].map(String::from).to_vec());
        for (s, t) in [(0, 1), (1, 2), (2, 1), (2, 3)] {
            g.edges.push(Edge::new(Region::whole(), s, Vec::new(), t));
        }
        g
    }

    fn sign_tree() -> GraphingRep {
        let mut g = GraphingRep::new(Amc::trivial(ValueKind::Real), ["r", "p", "z", "n"].map(String::from).to_vec());
        let x = Loc::shared(1);
        for (cmp, t) in [(Cmp::Gt, 1), (Cmp::Eq, 2), (Cmp::Lt, 3)] {
            g.edges.push(Edge::new(Region::atom(x, cmp), 0, Vec::new(), t));
        }
        g.init = Some(0);
        g.top = Some(2);
        g
    }

    #[test]
    fn four_state_sequences() {
        let g = four_state();
        let names = |s: &Vec<StateId>| s.iter().map(|&i| g.states[i].clone()).collect::<String>();
        let adm4: BTreeSet<String> = admissible_sequences(&g, 4).iter().map(names).collect();
        assert!(adm4.contains("abcd"));
        assert!(!adm4.iter().any(|s| s.starts_with("aba")));
        assert_eq!(admissible_sequences(&g, 2).len(), 4);
        assert_eq!(count_admissible(&g, 2), BigUint::from(4u32));
        assert_eq!(state_cover_hk(&g, 2, Admissibility::Syntactic).value(), 1.0);
        for k in 1..8 {
            assert_eq!(count_admissible(&g, k), BigUint::from(admissible_sequences(&g, k).len()));
        }
    }

    #[test]
    fn h0_monotone() {
        let g = four_state();
        let mut prev = f64::INFINITY;
        for kmax in 1..12 {
            let e = h0_estimate(&g, kmax, Admissibility::Syntactic).value;
            assert!(e <= prev);
            prev = e;
        }
        let empty = GraphingRep::new(Amc::trivial(ValueKind::Real), Vec::new());
        assert_eq!(h0_estimate(&empty, 5, Admissibility::Syntactic).value, 0.0);
    }

    #[test]
    fn self_loop_has_zero_entropy() {
        let mut g = GraphingRep::new(Amc::trivial(ValueKind::Real), vec!["s".into()]);
        g.edges.push(Edge::new(Region::whole(), 0, Vec::new(), 0));
        for k in 1..6 {
            assert_eq!(state_cover_hk(&g, k, Admissibility::Syntactic).value(), 0.0);
        }
    }

    #[test]
    fn sign_tree_cells() {
        let g = sign_tree();
        let space = InputSpace::reals(vec![Loc::shared(1)]);
        assert_eq!(cell_decomposition(&g, 0, &SymbolicOracle, &space).len(), 1);
        let cells = cell_decomposition(&g, 1, &SymbolicOracle, &space);
        assert_eq!(cells.len(), 3);
        assert!(cells.iter().all(|c| c.emptiness == Emptiness::Nonempty));
        let sem = state_cover_hk(
            &g,
            2,
            Admissibility::Semantic {
                oracle: &SymbolicOracle,
                space: &space,
            },
        );
        assert_eq!(sem.count, BigUint::from(3u32));
    }

    #[test]
    fn cotree_and_forest() {
        let g = sign_tree();
        let space = InputSpace::reals(vec![Loc::shared(1)]);
        let t = entropic_cotree(&g, 3, 2, &SymbolicOracle, &space);
        assert_eq!(t.depth_count(0), 1);
        assert_eq!(t.depth_count(1), 1);
        assert_eq!(t.depth_count(2), 0);
        let f = computational_forest(&t);
        assert_eq!(f.nodes.len(), 2);
        assert!(f.is_tree() && f.is_acyclic());
        assert!(t.to_dot(&g).contains("->"));
    }

    #[test]
    fn forest_groups_by_leading_edge() {
        let mut g = GraphingRep::new(Amc::trivial(ValueKind::Real), ["a", "b", "c", "t"].map(String::from).to_vec());
        g.edges.push(Edge::new(Region::whole(), 0, Vec::new(), 2));
        g.edges.push(Edge::new(Region::whole(), 1, Vec::new(), 2));
        g.edges.push(Edge::new(Region::whole(), 2, Vec::new(), 3));
        let space = InputSpace::reals(Vec::new());
        let t = entropic_cotree(&g, 2, 3, &SymbolicOracle, &space);
        assert_eq!(t.depth_count(2), 2);
        let f = computational_forest(&t);
        assert_eq!(f.nodes.len(), 1 + 1 + 2);
        let mut g2 = GraphingRep::new(Amc::trivial(ValueKind::Real), ["a", "b", "t"].map(String::from).to_vec());
        g2.edges.push(Edge::new(Region::whole(), 0, Vec::new(), 1));
        g2.edges.push(Edge::new(Region::whole(), 1, Vec::new(), 2));
        g2.edges.push(Edge::new(Region::whole(), 1, Vec::new(), 2));
        let t2 = entropic_cotree(&g2, 2, 2, &SymbolicOracle, &space);
        assert_eq!(t2.depth_count(2), 2);
        let f2 = computational_forest(&t2);
        assert_eq!(f2.nodes.iter().filter(|n| n.depth == 2).count(), 1);
        assert!(!f2.is_tree() && f2.is_acyclic());
    }

    #[test]
    fn log2_of_large_counts() {
        let n = BigUint::from(1u32) << 200u32;
        assert_eq!(log2_big(&n), 200.0);
        assert!((log2_big(&BigUint::from(12u32)) - 12f64.log2()).abs() < 1e-12);
    }
}
