//! Graphing representatives over an AMC and the partial maps they induce.

pub mod region;
pub mod symbolic;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

pub use region::{cell, loc_var, parse_atom, show_poly, var_loc, Emptiness, Region};

use crate::amc::{realiser_word, Amc, Memory, Step};
use crate::error::{Error, Result};

pub type StateId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub source: Region,
    pub from: StateId,
    pub realiser: Vec<Step>,
    pub to: StateId,
}

impl Edge {
    pub fn new(source: Region, from: StateId, realiser: Vec<Step>, to: StateId) -> Self {
        Edge {
            source,
            from,
            realiser,
            to,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ConfigPoint {
    pub mem: Memory,
    pub state: StateId,
}

impl ConfigPoint {
    pub fn new(mem: Memory, state: StateId) -> Self {
        ConfigPoint { mem, state }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepOutcome {
    Moved { point: ConfigPoint, edge: usize },
    Halted,
}

/// Finite graphing representative: control states, edges, and optional
/// initial, accepting (top) and rejecting (bottom) states.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphingRep {
    pub amc: Amc,
    pub states: Vec<String>,
    pub edges: Vec<Edge>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub init: Option<StateId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub top: Option<StateId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bottom: Option<StateId>,
}

/// How a run from one point ended.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutcome {
    pub last: ConfigPoint,
    pub steps: usize,
    pub halted: bool,
}

impl GraphingRep {
    pub fn new(amc: Amc, states: Vec<String>) -> Self {
        GraphingRep {
            amc,
            states,
            edges: Vec::new(),
            init: None,
            top: None,
            bottom: None,
        }
    }

    pub fn state(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.states.len();
        for (i, e) in self.edges.iter().enumerate() {
            if e.from >= n || e.to >= n {
                return Err(Error::invalid(format!("edge {i} names a state outside 0..{n}")));
            }
            for g in realiser_word(&e.realiser) {
                self.amc.action(&g)?;
            }
        }
        for s in [self.init, self.top, self.bottom].into_iter().flatten() {
            if s >= n {
                return Err(Error::invalid(format!("distinguished state {s} outside 0..{n}")));
            }
        }
        Ok(())
    }

    pub fn outgoing(&self, s: StateId) -> impl Iterator<Item = (usize, &Edge)> {
        self.edges.iter().enumerate().filter(move |(_, e)| e.from == s)
    }

    /// Sources of edges leaving the same state are pairwise disjoint.
    pub fn is_deterministic(&self) -> bool {
        let mut by_state: BTreeMap<StateId, Vec<&Edge>> = BTreeMap::new();
        for e in &self.edges {
            by_state.entry(e.from).or_default().push(e);
        }
        by_state.values().all(|es| {
            es.iter().enumerate().all(|(i, a)| {
                es[i + 1..].iter().all(|b| a.source.intersect(&b.source).is_empty())
            })
        })
    }

    /// Arcs `(s, t)` such that some edge goes from `s` to `t`.
    pub fn state_arcs(&self) -> BTreeSet<(StateId, StateId)> {
        self.edges.iter().map(|e| (e.from, e.to)).collect()
    }

    /// A topological order of the states if the state digraph is acyclic.
    pub fn topological_order(&self) -> Option<Vec<StateId>> {
        let n = self.states.len();
        let arcs = self.state_arcs();
        let mut indeg = vec![0usize; n];
        let mut succ = vec![Vec::new(); n];
        for &(a, b) in &arcs {
            indeg[b] += 1;
            succ[a].push(b);
        }
        let mut queue: VecDeque<StateId> = (0..n).filter(|&s| indeg[s] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(s) = queue.pop_front() {
            order.push(s);
            for &t in &succ[s] {
                indeg[t] -= 1;
                if indeg[t] == 0 {
                    queue.push_back(t);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    /// Every edge strictly increases the state in some order.
    pub fn is_treeing(&self) -> bool {
        self.topological_order().is_some()
    }

    /// Applies the unique matching edge. Several matches are a contract
    /// violation; an undefined realiser under a matching edge is an error.
    pub fn step(&self, p: &ConfigPoint) -> Result<StepOutcome> {
        let mut hits = self
            .outgoing(p.state)
            .filter(|(_, e)| e.source.contains(&p.mem));
        let Some((id, edge)) = hits.next() else {
            return Ok(StepOutcome::Halted);
        };
        if let Some((other, _)) = hits.next() {
            return Err(Error::Nondeterministic(format!(
                "edges {id} and {other} both match at state {}",
                self.states[p.state]
            )));
        }
        match self.amc.realiser_apply(&edge.realiser, &p.mem)? {
            Some(mem) => Ok(StepOutcome::Moved {
                point: ConfigPoint::new(mem, edge.to),
                edge: id,
            }),
            None => Err(Error::RealiserUndefined { edge: id }),
        }
    }

    /// Trace of at most `k + 1` points, stopping early when halted.
    pub fn iterate(&self, p: &ConfigPoint, k: usize) -> Result<Vec<ConfigPoint>> {
        let mut trace = vec![p.clone()];
        for _ in 0..k {
            match self.step(trace.last().unwrap())? {
                StepOutcome::Moved { point, .. } => trace.push(point),
                StepOutcome::Halted => break,
            }
        }
        Ok(trace)
    }

    /// Edge ids taken along a run of at most `k` steps.
    pub fn edge_path(&self, p: &ConfigPoint, k: usize) -> Result<Vec<usize>> {
        let mut cur = p.clone();
        let mut path = Vec::new();
        for _ in 0..k {
            match self.step(&cur)? {
                StepOutcome::Moved { point, edge } => {
                    path.push(edge);
                    cur = point;
                }
                StepOutcome::Halted => break,
            }
        }
        Ok(path)
    }

    /// Runs until halting or the budget is exhausted, keeping only the last point.
    pub fn run(&self, p: &ConfigPoint, budget: usize) -> Result<RunOutcome> {
        let mut cur = p.clone();
        for steps in 0..budget {
            match self.step(&cur)? {
                StepOutcome::Moved { point, .. } => cur = point,
                StepOutcome::Halted => {
                    return Ok(RunOutcome {
                        last: cur,
                        steps,
                        halted: true,
                    })
                }
            }
        }
        let halted = self.step(&cur)? == StepOutcome::Halted;
        Ok(RunOutcome {
            last: cur,
            steps: budget,
            halted,
        })
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph graphing {\n");
        for (i, name) in self.states.iter().enumerate() {
            let shape = if Some(i) == self.top {
                "doublecircle"
            } else if Some(i) == self.bottom {
                "box"
            } else {
                "circle"
            };
            out.push_str(&format!("  s{i} [label=\"{name}\", shape={shape}];\n"));
        }
        for (id, e) in self.edges.iter().enumerate() {
            let word: Vec<String> = e.realiser.iter().map(ToString::to_string).collect();
            let label = format!("e{id}: {} / {}", e.source, word.join(" "));
            out.push_str(&format!("  s{} -> s{} [label=\"{}\"];\n", e.from, e.to, label.replace('"', "'")));
        }
        out.push_str("}\n");
        out
    }

    /// Whether `self` refines `g`: its edges split into groups, one per edge of
    /// `g`, with equal realisers and transitions, pairwise disjoint sources
    /// whose union is the `g`-edge's source. Edges with empty source are ignored.
    pub fn refines(&self, g: &GraphingRep) -> bool {
        if self.states.len() != g.states.len() {
            return false;
        }
        let mut groups: Vec<Vec<&Region>> = vec![Vec::new(); g.edges.len()];
        for f in &self.edges {
            if f.source.is_empty() {
                continue;
            }
            let slot = g.edges.iter().position(|e| {
                e.from == f.from && e.to == f.to && e.realiser == f.realiser && f.source.subset_of(&e.source)
            });
            match slot {
                Some(i) => groups[i].push(&f.source),
                None => return false,
            }
        }
        g.edges.iter().zip(&groups).all(|(e, parts)| {
            let disjoint = parts
                .iter()
                .enumerate()
                .all(|(i, a)| parts[i + 1..].iter().all(|b| a.intersect(b).is_empty()));
            disjoint && covers(&e.source, parts)
        })
    }

    /// Both graphings are refined by their common refinement (pairwise
    /// source intersections of matching edges).
    pub fn equivalent(&self, g: &GraphingRep) -> bool {
        if self.states.len() != g.states.len() {
            return false;
        }
        let mut meet = self.clone();
        meet.edges.clear();
        for f in &self.edges {
            for e in &g.edges {
                if e.from == f.from && e.to == f.to && e.realiser == f.realiser {
                    let s = f.source.intersect(&e.source);
                    if !s.is_empty() {
                        meet.edges.push(Edge::new(s, f.from, f.realiser.clone(), f.to));
                    }
                }
            }
        }
        meet.refines(self) && meet.refines(g)
    }
}

/// Certifies `region ⊆ ∪ parts` by exhausting `region \ parts` through the
/// negated constraints of each part.
fn covers(region: &Region, parts: &[&Region]) -> bool {
    if region.is_empty() {
        return true;
    }
    let Some((first, rest)) = parts.split_first() else {
        return false;
    };
    if first.is_whole() {
        return true;
    }
    first
        .negated_constraints()
        .iter()
        .all(|n| covers(&region.intersect(n), rest))
}
