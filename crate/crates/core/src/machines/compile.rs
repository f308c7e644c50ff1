//! Compilation of SRAM and PRAM programs to graphings, and acceptance.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::exec::{input_memory, is_halted, pram_trace, sram_trace, MachineConfig};
use super::program::{CmdKind, PramProgram, SramCommand, SramProgram};
use crate::amc::{crew_power, Amc, Gen, Memory, Step, Symbol};
use crate::error::Result;
use crate::graphings::{ConfigPoint, Edge, GraphingRep, Region};
use crate::realalg::{Cmp, Rat};

/// Possible outcomes of one command: guard, generator, next label.
fn branches(c: &SramCommand, proc: u16) -> Vec<(Region, Option<Gen>, usize)> {
    match &c.kind {
        CmdKind::Cond { reg, zero, nonzero } => {
            let loc = reg.resolve(proc);
            vec![
                (Region::atom(loc, Cmp::Eq), None, *zero),
                (Region::atom(loc, Cmp::Ne), None, *nonzero),
            ]
        }
        _ => vec![(Region::whole(), c.generator(), c.label + 1)],
    }
}

/// Graphing with control states `0..=L+1`: 1 is initial, `L + 1` is the
/// accepting halt and 0 the rejecting halt.
pub fn compile_sram(m: &SramProgram) -> Result<GraphingRep> {
    m.validate()?;
    let amc = Amc::sram(m.generators())?;
    let states = (0..=m.end()).map(|l| l.to_string()).collect();
    let mut g = GraphingRep::new(amc, states);
    for c in &m.commands {
        for (source, gen, next) in branches(c, 1) {
            let realiser = gen
                .map(|gen| vec![Step::single(g.amc.symbol_for(&gen, 1))])
                .unwrap_or_default();
            g.edges.push(Edge::new(source, c.label, realiser, next));
        }
    }
    g.init = Some(1);
    g.top = Some(m.end());
    g.bottom = Some(0);
    g.validate()?;
    Ok(g)
}

/// Name of the product state for a label tuple.
pub fn tuple_name(t: &[usize]) -> String {
    let parts: Vec<String> = t.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

/// Graphing over the CREW power of the SRAM model, with states the label
/// tuples reachable by control flow. Each product edge carries one parallel
/// step; same-cell shared writes resolve to the smallest processor when the
/// step acts.
pub fn compile_pram(p: &PramProgram) -> Result<GraphingRep> {
    for m in &p.processors {
        m.validate()?;
    }
    let gens: BTreeSet<Gen> = p.processors.iter().flat_map(|m| m.generators()).collect();
    let amc = crew_power(&Amc::sram(gens)?, p.len() as u16)?;

    let init: Vec<usize> = vec![1; p.len()];
    let top: Vec<usize> = p.processors.iter().map(|m| m.end()).collect();
    let mut ids: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut order: Vec<Vec<usize>> = Vec::new();
    let mut queue = VecDeque::new();
    let mut intern = |t: Vec<usize>, order: &mut Vec<Vec<usize>>, queue: &mut VecDeque<Vec<usize>>| {
        *ids.entry(t.clone()).or_insert_with(|| {
            order.push(t.clone());
            queue.push_back(t);
            order.len() - 1
        })
    };
    intern(init.clone(), &mut order, &mut queue);
    intern(top.clone(), &mut order, &mut queue);
    let mut raw_edges = Vec::new();
    while let Some(t) = queue.pop_front() {
        let from = intern(t.clone(), &mut order, &mut queue);
        let mut partial: Vec<(Region, Vec<Symbol>, Vec<usize>)> = vec![(Region::whole(), Vec::new(), Vec::new())];
        let mut running = false;
        for (i, m) in p.processors.iter().enumerate() {
            let proc = i as u16 + 1;
            let label = t[i];
            let options = if is_halted(m, label) {
                vec![(Region::whole(), None, label)]
            } else {
                running = true;
                branches(m.command(label).expect("running label names a command"), proc)
            };
            let mut next = Vec::new();
            for (region, syms, labels) in &partial {
                for (guard, gen, l) in &options {
                    let r = region.intersect(guard);
                    if r.is_empty() {
                        continue;
                    }
                    let mut syms = syms.clone();
                    if let Some(gen) = gen {
                        syms.push(amc.symbol_for(gen, proc));
                    }
                    let mut labels = labels.clone();
                    labels.push(*l);
                    next.push((r, syms, labels));
                }
            }
            partial = next;
        }
        if !running {
            continue;
        }
        for (region, syms, labels) in partial {
            let to = intern(labels, &mut order, &mut queue);
            let realiser = if syms.is_empty() { Vec::new() } else { vec![Step(syms)] };
            raw_edges.push(Edge::new(region, from, realiser, to));
        }
    }
    let states = order.iter().map(|t| tuple_name(t)).collect();
    let mut g = GraphingRep::new(amc, states);
    g.edges = raw_edges;
    g.init = Some(ids[&init]);
    g.top = Some(ids[&top]);
    let bottom = vec![0; p.len()];
    g.bottom = ids.get(&bottom).copied();
    g.validate()?;
    Ok(g)
}

/// Result of running a graphing on an input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Acceptance {
    pub accepted: bool,
    pub timeout: bool,
    pub steps: usize,
}

/// Initial memory for `x`: machines with processors read `(d, x_1, ..., x_d)`
/// from the shared block, computation trees read `X_1..X_n`.
pub fn initial_memory(g: &GraphingRep, x: &[Rat]) -> Memory {
    if g.amc.signature.processors >= 1 {
        input_memory(x)
    } else {
        let mut m = Memory::new();
        for (i, v) in x.iter().enumerate() {
            m.set(crate::amc::Loc::shared(i as u64 + 1), v.clone());
        }
        m
    }
}

/// Whether the run from the padded input reaches the top state within `k` steps.
pub fn accepts(g: &GraphingRep, x: &[Rat], k: usize) -> Result<Acceptance> {
    let top = g
        .top
        .ok_or_else(|| crate::Error::invalid("graphing has no top state"))?;
    let start = ConfigPoint::new(initial_memory(g, x), g.init.unwrap_or(0));
    let run = g.run(&start, k)?;
    Ok(Acceptance {
        accepted: run.last.state == top,
        timeout: !run.halted,
        steps: run.steps,
    })
}

/// Outcome of running an interpreter and a compiled graphing side by side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TraceAgreement {
    /// Same memory and control state at every step.
    Agree { steps: usize },
    /// First step at which the two configurations differ.
    Diverge { step: usize },
    /// Both sides raised a runtime error.
    BothFail,
    /// Exactly one side raised a runtime error.
    OneFails,
}

impl TraceAgreement {
    pub fn holds(&self) -> bool {
        matches!(self, TraceAgreement::Agree { .. } | TraceAgreement::BothFail)
    }
}

fn compare_traces(
    g: &GraphingRep,
    x: &[Rat],
    trace: Result<Vec<MachineConfig>>,
    k: usize,
    name: impl Fn(&MachineConfig) -> String,
) -> TraceAgreement {
    let start = ConfigPoint::new(initial_memory(g, x), g.init.unwrap_or(0));
    let (trace, gt) = match (trace, g.iterate(&start, k)) {
        (Ok(t), Ok(gt)) => (t, gt),
        (Err(_), Err(_)) => return TraceAgreement::BothFail,
        _ => return TraceAgreement::OneFails,
    };
    for (i, (p, c)) in gt.iter().zip(&trace).enumerate() {
        if p.mem != c.mem || g.states[p.state] != name(c) {
            return TraceAgreement::Diverge { step: i };
        }
    }
    if gt.len() != trace.len() {
        return TraceAgreement::Diverge { step: gt.len().min(trace.len()) };
    }
    TraceAgreement::Agree { steps: trace.len() - 1 }
}

/// Runs `m` and its compiled graphing `g` for at most `k` steps from `x`.
pub fn sram_agreement(m: &SramProgram, g: &GraphingRep, x: &[Rat], k: usize) -> TraceAgreement {
    let trace = sram_trace(m, &MachineConfig::new(input_memory(x), 1), k);
    compare_traces(g, x, trace, k, |c| c.labels[0].to_string())
}

/// Runs `p` and its compiled graphing `g` for at most `k` steps from `x`.
pub fn pram_agreement(p: &PramProgram, g: &GraphingRep, x: &[Rat], k: usize) -> TraceAgreement {
    let trace = pram_trace(p, &MachineConfig::new(input_memory(x), p.len()), k);
    compare_traces(g, x, trace, k, |c| tuple_name(&c.labels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amc::{normalize_word, Loc};
    use crate::machines::exec::{pram_step, sram_trace, MachineConfig};
    use crate::machines::program::{parse_pram, parse_sram};
    use crate::realalg::int;

    const ZERO_TEST: &str = "1: if X1 = 0 goto 2 else 0\n2: skip";

    #[test]
    fn accepts_zero() {
        let g = compile_sram(&parse_sram(ZERO_TEST).unwrap()).unwrap();
        assert!(g.is_deterministic());
        let a = accepts(&g, &[int(0)], 10).unwrap();
        assert!(a.accepted && !a.timeout);
        let a = accepts(&g, &[int(3)], 10).unwrap();
        assert!(!a.accepted && !a.timeout);
    }

    #[test]
    fn timeout_flag() {
        let g = compile_sram(&parse_sram("1: if X0 = 0 goto 2 else 1\n2: skip").unwrap()).unwrap();
        let a = accepts(&g, &[int(1)], 20).unwrap();
        assert!(!a.accepted && a.timeout);
    }

    #[test]
    fn edge_shapes() {
        let g = compile_sram(&parse_sram("1: skip\n2: if X1 = 0 goto 1 else 3\n3: X1 := 4").unwrap()).unwrap();
        assert_eq!(g.states.len(), 5);
        assert_eq!(g.edges.len(), 4);
        assert!(g.edges[0].realiser.is_empty());
        assert!(g.edges[1].source.contains(&Memory::new()));
        assert!(!g.edges[2].source.contains(&Memory::new()));
    }

    #[test]
    fn trace_matches_interpreter() {
        let m = parse_sram("1: X2 := X1 * X1\n2: X1 := X1 - X0\n3: if X1 = 0 goto 4 else 1\n4: skip").unwrap();
        let g = compile_sram(&m).unwrap();
        let start = MachineConfig::new(input_memory(&[int(3)]), 1);
        let t = sram_trace(&m, &start, 30).unwrap();
        let gt = g.iterate(&ConfigPoint::new(start.mem.clone(), 1), 30).unwrap();
        assert_eq!(t.len(), gt.len());
        for (a, b) in t.iter().zip(&gt) {
            assert_eq!(a.mem, b.mem);
            assert_eq!(a.labels[0], b.state);
        }
    }

    #[test]
    fn pram_conflict_matches_step() {
        let p = parse_pram("1: X0 := 5\n2: X1 := Y1\n---\n1: X0 := 7\n2: Y1 := X0").unwrap();
        let g = compile_pram(&p).unwrap();
        assert!(g.is_deterministic());
        let mut cfg = MachineConfig::new(Memory::new(), 2);
        let mut pt = ConfigPoint::new(Memory::new(), g.init.unwrap());
        loop {
            let next = pram_step(&p, &cfg).unwrap();
            match g.step(&pt).unwrap() {
                crate::graphings::StepOutcome::Moved { point, .. } => {
                    let next = next.unwrap();
                    assert_eq!(point.mem, next.mem);
                    assert_eq!(g.states[point.state], tuple_name(&next.labels));
                    cfg = next;
                    pt = point;
                }
                crate::graphings::StepOutcome::Halted => {
                    assert!(next.is_none());
                    break;
                }
            }
        }
        assert_eq!(cfg.mem.get(Loc::shared(0)), int(5));
        assert_eq!(cfg.mem.get(Loc::private(2, 1)), int(5));
    }

    #[test]
    fn single_processor_product() {
        let src = "1: if X1 = 0 goto 3 else 2\n2: X1 := X1 - X0\n3: skip";
        let a = compile_sram(&parse_sram(src).unwrap()).unwrap();
        let b = compile_pram(&parse_pram(src).unwrap()).unwrap();
        assert_eq!(a.edges.len(), b.edges.len());
        for x in -3..4 {
            assert_eq!(accepts(&a, &[int(x)], 50).unwrap(), accepts(&b, &[int(x)], 50).unwrap());
        }
    }

    #[test]
    fn private_programs_commute() {
        let p = parse_pram("1: Y1 := Y1 + Y2\n2: Y2 := 3\n---\n1: Y2 := Y1 * Y1\n2: skip").unwrap();
        let g = compile_pram(&p).unwrap();
        for e in &g.edges {
            for s in &e.realiser {
                if s.0.len() == 2 {
                    let (x, y) = (s.0[0].clone(), s.0[1].clone());
                    assert_eq!(
                        normalize_word(&g.amc.presentation, &[x.clone(), y.clone()]).unwrap(),
                        normalize_word(&g.amc.presentation, &[y, x]).unwrap()
                    );
                }
            }
        }
    }
}
