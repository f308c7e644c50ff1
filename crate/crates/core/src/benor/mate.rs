//! Real mate of an integer PRAM treeing and its size certificate.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::extract::extract_polysystem;
use crate::amc::{crew_power, euclid_quotient, Amc, BinOp, Gen, Loc, Memory, Operand, Reg, Step};
use crate::error::{Error, Result};
use crate::graphings::symbolic::{path_condition, EmptinessOracle, InputSpace, SymbolicOracle};
use crate::graphings::{cell, ConfigPoint, Edge, Emptiness, GraphingRep, Region, StepOutcome};
use crate::machines::initial_memory;
use crate::realalg::{Cmp, Rat};

/// Numbering `1..=t` of the euclidean divisions, keyed by edge and position in its step.
pub fn euclid_numbering(t: &GraphingRep) -> Result<BTreeMap<(usize, usize), u64>> {
    let mut out = BTreeMap::new();
    let mut n = 0;
    for (id, e) in t.edges.iter().enumerate() {
        let mut in_edge = 0;
        for step in &e.realiser {
            for (pos, s) in step.0.iter().enumerate() {
                if matches!(t.amc.action(s)?.gen, Gen::Bin { op: BinOp::Euclid, .. }) {
                    in_edge += 1;
                    n += 1;
                    out.insert((id, pos), n);
                }
            }
        }
        if in_edge > 0 && e.realiser.len() > 1 {
            return Err(Error::invalid(format!("edge {id} divides inside a multi-step realiser")));
        }
    }
    Ok(out)
}

fn witness_reg(n: u64) -> Reg {
    Reg::a(2 * n)
}

fn difference_reg(n: u64) -> Reg {
    Reg::a(2 * n + 1)
}

/// Real mate: states `S x {1,2,3}`; the `n`-th euclidean division
/// `x_i := x_j div x_k` becomes a chain guarding a remainder witness
/// `y = A_{2n}` with `y >= 0` and `y^2 < x_k^2`, storing `A_{2n+1} := x_j - y`,
/// then dividing `x_i := A_{2n+1} / x_k` on `{x_k != 0}`.
pub fn real_mate(t: &GraphingRep) -> Result<GraphingRep> {
    if !t.is_treeing() {
        return Err(Error::invalid("real mate needs a treeing"));
    }
    let p = t.amc.processors().max(1);
    let numbering = euclid_numbering(t)?;
    let mut gens: BTreeSet<Gen> = BTreeSet::new();
    for a in t.amc.actions.values() {
        if !matches!(a.gen, Gen::Bin { op: BinOp::Euclid, .. }) {
            gens.insert(a.gen.clone());
        }
    }
    let mut sub_gen = BTreeMap::new();
    let mut div_gen = BTreeMap::new();
    for (&(id, pos), &n) in &numbering {
        let s = &t.edges[id].realiser[0].0[pos];
        let Gen::Bin { dst, lhs, rhs, .. } = t.amc.action(s)?.gen.clone() else {
            unreachable!()
        };
        let sub = Gen::Bin {
            op: BinOp::Sub,
            dst: difference_reg(n),
            lhs,
            rhs: witness_reg(n),
        };
        let div = Gen::Bin {
            op: BinOp::Div,
            dst,
            lhs: Operand::Reg(difference_reg(n)),
            rhs,
        };
        gens.insert(sub.clone());
        gens.insert(div.clone());
        sub_gen.insert(n, sub);
        div_gen.insert(n, div);
    }
    let amc = crew_power(&Amc::real_sram(gens)?, p)?;
    let states = t
        .states
        .iter()
        .flat_map(|s| (1..=3).map(move |j| format!("{s}.{j}")))
        .collect();
    let id = |s: usize, j: usize| 3 * s + j - 1;
    let mut q = GraphingRep::new(amc, states);
    for (eid, e) in t.edges.iter().enumerate() {
        let divs: Vec<(usize, u64)> = numbering
            .range((eid, 0)..(eid + 1, 0))
            .map(|(&(_, pos), &n)| (pos, n))
            .collect();
        let map_step = |step: &Step, q: &GraphingRep| -> Result<Step> {
            let mut out = Vec::new();
            for (pos, s) in step.0.iter().enumerate() {
                let a = t.amc.action(s)?;
                let gen = match divs.iter().find(|(p, _)| *p == pos) {
                    Some((_, n)) => &div_gen[n],
                    None => &a.gen,
                };
                out.push(q.amc.symbol_for(gen, a.processor));
            }
            Ok(Step(out))
        };
        if divs.is_empty() {
            let realiser = e
                .realiser
                .iter()
                .map(|s| map_step(s, &q))
                .collect::<Result<Vec<_>>>()?;
            q.edges.push(Edge::new(e.source.clone(), id(e.from, 1), realiser, id(e.to, 1)));
            continue;
        }
        let step = &e.realiser[0];
        let mut nonneg = e.source.clone();
        let mut below = Region::whole();
        let mut nonzero = Region::whole();
        let mut subs = Vec::new();
        for &(pos, n) in &divs {
            let a = t.amc.action(&step.0[pos])?;
            let Gen::Bin { rhs, .. } = &a.gen else { unreachable!() };
            let y = cell(witness_reg(n).resolve(a.processor));
            let d = cell(rhs.resolve(a.processor));
            nonneg = nonneg.intersect(&Region::poly_atom(&y, Cmp::Ge));
            below = below.intersect(&Region::poly_atom(&(&(&y * &y) - &(&d * &d)), Cmp::Lt));
            nonzero = nonzero.intersect(&Region::atom(rhs.resolve(a.processor), Cmp::Ne));
            subs.push(q.amc.symbol_for(&sub_gen[&n], a.processor));
        }
        q.edges.push(Edge::new(nonneg, id(e.from, 1), Vec::new(), id(e.from, 2)));
        q.edges.push(Edge::new(below, id(e.from, 2), vec![Step(subs)], id(e.from, 3)));
        q.edges.push(Edge::new(nonzero, id(e.from, 3), vec![map_step(step, &q)?], id(e.to, 1)));
    }
    q.init = t.init.map(|s| id(s, 1));
    q.top = t.top.map(|s| id(s, 1));
    q.bottom = t.bottom.map(|s| id(s, 1));
    q.validate()?;
    Ok(q)
}

/// Remainder witnesses `A_{2n}` recorded along the integer run on `x`.
pub fn mate_witness(t: &GraphingRep, x: &[Rat], budget: usize) -> Result<Memory> {
    let numbering = euclid_numbering(t)?;
    let mut aux = Memory::new();
    let mut p = ConfigPoint::new(initial_memory(t, x), t.init.unwrap_or(0));
    for _ in 0..budget {
        let before = p.mem.clone();
        match t.step(&p)? {
            StepOutcome::Halted => break,
            StepOutcome::Moved { point, edge } => {
                for (&(_, pos), &n) in numbering.range((edge, 0)..(edge + 1, 0)) {
                    let a = t.amc.action(&t.edges[edge].realiser[0].0[pos])?;
                    let Gen::Bin { lhs, rhs, .. } = &a.gen else { unreachable!() };
                    let num = match lhs {
                        Operand::Const(c) => c.clone(),
                        Operand::Reg(r) => before.get(r.resolve(a.processor)),
                    };
                    let den = before.get(rhs.resolve(a.processor));
                    let r = &num - euclid_quotient(&num, &den) * &den;
                    aux.set(witness_reg(n).resolve(a.processor), r);
                }
                p = point;
            }
        }
    }
    Ok(aux)
}

/// Whether the real mate accepts `x` with the recorded witnesses.
pub fn mate_accepts(t: &GraphingRep, q: &GraphingRep, x: &[Rat], budget: usize) -> Result<bool> {
    let mut mem = initial_memory(q, x);
    for (l, v) in mate_witness(t, x, budget)?.iter() {
        mem.set(*l, v.clone());
    }
    let run = q.run(&ConfigPoint::new(mem, q.init.unwrap_or(0)), 3 * budget)?;
    Ok(Some(run.last.state) == q.top)
}

/// Measured sizes of the systems describing `k`-step runs of a real mate,
/// against the stated `(2p)^(4k)` equations of degree `2^(4k)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MateCertificate {
    pub processors: u16,
    pub steps: usize,
    pub paths: usize,
    pub max_equations: usize,
    pub max_degree: u32,
    pub stated_equations: String,
    pub stated_degree: String,
    pub holds: bool,
}

/// Enumerates mate paths covering `k` steps of the original machine from
/// its initial state, with inputs `X_1..X_d` and the witnesses free.
pub fn mate_certificate(t: &GraphingRep, q: &GraphingRep, d: usize, k: usize) -> Result<MateCertificate> {
    let p = t.amc.processors().max(1);
    let t_count = euclid_numbering(t)?.len() as u64;
    let mut free: Vec<Loc> = (1..=d as u64).map(Loc::shared).collect();
    for n in 1..=t_count {
        for proc in 1..=p {
            free.push(witness_reg(n).resolve(proc));
        }
    }
    let mut fixed = Memory::new();
    fixed.set(Loc::shared(0), Rat::from_integer((d as i64).into()));
    let space = InputSpace::reals(free);
    let space = InputSpace { fixed, ..space };
    let start = q.init.unwrap_or(0);
    let mut done: Vec<Vec<usize>> = Vec::new();
    let mut frontier: Vec<(Vec<usize>, usize, usize)> = vec![(Vec::new(), start, 0)];
    while let Some((path, state, steps)) = frontier.pop() {
        let ends: Vec<(usize, &Edge)> = q.outgoing(state).collect();
        if steps == k || ends.is_empty() {
            done.push(path);
            continue;
        }
        for (id, e) in ends {
            let mut next = path.clone();
            next.push(id);
            if SymbolicOracle.emptiness(q, &space, start, &next) == Emptiness::Empty {
                continue;
            }
            let s = steps + usize::from(e.to % 3 == 0);
            frontier.push((next, e.to, s));
        }
    }
    let mut max_equations = 0;
    let mut max_degree = 0;
    for path in &done {
        let sys = extract_polysystem(q, &space, path)?;
        max_equations = max_equations.max(sys.constraints.len());
        let deg = match path_condition(q, &space, start, path) {
            Ok(r) => r.atoms().iter().map(|(p, _)| p.total_degree()).max().unwrap_or(0),
            Err(_) => sys.max_degree(),
        };
        max_degree = max_degree.max(deg);
    }
    let stated_equations = BigUint::from(2 * p as u32).pow(4 * k as u32);
    let stated_degree = BigUint::from(2u32).pow(4 * k as u32);
    Ok(MateCertificate {
        processors: p,
        steps: k,
        paths: done.len(),
        max_equations,
        max_degree,
        holds: BigUint::from(max_equations) <= stated_equations && BigUint::from(max_degree) <= stated_degree,
        stated_equations: stated_equations.to_string(),
        stated_degree: stated_degree.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machines::{accepts, compile_pram, compile_sram, parse_pram, parse_sram};
    use crate::realalg::int;

    const HALVES: &str = "1: X3 := X1 / X2\n2: X4 := X3 * X2\n3: X4 := X1 - X4\n4: if X4 = 0 goto 5 else 0\n5: skip";

    #[test]
    fn mate_divides_like_euclid() {
        let t = compile_sram(&parse_sram(HALVES).unwrap()).unwrap();
        let q = real_mate(&t).unwrap();
        assert_eq!(q.states.len(), 3 * t.states.len());
        let w = mate_witness(&t, &[int(7), int(2)], 20).unwrap();
        assert_eq!(w.get(Loc::aux(2)), int(1));
        let mut mem = initial_memory(&q, &[int(7), int(2)]);
        mem.set(Loc::aux(2), int(1));
        let run = q.run(&ConfigPoint::new(mem, q.init.unwrap()), 10).unwrap();
        assert!(run.halted);
        assert_eq!(run.last.mem.get(Loc::shared(3)), int(3));
        for (a, b) in [(7, 2), (8, 2), (-7, 3), (9, -3), (5, 7)] {
            let x = [int(a), int(b)];
            assert_eq!(mate_accepts(&t, &q, &x, 20).unwrap(), accepts(&t, &x, 20).unwrap().accepted);
        }
    }

    #[test]
    fn zero_divisor_diverges() {
        let t = compile_sram(&parse_sram(HALVES).unwrap()).unwrap();
        let q = real_mate(&t).unwrap();
        let x = [int(0), int(0)];
        assert!(accepts(&t, &x, 20).unwrap().accepted);
        assert!(!mate_accepts(&t, &q, &x, 20).unwrap());
    }

    #[test]
    fn loops_are_rejected() {
        let t = compile_sram(&parse_sram("1: if X1 = 0 goto 2 else 1\n2: skip").unwrap()).unwrap();
        assert!(real_mate(&t).is_err());
    }

    #[test]
    fn certificate_for_two_processors() {
        let p = parse_pram("1: Y1 := X1 / X2\n2: X3 := Y1 * Y1\n---\n1: Y1 := X2 * X2\n2: X4 := Y1 + X1").unwrap();
        let t = compile_pram(&p).unwrap();
        let q = real_mate(&t).unwrap();
        let c = mate_certificate(&t, &q, 2, 2).unwrap();
        assert!(c.holds, "{c:?}");
        assert!(c.paths >= 1);
        assert_eq!(c.stated_equations, "65536");
    }
}
