//! Polynomial systems describing the inputs that follow an edge path.

use std::collections::BTreeMap;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::amc::{normalize_word, realiser_word, BinOp, Gen, Loc, Operand, Reg};
use crate::error::{Error, Result};
use crate::graphings::symbolic::InputSpace;
use crate::graphings::{var_loc, GraphingRep};
use crate::realalg::{Cmp, MultiPoly, Rat};

/// Unknown of a system: a versioned cell or a fresh witness variable.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolyVar {
    Cell { loc: Loc, version: u32 },
    Fresh(u32),
}

impl std::fmt::Display for PolyVar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PolyVar::Cell { loc, version } => write!(f, "{loc}@{version}"),
            PolyVar::Fresh(n) => write!(f, "z{n}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstraintKind {
    /// Defines a new version of a written cell.
    Definition,
    /// `z * p - 1 = 0` witnessing `p != 0`.
    Guard,
    /// A sign condition copied from an edge source.
    Sign,
    /// `x >= 0` accompanying a square root.
    Root,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub poly: MultiPoly,
    pub cmp: Cmp,
    pub kind: ConstraintKind,
    pub edge: usize,
    pub position: usize,
}

/// Current version of every cell along a path, plus the fresh counter.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HistoryFn {
    versions: BTreeMap<Loc, u32>,
    fresh: u32,
}

impl HistoryFn {
    pub fn version(&self, l: Loc) -> u32 {
        self.versions.get(&l).copied().unwrap_or(0)
    }

    fn bump(&mut self, l: Loc) -> u32 {
        let v = self.versions.entry(l).or_insert(0);
        *v += 1;
        *v
    }

    fn fresh(&mut self) -> u32 {
        self.fresh += 1;
        self.fresh
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PolySystem {
    /// Polynomial variable `i` stands for `vars[i]`.
    pub vars: Vec<PolyVar>,
    pub constraints: Vec<Constraint>,
    /// Edges on the path.
    pub path_len: usize,
    /// Generator applications plus inequality guards.
    pub steps: usize,
    /// Free input cells.
    pub inputs: usize,
}

impl PolySystem {
    pub fn equations(&self) -> impl Iterator<Item = &Constraint> {
        self.constraints.iter().filter(|c| c.cmp == Cmp::Eq)
    }

    pub fn max_degree(&self) -> u32 {
        self.constraints.iter().map(|c| c.poly.total_degree()).max().unwrap_or(0)
    }

    pub fn sign_system(&self) -> Vec<(MultiPoly, Cmp)> {
        self.constraints.iter().map(|c| (c.poly.clone(), c.cmp)).collect()
    }

    pub fn display_constraint(&self, c: &Constraint) -> String {
        format!("{} {} 0", c.poly.display_with(&|v| self.vars[v as usize].to_string()), c.cmp)
    }
}

struct Extractor<'a> {
    space: &'a InputSpace,
    hist: HistoryFn,
    index: BTreeMap<PolyVar, u32>,
    guarded: Vec<MultiPoly>,
    sys: PolySystem,
}

impl Extractor<'_> {
    fn var(&mut self, v: PolyVar) -> MultiPoly {
        let next = self.index.len() as u32;
        let i = *self.index.entry(v.clone()).or_insert_with(|| {
            self.sys.vars.push(v);
            next
        });
        MultiPoly::var(i)
    }

    fn read(&mut self, l: Loc) -> MultiPoly {
        let version = self.hist.version(l);
        if version == 0 && !self.space.free.contains(&l) {
            return MultiPoly::constant(self.space.fixed.get(l));
        }
        self.var(PolyVar::Cell { loc: l, version })
    }

    fn operand(&mut self, o: &Operand, proc: u16) -> MultiPoly {
        match o {
            Operand::Const(c) => MultiPoly::constant(c.clone()),
            Operand::Reg(r) => self.read(r.resolve(proc)),
        }
    }

    fn compose(&mut self, p: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m, c) in p.terms() {
            let mut t = MultiPoly::constant(c.clone());
            for (v, e) in m.iter() {
                t = &t * &self.read(var_loc(v)).pow(e);
            }
            out = &out + &t;
        }
        out
    }

    fn push(&mut self, poly: MultiPoly, cmp: Cmp, kind: ConstraintKind, edge: usize, position: usize) {
        self.sys.constraints.push(Constraint {
            poly,
            cmp,
            kind,
            edge,
            position,
        });
    }
}

/// Ben-Or style system for the inputs following `path`. Every generator
/// application writes a new version of its target: a quotient `x = a / b`
/// becomes `x * b - a = 0`, a square root `x^2 - a = 0` with `x >= 0`;
/// a source condition `p != 0` becomes `z * p - 1 = 0` with a fresh `z`,
/// emitted once per distinct guarded polynomial.
pub fn extract_polysystem(g: &GraphingRep, space: &InputSpace, path: &[usize]) -> Result<PolySystem> {
    let mut ex = Extractor {
        space,
        hist: HistoryFn::default(),
        index: BTreeMap::new(),
        guarded: Vec::new(),
        sys: PolySystem {
            path_len: path.len(),
            inputs: space.free.len(),
            ..PolySystem::default()
        },
    };
    for (position, &id) in path.iter().enumerate() {
        let e = g
            .edges
            .get(id)
            .ok_or_else(|| Error::invalid(format!("no edge {id}")))?;
        for (p, cmp) in e.source.atoms() {
            let q = ex.compose(&p);
            if cmp == Cmp::Ne {
                if ex.guarded.contains(&q) {
                    continue;
                }
                ex.guarded.push(q.clone());
                let z = PolyVar::Fresh(ex.hist.fresh());
                let z = ex.var(z);
                let guard = &(&z * &q) - &MultiPoly::constant(Rat::one());
                ex.push(guard, Cmp::Eq, ConstraintKind::Guard, id, position);
                ex.sys.steps += 1;
            } else {
                ex.push(q, cmp, ConstraintKind::Sign, id, position);
            }
        }
        for step in &e.realiser {
            let mut writes: BTreeMap<Loc, (MultiPoly, MultiPoly, bool)> = BTreeMap::new();
            let mut actions: Vec<_> = step.0.iter().map(|s| g.amc.action(s)).collect::<Result<_>>()?;
            actions.sort_by_key(|a| a.processor);
            for a in actions {
                let proc = a.processor;
                let (dst, rhs, lhs_factor, root): (Reg, MultiPoly, MultiPoly, bool) = match &a.gen {
                    Gen::Const { dst, value } => (*dst, MultiPoly::constant(value.clone()), one(), false),
                    Gen::Copy { dst, src } => (*dst, ex.read(src.resolve(proc)), one(), false),
                    Gen::Bin { op, dst, lhs, rhs } => {
                        let l = ex.operand(lhs, proc);
                        let r = ex.read(rhs.resolve(proc));
                        match op {
                            BinOp::Add => (*dst, &l + &r, one(), false),
                            BinOp::Sub => (*dst, &l - &r, one(), false),
                            BinOp::Mul => (*dst, &l * &r, one(), false),
                            BinOp::Div => (*dst, l, r, false),
                            BinOp::Euclid => {
                                return Err(Error::invalid(format!("unsupported generator `{}`", a.symbol)))
                            }
                        }
                    }
                    Gen::Sqrt { dst, arg } => (*dst, ex.read(arg.resolve(proc)), one(), true),
                    Gen::RefCopy { .. } | Gen::CopyRef { .. } => {
                        return Err(Error::invalid(format!("unsupported generator `{}`", a.symbol)))
                    }
                };
                let loc = dst.resolve(proc);
                writes.entry(loc).or_insert((rhs, lhs_factor, root));
            }
            for (loc, (rhs, factor, root)) in writes {
                let version = ex.hist.bump(loc);
                let x = ex.var(PolyVar::Cell { loc, version });
                let lhs = if root { &x * &x } else { &x * &factor };
                ex.push(&lhs - &rhs, Cmp::Eq, ConstraintKind::Definition, id, position);
                if root {
                    ex.push(x, Cmp::Ge, ConstraintKind::Root, id, position);
                }
                ex.sys.steps += 1;
            }
        }
    }
    Ok(ex.sys)
}

fn one() -> MultiPoly {
    MultiPoly::constant(Rat::one())
}

/// Largest normalised realiser length over the edges.
pub fn algebraic_degree(g: &GraphingRep) -> Result<usize> {
    let mut d = 0;
    for e in &g.edges {
        let w = normalize_word(&g.amc.presentation, &realiser_word(&e.realiser))?;
        d = d.max(w.len());
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amc::{Amc, Step, Symbol};
    use crate::graphings::{Edge, Region};

    fn x(i: u64) -> Loc {
        Loc::shared(i)
    }

    fn graph(gens: &[&str]) -> GraphingRep {
        let gens: Vec<Gen> = gens.iter().map(|s| s.parse().unwrap()).collect();
        let amc = Amc::act(gens).unwrap();
        GraphingRep::new(amc, vec!["a".into(), "b".into(), "c".into(), "d".into()])
    }

    fn sym(s: &str) -> Vec<Step> {
        vec![Step::single(Symbol::new(s))]
    }

    #[test]
    fn product_then_zero_test() {
        let mut g = graph(&["mul(X5,X1,X2)"]);
        g.edges.push(Edge::new(Region::whole(), 0, sym("mul(X5,X1,X2)"), 1));
        g.edges.push(Edge::new(Region::atom(x(5), Cmp::Eq), 1, Vec::new(), 2));
        let space = InputSpace::reals(vec![x(1), x(2)]);
        let sys = extract_polysystem(&g, &space, &[0, 1]).unwrap();
        let shown: Vec<String> = sys.constraints.iter().map(|c| sys.display_constraint(c)).collect();
        assert_eq!(shown, vec!["X5@1 - X1@0*X2@0 = 0", "X5@1 = 0"]);
        assert_eq!(sys.vars.len(), 3);
        assert_eq!(sys.max_degree(), 2);
    }

    #[test]
    fn division_with_guard() {
        let mut g = graph(&["div(X3,X1,X2)"]);
        g.edges.push(Edge::new(Region::atom(x(2), Cmp::Ne), 0, sym("div(X3,X1,X2)"), 1));
        let space = InputSpace::reals(vec![x(1), x(2)]);
        let sys = extract_polysystem(&g, &space, &[0]).unwrap();
        let shown: Vec<String> = sys.constraints.iter().map(|c| sys.display_constraint(c)).collect();
        assert_eq!(shown, vec!["X2@0*z1 - 1 = 0", "-X1@0 + X2@0*X3@1 = 0"]);
        assert_eq!(sys.steps, 2);
        assert!(sys.vars.len() <= sys.inputs + sys.steps);
    }

    #[test]
    fn repeated_guards_share_a_witness() {
        let mut g = graph(&["div(X3,X1,X2)", "div(X4,X1,X2)"]);
        g.edges.push(Edge::new(Region::atom(x(2), Cmp::Ne), 0, Vec::new(), 1));
        g.edges.push(Edge::new(Region::atom(x(2), Cmp::Ne), 1, sym("div(X3,X1,X2)"), 2));
        g.edges.push(Edge::new(Region::atom(x(2), Cmp::Ne), 2, sym("div(X4,X1,X2)"), 3));
        let space = InputSpace::reals(vec![x(1), x(2)]);
        let sys = extract_polysystem(&g, &space, &[0, 1, 2]).unwrap();
        assert_eq!(sys.constraints.iter().filter(|c| c.kind == ConstraintKind::Guard).count(), 1);
        assert_eq!(sys.vars.len(), 5);
        assert!(sys.vars.len() <= sys.inputs + sys.path_len);
    }

    #[test]
    fn sqrt_and_versions() {
        let mut g = graph(&["sqrt(X1,X1)", "add(X1,X1,X2)"]);
        g.edges.push(Edge::new(Region::atom(x(1), Cmp::Ge), 0, sym("sqrt(X1,X1)"), 1));
        g.edges.push(Edge::new(Region::whole(), 1, sym("add(X1,X1,X2)"), 2));
        let space = InputSpace::reals(vec![x(1)]);
        let sys = extract_polysystem(&g, &space, &[0, 1]).unwrap();
        let shown: Vec<String> = sys.constraints.iter().map(|c| sys.display_constraint(c)).collect();
        assert_eq!(shown, vec!["X1@0 >= 0", "X1@1^2 - X1@0 = 0", "X1@1 >= 0", "X1@2 - X1@1 = 0"]);
        assert_eq!(extract_polysystem(&g, &space, &[]).unwrap().constraints.len(), 0);
    }

    #[test]
    fn euclid_is_rejected() {
        let amc = Amc::sram(["euclidivide(X1,X2,X3)".parse::<Gen>().unwrap()]).unwrap();
        let mut g = GraphingRep::new(amc, vec!["a".into(), "b".into()]);
        g.edges.push(Edge::new(Region::whole(), 0, sym("euclidivide(X1,X2,X3)"), 1));
        let space = InputSpace::integers(vec![x(2), x(3)], crate::amc::Memory::new());
        let e = extract_polysystem(&g, &space, &[0]).unwrap_err();
        assert!(e.to_string().contains("euclidivide"));
    }

    #[test]
    fn degree_of_realisers() {
        let mut g = graph(&["add(X3,X1,X2)", "mul(X4,X1,X2)", "sub(X5,X1,X2)"]);
        g.edges.push(Edge::new(Region::whole(), 0, Vec::new(), 1));
        assert_eq!(algebraic_degree(&g).unwrap(), 0);
        g.edges.push(Edge::new(Region::whole(), 1, sym("add(X3,X1,X2)"), 2));
        assert_eq!(algebraic_degree(&g).unwrap(), 1);
        let mut long = sym("add(X3,X1,X2)");
        long.extend(sym("mul(X4,X1,X2)"));
        long.extend(sym("sub(X5,X1,X2)"));
        g.edges.push(Edge::new(Region::whole(), 2, long, 3));
        assert_eq!(algebraic_degree(&g).unwrap(), 3);
    }
}
