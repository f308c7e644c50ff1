//! Symbolic execution along edge paths and cell-emptiness oracles.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::region::{cell, var_loc, Emptiness, Region};
use super::{ConfigPoint, GraphingRep, StepOutcome};
use crate::amc::{BinOp, Gen, Loc, Memory, Operand, Reg, Step};
use crate::realalg::{int, rat, Cmp, MultiPoly, Rat};

/// Input space of a graphing: `free` cells range over the reals (or
/// integers), every other cell starts at its value in `fixed`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputSpace {
    pub free: Vec<Loc>,
    pub fixed: Memory,
    pub integral: bool,
}

impl InputSpace {
    pub fn reals(free: Vec<Loc>) -> Self {
        InputSpace {
            free,
            fixed: Memory::new(),
            integral: false,
        }
    }

    pub fn integers(free: Vec<Loc>, fixed: Memory) -> Self {
        InputSpace {
            free,
            fixed,
            integral: true,
        }
    }

    /// Memory with the free cells set to `values`.
    pub fn point(&self, values: &[Rat]) -> Memory {
        let mut m = self.fixed.clone();
        for (l, v) in self.free.iter().zip(values) {
            m.set(*l, v.clone());
        }
        m
    }
}

/// Rational function `num / den` over the free input cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFn {
    pub num: MultiPoly,
    pub den: MultiPoly,
}

impl RatFn {
    pub fn poly(p: MultiPoly) -> Self {
        RatFn {
            num: p,
            den: MultiPoly::constant(int(1)),
        }
    }

    pub fn constant(c: Rat) -> Self {
        RatFn::poly(MultiPoly::constant(c))
    }

    fn tidy(num: MultiPoly, den: MultiPoly) -> Self {
        match den.as_constant() {
            Some(c) if !num_traits::Zero::is_zero(&c) => RatFn::poly(num.scale(&c.recip())),
            _ => RatFn { num, den },
        }
    }

    pub fn add(&self, o: &RatFn) -> RatFn {
        if self.den == o.den {
            return RatFn::tidy(&self.num + &o.num, self.den.clone());
        }
        RatFn::tidy(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }

    pub fn neg(&self) -> RatFn {
        RatFn {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &RatFn) -> RatFn {
        RatFn::tidy(&self.num * &o.num, &self.den * &o.den)
    }

    pub fn div(&self, o: &RatFn) -> RatFn {
        RatFn::tidy(&self.num * &o.den, &self.den * &o.num)
    }

    pub fn as_constant(&self) -> Option<Rat> {
        Some(self.num.as_constant()? / self.den.as_constant()?)
    }

    /// Polynomial with the sign of the function wherever the denominator is nonzero.
    pub fn sign_poly(&self) -> MultiPoly {
        if self.den.as_constant().is_some() {
            return self.num.clone();
        }
        &self.num * &self.den
    }
}

/// Symbolic memory: cell values as rational functions of the free inputs,
/// together with the accumulated path condition.
#[derive(Clone, Debug)]
pub struct SymState {
    values: BTreeMap<Loc, RatFn>,
    fixed: Memory,
    free: Vec<Loc>,
    pub condition: Region,
}

impl SymState {
    pub fn new(space: &InputSpace) -> Self {
        let values = space.free.iter().map(|l| (*l, RatFn::poly(cell(*l)))).collect();
        SymState {
            values,
            fixed: space.fixed.clone(),
            free: space.free.clone(),
            condition: Region::whole(),
        }
    }

    pub fn get(&self, l: Loc) -> RatFn {
        self.values
            .get(&l)
            .cloned()
            .unwrap_or_else(|| RatFn::constant(self.fixed.get(l)))
    }

    fn reg(&self, r: Reg, proc: u16) -> RatFn {
        self.get(r.resolve(proc))
    }

    /// Restricts the path condition by `sign(f) ∈ cmp` and nonzero denominators.
    pub fn assume(&mut self, f: &RatFn, cmp: Cmp) {
        if f.den.as_constant().is_none() {
            self.condition = self.condition.intersect(&Region::poly_atom(&f.den, Cmp::Ne));
        }
        self.condition = self.condition.intersect(&Region::poly_atom(&f.sign_poly(), cmp));
    }

    /// Pulls a source region back through the current symbolic values.
    pub fn assume_region(&mut self, r: &Region) {
        for (p, cmp) in r.atoms() {
            let f = self.eval_poly(&p);
            self.assume(&f, cmp);
        }
    }

    fn eval_poly(&self, p: &MultiPoly) -> RatFn {
        let mut acc = RatFn::constant(int(0));
        for (m, c) in p.terms() {
            let mut t = RatFn::constant(c.clone());
            for (v, e) in m.iter() {
                let x = self.get(var_loc(v));
                for _ in 0..e {
                    t = t.mul(&x);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    fn address(&self, ptr: Reg, proc: u16) -> Result<Loc, String> {
        let v = self
            .reg(ptr, proc)
            .as_constant()
            .ok_or_else(|| format!("symbolic indirect address in {ptr}"))?;
        if !v.is_integer() || v < int(0) {
            return Err(format!("indirect address {v} is not a cell index"));
        }
        let idx: u64 = num_traits::ToPrimitive::to_u64(v.numer()).ok_or("address out of range")?;
        Ok(Loc {
            block: ptr.block_id(proc),
            index: idx,
        })
    }

    /// Symbolic effect of one generator; adds domain conditions to the path.
    fn effect(&mut self, g: &Gen, proc: u16) -> Result<(Loc, RatFn), String> {
        let operand = |s: &SymState, o: &Operand| match o {
            Operand::Reg(r) => s.reg(*r, proc),
            Operand::Const(c) => RatFn::constant(c.clone()),
        };
        Ok(match g {
            Gen::Const { dst, value } => (dst.resolve(proc), RatFn::constant(value.clone())),
            Gen::Bin { op, dst, lhs, rhs } => {
                let a = operand(self, lhs);
                let b = self.reg(*rhs, proc);
                let v = match op {
                    BinOp::Add => a.add(&b),
                    BinOp::Sub => a.add(&b.neg()),
                    BinOp::Mul => a.mul(&b),
                    BinOp::Div => {
                        self.assume(&b, Cmp::Ne);
                        a.div(&b)
                    }
                    BinOp::Euclid => match (a.as_constant(), b.as_constant()) {
                        (Some(x), Some(y)) => RatFn::constant(crate::amc::euclid_quotient(&x, &y)),
                        _ => return Err("euclidean division of symbolic values".into()),
                    },
                };
                (dst.resolve(proc), v)
            }
            Gen::Sqrt { dst, arg } => {
                let a = self.reg(*arg, proc);
                match a.as_constant().and_then(|c| crate::amc::rat_sqrt(&c)) {
                    Some(r) => (dst.resolve(proc), RatFn::constant(r)),
                    None => return Err("square root of a symbolic value".into()),
                }
            }
            Gen::Copy { dst, src } => (dst.resolve(proc), self.reg(*src, proc)),
            Gen::RefCopy { dst, ptr } => {
                let src = self.address(*ptr, proc)?;
                (dst.resolve(proc), self.get(src))
            }
            Gen::CopyRef { ptr, src } => (self.address(*ptr, proc)?, self.reg(*src, proc)),
        })
    }

    /// Applies a realiser step symbolically.
    pub fn apply_step(&mut self, graph: &GraphingRep, step: &Step) -> Result<(), String> {
        let mut writes: BTreeMap<Loc, (u16, RatFn)> = BTreeMap::new();
        for s in &step.0 {
            let a = graph.amc.action(s).map_err(|e| e.to_string())?;
            let (loc, v) = self.effect(&a.gen, a.processor)?;
            if !writes.get(&loc).is_some_and(|(p, _)| *p < a.processor) {
                writes.insert(loc, (a.processor, v));
            }
        }
        for (loc, (_, v)) in writes {
            self.values.insert(loc, v);
        }
        Ok(())
    }

    pub fn free(&self) -> &[Loc] {
        &self.free
    }
}

/// Path condition on the inputs for following `path` (edge ids) from `start`.
/// `Err` carries the reason symbolic execution gave up.
pub fn path_condition(
    g: &GraphingRep,
    space: &InputSpace,
    start: usize,
    path: &[usize],
) -> Result<Region, String> {
    let mut st = SymState::new(space);
    let mut state = start;
    for &id in path {
        let e = &g.edges[id];
        if e.from != state {
            return Ok(Region::empty());
        }
        st.assume_region(&e.source);
        for step in &e.realiser {
            st.apply_step(g, step)?;
        }
        state = e.to;
    }
    Ok(st.condition)
}

/// Decides whether the set of inputs following an edge path is empty.
pub trait EmptinessOracle: Send + Sync {
    fn name(&self) -> &'static str;
    fn emptiness(&self, g: &GraphingRep, space: &InputSpace, start: usize, path: &[usize]) -> Emptiness;
}

/// Symbolic pull-back plus exact region reasoning.
pub struct SymbolicOracle;

impl EmptinessOracle for SymbolicOracle {
    fn name(&self) -> &'static str {
        "symbolic"
    }

    fn emptiness(&self, g: &GraphingRep, space: &InputSpace, start: usize, path: &[usize]) -> Emptiness {
        match path_condition(g, space, start, path) {
            Ok(r) => r.emptiness(),
            Err(_) => Emptiness::Unknown,
        }
    }
}

/// Symbolic pull-back, then seeded rational sampling of the inputs when the
/// exact test is inconclusive. Sampling runs the graphing concretely, so it
/// also covers paths symbolic execution cannot follow.
pub struct SamplingOracle {
    pub samples: usize,
    pub radius: i64,
    pub seed: u64,
}

impl Default for SamplingOracle {
    fn default() -> Self {
        SamplingOracle {
            samples: 10_000,
            radius: 8,
            seed: 0xB10B,
        }
    }
}

impl SamplingOracle {
    fn sample_value(&self, rng: &mut ChaCha8Rng, integral: bool) -> Rat {
        if integral {
            int(rng.gen_range(-self.radius..=self.radius))
        } else {
            let den = rng.gen_range(1..=16i64);
            rat(rng.gen_range(-self.radius * den..=self.radius * den), den)
        }
    }

    fn follows(g: &GraphingRep, start: usize, path: &[usize], mem: Memory) -> bool {
        let mut p = ConfigPoint::new(mem, start);
        for &id in path {
            match g.step(&p) {
                Ok(StepOutcome::Moved { point, edge }) if edge == id => p = point,
                _ => return false,
            }
        }
        true
    }
}

impl EmptinessOracle for SamplingOracle {
    fn name(&self) -> &'static str {
        "sampling"
    }

    fn emptiness(&self, g: &GraphingRep, space: &InputSpace, start: usize, path: &[usize]) -> Emptiness {
        let exact = SymbolicOracle.emptiness(g, space, start, path);
        if exact != Emptiness::Unknown {
            return exact;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ (path.len() as u64).wrapping_mul(0x9E37_79B9));
        for _ in 0..self.samples {
            let vals: Vec<Rat> = space.free.iter().map(|_| self.sample_value(&mut rng, space.integral)).collect();
            if Self::follows(g, start, path, space.point(&vals)) {
                return Emptiness::Nonempty;
            }
        }
        Emptiness::Unknown
    }
}

/// Looks up an emptiness oracle by name.
pub fn oracle_by_name(name: &str, seed: u64) -> Option<Box<dyn EmptinessOracle>> {
    crate::registry::oracles(seed).take(name).ok()
}
