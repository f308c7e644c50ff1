//! Generator syntax and exact actions on memory.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::memory::{BlockId, Loc, Memory};
use crate::error::{Error, Result};
use crate::realalg::{fmt_rat, parse_rat, Cmp, Rat};

/// Block of a register, relative to the executing processor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Block {
    Shared,
    Aux,
    Private,
}

/// Register operand: `X<k>` shared, `A<k>` auxiliary public, `Y<k>` private.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Reg {
    pub block: Block,
    pub index: u64,
}

impl Reg {
    pub fn x(index: u64) -> Self {
        Reg {
            block: Block::Shared,
            index,
        }
    }

    pub fn a(index: u64) -> Self {
        Reg {
            block: Block::Aux,
            index,
        }
    }

    pub fn y(index: u64) -> Self {
        Reg {
            block: Block::Private,
            index,
        }
    }

    pub fn resolve(self, proc: u16) -> Loc {
        Loc {
            block: self.block_id(proc),
            index: self.index,
        }
    }

    pub fn block_id(self, proc: u16) -> BlockId {
        match self.block {
            Block::Shared => BlockId::Shared,
            Block::Aux => BlockId::Aux,
            Block::Private => BlockId::Private(proc),
        }
    }
}

impl fmt::Display for Reg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.block {
            Block::Shared => 'X',
            Block::Aux => 'A',
            Block::Private => 'Y',
        };
        write!(f, "{c}{}", self.index)
    }
}

impl FromStr for Reg {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::parse(format!("bad register `{s}`"));
        let block = match s.chars().next() {
            Some('X') => Block::Shared,
            Some('A') => Block::Aux,
            Some('Y') => Block::Private,
            _ => return Err(bad()),
        };
        let index = s[1..].parse().map_err(|_| bad())?;
        Ok(Reg { block, index })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Operand {
    Reg(Reg),
    Const(Rat),
}

impl fmt::Display for Operand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operand::Reg(r) => write!(f, "{r}"),
            Operand::Const(c) => write!(f, "{}", fmt_rat(c)),
        }
    }
}

impl FromStr for Operand {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with(['X', 'A', 'Y']) {
            Ok(Operand::Reg(s.parse()?))
        } else {
            Ok(Operand::Const(parse_rat(s)?))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    /// Exact real division, defined only for a nonzero divisor.
    Div,
    /// Euclidean division with remainder in `[0, |d|)`; yields 0 for `d = 0`.
    Euclid,
}

impl BinOp {
    pub fn name(self) -> &'static str {
        match self {
            BinOp::Add => "add",
            BinOp::Sub => "sub",
            BinOp::Mul => "mul",
            BinOp::Div => "div",
            BinOp::Euclid => "euclidivide",
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div | BinOp::Euclid => "/",
        }
    }
}

/// A generator of the SRAM, ACT or real-PRAM models.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gen {
    /// `dst := value`
    Const { dst: Reg, value: Rat },
    /// `dst := lhs op rhs`
    Bin { op: BinOp, dst: Reg, lhs: Operand, rhs: Reg },
    /// `dst := sqrt(arg)`, defined for `arg >= 0`
    Sqrt { dst: Reg, arg: Reg },
    /// `dst := src`
    Copy { dst: Reg, src: Reg },
    /// `dst := #ptr`, reading the cell addressed by `ptr` in `ptr`'s block
    RefCopy { dst: Reg, ptr: Reg },
    /// `#ptr := src`, writing the cell addressed by `ptr` in `ptr`'s block
    CopyRef { ptr: Reg, src: Reg },
}

/// Result of applying a generator: the single written cell, or undefined
/// when the point is outside a partial generator's domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Effect {
    Write(Loc, Rat),
    Undefined,
}

/// Euclidean quotient `b` with `a = b*d + r`, `0 <= r < |d|`; 0 when `d = 0`.
pub fn euclid_quotient(a: &Rat, d: &Rat) -> Rat {
    if d.is_zero() {
        return Rat::zero();
    }
    let m = d.abs();
    let r = a - &m * (a / &m).floor();
    (a - r) / d
}

/// Exact square root of a nonnegative rational, if it is a perfect square.
pub fn rat_sqrt(q: &Rat) -> Option<Rat> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Rat::new(n, d))
    } else {
        None
    }
}

fn address(v: &Rat, ptr: Reg) -> Result<Option<u64>> {
    if !v.is_integer() {
        return Ok(None);
    }
    if v.is_negative() {
        return Err(Error::Runtime(format!("negative indirect address {} in {ptr}", fmt_rat(v))));
    }
    let n: &BigInt = v.numer();
    n.to_u64()
        .map(Some)
        .ok_or_else(|| Error::Runtime(format!("indirect address {n} out of range")))
}

impl Gen {
    /// Register written directly, if any (indirect writes have no fixed target).
    pub fn direct_target(&self) -> Option<Reg> {
        match self {
            Gen::Const { dst, .. } | Gen::Bin { dst, .. } | Gen::Sqrt { dst, .. } | Gen::Copy { dst, .. } => Some(*dst),
            Gen::RefCopy { dst, .. } => Some(*dst),
            Gen::CopyRef { .. } => None,
        }
    }

    /// Block that may be written.
    pub fn written_block(&self) -> Block {
        match self {
            Gen::CopyRef { ptr, .. } => ptr.block,
            _ => self.direct_target().expect("direct target").block,
        }
    }

    /// Central generators act as the identity on the public blocks.
    pub fn is_central(&self) -> bool {
        self.written_block() == Block::Private
    }

    /// Registers read.
    pub fn reads(&self) -> Vec<Reg> {
        match self {
            Gen::Const { .. } => vec![],
            Gen::Bin { lhs, rhs, .. } => match lhs {
                Operand::Reg(r) => vec![*r, *rhs],
                Operand::Const(_) => vec![*rhs],
            },
            Gen::Sqrt { arg, .. } => vec![*arg],
            Gen::Copy { src, .. } => vec![*src],
            Gen::RefCopy { ptr, .. } => vec![*ptr],
            Gen::CopyRef { ptr, src } => vec![*ptr, *src],
        }
    }

    /// Domain of a partial generator as a single sign condition.
    pub fn domain(&self) -> Option<(Reg, Cmp)> {
        match self {
            Gen::Bin { op: BinOp::Div, rhs, .. } => Some((*rhs, Cmp::Ne)),
            Gen::Sqrt { arg, .. } => Some((*arg, Cmp::Ge)),
            _ => None,
        }
    }

    pub fn is_integral(&self) -> bool {
        match self {
            Gen::Const { value, .. } => value.is_integer(),
            Gen::Bin { op, lhs, .. } => {
                !matches!(op, BinOp::Div) && !matches!(lhs, Operand::Const(c) if !c.is_integer())
            }
            Gen::Sqrt { .. } => false,
            _ => true,
        }
    }

    /// Computes the effect on `mem` when executed by processor `proc`.
    pub fn effect(&self, mem: &Memory, proc: u16) -> Result<Effect> {
        let get = |r: &Reg| mem.get(r.resolve(proc));
        let val = |o: &Operand| match o {
            Operand::Reg(r) => get(r),
            Operand::Const(c) => c.clone(),
        };
        let (loc, v) = match self {
            Gen::Const { dst, value } => (dst.resolve(proc), value.clone()),
            Gen::Bin { op, dst, lhs, rhs } => {
                let (a, b) = (val(lhs), get(rhs));
                let v = match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b.is_zero() {
                            return Ok(Effect::Undefined);
                        }
                        a / b
                    }
                    BinOp::Euclid => euclid_quotient(&a, &b),
                };
                (dst.resolve(proc), v)
            }
            Gen::Sqrt { dst, arg } => {
                let a = get(arg);
                if a.is_negative() {
                    return Ok(Effect::Undefined);
                }
                let r = rat_sqrt(&a).ok_or_else(|| {
                    Error::Runtime(format!("square root of {} is irrational", fmt_rat(&a)))
                })?;
                (dst.resolve(proc), r)
            }
            Gen::Copy { dst, src } => (dst.resolve(proc), get(src)),
            Gen::RefCopy { dst, ptr } => {
                let Some(addr) = address(&get(ptr), *ptr)? else {
                    return Ok(Effect::Undefined);
                };
                let src = Loc {
                    block: ptr.block_id(proc),
                    index: addr,
                };
                (dst.resolve(proc), mem.get(src))
            }
            Gen::CopyRef { ptr, src } => {
                let Some(addr) = address(&get(ptr), *ptr)? else {
                    return Ok(Effect::Undefined);
                };
                let target = Loc {
                    block: ptr.block_id(proc),
                    index: addr,
                };
                (target, get(src))
            }
        };
        Ok(Effect::Write(loc, v))
    }

    /// Applies the generator; `None` when undefined.
    pub fn apply(&self, mem: &Memory, proc: u16) -> Result<Option<Memory>> {
        Ok(match self.effect(mem, proc)? {
            Effect::Write(loc, v) => {
                let mut out = mem.clone();
                out.set(loc, v);
                Some(out)
            }
            Effect::Undefined => None,
        })
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gen::Const { dst, value } => write!(f, "const({dst},{})", fmt_rat(value)),
            Gen::Bin { op, dst, lhs, rhs } => write!(f, "{}({dst},{lhs},{rhs})", op.name()),
            Gen::Sqrt { dst, arg } => write!(f, "sqrt({dst},{arg})"),
            Gen::Copy { dst, src } => write!(f, "copy({dst},{src})"),
            Gen::RefCopy { dst, ptr } => write!(f, "refcopy({dst},{ptr})"),
            Gen::CopyRef { ptr, src } => write!(f, "copyref({ptr},{src})"),
        }
    }
}

impl FromStr for Gen {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |why: &str| Error::parse(format!("bad generator `{s}`: {why}"));
        let (name, rest) = s.split_once('(').ok_or_else(|| bad("missing `(`"))?;
        let args = rest.strip_suffix(')').ok_or_else(|| bad("missing `)`"))?;
        let args: Vec<&str> = args.split(',').map(str::trim).collect();
        let arity = |n: usize| {
            if args.len() == n {
                Ok(())
            } else {
                Err(bad(&format!("expected {n} arguments")))
            }
        };
        let op = match name.trim() {
            "add" => Some(BinOp::Add),
            "sub" => Some(BinOp::Sub),
            "mul" => Some(BinOp::Mul),
            "div" => Some(BinOp::Div),
            "euclidivide" => Some(BinOp::Euclid),
            _ => None,
        };
        if let Some(op) = op {
            arity(3)?;
            return Ok(Gen::Bin {
                op,
                dst: args[0].parse()?,
                lhs: args[1].parse()?,
                rhs: args[2].parse()?,
            });
        }
        arity(2)?;
        let r0: Reg = args[0].parse()?;
        Ok(match name.trim() {
            "const" => Gen::Const {
                dst: r0,
                value: parse_rat(args[1])?,
            },
            "sqrt" => Gen::Sqrt {
                dst: r0,
                arg: args[1].parse()?,
            },
            "copy" => Gen::Copy {
                dst: r0,
                src: args[1].parse()?,
            },
            "refcopy" => Gen::RefCopy {
                dst: r0,
                ptr: args[1].parse()?,
            },
            "copyref" => Gen::CopyRef {
                ptr: r0,
                src: args[1].parse()?,
            },
            other => return Err(bad(&format!("unknown generator name `{other}`"))),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realalg::{int, rat};

    fn g(s: &str) -> Gen {
        s.parse().unwrap()
    }

    #[test]
    fn euclidean_division() {
        let mut m = Memory::new();
        m.set(Loc::shared(2), int(7));
        m.set(Loc::shared(3), int(2));
        let out = g("euclidivide(X1,X2,X3)").apply(&m, 1).unwrap().unwrap();
        assert_eq!(out.get(Loc::shared(1)), int(3));
        m.set(Loc::shared(3), int(0));
        let out = g("euclidivide(X1,X2,X3)").apply(&m, 1).unwrap().unwrap();
        assert_eq!(out.get(Loc::shared(1)), int(0));
        assert_eq!(euclid_quotient(&int(-7), &int(2)), int(-4));
        assert_eq!(euclid_quotient(&int(-7), &int(-2)), int(4));
        assert_eq!(euclid_quotient(&int(7), &int(-2)), int(-3));
    }

    #[test]
    fn real_division_is_partial() {
        let mut m = Memory::new();
        m.set(Loc::shared(2), int(1));
        assert_eq!(g("div(X1,X2,X3)").apply(&m, 1).unwrap(), None);
        m.set(Loc::shared(3), int(4));
        let out = g("div(X1,X2,X3)").apply(&m, 1).unwrap().unwrap();
        assert_eq!(out.get(Loc::shared(1)), rat(1, 4));
    }

    #[test]
    fn indirect_access() {
        let mut m = Memory::new();
        m.set(Loc::shared(1), int(5));
        m.set(Loc::shared(2), int(9));
        let out = g("copyref(X1,X2)").apply(&m, 1).unwrap().unwrap();
        assert_eq!(out.get(Loc::shared(5)), int(9));
        let back = g("refcopy(X3,X1)").apply(&out, 1).unwrap().unwrap();
        assert_eq!(back.get(Loc::shared(3)), int(9));
        m.set(Loc::shared(1), int(-1));
        assert!(g("copyref(X1,X2)").apply(&m, 1).is_err());
    }

    #[test]
    fn sqrt_exact_only() {
        let mut m = Memory::new();
        m.set(Loc::shared(1), rat(9, 4));
        let out = g("sqrt(X2,X1)").apply(&m, 1).unwrap().unwrap();
        assert_eq!(out.get(Loc::shared(2)), rat(3, 2));
        m.set(Loc::shared(1), int(2));
        assert!(g("sqrt(X2,X1)").apply(&m, 1).is_err());
        m.set(Loc::shared(1), int(-4));
        assert_eq!(g("sqrt(X2,X1)").apply(&m, 1).unwrap(), None);
    }

    #[test]
    fn private_registers_resolve_per_processor() {
        let out = g("const(Y1,4)").apply(&Memory::new(), 3).unwrap().unwrap();
        assert_eq!(out.get(Loc::private(3, 1)), int(4));
        assert!(g("const(Y1,4)").is_central());
        assert!(!g("copyref(X1,Y2)").is_central());
        assert!(g("copyref(Y1,X2)").is_central());
    }

    #[test]
    fn symbol_round_trip() {
        for s in [
            "const(X1,-2)",
            "add(X1,X2,X3)",
            "mul(Y1,3/2,X3)",
            "euclidivide(X1,X2,X3)",
            "sqrt(A2,X1)",
            "copy(X1,Y2)",
            "refcopy(X1,X2)",
            "copyref(X1,X2)",
        ] {
            assert_eq!(g(s).to_string(), s);
        }
        assert!("nop(X1)".parse::<Gen>().is_err());
        assert!("add(X1,X2)".parse::<Gen>().is_err());
    }
}
