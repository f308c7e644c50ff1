//! Regions: finite conjunctions of sign conditions against zero.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::amc::{BlockId, Loc, Memory};
use crate::error::{Error, Result};
use crate::realalg::{int, rat, sign, Cmp, MultiPoly, SignChart};

const BLOCK_BITS: u32 = 6;

/// Polynomial variable id standing for a memory cell.
pub fn loc_var(l: Loc) -> u32 {
    let code = match l.block {
        BlockId::Shared => 0,
        BlockId::Aux => 1,
        BlockId::Private(p) => {
            assert!(p < 62, "processor index too large for region atoms");
            1 + p as u32
        }
    };
    assert!(l.index < (1 << (32 - BLOCK_BITS)), "cell index too large for region atoms");
    ((l.index as u32) << BLOCK_BITS) | code
}

pub fn var_loc(v: u32) -> Loc {
    let index = (v >> BLOCK_BITS) as u64;
    let block = match v & ((1 << BLOCK_BITS) - 1) {
        0 => BlockId::Shared,
        1 => BlockId::Aux,
        c => BlockId::Private((c - 1) as u16),
    };
    Loc { block, index }
}

/// The polynomial consisting of a single memory cell.
pub fn cell(l: Loc) -> MultiPoly {
    MultiPoly::var(loc_var(l))
}

pub fn show_poly(p: &MultiPoly) -> String {
    p.display_with(&|v| var_loc(v).to_string())
}

/// Outcome of an emptiness test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Emptiness {
    Empty,
    Nonempty,
    Unknown,
}

const ALL_SIGNS: u8 = 0b111;

/// Conjunction of constraints `sign(p) ∈ mask`, one per sign-normalized
/// polynomial `p` over memory cells. The empty conjunction is the whole space.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Region {
    constraints: BTreeMap<MultiPoly, u8>,
}

fn mask_flip(m: u8) -> u8 {
    ((m & 1) << 2) | (m & 2) | ((m >> 2) & 1)
}

impl Region {
    pub fn whole() -> Self {
        Region::default()
    }

    pub fn empty() -> Self {
        let mut r = Region::default();
        r.constraints.insert(MultiPoly::constant(int(1)), 0);
        r
    }

    pub fn atom(l: Loc, cmp: Cmp) -> Self {
        Region::poly_atom(&cell(l), cmp)
    }

    pub fn poly_atom(p: &MultiPoly, cmp: Cmp) -> Self {
        let mut r = Region::whole();
        r.add(p, cmp.mask());
        r
    }

    fn add(&mut self, p: &MultiPoly, mask: u8) {
        if let Some(c) = p.as_constant() {
            if mask & (1 << (sign(&c) + 1)) == 0 {
                *self = Region::empty();
            }
            return;
        }
        let (key, s) = p.normalize_sign();
        let mask = if s < 0 { mask_flip(mask) } else { mask };
        let slot = self.constraints.entry(key.clone()).or_insert(ALL_SIGNS);
        *slot &= mask;
        if *slot == ALL_SIGNS {
            self.constraints.remove(&key);
        }
    }

    pub fn is_whole(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn intersect(&self, other: &Region) -> Region {
        let mut out = self.clone();
        for (p, m) in &other.constraints {
            out.add(p, *m);
        }
        out
    }

    /// Constraints as (polynomial, allowed-sign mask) pairs.
    pub fn constraints(&self) -> impl Iterator<Item = (&MultiPoly, u8)> {
        self.constraints.iter().map(|(p, m)| (p, *m))
    }

    /// Constraints as comparisons; a zero mask is reported as `1 < 0`.
    pub fn atoms(&self) -> Vec<(MultiPoly, Cmp)> {
        self.constraints
            .iter()
            .map(|(p, m)| match Cmp::from_mask(*m) {
                Some(c) => (p.clone(), c),
                None => (MultiPoly::constant(int(1)), Cmp::Lt),
            })
            .collect()
    }

    /// Cells mentioned by the constraints.
    pub fn cells(&self) -> BTreeSet<Loc> {
        self.constraints.keys().flat_map(|p| p.vars()).map(var_loc).collect()
    }

    /// Whether every constraint is a sign condition on a single cell.
    pub fn is_coordinate_only(&self) -> bool {
        self.constraints.keys().all(|p| p.as_positive_var().is_some())
    }

    /// Substitutes polynomials for cells (used to pull a region back along a
    /// symbolic state).
    pub fn map_polys(&self, f: impl Fn(&MultiPoly) -> MultiPoly) -> Region {
        let mut out = Region::whole();
        for (p, m) in &self.constraints {
            out.add(&f(p), *m);
        }
        out
    }

    pub fn contains(&self, mem: &Memory) -> bool {
        self.constraints.iter().all(|(p, m)| {
            let v = p.eval(&|v| mem.get(var_loc(v)));
            m & (1 << (sign(&v) + 1)) != 0
        })
    }

    /// Exact for coordinate constraints and for groups of constraints in a
    /// single shared variable; otherwise a small witness search, reporting
    /// `Unknown` if it finds nothing.
    pub fn emptiness(&self) -> Emptiness {
        if self.constraints.values().any(|m| *m == 0) {
            return Emptiness::Empty;
        }
        let mut result = Emptiness::Nonempty;
        for group in self.components() {
            match group_emptiness(&group) {
                Emptiness::Empty => return Emptiness::Empty,
                Emptiness::Unknown => result = Emptiness::Unknown,
                Emptiness::Nonempty => {}
            }
        }
        result
    }

    pub fn is_empty(&self) -> bool {
        self.emptiness() == Emptiness::Empty
    }

    /// Groups constraints that share variables.
    fn components(&self) -> Vec<Vec<(&MultiPoly, u8)>> {
        let mut groups: Vec<(BTreeSet<u32>, Vec<(&MultiPoly, u8)>)> = Vec::new();
        for (p, m) in &self.constraints {
            let vars = p.vars();
            let mut merged = (vars.clone(), vec![(p, *m)]);
            let mut rest = Vec::new();
            for g in groups.drain(..) {
                if g.0.is_disjoint(&vars) {
                    rest.push(g);
                } else {
                    merged.0.extend(g.0);
                    merged.1.extend(g.1);
                }
            }
            rest.push(merged);
            groups = rest;
        }
        groups.into_iter().map(|g| g.1).collect()
    }

    /// Complement of one constraint, for set-difference reasoning.
    pub fn negated_constraints(&self) -> Vec<Region> {
        self.constraints
            .iter()
            .map(|(p, m)| {
                let mut r = Region::whole();
                r.add(p, !m & ALL_SIGNS);
                r
            })
            .collect()
    }

    /// Whether `self ⊆ other` is certified (each constraint of `other` is
    /// implied).
    pub fn subset_of(&self, other: &Region) -> bool {
        other.negated_constraints().iter().all(|n| self.intersect(n).is_empty())
    }
}

fn group_emptiness(group: &[(&MultiPoly, u8)]) -> Emptiness {
    let vars: BTreeSet<u32> = group.iter().flat_map(|(p, _)| p.vars()).collect();
    if vars.len() == 1 {
        let v = *vars.iter().next().unwrap();
        let polys: Vec<_> = group.iter().map(|(p, _)| p.to_univariate(v).expect("univariate")).collect();
        let chart = match SignChart::new(&polys, None) {
            Ok(c) => c,
            Err(_) => return Emptiness::Unknown,
        };
        let sat = chart
            .pieces
            .iter()
            .any(|pc| pc.signs.iter().zip(group).all(|(s, (_, m))| m & (1 << (s + 1)) != 0));
        return if sat { Emptiness::Nonempty } else { Emptiness::Empty };
    }
    let vars: Vec<u32> = vars.into_iter().collect();
    if vars.len() > 4 {
        return Emptiness::Unknown;
    }
    let grid = [int(0), int(1), int(-1), rat(1, 2), rat(-1, 2), int(2), int(-2), int(3), int(-3)];
    let total = grid.len().pow(vars.len() as u32);
    for mut code in 0..total {
        let mut point = BTreeMap::new();
        for v in &vars {
            point.insert(*v, grid[code % grid.len()].clone());
            code /= grid.len();
        }
        if group
            .iter()
            .all(|(p, m)| m & (1 << (sign(&p.eval_map(&point)) + 1)) != 0)
        {
            return Emptiness::Nonempty;
        }
    }
    Emptiness::Unknown
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_whole() {
            return f.write_str("Whole");
        }
        let parts: Vec<String> = self
            .atoms()
            .iter()
            .map(|(p, c)| format!("{} {c} 0", show_poly(p)))
            .collect();
        f.write_str(&parts.join(" && "))
    }
}

impl fmt::Debug for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Wire form of one atom: `{"cell": "X1", "cmp": ">"}` or
/// `{"poly": [...terms over cell ids...], "cmp": "<"}`.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum AtomWire {
    Cell { cell: Loc, cmp: Cmp },
    Poly { poly: Vec<PolyTermWire>, cmp: Cmp },
}

#[derive(Serialize, Deserialize)]
struct PolyTermWire {
    coeff: String,
    cells: Vec<(Loc, u32)>,
}

impl Serialize for Region {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let atoms: Vec<AtomWire> = self
            .atoms()
            .into_iter()
            .map(|(p, cmp)| match p.as_positive_var() {
                Some(v) if p.num_terms() == 1 && p.total_degree() == 1 => AtomWire::Cell { cell: var_loc(v), cmp },
                _ => AtomWire::Poly {
                    poly: p
                        .terms()
                        .map(|(m, c)| PolyTermWire {
                            coeff: crate::realalg::fmt_rat(c),
                            cells: m.iter().map(|(v, e)| (var_loc(v), e)).collect(),
                        })
                        .collect(),
                    cmp,
                },
            })
            .collect();
        atoms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Region {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let atoms = Vec::<AtomWire>::deserialize(d)?;
        let mut r = Region::whole();
        for a in atoms {
            let (p, cmp) = match a {
                AtomWire::Cell { cell: l, cmp } => (cell(l), cmp),
                AtomWire::Poly { poly, cmp } => {
                    let mut p = MultiPoly::zero();
                    for t in poly {
                        let c = crate::realalg::parse_rat(&t.coeff).map_err(serde::de::Error::custom)?;
                        let m = crate::realalg::Monomial::from_pairs(t.cells.into_iter().map(|(l, e)| (loc_var(l), e)));
                        p.add_term(m, c);
                    }
                    (p, cmp)
                }
            };
            r = r.intersect(&Region::poly_atom(&p, cmp));
        }
        Ok(r)
    }
}

/// Parses a single atom such as `X1 > 0` or `Y2@1 != 0`.
pub fn parse_atom(s: &str) -> Result<Region> {
    let s = s.trim();
    for c in ["!=", ">=", "<=", ">", "<", "="] {
        if let Some((lhs, rhs)) = s.split_once(c) {
            if rhs.trim() != "0" {
                return Err(Error::parse(format!("atoms compare against 0: `{s}`")));
            }
            return Ok(Region::atom(lhs.trim().parse()?, c.parse()?));
        }
    }
    Err(Error::parse(format!("no comparator in atom `{s}`")))
}
