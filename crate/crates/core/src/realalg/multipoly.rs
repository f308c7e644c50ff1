use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rat::{fmt_rat, int, parse_rat, Rat};
use super::unipoly::UniPoly;
use crate::error::{Error, Result};

/// Sparse exponent vector: variable id -> positive exponent.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(BTreeMap<u32, u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(BTreeMap::new())
    }

    pub fn var(v: u32) -> Self {
        Monomial(BTreeMap::from([(v, 1)]))
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let mut m = BTreeMap::new();
        for (v, e) in pairs {
            if e > 0 {
                *m.entry(v).or_insert(0) += e;
            }
        }
        Monomial(m)
    }

    pub fn degree(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn exponent(&self, v: u32) -> u32 {
        self.0.get(&v).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.0.iter().map(|(v, e)| (*v, *e))
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::from_pairs(self.iter().chain(other.iter()))
    }
}

/// Sparse multivariate polynomial with rational coefficients over variables
/// identified by `u32` ids. Zero coefficients are never stored.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, Rat>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly::default()
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = MultiPoly::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn var(v: u32) -> Self {
        let mut p = MultiPoly::zero();
        p.add_term(Monomial::var(v), int(1));
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rat)>) -> Self {
        let mut p = MultiPoly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_insert_with(Rat::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    /// If the polynomial is `c * x_v` with `c > 0`, returns `v`.
    pub fn as_positive_var(&self) -> Option<u32> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next()?;
        if !c.is_positive() || m.degree() != 1 {
            return None;
        }
        m.iter().next().map(|(v, _)| v)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<u32> {
        self.terms.keys().flat_map(|m| m.iter().map(|(v, _)| v)).collect()
    }

    pub fn scale(&self, c: &Rat) -> Self {
        MultiPoly::from_terms(self.terms.iter().map(|(m, a)| (m.clone(), a * c)))
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(MultiPoly::constant(int(1)), |acc, _| &acc * self)
    }

    /// Leading coefficient under the monomial order (highest monomial).
    pub fn leading_coefficient(&self) -> Option<&Rat> {
        self.terms.iter().next_back().map(|(_, c)| c)
    }

    pub fn eval(&self, value: &impl Fn(u32) -> Rat) -> Rat {
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.iter() {
                t *= num_traits::pow(value(v), e as usize);
            }
            acc += t;
        }
        acc
    }

    pub fn eval_map(&self, point: &BTreeMap<u32, Rat>) -> Rat {
        self.eval(&|v| point.get(&v).cloned().unwrap_or_else(Rat::zero))
    }

    pub fn partial(&self, v: u32) -> Self {
        MultiPoly::from_terms(self.terms.iter().filter_map(|(m, c)| {
            let e = m.exponent(v);
            if e == 0 {
                return None;
            }
            let rest = Monomial::from_pairs(m.iter().map(|(w, f)| if w == v { (w, f - 1) } else { (w, f) }));
            Some((rest, c * int(e as i64)))
        }))
    }

    /// Substitutes `replacement` for variable `v`.
    pub fn substitute(&self, v: u32, replacement: &MultiPoly) -> Self {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            let rest = Monomial::from_pairs(m.iter().filter(|(w, _)| *w != v));
            let mut term = MultiPoly::from_terms([(rest, c.clone())]);
            if e > 0 {
                term = &term * &replacement.pow(e);
            }
            out = &out + &term;
        }
        out
    }

    /// Renames variables through `f`.
    pub fn rename(&self, f: impl Fn(u32) -> u32) -> Self {
        MultiPoly::from_terms(
            self.terms
                .iter()
                .map(|(m, c)| (Monomial::from_pairs(m.iter().map(|(v, e)| (f(v), e))), c.clone())),
        )
    }

    /// Converts to a univariate polynomial in `v`; fails if other variables occur.
    pub fn to_univariate(&self, v: u32) -> Result<UniPoly> {
        let deg = self.total_degree() as usize;
        let mut coeffs = vec![Rat::zero(); deg + 1];
        for (m, c) in &self.terms {
            if m.iter().any(|(w, _)| w != v) {
                return Err(Error::invalid("polynomial is not univariate in the requested variable"));
            }
            coeffs[m.exponent(v) as usize] += c;
        }
        Ok(UniPoly::new(coeffs))
    }

    /// Normalizes so that the leading coefficient has absolute value one,
    /// returning the sign that was divided out.
    pub fn normalize_sign(&self) -> (MultiPoly, i8) {
        match self.leading_coefficient() {
            None => (self.clone(), 1),
            Some(l) => {
                let s = if l.is_negative() { -1 } else { 1 };
                (self.scale(&(int(s as i64) / l.abs())), s)
            }
        }
    }

    pub fn display_with(&self, name: &impl Fn(u32) -> String) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (m, c) in self.terms.iter().rev() {
            let vars: Vec<String> = m
                .iter()
                .map(|(v, e)| if e == 1 { name(v) } else { format!("{}^{e}", name(v)) })
                .collect();
            let part = if vars.is_empty() {
                fmt_rat(c)
            } else if c.is_one() {
                vars.join("*")
            } else if (-c).is_one() {
                format!("-{}", vars.join("*"))
            } else {
                format!("{}*{}", fmt_rat(c), vars.join("*"))
            };
            parts.push(part);
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&|v| format!("v{v}")))
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&int(-1))
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self + &(-rhs)
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

/// Wire form: a list of `{"coeff": "n/d", "exps": [[var, exp], ...]}` terms.
#[derive(Serialize, Deserialize)]
struct TermWire {
    coeff: String,
    exps: Vec<(u32, u32)>,
}

impl Serialize for MultiPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.terms.iter().map(|(m, c)| TermWire {
            coeff: fmt_rat(c),
            exps: m.iter().collect(),
        }))
    }
}

impl<'de> Deserialize<'de> for MultiPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = Vec::<TermWire>::deserialize(d)?;
        let mut p = MultiPoly::zero();
        for t in wire {
            let c = parse_rat(&t.coeff).map_err(serde::de::Error::custom)?;
            p.add_term(Monomial::from_pairs(t.exps), c);
        }
        Ok(p)
    }
}
