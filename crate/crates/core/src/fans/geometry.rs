//! Decision regions of fans in `(x, y, z)` space, sample points, separation
//! by surfaces and Collins-style system emission.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::profile::RhoFan;
use crate::error::{Error, Result};
use crate::realalg::{int, rat::serde_rat, sign, MultiPoly, Rat};

pub const X: u32 = 0;
pub const Y: u32 = 1;
pub const Z: u32 = 2;

/// `(x / z, y / z, 1)`.
pub fn project(p: &[Rat; 3]) -> Result<[Rat; 3]> {
    if !p[2].is_positive() {
        return Err(Error::invalid("projection needs z > 0"));
    }
    Ok([&p[0] / &p[2], &p[1] / &p[2], Rat::one()])
}

/// Whether `z > 0`, `x / z` lies in the fan's interval and `y / z` is at most
/// the fan's value there.
pub fn pdec_member(fan: &RhoFan, p: &[BigInt; 3]) -> bool {
    if !p[2].is_positive() {
        return false;
    }
    let z = Rat::from_integer(p[2].clone());
    let x = Rat::from_integer(p[0].clone()) / &z;
    let y = Rat::from_integer(p[1].clone()) / &z;
    fan.value(&x).is_some_and(|v| y <= v)
}

pub fn pdec_member_i64(fan: &RhoFan, p: [i64; 3]) -> bool {
    pdec_member(fan, &p.map(BigInt::from))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplePoint {
    pub segment: usize,
    pub k: usize,
    #[serde(with = "serde_rat")]
    pub x: Rat,
    #[serde(with = "serde_rat")]
    pub y: Rat,
}

/// Points `((m - k) p_i + k p_{i+1}) / m` for `0 < k < m = 10 dS` on every
/// segment of the fan.
pub fn sample_points(fan: &RhoFan, ds: usize) -> Result<Vec<SamplePoint>> {
    if ds == 0 {
        return Err(Error::invalid("cell count must be positive"));
    }
    let m = 10 * ds;
    let mr = int(m as i64);
    let mut out = Vec::new();
    for (i, (a, b)) in fan.segments().enumerate() {
        for k in 1..m {
            let kr = int(k as i64);
            let w = int((m - k) as i64);
            out.push(SamplePoint {
                segment: i,
                k,
                x: (&w * &a.0 + &kr * &b.0) / &mr,
                y: (&w * &a.1 + &kr * &b.1) / &mr,
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpacingReport {
    pub beta: u64,
    pub ds: usize,
    pub points: usize,
    #[serde(with = "serde_rat")]
    pub min_gap: Rat,
    #[serde(with = "serde_rat")]
    pub bound: Rat,
    pub worst: Option<(usize, usize)>,
    pub holds: bool,
}

/// Compares every pair of sample abscissae against `2^-beta / (10 dS)`.
pub fn spacing_check(fan: &RhoFan, ds: usize) -> Result<SpacingReport> {
    let pts = sample_points(fan, ds)?;
    let bound = Rat::new(BigInt::one(), BigInt::from(10 * ds) << fan.beta);
    let mut min_gap: Option<Rat> = None;
    let mut worst = None;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let gap = (&pts[i].x - &pts[j].x).abs();
            if min_gap.as_ref().is_none_or(|g| &gap < g) {
                min_gap = Some(gap);
                worst = Some((i, j));
            }
        }
    }
    let min_gap = min_gap.unwrap_or_else(Rat::zero);
    Ok(SpacingReport {
        beta: fan.beta,
        ds,
        points: pts.len(),
        holds: worst.is_none() || min_gap > bound,
        min_gap,
        bound,
        worst,
    })
}

/// Least common denominator of the sample coordinates, the smallest `M` with
/// `(M x, M y, M)` integral for every sample.
pub fn lift_modulus(samples: &[SamplePoint]) -> BigInt {
    samples
        .iter()
        .flat_map(|s| [s.x.denom(), s.y.denom()])
        .fold(BigInt::one(), |acc, d| acc.lcm(d))
}

pub fn lift(sample: &SamplePoint, modulus: &BigInt) -> Result<[BigInt; 3]> {
    let m = Rat::from_integer(modulus.clone());
    let x = &sample.x * &m;
    let y = &sample.y * &m;
    if !x.is_integer() || !y.is_integer() {
        return Err(Error::invalid(format!("modulus {modulus} does not clear the sample denominators")));
    }
    Ok([x.to_integer(), y.to_integer(), modulus.clone()])
}

/// Surface `p(x, y, z) = 0` in the variables `0, 1, 2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Surface {
    pub poly: MultiPoly,
}

impl Surface {
    pub fn new(poly: MultiPoly) -> Result<Self> {
        if poly.is_zero() {
            return Err(Error::invalid("surface polynomial is zero"));
        }
        if poly.vars().iter().any(|&v| v > Z) {
            return Err(Error::invalid("surface polynomials use x, y and z only"));
        }
        Ok(Surface { poly })
    }

    pub fn degree(&self) -> u32 {
        self.poly.total_degree()
    }

    pub fn sign_at(&self, p: &[BigInt; 3]) -> i8 {
        let pt: [Rat; 3] = p.clone().map(Rat::from_integer);
        sign(&self.poly.eval(&|v| pt[v as usize].clone()))
    }
}

/// Region `mu <= z <= 2 mu`, `|x|, |y| <= mu_xy z`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompactK {
    #[serde(with = "serde_rat")]
    pub mu: Rat,
    #[serde(with = "serde_rat")]
    pub mu_xy: Rat,
}

impl CompactK {
    pub fn new(mu: Rat, mu_xy: Rat) -> Result<Self> {
        if !mu.is_positive() || mu_xy.is_negative() {
            return Err(Error::invalid("K needs mu > 0 and mu_xy >= 0"));
        }
        Ok(CompactK { mu, mu_xy })
    }

    /// Integer points of `K` in lexicographic `(z, x, y)` order.
    pub fn integer_points(&self, budget: usize) -> Result<Vec<[BigInt; 3]>> {
        let zlo = self.mu.ceil().to_integer();
        let zhi = (&self.mu * int(2)).floor().to_integer();
        let mut total = BigInt::zero();
        let mut z = zlo.clone();
        while z <= zhi {
            let r = (&self.mu_xy * Rat::from_integer(z.clone())).floor().to_integer();
            let side: BigInt = &r * 2 + 1;
            total += &side * &side;
            z += 1;
        }
        if total > BigInt::from(budget) {
            return Err(Error::Budget(format!("K holds {total} integer points, budget {budget}")));
        }
        let mut out = Vec::new();
        let mut z = zlo;
        while z <= zhi {
            let r = (&self.mu_xy * Rat::from_integer(z.clone())).floor().to_integer();
            let mut x = -r.clone();
            while x <= r {
                let mut y = -r.clone();
                while y <= r {
                    out.push([x.clone(), y.clone(), z.clone()]);
                    y += 1;
                }
                x += 1;
            }
            z += 1;
        }
        Ok(out)
    }

    /// `z - mu`, `z - 2 mu`, `x -+ mu_xy z`, `y -+ mu_xy z`.
    pub fn boundary_planes(&self) -> Vec<MultiPoly> {
        let (x, y, z) = (MultiPoly::var(X), MultiPoly::var(Y), MultiPoly::var(Z));
        let zs = z.scale(&self.mu_xy);
        vec![
            &z - &MultiPoly::constant(self.mu.clone()),
            &z - &MultiPoly::constant(&self.mu * int(2)),
            &x - &zs,
            &x + &zs,
            &y - &zs,
            &y + &zs,
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Separation {
    pub separates: bool,
    pub points: usize,
    pub classes: usize,
    pub witness: Option<([String; 3], [String; 3])>,
}

/// Whether every sign class of the surfaces on the integer points of `K` is
/// on one side of the fan's decision region.
pub fn separates(surfaces: &[Surface], fan: &RhoFan, k: &CompactK, budget: usize) -> Result<Separation> {
    let pts = k.integer_points(budget)?;
    let labelled: Vec<(Vec<i8>, bool)> = pts
        .par_iter()
        .map(|p| (surfaces.iter().map(|s| s.sign_at(p)).collect(), pdec_member(fan, p)))
        .collect();
    let mut first: BTreeMap<&[i8], (usize, bool)> = BTreeMap::new();
    let show = |p: &[BigInt; 3]| p.clone().map(|c| c.to_string());
    for (i, (key, member)) in labelled.iter().enumerate() {
        match first.get(key.as_slice()) {
            None => {
                first.insert(key, (i, *member));
            }
            Some(&(j, m)) if m != *member => {
                return Ok(Separation {
                    separates: false,
                    points: pts.len(),
                    classes: first.len(),
                    witness: Some((show(&pts[j]), show(&pts[i]))),
                });
            }
            Some(_) => {}
        }
    }
    Ok(Separation {
        separates: true,
        points: pts.len(),
        classes: first.len(),
        witness: None,
    })
}

/// Planes through the origin bounding the fan's cone: `x - x_i z` for every
/// vertex and `y - s x - c z` for every segment `y = s x + c`.
pub fn cone_polynomials(fan: &RhoFan) -> Vec<MultiPoly> {
    let (x, y, z) = (MultiPoly::var(X), MultiPoly::var(Y), MultiPoly::var(Z));
    let mut out: Vec<MultiPoly> = fan.points.iter().map(|(px, _)| &x - &z.scale(px)).collect();
    for (a, b) in fan.segments() {
        let s = (&b.1 - &a.1) / (&b.0 - &a.0);
        let c = &a.1 - &s * &a.0;
        out.push(&(&y - &x.scale(&s)) - &z.scale(&c));
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CollinsKind {
    Silhouette,
    Intersection,
    DividingPlane,
    Boundary,
}

/// Polynomial system `equations = 0`, emitted without solving.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollinsSystem {
    pub kind: CollinsKind,
    pub surfaces: Vec<usize>,
    pub equations: Vec<MultiPoly>,
}

/// Heights `mu (1 + n / (6 delta))` for `n = 1 .. 6 delta - 1`.
pub fn dividing_planes(delta: u32, mu: &Rat) -> Vec<Rat> {
    let m = 6 * delta as i64;
    (1..m).map(|n| mu * (int(1) + Rat::new(n.into(), m.into()))).collect()
}

/// `x p_x + y p_y + z p_z`.
pub fn silhouette(p: &MultiPoly) -> MultiPoly {
    [X, Y, Z].iter().fold(MultiPoly::zero(), |acc, &v| &acc + &(&MultiPoly::var(v) * &p.partial(v)))
}

pub fn collins_systems(surfaces: &[Surface], k: &CompactK) -> Vec<CollinsSystem> {
    let mut out = Vec::new();
    for (i, s) in surfaces.iter().enumerate() {
        out.push(CollinsSystem {
            kind: CollinsKind::Silhouette,
            surfaces: vec![i],
            equations: vec![s.poly.clone(), silhouette(&s.poly)],
        });
    }
    for i in 0..surfaces.len() {
        for j in i + 1..surfaces.len() {
            out.push(CollinsSystem {
                kind: CollinsKind::Intersection,
                surfaces: vec![i, j],
                equations: vec![surfaces[i].poly.clone(), surfaces[j].poly.clone()],
            });
        }
    }
    for (i, s) in surfaces.iter().enumerate() {
        for h in dividing_planes(s.degree().max(1), &k.mu) {
            out.push(CollinsSystem {
                kind: CollinsKind::DividingPlane,
                surfaces: vec![i],
                equations: vec![s.poly.clone(), &MultiPoly::var(Z) - &MultiPoly::constant(h)],
            });
        }
    }
    for plane in k.boundary_planes() {
        out.push(CollinsSystem {
            kind: CollinsKind::Boundary,
            surfaces: Vec::new(),
            equations: vec![plane],
        });
    }
    out
}
