//! Parametric maxflow profiles and the ρ-fans they define.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::network::{maxflow_with, Affine, EdmondsKarp, MaxflowSolver, ParamNetwork};
use crate::error::{Error, Result};
use crate::realalg::{bitsize, fmt_rat, parse_rat, Rat};

pub const DEFAULT_DEPTH: usize = 64;

/// Continuous piecewise-linear function given by its vertices, endpoints
/// included, sorted by abscissa.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Profile {
    pub points: Vec<(Rat, Rat)>,
}

impl Profile {
    pub fn lo(&self) -> &Rat {
        &self.points[0].0
    }

    pub fn hi(&self) -> &Rat {
        &self.points[self.points.len() - 1].0
    }

    pub fn breakpoints(&self) -> &[(Rat, Rat)] {
        &self.points[1..self.points.len().saturating_sub(1).max(1)]
    }

    pub fn slopes(&self) -> Vec<Rat> {
        self.points
            .windows(2)
            .map(|w| (&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0))
            .collect()
    }

    /// Value at `x`, `None` outside the interval.
    pub fn eval(&self, x: &Rat) -> Option<Rat> {
        if x < self.lo() || x > self.hi() {
            return None;
        }
        if self.points.len() == 1 {
            return Some(self.points[0].1.clone());
        }
        let i = self.points.partition_point(|(px, _)| px < x);
        if i < self.points.len() && &self.points[i].0 == x {
            return Some(self.points[i].1.clone());
        }
        let (a, fa) = &self.points[i - 1];
        let (b, fb) = &self.points[i];
        Some(fa + (fb - fa) * (x - a) / (b - a))
    }

    /// Drops vertices where the slope does not change.
    fn simplify(mut self) -> Self {
        let mut out: Vec<(Rat, Rat)> = Vec::with_capacity(self.points.len());
        self.points.dedup_by(|a, b| a.0 == b.0);
        for p in self.points {
            while out.len() >= 2 {
                let (a, fa) = &out[out.len() - 2];
                let (b, fb) = &out[out.len() - 1];
                let lhs = (fb - fa) * (&p.0 - b);
                let rhs = (&p.1 - fb) * (b - a);
                if lhs == rhs {
                    out.pop();
                } else {
                    break;
                }
            }
            out.push(p);
        }
        Profile { points: out }
    }
}

/// Exact profile of `L -> maxflow(net, L)` over the network's interval.
pub fn parametric_profile(net: &ParamNetwork) -> Result<Profile> {
    parametric_profile_with(net, &EdmondsKarp, DEFAULT_DEPTH)
}

pub fn parametric_profile_with(net: &ParamNetwork, solver: &dyn MaxflowSolver, max_depth: usize) -> Result<Profile> {
    net.validate()?;
    let probe = |x: &Rat| -> Result<(Rat, Affine)> {
        let r = maxflow_with(net, x, solver)?;
        Ok((r.value, net.cut_line(&r.source_side)))
    };
    let (flo, llo) = probe(&net.lo)?;
    if net.lo == net.hi {
        return Ok(Profile {
            points: vec![(net.lo.clone(), flo)],
        });
    }
    let (fhi, lhi) = probe(&net.hi)?;
    let mut points = vec![(net.lo.clone(), flo.clone())];
    let mut stack = vec![(net.lo.clone(), flo, llo, net.hi.clone(), fhi, lhi, 0usize)];
    while let Some((a, fa, la, b, fb, lb, depth)) = stack.pop() {
        let mid = (&a + &b) / Rat::from_integer(2.into());
        let (fm, lm) = probe(&mid)?;
        if fm == (&fa + &fb) / Rat::from_integer(2.into()) {
            points.push((b, fb));
            continue;
        }
        if depth >= max_depth {
            return Err(Error::Budget(format!(
                "profile recursion exceeded depth {max_depth} on [{}, {}]",
                fmt_rat(&a),
                fmt_rat(&b)
            )));
        }
        let (x, fx, lx) = match la.meet(&lb) {
            Some(x) if x > a && x < b => {
                let (fx, lx) = probe(&x)?;
                if fx == la.at(&x) {
                    points.push((x.clone(), fx));
                    points.push((b, fb));
                    continue;
                }
                (x, fx, lx)
            }
            _ => (mid, fm, lm),
        };
        stack.push((x.clone(), fx.clone(), lx.clone(), b, fb, lb, depth + 1));
        stack.push((a, fa, la, x, fx, lx, depth + 1));
    }
    points.sort_by(|p, q| p.0.cmp(&q.0));
    Ok(Profile { points }.simplify())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convexity {
    Affine,
    Convex,
    Concave,
    Neither,
}

/// Piecewise-linear profile with `rho` breakpoints whose coordinates have
/// bitsize at most `beta`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RhoFan {
    pub points: Vec<(Rat, Rat)>,
    pub rho: usize,
    pub beta: u64,
    pub convexity: Convexity,
}

impl RhoFan {
    pub fn profile(&self) -> Profile {
        Profile {
            points: self.points.clone(),
        }
    }

    pub fn lo(&self) -> &Rat {
        &self.points[0].0
    }

    pub fn hi(&self) -> &Rat {
        &self.points[self.points.len() - 1].0
    }

    pub fn value(&self, x: &Rat) -> Option<Rat> {
        self.profile().eval(x)
    }

    pub fn breakpoints(&self) -> &[(Rat, Rat)] {
        &self.points[1..self.points.len() - 1]
    }

    /// Slopes of the first and last segments.
    pub fn boundary_slopes(&self) -> Option<(Rat, Rat)> {
        let s = self.profile().slopes();
        Some((s.first()?.clone(), s.last()?.clone()))
    }

    /// Segments `(x_i, y_i) - (x_{i+1}, y_{i+1})`.
    pub fn segments(&self) -> impl Iterator<Item = (&(Rat, Rat), &(Rat, Rat))> {
        self.points.windows(2).map(|w| (&w[0], &w[1]))
    }
}

pub fn make_fan(profile: &Profile) -> Result<RhoFan> {
    if profile.points.len() < 2 {
        return Err(Error::invalid("a fan needs an interval with distinct ends"));
    }
    let p = profile.clone().simplify();
    let breaks = &p.points[1..p.points.len() - 1];
    let beta = breaks.iter().map(|(x, y)| bitsize(x).max(bitsize(y))).max().unwrap_or(0);
    let slopes = p.slopes();
    let convexity = if slopes.len() <= 1 {
        Convexity::Affine
    } else if slopes.windows(2).all(|w| w[0] < w[1]) {
        Convexity::Convex
    } else if slopes.windows(2).all(|w| w[0] > w[1]) {
        Convexity::Concave
    } else {
        Convexity::Neither
    };
    Ok(RhoFan {
        rho: breaks.len(),
        beta,
        convexity,
        points: p.points,
    })
}

#[derive(Serialize, Deserialize)]
struct FanJson {
    points: Vec<[String; 2]>,
    #[serde(default, skip_deserializing)]
    rho: usize,
    #[serde(default, skip_deserializing)]
    beta: u64,
    #[serde(default, skip_deserializing)]
    convexity: Option<Convexity>,
}

impl Serialize for RhoFan {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FanJson {
            points: self.points.iter().map(|(x, y)| [fmt_rat(x), fmt_rat(y)]).collect(),
            rho: self.rho,
            beta: self.beta,
            convexity: Some(self.convexity),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RhoFan {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = FanJson::deserialize(d)?;
        let mut points = Vec::new();
        for [x, y] in &raw.points {
            let x = parse_rat(x).map_err(serde::de::Error::custom)?;
            let y = parse_rat(y).map_err(serde::de::Error::custom)?;
            points.push((x, y));
        }
        if points.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(serde::de::Error::custom("fan abscissae must increase"));
        }
        make_fan(&Profile { points }).map_err(serde::de::Error::custom)
    }
}

/// Fan of a single line `y = slope * x + c` over `[lo, hi]`.
pub fn affine_fan(lo: Rat, hi: Rat, slope: &Rat, c: &Rat) -> Result<RhoFan> {
    let y = |x: &Rat| slope * x + c;
    make_fan(&Profile {
        points: vec![(lo.clone(), y(&lo)), (hi.clone(), y(&hi))],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fans::network::{maxflow, random_network};
    use crate::realalg::{int, rat};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn min_net() -> ParamNetwork {
        let mut net = ParamNetwork::new(3, 0, 2, int(0), int(2));
        net.add_edge(0, 1, "L".parse().unwrap());
        net.add_edge(1, 2, "1".parse().unwrap());
        net
    }

    #[test]
    fn min_profile() {
        let p = parametric_profile(&min_net()).unwrap();
        assert_eq!(p.breakpoints(), &[(int(1), int(1))]);
        let fan = make_fan(&p).unwrap();
        assert_eq!((fan.rho, fan.beta, fan.convexity), (1, 1, Convexity::Concave));
        assert_eq!(fan.boundary_slopes(), Some((int(1), int(0))));
    }

    #[test]
    fn constant_profile() {
        let mut net = ParamNetwork::new(2, 0, 1, int(0), int(3));
        net.add_edge(0, 1, "5".parse().unwrap());
        let p = parametric_profile(&net).unwrap();
        assert!(p.breakpoints().is_empty());
        assert_eq!(make_fan(&p).unwrap().rho, 0);
    }

    #[test]
    fn beta_of_breakpoint() {
        let fan = make_fan(&Profile {
            points: vec![(int(0), int(0)), (rat(3, 2), rat(5, 4)), (int(4), int(0))],
        })
        .unwrap();
        assert_eq!(fan.beta, 3);
    }

    #[test]
    fn profile_matches_maxflow() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..8 {
            let n = rng.gen_range(3..=6);
            let net = random_network(&mut rng, n, 0.6, true);
            let p = parametric_profile(&net).unwrap();
            for _ in 0..20 {
                let x = rat(rng.gen_range(0..=997), 997);
                assert_eq!(p.eval(&x).unwrap(), maxflow(&net, &x).unwrap());
            }
            let fan = make_fan(&p).unwrap();
            assert!(matches!(fan.convexity, Convexity::Concave | Convexity::Affine));
        }
    }

    #[test]
    fn fan_json_round_trip() {
        let fan = make_fan(&parametric_profile(&min_net()).unwrap()).unwrap();
        let text = serde_json::to_string(&fan).unwrap();
        let back: RhoFan = serde_json::from_str(&text).unwrap();
        assert_eq!(back, fan);
        assert!(serde_json::from_str::<RhoFan>(r#"{"points":[["1","0"],["0","0"]]}"#).is_err());
    }
}
