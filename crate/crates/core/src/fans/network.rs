//! Flow networks with affine capacities and exact maxflow solvers.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::realalg::{fmt_rat, int, parse_rat, Rat};

/// Capacity `a * L + b` in the parameter `L`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Affine {
    pub a: Rat,
    pub b: Rat,
}

impl Affine {
    pub fn new(a: Rat, b: Rat) -> Self {
        Affine { a, b }
    }

    pub fn constant(b: Rat) -> Self {
        Affine { a: Rat::zero(), b }
    }

    pub fn zero() -> Self {
        Affine::constant(Rat::zero())
    }

    pub fn at(&self, lambda: &Rat) -> Rat {
        &self.a * lambda + &self.b
    }

    pub fn add(&self, o: &Affine) -> Affine {
        Affine::new(&self.a + &o.a, &self.b + &o.b)
    }

    /// Parameter where two lines meet, `None` when parallel.
    pub fn meet(&self, o: &Affine) -> Option<Rat> {
        let da = &self.a - &o.a;
        (!da.is_zero()).then(|| (&o.b - &self.b) / da)
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (true, _) => write!(f, "{}", fmt_rat(&self.b)),
            (false, true) => write!(f, "{}*L", fmt_rat(&self.a)),
            (false, false) if self.b.is_negative() => {
                write!(f, "{}*L-{}", fmt_rat(&self.a), fmt_rat(&-self.b.clone()))
            }
            (false, false) => write!(f, "{}*L+{}", fmt_rat(&self.a), fmt_rat(&self.b)),
        }
    }
}

impl FromStr for Affine {
    type Err = Error;

    /// Sums of terms `c`, `L`, `c*L` or `cL` with optional signs.
    fn from_str(s: &str) -> Result<Self> {
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if text.is_empty() {
            return Err(Error::parse("empty capacity"));
        }
        let mut out = Affine::zero();
        let mut terms = Vec::new();
        let mut cur = String::new();
        for (i, ch) in text.chars().enumerate() {
            if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('/') && !cur.ends_with('*') {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        terms.push(cur);
        for t in terms {
            let (neg, body) = match t.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, t.strip_prefix('+').unwrap_or(&t)),
            };
            let (coef, is_l) = if let Some(c) = body.strip_suffix('L') {
                let c = c.strip_suffix('*').unwrap_or(c);
                let v = if c.is_empty() { int(1) } else { parse_rat(c)? };
                (v, true)
            } else {
                (parse_rat(body).map_err(|_| Error::parse(format!("bad capacity term `{t}` in `{s}`")))?, false)
            };
            let coef = if neg { -coef } else { coef };
            if is_l {
                out.a += coef;
            } else {
                out.b += coef;
            }
        }
        Ok(out)
    }
}

impl Serialize for Affine {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Affine {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = String::deserialize(d)?;
        raw.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetEdge {
    pub from: usize,
    pub to: usize,
    pub cap: Affine,
}

/// Directed network whose capacities are affine in `L` over `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamNetwork {
    pub names: Vec<String>,
    pub edges: Vec<NetEdge>,
    pub source: usize,
    pub sink: usize,
    pub lo: Rat,
    pub hi: Rat,
}

#[derive(Serialize, Deserialize)]
struct NetworkJson {
    nodes: Vec<String>,
    source: String,
    sink: String,
    edges: Vec<EdgeJson>,
    #[serde(default = "default_interval")]
    interval: [String; 2],
}

#[derive(Serialize, Deserialize)]
struct EdgeJson {
    from: String,
    to: String,
    cap: Affine,
}

fn default_interval() -> [String; 2] {
    ["0".into(), "1".into()]
}

impl ParamNetwork {
    pub fn new(n: usize, source: usize, sink: usize, lo: Rat, hi: Rat) -> Self {
        ParamNetwork {
            names: (0..n).map(|i| format!("v{i}")).collect(),
            edges: Vec::new(),
            source,
            sink,
            lo,
            hi,
        }
    }

    pub fn nodes(&self) -> usize {
        self.names.len()
    }

    pub fn add_edge(&mut self, from: usize, to: usize, cap: Affine) {
        self.edges.push(NetEdge { from, to, cap });
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.nodes();
        if self.source >= n || self.sink >= n || self.source == self.sink {
            return Err(Error::invalid("source and sink must be distinct nodes"));
        }
        if self.lo > self.hi {
            return Err(Error::invalid("empty parameter interval"));
        }
        for e in &self.edges {
            if e.from >= n || e.to >= n {
                return Err(Error::invalid(format!("edge {} -> {} names a missing node", e.from, e.to)));
            }
            for end in [&self.lo, &self.hi] {
                if e.cap.at(end).is_negative() {
                    return Err(Error::invalid(format!(
                        "capacity {} of {} -> {} is negative at L = {}",
                        e.cap,
                        self.names[e.from],
                        self.names[e.to],
                        fmt_rat(end)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Dense capacity matrix at `lambda`, summing parallel edges.
    pub fn capacities(&self, lambda: &Rat) -> Result<Vec<Vec<Rat>>> {
        let n = self.nodes();
        let mut c = vec![vec![Rat::zero(); n]; n];
        for e in &self.edges {
            let v = e.cap.at(lambda);
            if v.is_negative() {
                return Err(Error::invalid(format!(
                    "capacity of {} -> {} is negative at L = {}",
                    self.names[e.from],
                    self.names[e.to],
                    fmt_rat(lambda)
                )));
            }
            if e.from != e.to {
                c[e.from][e.to] += v;
            }
        }
        Ok(c)
    }

    /// Capacity of the cut leaving `side` as an affine function of `L`.
    pub fn cut_line(&self, side: &[bool]) -> Affine {
        self.edges
            .iter()
            .filter(|e| side[e.from] && !side[e.to])
            .fold(Affine::zero(), |acc, e| acc.add(&e.cap))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: NetworkJson = serde_json::from_str(text)?;
        let index: BTreeMap<&str, usize> = raw.nodes.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let look = |s: &str| {
            index
                .get(s)
                .copied()
                .ok_or_else(|| Error::invalid(format!("unknown node `{s}`")))
        };
        let mut net = ParamNetwork {
            names: raw.nodes.clone(),
            edges: Vec::new(),
            source: look(&raw.source)?,
            sink: look(&raw.sink)?,
            lo: parse_rat(&raw.interval[0])?,
            hi: parse_rat(&raw.interval[1])?,
        };
        for e in &raw.edges {
            net.add_edge(look(&e.from)?, look(&e.to)?, e.cap.clone());
        }
        net.validate()?;
        Ok(net)
    }

    pub fn to_json(&self) -> String {
        let raw = NetworkJson {
            nodes: self.names.clone(),
            source: self.names[self.source].clone(),
            sink: self.names[self.sink].clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeJson {
                    from: self.names[e.from].clone(),
                    to: self.names[e.to].clone(),
                    cap: e.cap.clone(),
                })
                .collect(),
            interval: [fmt_rat(&self.lo), fmt_rat(&self.hi)],
        };
        serde_json::to_string_pretty(&raw).expect("network serializes")
    }
}

/// Flow value with the source side of a minimum cut.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowResult {
    pub value: Rat,
    pub source_side: Vec<bool>,
}

pub trait MaxflowSolver: Send + Sync {
    fn name(&self) -> &'static str;
    fn solve(&self, cap: &[Vec<Rat>], s: usize, t: usize) -> FlowResult;
}

fn residual_side(res: &[Vec<Rat>], s: usize) -> Vec<bool> {
    let n = res.len();
    let mut seen = vec![false; n];
    seen[s] = true;
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        for v in 0..n {
            if !seen[v] && res[u][v].is_positive() {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    seen
}

fn flow_out(cap: &[Vec<Rat>], res: &[Vec<Rat>], s: usize) -> Rat {
    (0..cap.len()).fold(Rat::zero(), |acc, v| acc + &cap[s][v] - &res[s][v])
}

/// Shortest augmenting paths.
pub struct EdmondsKarp;

impl MaxflowSolver for EdmondsKarp {
    fn name(&self) -> &'static str {
        "edmonds-karp"
    }

    fn solve(&self, cap: &[Vec<Rat>], s: usize, t: usize) -> FlowResult {
        let n = cap.len();
        let mut res = cap.to_vec();
        loop {
            let mut prev = vec![usize::MAX; n];
            prev[s] = s;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                if u == t {
                    break;
                }
                for v in 0..n {
                    if prev[v] == usize::MAX && res[u][v].is_positive() {
                        prev[v] = u;
                        queue.push_back(v);
                    }
                }
            }
            if prev[t] == usize::MAX {
                break;
            }
            let mut push = None::<Rat>;
            let mut v = t;
            while v != s {
                let u = prev[v];
                push = Some(match push {
                    Some(p) if p <= res[u][v] => p,
                    _ => res[u][v].clone(),
                });
                v = u;
            }
            let push = push.expect("path has an edge");
            let mut v = t;
            while v != s {
                let u = prev[v];
                res[u][v] -= &push;
                res[v][u] += &push;
                v = u;
            }
        }
        FlowResult {
            value: flow_out(cap, &res, s),
            source_side: residual_side(&res, s),
        }
    }
}

/// Blocking flows on BFS level graphs.
pub struct Dinic;

impl Dinic {
    fn augment(res: &mut [Vec<Rat>], level: &[usize], next: &mut [usize], u: usize, t: usize, limit: Rat) -> Rat {
        if u == t {
            return limit;
        }
        let n = res.len();
        while next[u] < n {
            let v = next[u];
            if level[v] == level[u] + 1 && res[u][v].is_positive() {
                let room = if res[u][v] < limit { res[u][v].clone() } else { limit.clone() };
                let pushed = Dinic::augment(res, level, next, v, t, room);
                if pushed.is_positive() {
                    res[u][v] -= &pushed;
                    res[v][u] += &pushed;
                    return pushed;
                }
            }
            next[u] += 1;
        }
        Rat::zero()
    }
}

impl MaxflowSolver for Dinic {
    fn name(&self) -> &'static str {
        "dinic"
    }

    fn solve(&self, cap: &[Vec<Rat>], s: usize, t: usize) -> FlowResult {
        let n = cap.len();
        let mut res = cap.to_vec();
        let total: Rat = cap[s].iter().fold(Rat::zero(), |a, c| a + c);
        loop {
            let mut level = vec![usize::MAX; n];
            level[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for v in 0..n {
                    if level[v] == usize::MAX && res[u][v].is_positive() {
                        level[v] = level[u] + 1;
                        queue.push_back(v);
                    }
                }
            }
            if level[t] == usize::MAX {
                break;
            }
            let mut next = vec![0; n];
            loop {
                let pushed = Dinic::augment(&mut res, &level, &mut next, s, t, total.clone() + int(1));
                if !pushed.is_positive() {
                    break;
                }
            }
        }
        FlowResult {
            value: flow_out(cap, &res, s),
            source_side: residual_side(&res, s),
        }
    }
}

/// Exact maximum flow at `lambda`.
pub fn maxflow(net: &ParamNetwork, lambda: &Rat) -> Result<Rat> {
    maxflow_with(net, lambda, &EdmondsKarp).map(|r| r.value)
}

pub fn maxflow_with(net: &ParamNetwork, lambda: &Rat, solver: &dyn MaxflowSolver) -> Result<FlowResult> {
    if lambda < &net.lo || lambda > &net.hi {
        return Err(Error::invalid(format!(
            "L = {} lies outside [{}, {}]",
            fmt_rat(lambda),
            fmt_rat(&net.lo),
            fmt_rat(&net.hi)
        )));
    }
    let cap = net.capacities(lambda)?;
    let r = solver.solve(&cap, net.source, net.sink);
    let cut = cut_value(&cap, &r.source_side);
    if cut != r.value {
        return Err(Error::Runtime(format!(
            "flow {} differs from its cut {}",
            fmt_rat(&r.value),
            fmt_rat(&cut)
        )));
    }
    Ok(r)
}

pub fn cut_value(cap: &[Vec<Rat>], side: &[bool]) -> Rat {
    let mut total = Rat::zero();
    for (u, row) in cap.iter().enumerate() {
        for (v, c) in row.iter().enumerate() {
            if side[u] && !side[v] {
                total += c;
            }
        }
    }
    total
}

/// Minimum cut over every source side containing `s` and not `t`.
pub fn min_cut_exhaustive(cap: &[Vec<Rat>], s: usize, t: usize) -> Result<Rat> {
    let n = cap.len();
    if n > 24 {
        return Err(Error::Budget(format!("{n} nodes is too many for cut enumeration")));
    }
    let others: Vec<usize> = (0..n).filter(|&v| v != s && v != t).collect();
    let mut best: Option<Rat> = None;
    for mask in 0u64..(1u64 << others.len()) {
        let mut side = vec![false; n];
        side[s] = true;
        for (i, &v) in others.iter().enumerate() {
            side[v] = mask >> i & 1 == 1;
        }
        let c = cut_value(cap, &side);
        if best.as_ref().is_none_or(|b| &c < b) {
            best = Some(c);
        }
    }
    Ok(best.unwrap_or_else(Rat::zero))
}

/// Network with `n` nodes, source `0`, sink `n - 1` and affine capacities
/// nonnegative on `[0, 1]`.
pub fn random_network(rng: &mut impl rand::Rng, n: usize, density: f64, affine: bool) -> ParamNetwork {
    let mut net = ParamNetwork::new(n, 0, n - 1, int(0), int(1));
    for u in 0..n {
        for v in 0..n {
            if u == v || v == 0 || u == n - 1 || !rng.gen_bool(density) {
                continue;
            }
            let b = int(rng.gen_range(0..10));
            let a = if affine { int(rng.gen_range(-4..=4)) } else { int(0) };
            let b = if (&a + &b).is_negative() { -a.clone() } else { b };
            net.add_edge(u, v, Affine::new(a, b));
        }
    }
    net
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realalg::rat;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn constant_net(n: usize, edges: &[(usize, usize, i64)]) -> ParamNetwork {
        let mut net = ParamNetwork::new(n, 0, n - 1, int(0), int(1));
        for &(u, v, c) in edges {
            net.add_edge(u, v, Affine::constant(int(c)));
        }
        net
    }

    #[test]
    fn small_flows() {
        let net = constant_net(3, &[(0, 1, 1), (1, 2, 1)]);
        assert_eq!(maxflow(&net, &int(0)).unwrap(), int(1));
        let net = constant_net(4, &[(0, 1, 3), (0, 2, 2), (1, 3, 2), (2, 3, 3)]);
        assert_eq!(maxflow(&net, &int(0)).unwrap(), int(4));
        let cap = net.capacities(&int(0)).unwrap();
        assert_eq!(min_cut_exhaustive(&cap, 0, 3).unwrap(), int(4));
        let net = constant_net(3, &[(0, 1, 5)]);
        assert_eq!(maxflow(&net, &int(0)).unwrap(), int(0));
    }

    #[test]
    fn negative_capacity_rejected() {
        let mut net = ParamNetwork::new(2, 0, 1, int(0), int(2));
        net.add_edge(0, 1, "1 - L".parse().unwrap());
        assert!(net.validate().is_err());
        assert_eq!(maxflow(&net, &int(1)).unwrap(), int(0));
        assert!(maxflow(&net, &int(2)).is_err());
        assert!(maxflow(&net, &int(3)).is_err());
    }

    #[test]
    fn affine_parsing() {
        assert_eq!("L".parse::<Affine>().unwrap(), Affine::new(int(1), int(0)));
        assert_eq!("2*L+3".parse::<Affine>().unwrap(), Affine::new(int(2), int(3)));
        assert_eq!("-1/2*L - 3/4".parse::<Affine>().unwrap(), Affine::new(rat(-1, 2), rat(-3, 4)));
        assert_eq!("3L".parse::<Affine>().unwrap(), Affine::new(int(3), int(0)));
        assert_eq!("7".parse::<Affine>().unwrap(), Affine::constant(int(7)));
        assert!("L*L".parse::<Affine>().is_err());
        for s in ["3/2*L-1", "L", "5", "-2*L+1/3"] {
            let a: Affine = s.parse().unwrap();
            assert_eq!(a.to_string().parse::<Affine>().unwrap(), a);
        }
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"nodes":["s","a","t"],"source":"s","sink":"t",
            "edges":[{"from":"s","to":"a","cap":"L"},{"from":"a","to":"t","cap":"1"}],
            "interval":["0","2"]}"#;
        let net = ParamNetwork::from_json(text).unwrap();
        assert_eq!(maxflow(&net, &rat(1, 2)).unwrap(), rat(1, 2));
        assert_eq!(ParamNetwork::from_json(&net.to_json()).unwrap(), net);
        assert!(ParamNetwork::from_json(r#"{"nodes":["s"],"source":"s","sink":"t","edges":[]}"#).is_err());
    }

    #[test]
    fn solvers_agree_with_cut_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let n = rand::Rng::gen_range(&mut rng, 2..=7);
            let net = random_network(&mut rng, n, 0.5, true);
            let lambda = rat(rand::Rng::gen_range(&mut rng, 0..=8), 8);
            let cap = net.capacities(&lambda).unwrap();
            let cut = min_cut_exhaustive(&cap, 0, n - 1).unwrap();
            assert_eq!(EdmondsKarp.solve(&cap, 0, n - 1).value, cut);
            assert_eq!(Dinic.solve(&cap, 0, n - 1).value, cut);
        }
    }
}
