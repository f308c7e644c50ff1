//! Connected-component oracles for semi-algebraic sets.

use std::collections::{BTreeMap, VecDeque};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::realalg::{int, sign, Cmp, MultiPoly, Rat, SignChart, UniPoly};

/// Conjunction of sign conditions `p cmp 0`.
pub type SignSystem = Vec<(MultiPoly, Cmp)>;

/// Exact number of connected components of the union of the given systems,
/// each over the single variable `var`, inside the open interval `domain`
/// (the whole line when `None`).
pub fn count_components_1d(systems: &[SignSystem], var: u32, domain: Option<(&Rat, &Rat)>) -> Result<usize> {
    let mut polys: Vec<UniPoly> = Vec::new();
    let mut index: BTreeMap<MultiPoly, usize> = BTreeMap::new();
    let mut conds: Vec<Vec<(usize, Cmp)>> = Vec::new();
    for sys in systems {
        let mut c = Vec::new();
        for (p, cmp) in sys {
            if p.vars().iter().any(|&v| v != var) {
                return Err(Error::invalid("system is not univariate"));
            }
            let i = *index.entry(p.clone()).or_insert_with(|| {
                polys.push(p.to_univariate(var).expect("univariate"));
                polys.len() - 1
            });
            c.push((i, *cmp));
        }
        conds.push(c);
    }
    let chart = SignChart::new(&polys, domain)?;
    Ok(chart.count_components(|signs| conds.iter().any(|c| c.iter().all(|(i, cmp)| cmp.holds(signs[*i])))))
}

/// Axis-aligned box `[lo_i, hi_i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridBox {
    pub lo: Vec<Rat>,
    pub hi: Vec<Rat>,
}

impl GridBox {
    pub fn cube(n: usize, lo: Rat, hi: Rat) -> Self {
        GridBox {
            lo: vec![lo; n],
            hi: vec![hi; n],
        }
    }
}

/// Components of the grid cells whose centres satisfy one of the systems,
/// with variables `vars[i]` on axis `i` and face-adjacent cells connected.
/// This approximates the true count from below when features are finer than
/// the grid.
pub fn count_components_grid(systems: &[SignSystem], vars: &[u32], bx: &GridBox, resolution: usize) -> usize {
    let n = vars.len();
    let total = resolution.pow(n as u32);
    let centre = |mut code: usize| -> BTreeMap<u32, Rat> {
        let mut point = BTreeMap::new();
        for (axis, v) in vars.iter().enumerate() {
            let k = code % resolution;
            code /= resolution;
            let width = (&bx.hi[axis] - &bx.lo[axis]) / int(resolution as i64);
            point.insert(*v, &bx.lo[axis] + width * (int(2 * k as i64 + 1) / int(2)));
        }
        point
    };
    let inside: Vec<bool> = (0..total)
        .map(|code| {
            let pt = centre(code);
            systems
                .iter()
                .any(|sys| sys.iter().all(|(p, cmp)| cmp.holds(sign(&p.eval_map(&pt)))))
        })
        .collect();
    let mut seen = vec![false; total];
    let mut count = 0;
    for startcode in 0..total {
        if !inside[startcode] || seen[startcode] {
            continue;
        }
        count += 1;
        seen[startcode] = true;
        let mut queue = VecDeque::from([startcode]);
        while let Some(c) = queue.pop_front() {
            let mut stride = 1;
            for _ in 0..n {
                let k = (c / stride) % resolution;
                let mut nb = Vec::new();
                if k > 0 {
                    nb.push(c - stride);
                }
                if k + 1 < resolution {
                    nb.push(c + stride);
                }
                for d in nb {
                    if inside[d] && !seen[d] {
                        seen[d] = true;
                        queue.push_back(d);
                    }
                }
                stride *= resolution;
            }
        }
    }
    count
}

/// `bit_k(x) = floor(x / 2^(k-1)) - 2 floor(x / 2^k)`.
pub fn kth_bit(x: &Rat, k: u32) -> i64 {
    let lo = (x / Rat::from_integer(num_bigint::BigInt::from(1u64 << (k - 1)))).floor();
    let hi = (x / Rat::from_integer(num_bigint::BigInt::from(1u64 << k))).floor();
    let b = lo - hi * int(2);
    if b.is_zero() {
        0
    } else {
        1
    }
}

/// Maximal runs of `{x in (0, 2^m) : bit_k(x) = 1}` found by scanning the
/// points `j / 4`.
pub fn kth_bit_components(m: u32, k: u32) -> usize {
    let steps = (1u64 << m) * 4;
    let mut count = 0;
    let mut inside = false;
    for j in 1..steps {
        let ok = kth_bit(&Rat::new(num_bigint::BigInt::from(j), num_bigint::BigInt::from(4)), k) == 1;
        if ok && !inside {
            count += 1;
        }
        inside = ok;
    }
    count
}
