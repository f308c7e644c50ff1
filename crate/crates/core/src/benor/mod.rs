//! Algebraic decision and computation trees, Ben-Or style polynomial
//! systems, real mates and component-count bounds.

pub mod components;
pub mod extract;
pub mod mate;
pub mod trees;

use num_bigint::BigUint;

pub use components::{count_components_1d, count_components_grid, kth_bit, kth_bit_components, GridBox, SignSystem};
pub use extract::{algebraic_degree, extract_polysystem, Constraint, ConstraintKind, HistoryFn, PolySystem, PolyVar};
pub use mate::{euclid_numbering, mate_accepts, mate_certificate, mate_witness, real_mate, MateCertificate};
pub use trees::{
    element_distinctness_act, interpret_act, interpret_adt, parse_act, parse_adt, random_act, random_adt, ActNode,
    ActOp, ActTest, AdtNode, AlgComputationTree, AlgDecisionTree,
};

use crate::error::{Error, Result};
use crate::graphings::symbolic::{path_condition, EmptinessOracle, InputSpace, SymbolicOracle};
use crate::graphings::{loc_var, Emptiness, GraphingRep};
use crate::amc::Loc;

/// `d (2d - 1)^(n + h - 1)`.
pub fn benor_bound(d: u32, n: u32, h: u32) -> Result<BigUint> {
    if d < 2 {
        return Err(Error::invalid("the bound needs d >= 2"));
    }
    if n < 1 {
        return Err(Error::invalid("the bound needs n >= 1"));
    }
    Ok(BigUint::from(d) * BigUint::from(2 * d - 1).pow(n + h - 1))
}

/// `2^h d (2d - 1)^(n + h - 1)`.
pub fn steele_yao_bound(h: u32, d: u32, n: u32) -> Result<BigUint> {
    Ok((BigUint::from(1u32) << h) * benor_bound(d, n, h)?)
}

/// `2^(h0 + 1) 3^(2kD + n + 1)` with `2^h0` given as an integer count.
pub fn graphing_benor_bound(pow2_h0: &BigUint, k: u32, degree: u32, n: u32) -> BigUint {
    BigUint::from(2u32) * pow2_h0 * BigUint::from(3u32).pow(2 * k * degree + n + 1)
}

/// `2^3 3^(n+1) 3^(2d)`.
pub fn adt_corollary_bound(d: u32, n: u32) -> BigUint {
    BigUint::from(8u32) * BigUint::from(3u32).pow(n + 1 + 2 * d)
}

/// Smallest integer at least `2^h0`, treating values within `1e-9` of an
/// integer exponent as exact.
pub fn pow2_ceil(h0: f64) -> BigUint {
    let r = h0.round();
    if (h0 - r).abs() < 1e-9 && r >= 0.0 {
        return BigUint::from(1u32) << (r as u64);
    }
    let v = h0.exp2().ceil();
    BigUint::from(v as u64)
}

/// Exact component count of the set a decision tree over one input accepts.
pub fn adt_components(t: &AlgDecisionTree) -> Result<usize> {
    if t.vars != 1 {
        return Err(Error::invalid("exact counting needs a single input"));
    }
    count_components_1d(&t.yes_paths(), loc_var(Loc::shared(1)), None)
}

/// Path conditions of the runs from the initial state that reach the top
/// state in at most `k` steps, over the single input `X1`.
pub fn accepted_systems_1d(g: &GraphingRep, k: usize) -> Result<Vec<SignSystem>> {
    let space = InputSpace::reals(vec![Loc::shared(1)]);
    let start = g.init.ok_or_else(|| Error::invalid("graphing has no initial state"))?;
    let top = g.top.ok_or_else(|| Error::invalid("graphing has no top state"))?;
    let mut out = Vec::new();
    let mut frontier = vec![(Vec::new(), start)];
    for _ in 0..=k {
        let mut next = Vec::new();
        for (path, state) in frontier {
            if state == top {
                let r = path_condition(g, &space, start, &path).map_err(Error::invalid)?;
                out.push(r.atoms());
                continue;
            }
            for (id, e) in g.outgoing(state) {
                let mut p: Vec<usize> = path.clone();
                p.push(id);
                if SymbolicOracle.emptiness(g, &space, start, &p) != Emptiness::Empty {
                    next.push((p, e.to));
                }
            }
        }
        frontier = next;
    }
    Ok(out)
}

/// Exact component count of the inputs a one-input graphing accepts within `k` steps.
pub fn graphing_components_1d(g: &GraphingRep, k: usize) -> Result<usize> {
    count_components_1d(&accepted_systems_1d(g, k)?, loc_var(Loc::shared(1)), None)
}

/// Decision tree of height `O(log N)` over one input accepting the `N`
/// disjoint intervals `(4i, 4i + 1)`, built by balanced search on `x - 4i - 2`.
pub fn interval_family(n: usize) -> AlgDecisionTree {
    use crate::graphings::cell;
    use crate::realalg::{int, MultiPoly};
    let x = cell(Loc::shared(1));
    let shifted = |c: i64| &x - &MultiPoly::constant(int(c));
    let inside = |i: usize| -> AdtNode {
        let lo = 4 * i as i64;
        let above = AdtNode::Test {
            poly: shifted(lo + 1),
            lt: Box::new(AdtNode::Leaf(true)),
            eq: Box::new(AdtNode::Leaf(false)),
            gt: Box::new(AdtNode::Leaf(false)),
        };
        AdtNode::Test {
            poly: shifted(lo),
            lt: Box::new(AdtNode::Leaf(false)),
            eq: Box::new(AdtNode::Leaf(false)),
            gt: Box::new(above),
        }
    };
    fn build(lo: usize, hi: usize, leaf: &dyn Fn(usize) -> AdtNode, shifted: &dyn Fn(i64) -> crate::realalg::MultiPoly) -> AdtNode {
        if hi - lo == 1 {
            return leaf(lo);
        }
        let mid = (lo + hi) / 2;
        AdtNode::Test {
            poly: shifted(4 * mid as i64 - 1),
            lt: Box::new(build(lo, mid, leaf, shifted)),
            eq: Box::new(AdtNode::Leaf(false)),
            gt: Box::new(build(mid, hi, leaf, shifted)),
        }
    }
    AlgDecisionTree {
        vars: 1,
        order: 1,
        root: build(0, n.max(1), &inside, &shifted),
    }
}

/// Balanced decision tree over one input with sorted breakpoints `breaks`,
/// accepting the open gaps flagged in `gaps` (one more than the breakpoints)
/// and the breakpoints flagged in `points`.
pub fn piecewise_tree(breaks: &[crate::realalg::Rat], gaps: &[bool], points: &[bool]) -> Result<AlgDecisionTree> {
    use crate::graphings::cell;
    use crate::realalg::MultiPoly;
    if gaps.len() != breaks.len() + 1 || points.len() != breaks.len() {
        return Err(Error::invalid("need one gap flag more than breakpoints and one flag per breakpoint"));
    }
    if breaks.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("breakpoints must increase"));
    }
    fn build(
        x: &MultiPoly,
        breaks: &[crate::realalg::Rat],
        gaps: &[bool],
        points: &[bool],
    ) -> AdtNode {
        if breaks.is_empty() {
            return AdtNode::Leaf(gaps[0]);
        }
        let mid = breaks.len() / 2;
        AdtNode::Test {
            poly: x - &MultiPoly::constant(breaks[mid].clone()),
            lt: Box::new(build(x, &breaks[..mid], &gaps[..=mid], &points[..mid])),
            eq: Box::new(AdtNode::Leaf(points[mid])),
            gt: Box::new(build(x, &breaks[mid + 1..], &gaps[mid + 1..], &points[mid + 1..])),
        }
    }
    let x = cell(Loc::shared(1));
    Ok(AlgDecisionTree {
        vars: 1,
        order: 1,
        root: build(&x, breaks, gaps, points),
    })
}

/// Decision tree accepting `{x in (0, 2^m) : bit_k(x) = 1}`.
pub fn kth_bit_tree(m: u32, k: u32) -> Result<AlgDecisionTree> {
    if k < 1 || k > m || m > 20 {
        return Err(Error::invalid("need 1 <= k <= m <= 20"));
    }
    let w = 1i64 << (k - 1);
    let count = (1i64 << m) / w;
    let breaks: Vec<crate::realalg::Rat> = (0..=count).map(|j| crate::realalg::int(j * w)).collect();
    let mut gaps = vec![false];
    gaps.extend((0..count).map(|j| j % 2 == 1));
    gaps.push(false);
    let points: Vec<bool> = (0..=count).map(|j| j % 2 == 1 && j < count).collect();
    piecewise_tree(&breaks, &gaps, &points)
}
