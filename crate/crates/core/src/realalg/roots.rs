//! Sturm-sequence root isolation, exact sign evaluation at real algebraic
//! points, and univariate sign charts.

use num_traits::Zero;
use serde::Serialize;

use super::rat::{int, Rat};
use super::unipoly::UniPoly;
use crate::error::{Error, Result};

/// Sturm chain of a polynomial: `p0 = f`, `p1 = f'`, `p(i+1) = -rem(p(i-1), p(i))`.
#[derive(Debug, Clone)]
pub struct SturmChain {
    chain: Vec<UniPoly>,
}

impl SturmChain {
    pub fn new(f: &UniPoly) -> Self {
        let mut chain = vec![f.clone()];
        let d = f.derivative(1);
        if !d.is_zero() {
            chain.push(d);
            loop {
                let n = chain.len();
                let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
                if r.is_zero() {
                    break;
                }
                chain.push(-&r);
            }
        }
        SturmChain { chain }
    }

    /// Number of sign variations of the chain at `x`, zeros skipped.
    pub fn variations(&self, x: &Rat) -> usize {
        count_variations(self.chain.iter().map(|p| p.sign_at(x)))
    }

    /// Number of distinct roots in the open interval `(a, b)`; `a` and `b`
    /// must not be roots of the chain head.
    pub fn count(&self, a: &Rat, b: &Rat) -> usize {
        self.variations(a).saturating_sub(self.variations(b))
    }
}

fn count_variations(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut v = 0;
    for s in signs.filter(|s| *s != 0) {
        if last != 0 && s != last {
            v += 1;
        }
        last = s;
    }
    v
}

/// An isolating interval. `lo == hi` marks an exact rational root; otherwise
/// exactly one root lies in the open interval `(lo, hi)` and neither endpoint
/// is a root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootInterval {
    #[serde(with = "super::rat::serde_rat")]
    pub lo: Rat,
    #[serde(with = "super::rat::serde_rat")]
    pub hi: Rat,
}

impl RootInterval {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }
}

/// Isolates the real roots of `p` lying in the closed interval `[a, b]`
/// (whole real line when `range` is `None`). Intervals are returned sorted.
pub fn isolate_roots(p: &UniPoly, range: Option<(&Rat, &Rat)>) -> Result<Vec<RootInterval>> {
    if p.is_zero() {
        return Err(Error::invalid("cannot isolate the roots of the zero polynomial"));
    }
    let mut f = p.squarefree();
    if f.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let (lo, hi) = match range {
        Some((a, b)) => {
            if a > b {
                return Err(Error::invalid("empty query interval"));
            }
            for end in [a, b] {
                if f.eval(end).is_zero() {
                    out.push(RootInterval {
                        lo: end.clone(),
                        hi: end.clone(),
                    });
                    f = deflate(&f, end);
                }
            }
            if a == b {
                out.dedup();
                return Ok(out);
            }
            (a.clone(), b.clone())
        }
        None => {
            let bound = f.root_bound();
            (-bound.clone(), bound)
        }
    };
    isolate_open(&f, lo, hi, &mut out);
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    Ok(out)
}

fn deflate(f: &UniPoly, root: &Rat) -> UniPoly {
    f.div_rem(&UniPoly::new(vec![-root.clone(), int(1)])).0
}

/// Roots of squarefree `f` in `(lo, hi)`; `f(lo)` and `f(hi)` nonzero.
fn isolate_open(f: &UniPoly, lo: Rat, hi: Rat, out: &mut Vec<RootInterval>) {
    if f.degree().unwrap_or(0) == 0 {
        return;
    }
    let chain = SturmChain::new(f);
    let mut stack = vec![(lo.clone(), hi.clone(), chain.count(&lo, &hi))];
    while let Some((a, b, n)) = stack.pop() {
        match n {
            0 => {}
            1 => out.push(RootInterval { lo: a, hi: b }),
            _ => {
                let mid = (&a + &b) / int(2);
                if f.eval(&mid).is_zero() {
                    // Shrink a window around the rational root until it holds
                    // no other root and its ends are not roots.
                    let mut delta = (&b - &a) / int(4);
                    let (l, r) = loop {
                        let l = &mid - &delta;
                        let r = &mid + &delta;
                        if !f.eval(&l).is_zero() && !f.eval(&r).is_zero() && chain.count(&l, &r) == 1 {
                            break (l, r);
                        }
                        delta /= int(2);
                    };
                    out.push(RootInterval {
                        lo: mid.clone(),
                        hi: mid,
                    });
                    let left = chain.count(&a, &l);
                    let right = chain.count(&r, &b);
                    stack.push((a, l, left));
                    stack.push((r, b, right));
                } else {
                    let left = chain.count(&a, &mid);
                    stack.push((a, mid.clone(), left));
                    stack.push((mid, b, n - left));
                }
            }
        }
    }
}

/// A real algebraic number: the unique root of a squarefree polynomial in an
/// isolating interval.
#[derive(Debug, Clone)]
pub struct AlgebraicReal {
    poly: UniPoly,
    interval: RootInterval,
}

impl AlgebraicReal {
    /// `poly` must be squarefree and `interval` must isolate one of its roots.
    pub fn new(poly: UniPoly, interval: RootInterval) -> Self {
        AlgebraicReal { poly, interval }
    }

    pub fn rational(q: Rat) -> Self {
        AlgebraicReal {
            poly: UniPoly::new(vec![-q.clone(), int(1)]),
            interval: RootInterval { lo: q.clone(), hi: q },
        }
    }

    pub fn interval(&self) -> &RootInterval {
        &self.interval
    }

    pub fn as_rational(&self) -> Option<&Rat> {
        self.interval.is_exact().then_some(&self.interval.lo)
    }

    /// Halves the isolating interval (or pins the root when the midpoint hits it).
    pub fn refine(&mut self) {
        if self.interval.is_exact() {
            return;
        }
        let mid = (&self.interval.lo + &self.interval.hi) / int(2);
        let sm = self.poly.sign_at(&mid);
        if sm == 0 {
            self.interval = RootInterval {
                lo: mid.clone(),
                hi: mid,
            };
        } else if self.poly.sign_at(&self.interval.lo) != sm {
            self.interval.hi = mid;
        } else {
            self.interval.lo = mid;
        }
    }

    pub fn refine_to(&mut self, width: &Rat) {
        while !self.interval.is_exact() && &self.interval.width() > width {
            self.refine();
        }
    }

    /// Exact sign of `q` at this number.
    pub fn sign_of(&mut self, q: &UniPoly) -> i8 {
        if let Some(r) = self.as_rational() {
            return q.sign_at(r);
        }
        if q.is_zero() {
            return 0;
        }
        let g = self.poly.gcd(q);
        if g.degree().unwrap_or(0) > 0 {
            let (lo, hi) = (&self.interval.lo, &self.interval.hi);
            if g.sign_at(lo) * g.sign_at(hi) < 0 {
                return 0;
            }
        }
        let qs = q.squarefree();
        if qs.degree().unwrap_or(0) == 0 {
            return q.sign_at(&self.interval.lo);
        }
        let chain = SturmChain::new(&qs);
        loop {
            if let Some(r) = self.as_rational() {
                return q.sign_at(r);
            }
            let (lo, hi) = (&self.interval.lo, &self.interval.hi);
            if qs.sign_at(lo) != 0 && qs.sign_at(hi) != 0 && chain.count(lo, hi) == 0 {
                return q.sign_at(lo);
            }
            self.refine();
        }
    }

    /// Exact comparison, refining both numbers until their intervals are
    /// disjoint or they are shown equal.
    pub fn compare(&mut self, other: &mut AlgebraicReal) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match (self.as_rational().cloned(), other.as_rational().cloned()) {
            (Some(a), Some(b)) => return a.cmp(&b),
            (Some(a), None) => return other.compare_rational(&a).reverse(),
            (None, Some(b)) => return self.compare_rational(&b),
            (None, None) => {}
        }
        let g = self.poly.gcd(&other.poly);
        let common = g.degree().unwrap_or(0) > 0
            && g.sign_at(&self.interval.lo) * g.sign_at(&self.interval.hi) < 0
            && g.sign_at(&other.interval.lo) * g.sign_at(&other.interval.hi) < 0;
        let chain = common.then(|| SturmChain::new(&g));
        loop {
            if self.interval.is_exact() || other.interval.is_exact() {
                return self.compare(other);
            }
            if self.interval.hi <= other.interval.lo {
                return Ordering::Less;
            }
            if other.interval.hi <= self.interval.lo {
                return Ordering::Greater;
            }
            if let Some(chain) = &chain {
                let lo = std::cmp::min(&self.interval.lo, &other.interval.lo);
                let hi = std::cmp::max(&self.interval.hi, &other.interval.hi);
                if g.sign_at(lo) != 0 && g.sign_at(hi) != 0 && chain.count(lo, hi) == 1 {
                    return Ordering::Equal;
                }
            }
            self.refine();
            other.refine();
        }
    }

    fn compare_rational(&mut self, b: &Rat) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        if self.poly.sign_at(b) == 0 && &self.interval.lo <= b && b <= &self.interval.hi {
            return Ordering::Equal;
        }
        loop {
            if let Some(a) = self.as_rational() {
                return a.cmp(b);
            }
            if &self.interval.hi < b {
                return Ordering::Less;
            }
            if &self.interval.lo > b {
                return Ordering::Greater;
            }
            self.refine();
        }
    }

    /// A rational strictly inside the isolating interval, or the root itself.
    pub fn approx(&self) -> Rat {
        (&self.interval.lo + &self.interval.hi) / int(2)
    }
}

/// One piece of a sign chart: either an open interval (with a rational sample)
/// or a root point.
#[derive(Debug, Clone)]
pub enum PieceKind {
    Open { sample: Rat },
    Point(AlgebraicReal),
}

#[derive(Debug, Clone)]
pub struct Piece {
    pub kind: PieceKind,
    /// Sign of each input polynomial on the piece.
    pub signs: Vec<i8>,
}

/// Sign chart of a family of univariate polynomials over the real line or an
/// open interval `(a, b)`: an ordered list of alternating open intervals and
/// points on which every polynomial has constant sign.
#[derive(Debug, Clone)]
pub struct SignChart {
    pub pieces: Vec<Piece>,
}

impl SignChart {
    pub fn new(polys: &[UniPoly], domain: Option<(&Rat, &Rat)>) -> Result<SignChart> {
        if let Some((a, b)) = domain {
            if a >= b {
                return Err(Error::invalid("sign chart domain must be a nonempty open interval"));
            }
        }
        let mut factors: Vec<UniPoly> = Vec::new();
        for p in polys.iter().filter(|p| p.degree().unwrap_or(0) > 0) {
            let sp = p.squarefree();
            if !factors.contains(&sp) {
                factors.push(sp);
            }
        }
        let mut roots: Vec<AlgebraicReal> = Vec::new();
        for f in &factors {
            let found = if f.degree() == Some(1) {
                let r = -&f.coeffs()[0] / &f.coeffs()[1];
                let inside = match domain {
                    Some((a, b)) => a < &r && &r < b,
                    None => true,
                };
                if inside {
                    vec![RootInterval { lo: r.clone(), hi: r }]
                } else {
                    Vec::new()
                }
            } else {
                isolate_roots(f, domain)?
            };
            for iv in found {
                if let Some((a, b)) = domain {
                    if iv.is_exact() && (&iv.lo == a || &iv.lo == b) {
                        continue;
                    }
                }
                let mut r = if iv.is_exact() {
                    AlgebraicReal::rational(iv.lo)
                } else {
                    AlgebraicReal::new(f.clone(), iv)
                };
                let mut pos = roots.len();
                let mut dup = false;
                for (i, other) in roots.iter_mut().enumerate() {
                    match r.compare(other) {
                        std::cmp::Ordering::Less => {
                            pos = i;
                            break;
                        }
                        std::cmp::Ordering::Equal => {
                            dup = true;
                            break;
                        }
                        std::cmp::Ordering::Greater => {}
                    }
                }
                if !dup {
                    roots.insert(pos, r);
                }
            }
        }
        let signs_at = |x: &Rat| polys.iter().map(|p| p.sign_at(x)).collect::<Vec<_>>();
        let mut pieces = Vec::with_capacity(2 * roots.len() + 1);
        if roots.is_empty() {
            let sample = match domain {
                Some((a, b)) => (a + b) / int(2),
                None => Rat::zero(),
            };
            let signs = signs_at(&sample);
            pieces.push(Piece {
                kind: PieceKind::Open { sample },
                signs,
            });
            return Ok(SignChart { pieces });
        }
        let first_sample = match domain {
            None => &roots[0].interval.lo - int(1),
            Some((a, _)) => {
                let r = &mut roots[0];
                while !r.interval.is_exact() && &r.interval.lo <= a {
                    r.refine();
                }
                (a + &r.interval.lo) / int(2)
            }
        };
        let last_sample = match domain {
            None => &roots[roots.len() - 1].interval.hi + int(1),
            Some((_, b)) => {
                let r = roots.last_mut().unwrap();
                while !r.interval.is_exact() && &r.interval.hi >= b {
                    r.refine();
                }
                (b + &r.interval.hi) / int(2)
            }
        };
        let s = signs_at(&first_sample);
        pieces.push(Piece {
            kind: PieceKind::Open {
                sample: first_sample,
            },
            signs: s,
        });
        let n = roots.len();
        for i in 0..n {
            let mut r = roots[i].clone();
            let signs = polys.iter().map(|p| r.sign_of(p)).collect();
            pieces.push(Piece {
                kind: PieceKind::Point(r),
                signs,
            });
            let sample = if i + 1 < n {
                (&roots[i].interval.hi + &roots[i + 1].interval.lo) / int(2)
            } else {
                last_sample.clone()
            };
            let signs = signs_at(&sample);
            pieces.push(Piece {
                kind: PieceKind::Open { sample },
                signs,
            });
        }
        Ok(SignChart { pieces })
    }

    /// Number of maximal connected runs of pieces satisfying `pred`.
    pub fn count_components(&self, mut pred: impl FnMut(&[i8]) -> bool) -> usize {
        let mut count = 0;
        let mut inside = false;
        for piece in &self.pieces {
            let ok = pred(&piece.signs);
            if ok && !inside {
                count += 1;
            }
            inside = ok;
        }
        count
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realalg::rat::rat;

    fn sturm_count_all(p: &UniPoly, iv: &RootInterval) -> usize {
        if iv.is_exact() {
            return usize::from(p.eval(&iv.lo).is_zero());
        }
        SturmChain::new(&p.squarefree()).count(&iv.lo, &iv.hi)
    }

    #[test]
    fn sqrt_two_on_unit_range() {
        let p = UniPoly::from_ints(&[-2, 0, 1]);
        let roots = isolate_roots(&p, Some((&int(0), &int(2)))).unwrap();
        assert_eq!(roots.len(), 1);
        assert_eq!(sturm_count_all(&p, &roots[0]), 1);
        assert!(roots[0].lo < rat(1415, 1000) && roots[0].hi > rat(1414, 1000));
    }

    #[test]
    fn no_real_roots() {
        let p = UniPoly::from_ints(&[1, 0, 1]);
        assert!(isolate_roots(&p, None).unwrap().is_empty());
    }

    #[test]
    fn three_rational_roots() {
        let p = UniPoly::from_roots(&[int(0), int(1), int(2)]);
        let roots = isolate_roots(&p, Some((&int(-1), &int(3)))).unwrap();
        assert_eq!(roots.len(), 3);
        for w in roots.windows(2) {
            assert!(w[0].hi <= w[1].lo);
        }
        for iv in &roots {
            assert_eq!(sturm_count_all(&p, iv), 1);
        }
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert!(isolate_roots(&UniPoly::zero(), None).is_err());
    }

    #[test]
    fn endpoint_roots_are_exact() {
        let p = UniPoly::from_roots(&[int(0), int(3)]);
        let roots = isolate_roots(&p, Some((&int(0), &int(3)))).unwrap();
        assert_eq!(roots.len(), 2);
        assert!(roots.iter().all(RootInterval::is_exact));
    }

    #[test]
    fn algebraic_signs() {
        // alpha = sqrt(2)
        let f = UniPoly::from_ints(&[-2, 0, 1]);
        let iv = isolate_roots(&f, Some((&int(0), &int(2)))).unwrap().remove(0);
        let mut a = AlgebraicReal::new(f.clone(), iv);
        assert_eq!(a.sign_of(&f), 0);
        assert_eq!(a.sign_of(&UniPoly::from_ints(&[-1, 1])), 1);
        assert_eq!(a.sign_of(&UniPoly::from_ints(&[-3, 2])), -1); // 2x - 3 at 1.414
        assert_eq!(a.sign_of(&UniPoly::from_ints(&[-4, 0, 2])), 0);
    }

    #[test]
    fn sign_chart_cubic() {
        let p = UniPoly::from_roots(&[int(0), int(1), int(2)]);
        let chart = SignChart::new(std::slice::from_ref(&p), None).unwrap();
        assert_eq!(chart.pieces.len(), 7);
        assert_eq!(chart.count_components(|s| s[0] > 0), 2);
        assert_eq!(chart.count_components(|s| s[0] >= 0), 2);
        assert_eq!(chart.count_components(|s| s[0] == 0), 3);
    }

    #[test]
    fn sign_chart_on_bounded_domain() {
        let p = UniPoly::from_roots(&[int(0), int(5)]);
        let chart = SignChart::new(std::slice::from_ref(&p), Some((&int(0), &int(5)))).unwrap();
        assert_eq!(chart.pieces.len(), 1);
        assert_eq!(chart.count_components(|s| s[0] < 0), 1);
    }
}
