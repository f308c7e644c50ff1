//! Extrema of second derivatives of explicit boundary curves.

use crate::error::{Error, Result};
use crate::realalg::{int, sign, PieceKind, Rat, SignChart, UniPoly};

/// Number of roots of `c'''` inside `(lo, hi)` at which it changes sign,
/// that is the local extrema of `c''` there.
pub fn volatility(c: &UniPoly, lo: &Rat, hi: &Rat) -> Result<usize> {
    if c.is_zero() {
        return Err(Error::invalid("volatility of the zero polynomial"));
    }
    if lo >= hi {
        return Err(Error::invalid("volatility needs a nonempty open interval"));
    }
    let c3 = c.derivative(3);
    if c3.is_zero() {
        return Ok(0);
    }
    let chart = SignChart::new(&[c3], Some((lo, hi)))?;
    let p = &chart.pieces;
    Ok((1..p.len().saturating_sub(1))
        .filter(|&i| matches!(p[i].kind, PieceKind::Point(_)) && p[i - 1].signs[0] * p[i + 1].signs[0] < 0)
        .count())
}

/// Local extrema of `c''` among `n + 1` equally spaced samples of
/// `[lo, hi]`, counted as sign changes of consecutive differences.
pub fn sampled_extrema(c: &UniPoly, lo: &Rat, hi: &Rat, n: usize) -> usize {
    let c2 = c.derivative(2);
    let step = (hi - lo) / int(n as i64);
    let values: Vec<Rat> = (0..=n).map(|j| c2.eval(&(lo + &step * int(j as i64)))).collect();
    let mut last = 0i8;
    let mut count = 0;
    for w in values.windows(2) {
        let s = sign(&(&w[1] - &w[0]));
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Doubles the sampling resolution from `start` until two successive counts
/// agree or `max` samples are reached.
pub fn brute_force_volatility(c: &UniPoly, lo: &Rat, hi: &Rat, start: usize, max: usize) -> usize {
    let mut n = start.max(2);
    let mut prev = sampled_extrema(c, lo, hi, n);
    while n * 2 <= max {
        n *= 2;
        let cur = sampled_extrema(c, lo, hi, n);
        if cur == prev {
            return cur;
        }
        prev = cur;
    }
    prev
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_cases() {
        let (lo, hi) = (int(-1), int(1));
        assert_eq!(volatility(&UniPoly::from_ints(&[0, 0, 0, 0, 1]), &lo, &hi).unwrap(), 1);
        assert_eq!(volatility(&UniPoly::from_ints(&[0, 0, 1]), &lo, &hi).unwrap(), 0);
        assert_eq!(volatility(&UniPoly::from_ints(&[0, 0, 0, 0, -1, 0, 1]), &lo, &hi).unwrap(), 3);
        assert_eq!(volatility(&UniPoly::from_ints(&[0, 0, 0, 0, 0, 1]), &lo, &hi).unwrap(), 0);
        assert!(volatility(&UniPoly::zero(), &lo, &hi).is_err());
    }

    #[test]
    fn sampling_agrees() {
        let (lo, hi) = (int(-1), int(1));
        let c = UniPoly::from_ints(&[0, 0, 0, 0, -1, 0, 1]);
        assert_eq!(brute_force_volatility(&c, &lo, &hi, 64, 4096), 3);
        let c = UniPoly::from_ints(&[0, 0, 0, 0, 1]);
        assert_eq!(brute_force_volatility(&c, &lo, &hi, 64, 4096), 1);
    }
}
