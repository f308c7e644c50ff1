//! Exact arithmetic substrate: rationals, univariate and sparse multivariate
//! polynomials, Sturm-sequence root isolation and sign charts.

pub mod cmp;
pub mod multipoly;
pub mod rat;
pub mod roots;
pub mod unipoly;

pub use cmp::Cmp;
pub use multipoly::{Monomial, MultiPoly};
pub use rat::{bitsize, fmt_rat, int, parse_rat, rat, Rat};
pub use roots::{isolate_roots, AlgebraicReal, Piece, PieceKind, RootInterval, SignChart, SturmChain};
pub use unipoly::{sign, UniPoly};

/// Exact sign of a univariate or multivariate polynomial at a rational point.
pub fn sign_at(p: &MultiPoly, point: &[Rat]) -> i8 {
    sign(&p.eval(&|v| point.get(v as usize).cloned().unwrap_or_else(|| int(0))))
}
