//! Exact scalar arithmetic: two-variable integer Laurent polynomials in
//! `q` and `A`, fractions of those, and a radical extension that adjoins
//! formal square roots of a fixed list of radicands.

mod poly;
mod radical;
mod ratfunc;

pub use poly::LaurentPoly;
pub use radical::{RadElem, RadicandBasis};
pub use ratfunc::RatFunc;

use thiserror::Error;

/// Errors raised by exact ring arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum RingError {
    /// No exact Laurent-polynomial quotient exists.
    #[error("NotDivisible: no exact Laurent quotient exists")]
    NotDivisible,
    /// Evaluation requested at `q = 0` or `A = 0`.
    #[error("ZeroBase: cannot evaluate at q = 0 or A = 0")]
    ZeroBase,
    /// The two radical elements live over different radicand bases.
    #[error("BasisMismatch: radical elements use different radicand bases")]
    BasisMismatch,
    /// A square-root component survived where a rational value was required.
    #[error("ResidualRadical: a radical component survives reduction")]
    ResidualRadical,
}
