//! Fractions of Laurent polynomials with equality by cross-multiplication.
//!
//! No GCD canonicalization is performed; every consumer that needs a plain
//! polynomial goes through exact division instead.

use std::fmt;

use num_complex::Complex64;

use super::{LaurentPoly, RingError};

/// Ratio of two Laurent polynomials; the denominator is never zero.
#[derive(Clone, Debug)]
pub struct RatFunc {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RatFunc {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Self { num, den }
    }

    pub fn from_poly(num: LaurentPoly) -> Self {
        Self {
            num,
            den: LaurentPoly::one(),
        }
    }

    pub fn zero() -> Self {
        Self::from_poly(LaurentPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(LaurentPoly::one())
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, rhs: &RatFunc) -> RatFunc {
        // Structurally equal denominators are common here (matrix entries
        // share them); keeping them uncombined stops degree blow-up.
        if self.den == rhs.den {
            return RatFunc::new(&self.num + &rhs.num, self.den.clone());
        }
        RatFunc::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }

    pub fn sub(&self, rhs: &RatFunc) -> RatFunc {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc::new(-&self.num, self.den.clone())
    }

    pub fn mul(&self, rhs: &RatFunc) -> RatFunc {
        RatFunc::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }

    pub fn mul_poly(&self, rhs: &LaurentPoly) -> RatFunc {
        RatFunc::new(&self.num * rhs, self.den.clone())
    }

    /// Substitution `q -> q^-1`, `A -> A^-1` applied to both parts.
    pub fn mirror(&self) -> RatFunc {
        RatFunc::new(self.num.mirror(), self.den.mirror())
    }

    /// Exact polynomial form, when the denominator divides the numerator.
    pub fn into_polynomial(&self) -> Result<LaurentPoly, RingError> {
        self.num.div_exact(&self.den)
    }

    pub fn eval(&self, q: Complex64, a: Complex64) -> Result<Complex64, RingError> {
        Ok(self.num.eval(q, a)? / self.den.eval(q, a)?)
    }
}

/// `a/b = c/d` iff `a*d = c*b`; this is a genuine equivalence because
/// denominators are nonzero and the coefficient ring has no zero divisors.
impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for RatFunc {}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}
