//! Two-variable integer Laurent polynomials in `q` and `A`.
//!
//! Terms are kept in a canonical map from exponent pairs to nonzero
//! arbitrary-precision coefficients, so structural equality coincides with
//! polynomial equality. The canonical text rendering sorts terms by
//! descending `A` exponent, then descending `q` exponent, and always prints
//! the coefficient magnitude, e.g. `-1*A^4*q^2 - 1*A^4*q^-2 + 1*A^2`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};

use super::RingError;

/// Map key is `(e_A, e_q)` so the natural map order matches the canonical
/// rendering order.
type Key = (i64, i64);

/// Integer Laurent polynomial in `q` and `A`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LaurentPoly {
    terms: BTreeMap<Key, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(c, 0, 0)
    }

    /// The single term `c * q^e_q * A^e_a`.
    pub fn monomial(c: i64, e_q: i64, e_a: i64) -> Self {
        let mut p = Self::zero();
        p.add_term((e_a, e_q), BigInt::from(c));
        p
    }

    /// Builds a polynomial from `(coefficient, e_q, e_a)` triples; repeated
    /// exponent pairs accumulate.
    pub fn from_terms(terms: &[(i64, i64, i64)]) -> Self {
        let mut p = Self::zero();
        for &(c, e_q, e_a) in terms {
            p.add_term((e_a, e_q), BigInt::from(c));
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&(0, 0))
                .map(|c| *c == BigInt::from(1))
                .unwrap_or(false)
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Iterates terms as `((e_a, e_q), coefficient)` in ascending key order.
    pub fn terms(&self) -> impl Iterator<Item = (Key, &BigInt)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    fn add_term(&mut self, key: Key, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(key).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// Shifts every exponent by `(d_q, d_a)`, i.e. multiplies by a monomial.
    pub fn shifted(&self, d_q: i64, d_a: i64) -> Self {
        let mut p = Self::zero();
        for ((ea, eq), c) in &self.terms {
            p.terms.insert((ea + d_a, eq + d_q), c.clone());
        }
        p
    }

    /// Substitution `q -> q^-1`, `A -> A^-1` (mirror image of the variables).
    pub fn mirror(&self) -> Self {
        let mut p = Self::zero();
        for ((ea, eq), c) in &self.terms {
            p.terms.insert((-ea, -eq), c.clone());
        }
        p
    }

    /// Substitution `q -> q^-1` only.
    pub fn mirror_q(&self) -> Self {
        let mut p = Self::zero();
        for ((ea, eq), c) in &self.terms {
            p.terms.insert((*ea, -eq), c.clone());
        }
        p
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Numeric value with exponents read as integer powers.
    pub fn eval(&self, q: Complex64, a: Complex64) -> Result<Complex64, RingError> {
        if q == Complex64::ZERO || a == Complex64::ZERO {
            return Err(RingError::ZeroBase);
        }
        let mut acc = Complex64::ZERO;
        for ((ea, eq), c) in &self.terms {
            let coeff = c.to_f64().expect("coefficient exceeds f64 range");
            acc += coeff * q.powi(*eq as i32) * a.powi(*ea as i32);
        }
        Ok(acc)
    }

    /// Exact quotient `self / divisor`, or `NotDivisible` when none exists.
    ///
    /// Works as long division in the `q` direction; each leading `q`-slice of
    /// the remainder must be exactly divisible, as a univariate Laurent
    /// polynomial in `A`, by the leading slice of the divisor. When the true
    /// quotient exists both checks succeed at every step, so there are no
    /// false negatives.
    pub fn div_exact(&self, divisor: &LaurentPoly) -> Result<LaurentPoly, RingError> {
        assert!(!divisor.is_zero(), "exact division by the zero polynomial");
        if self.is_zero() {
            return Ok(LaurentPoly::zero());
        }
        let b_max_q = divisor.max_eq();
        let b_min_q = divisor.min_eq();
        let b_top = divisor.q_slice(b_max_q);
        // Trailing q-degree of any exact quotient.
        let q_lo = self.min_eq() - b_min_q;

        let mut rem = self.clone();
        let mut quo = LaurentPoly::zero();
        while !rem.is_zero() {
            let r_top_q = rem.max_eq();
            let t_q = r_top_q - b_max_q;
            if t_q < q_lo {
                return Err(RingError::NotDivisible);
            }
            let r_slice = rem.q_slice(r_top_q);
            let c = div_exact_slices(&r_slice, &b_top)?;
            let term = LaurentPoly::from_a_slice(&c).shifted(t_q, 0);
            rem = &rem - &(&term * divisor);
            quo = &quo + &term;
        }
        Ok(quo)
    }

    fn max_eq(&self) -> i64 {
        self.terms.keys().map(|(_, eq)| *eq).max().expect("nonzero")
    }

    fn min_eq(&self) -> i64 {
        self.terms.keys().map(|(_, eq)| *eq).min().expect("nonzero")
    }

    /// Coefficient of `q^eq` as a univariate map `e_a -> coefficient`.
    fn q_slice(&self, eq: i64) -> BTreeMap<i64, BigInt> {
        self.terms
            .iter()
            .filter(|((_, e), _)| *e == eq)
            .map(|((ea, _), c)| (*ea, c.clone()))
            .collect()
    }

    fn from_a_slice(slice: &BTreeMap<i64, BigInt>) -> Self {
        let mut p = Self::zero();
        for (ea, c) in slice {
            p.terms.insert((*ea, 0), c.clone());
        }
        p
    }
}

/// Exact division of univariate Laurent polynomials in `A`, given as
/// `e_a -> coefficient` maps.
fn div_exact_slices(
    a: &BTreeMap<i64, BigInt>,
    b: &BTreeMap<i64, BigInt>,
) -> Result<BTreeMap<i64, BigInt>, RingError> {
    let (&b_top, b_lead) = b.iter().next_back().expect("nonzero divisor");
    let b_min = *b.keys().next().expect("nonzero divisor");
    let a_min = match a.keys().next() {
        Some(&m) => m,
        None => return Ok(BTreeMap::new()),
    };
    let lo = a_min - b_min;

    let mut rem = a.clone();
    let mut quo = BTreeMap::new();
    while let Some((&r_top, r_lead)) = rem.iter().next_back() {
        let t = r_top - b_top;
        if t < lo || !(r_lead % b_lead).is_zero() {
            return Err(RingError::NotDivisible);
        }
        let c = r_lead / b_lead;
        for (eb, cb) in b {
            let key = eb + t;
            let entry = rem.entry(key).or_insert_with(BigInt::zero);
            *entry -= &c * cb;
            if entry.is_zero() {
                rem.remove(&key);
            }
        }
        quo.insert(t, c);
    }
    Ok(quo)
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (key, c) in &rhs.terms {
            out.add_term(*key, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (key, c) in &rhs.terms {
            out.add_term(*key, -c.clone());
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (key, c) in &self.terms {
            out.terms.insert(*key, -c.clone());
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for ((ea1, eq1), c1) in &self.terms {
            for ((ea2, eq2), c2) in &rhs.terms {
                out.add_term((ea1 + ea2, eq1 + eq2), c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((ea, eq), c) in self.terms.iter().rev() {
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            write!(f, "{}", c.magnitude())?;
            if *ea != 0 {
                write!(f, "*A")?;
                if *ea != 1 {
                    write!(f, "^{ea}")?;
                }
            }
            if *eq != 0 {
                write!(f, "*q")?;
                if *eq != 1 {
                    write!(f, "^{eq}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_4;

    fn q_minus_qinv() -> LaurentPoly {
        LaurentPoly::from_terms(&[(1, 1, 0), (-1, -1, 0)])
    }

    fn q_plus_qinv() -> LaurentPoly {
        LaurentPoly::from_terms(&[(1, 1, 0), (1, -1, 0)])
    }

    fn a_minus_ainv() -> LaurentPoly {
        LaurentPoly::from_terms(&[(1, 0, 1), (-1, 0, -1)])
    }

    #[test]
    fn mul_difference_of_squares() {
        let got = &q_minus_qinv() * &q_plus_qinv();
        assert_eq!(got, LaurentPoly::from_terms(&[(1, 2, 0), (-1, -2, 0)]));
    }

    #[test]
    fn mul_square_expansion() {
        let got = &a_minus_ainv() * &a_minus_ainv();
        assert_eq!(
            got,
            LaurentPoly::from_terms(&[(1, 0, 2), (-2, 0, 0), (1, 0, -2)])
        );
    }

    #[test]
    fn mul_identity() {
        let p = LaurentPoly::from_terms(&[(3, 1, -2), (-7, 0, 4)]);
        assert_eq!(&LaurentPoly::one() * &p, p);
    }

    #[test]
    fn div_exact_factorization() {
        let num = LaurentPoly::from_terms(&[(1, 2, 0), (-1, -2, 0)]);
        assert_eq!(num.div_exact(&q_minus_qinv()).unwrap(), q_plus_qinv());
    }

    #[test]
    fn div_exact_perfect_square() {
        let num = LaurentPoly::from_terms(&[(1, 0, 2), (-2, 0, 0), (1, 0, -2)]);
        assert_eq!(num.div_exact(&a_minus_ainv()).unwrap(), a_minus_ainv());
    }

    #[test]
    fn div_exact_disjoint_variables() {
        assert_eq!(
            q_minus_qinv().div_exact(&a_minus_ainv()),
            Err(RingError::NotDivisible)
        );
    }

    #[test]
    fn eval_at_eighth_root() {
        let p = LaurentPoly::from_terms(&[(1, 2, 0), (-1, -2, 0)]);
        let q = Complex64::from_polar(1.0, FRAC_PI_4);
        let got = p.eval(q, Complex64::new(1.0, 0.0)).unwrap();
        assert!((got - Complex64::new(0.0, 2.0)).norm() < 1e-12);
    }

    #[test]
    fn eval_symmetry_vanishes() {
        let got = q_minus_qinv()
            .eval(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0))
            .unwrap();
        assert!(got.norm() < 1e-15);
    }

    #[test]
    fn eval_plain_variable() {
        let p = LaurentPoly::monomial(1, 0, 1);
        let got = p.eval(Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0)).unwrap();
        assert!((got - Complex64::new(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn eval_zero_base_rejected() {
        let p = LaurentPoly::one();
        assert_eq!(
            p.eval(Complex64::ZERO, Complex64::new(1.0, 0.0)),
            Err(RingError::ZeroBase)
        );
    }

    #[test]
    fn canonical_rendering() {
        let trefoil = LaurentPoly::from_terms(&[(1, 0, 2), (-1, 2, 4), (-1, -2, 4)]);
        assert_eq!(trefoil.to_string(), "-1*A^4*q^2 - 1*A^4*q^-2 + 1*A^2");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
        assert_eq!(LaurentPoly::monomial(-1, 0, 2).to_string(), "-1*A^2");
        assert_eq!(LaurentPoly::monomial(5, 0, 0).to_string(), "5");
        assert_eq!(
            LaurentPoly::from_terms(&[(2, 1, 1), (1, 0, 0)]).to_string(),
            "2*A*q + 1"
        );
    }

    fn small_poly() -> impl Strategy<Value = LaurentPoly> {
        proptest::collection::vec(((-3i64..=3), (-3i64..=3), (-5i64..=5)), 0..6).prop_map(|ts| {
            ts.into_iter().fold(LaurentPoly::zero(), |acc, (eq, ea, c)| {
                &acc + &LaurentPoly::monomial(c, eq, ea)
            })
        })
    }

    proptest! {
        #[test]
        fn ring_laws(a in small_poly(), b in small_poly(), c in small_poly()) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn div_exact_inverts_mul(a in small_poly(), b in small_poly()) {
            prop_assume!(!b.is_zero());
            let prod = &a * &b;
            let q = prod.div_exact(&b).unwrap();
            prop_assert_eq!(q, a);
        }

        #[test]
        fn eval_is_multiplicative(a in small_poly(), b in small_poly(),
                                  tq in 0.0f64..std::f64::consts::TAU,
                                  ta in 0.0f64..std::f64::consts::TAU) {
            let q = Complex64::from_polar(1.0, tq);
            let aa = Complex64::from_polar(1.0, ta);
            let lhs = (&a * &b).eval(q, aa).unwrap();
            let rhs = a.eval(q, aa).unwrap() * b.eval(q, aa).unwrap();
            prop_assert!((lhs - rhs).norm() < 1e-12);
        }
    }
}
