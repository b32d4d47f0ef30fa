//! Radical extension of the fraction field: elements are sums of rational
//! coefficients times square-root products `sqrt(D_i1) * ... * sqrt(D_im)`
//! over a fixed, ordered basis of radicands.
//!
//! The only rewrite rule is `sqrt(D_i) * sqrt(D_i) = D_i`, so component
//! masks combine by XOR and every colliding bit contributes a factor `D_i`
//! to the rational coefficient.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;

use super::{LaurentPoly, RatFunc, RingError};

/// Ordered list of pairwise-distinct radicands whose square roots are
/// adjoined to the fraction field.
#[derive(Debug, PartialEq, Eq)]
pub struct RadicandBasis {
    radicands: Vec<LaurentPoly>,
}

impl RadicandBasis {
    pub fn new(radicands: Vec<LaurentPoly>) -> Self {
        assert!(radicands.len() <= 8, "at most 8 radicands supported");
        for (i, a) in radicands.iter().enumerate() {
            assert!(!a.is_zero(), "radicands must be nonzero");
            for b in radicands.iter().skip(i + 1) {
                assert!(a != b, "radicands must be pairwise distinct");
            }
        }
        Self { radicands }
    }

    /// The basis used by the crossing operators:
    /// `D1 = Aq - 1/(Aq)`, `D2 = A/q - q/A`, `D3 = q + q^-1`, `D4 = A - A^-1`.
    pub fn standard() -> Arc<RadicandBasis> {
        static STANDARD: OnceLock<Arc<RadicandBasis>> = OnceLock::new();
        STANDARD
            .get_or_init(|| {
                Arc::new(RadicandBasis::new(vec![
                    LaurentPoly::from_terms(&[(1, 1, 1), (-1, -1, -1)]),
                    LaurentPoly::from_terms(&[(1, -1, 1), (-1, 1, -1)]),
                    LaurentPoly::from_terms(&[(1, 1, 0), (1, -1, 0)]),
                    LaurentPoly::from_terms(&[(1, 0, 1), (-1, 0, -1)]),
                ]))
            })
            .clone()
    }

    pub fn len(&self) -> usize {
        self.radicands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radicands.is_empty()
    }

    pub fn radicand(&self, i: usize) -> &LaurentPoly {
        &self.radicands[i]
    }
}

/// Element of the radical extension: a map from bit masks (bit `i` marks a
/// `sqrt(D_i)` factor) to nonzero rational coefficients.
#[derive(Clone, Debug)]
pub struct RadElem {
    basis: Arc<RadicandBasis>,
    comps: BTreeMap<u8, RatFunc>,
}

impl RadElem {
    pub fn zero(basis: &Arc<RadicandBasis>) -> Self {
        Self {
            basis: basis.clone(),
            comps: BTreeMap::new(),
        }
    }

    pub fn one(basis: &Arc<RadicandBasis>) -> Self {
        Self::from_ratfunc(basis, RatFunc::one())
    }

    pub fn from_ratfunc(basis: &Arc<RadicandBasis>, rf: RatFunc) -> Self {
        Self::with_component(basis, 0, rf)
    }

    pub fn from_poly(basis: &Arc<RadicandBasis>, p: LaurentPoly) -> Self {
        Self::from_ratfunc(basis, RatFunc::from_poly(p))
    }

    /// Single component `rf * prod_{i in mask} sqrt(D_i)`.
    pub fn with_component(basis: &Arc<RadicandBasis>, mask: u8, rf: RatFunc) -> Self {
        assert!(
            (mask as u32) < (1u32 << basis.len()),
            "mask outside radicand basis"
        );
        let mut comps = BTreeMap::new();
        if !rf.is_zero() {
            comps.insert(mask, rf);
        }
        Self {
            basis: basis.clone(),
            comps,
        }
    }

    pub fn sqrt_radicand(basis: &Arc<RadicandBasis>, i: usize) -> Self {
        Self::with_component(basis, 1 << i, RatFunc::one())
    }

    pub fn basis(&self) -> &Arc<RadicandBasis> {
        &self.basis
    }

    /// Coefficient at `mask`, zero when absent.
    pub fn component(&self, mask: u8) -> RatFunc {
        self.comps.get(&mask).cloned().unwrap_or_else(RatFunc::zero)
    }

    pub fn mask0(&self) -> RatFunc {
        self.component(0)
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// True when no square-root component is present.
    pub fn is_radical_free(&self) -> bool {
        self.comps.keys().all(|&m| m == 0)
    }

    fn same_basis(&self, other: &RadElem) -> bool {
        Arc::ptr_eq(&self.basis, &other.basis) || self.basis == other.basis
    }

    fn check_basis(&self, other: &RadElem) -> Result<(), RingError> {
        if self.same_basis(other) {
            Ok(())
        } else {
            Err(RingError::BasisMismatch)
        }
    }

    fn insert(&mut self, mask: u8, rf: RatFunc) {
        if rf.is_zero() {
            return;
        }
        match self.comps.remove(&mask) {
            None => {
                self.comps.insert(mask, rf);
            }
            Some(old) => {
                let sum = old.add(&rf);
                if !sum.is_zero() {
                    self.comps.insert(mask, sum);
                }
            }
        }
    }

    pub fn add(&self, other: &RadElem) -> Result<RadElem, RingError> {
        self.check_basis(other)?;
        Ok(self.add_unchecked(other))
    }

    pub(crate) fn add_unchecked(&self, other: &RadElem) -> RadElem {
        debug_assert!(self.same_basis(other));
        let mut out = self.clone();
        for (mask, rf) in &other.comps {
            out.insert(*mask, rf.clone());
        }
        out
    }

    pub fn neg(&self) -> RadElem {
        let mut out = Self::zero(&self.basis);
        for (mask, rf) in &self.comps {
            out.comps.insert(*mask, rf.neg());
        }
        out
    }

    pub fn sub(&self, other: &RadElem) -> Result<RadElem, RingError> {
        self.add(&other.neg())
    }

    /// Product in the radical extension: masks XOR, and every colliding bit
    /// `i` multiplies the coefficient by the radicand `D_i`.
    pub fn mul(&self, other: &RadElem) -> Result<RadElem, RingError> {
        self.check_basis(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &RadElem) -> RadElem {
        debug_assert!(self.same_basis(other));
        let mut out = Self::zero(&self.basis);
        for (m1, c1) in &self.comps {
            for (m2, c2) in &other.comps {
                let mut rf = c1.mul(c2);
                let collide = m1 & m2;
                for i in 0..self.basis.len() {
                    if collide & (1 << i) != 0 {
                        rf = rf.mul_poly(self.basis.radicand(i));
                    }
                }
                out.insert(m1 ^ m2, rf);
            }
        }
        out
    }

    /// Reduces a radical-free element to an exact Laurent polynomial after
    /// dividing by `expected_den`. Surviving square-root components are an
    /// error, as is a non-exact quotient.
    pub fn reduce(&self, expected_den: &LaurentPoly) -> Result<LaurentPoly, RingError> {
        assert!(!expected_den.is_zero(), "expected denominator must be nonzero");
        if !self.is_radical_free() {
            return Err(RingError::ResidualRadical);
        }
        let rf = self.mask0();
        rf.num().div_exact(&(rf.den() * expected_den))
    }

    /// Numeric value with principal-branch square roots of the radicands.
    pub fn eval(&self, q: Complex64, a: Complex64) -> Result<Complex64, RingError> {
        let mut acc = Complex64::ZERO;
        for (mask, rf) in &self.comps {
            let mut v = rf.eval(q, a)?;
            for i in 0..self.basis.len() {
                if mask & (1 << i) != 0 {
                    v *= self.basis.radicand(i).eval(q, a)?.sqrt();
                }
            }
            acc += v;
        }
        Ok(acc)
    }
}

/// Componentwise equality of coefficients (cross-multiplied); elements over
/// different bases are never equal.
impl PartialEq for RadElem {
    fn eq(&self, other: &Self) -> bool {
        if !self.same_basis(other) {
            return false;
        }
        let masks: std::collections::BTreeSet<u8> = self
            .comps
            .keys()
            .chain(other.comps.keys())
            .copied()
            .collect();
        masks
            .into_iter()
            .all(|m| self.component(m) == other.component(m))
    }
}

impl Eq for RadElem {}
