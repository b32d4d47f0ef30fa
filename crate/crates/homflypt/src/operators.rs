//! The 2x2 crossing and channel-change operators of the two-strand calculus,
//! built either exactly over the radical ring or numerically at the unitary
//! point `q = exp(i*phi)`, `A = exp(i*N*phi)` with `phi = 4*pi/(k+N)`.
//!
//! Matrices carry the labels of the intermediate-channel bases they act
//! between: `{empty, adj}` for closure-side operators and `{[2], [1,1]}`
//! for braid-side ones. Products check label compatibility.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use thiserror::Error;

use crate::ring::{LaurentPoly, RadElem, RadicandBasis, RatFunc, RingError};

/// Intermediate-channel labels indexing operator rows and columns.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisLabel {
    /// Trivial channel, written `empty`.
    Empty,
    /// Adjoint channel.
    Adj,
    /// Symmetric square `[2]`.
    Sym,
    /// Antisymmetric square `[1,1]`.
    AntiSym,
}

impl std::fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            BasisLabel::Empty => "empty",
            BasisLabel::Adj => "adj",
            BasisLabel::Sym => "[2]",
            BasisLabel::AntiSym => "[1,1]",
        };
        write!(f, "{s}")
    }
}

/// Ordered pair of labels for the two channels of a 2x2 operator.
pub type Basis = [BasisLabel; 2];

/// `{empty, adj}`: the basis in which closed words are evaluated.
pub const CLOSURE_BASIS: Basis = [BasisLabel::Empty, BasisLabel::Adj];
/// `{[2], [1,1]}`: the basis diagonalizing the braid-side crossing.
pub const TENSOR_BASIS: Basis = [BasisLabel::Sym, BasisLabel::AntiSym];

/// A product was requested between matrices whose inner bases disagree, or a
/// power of a matrix whose row and column bases differ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("BasisMismatch: [{}, {}] is not compatible with [{}, {}]",
    .left[0], .left[1], .right[0], .right[1])]
pub struct BasisMismatch {
    pub left: Basis,
    pub right: Basis,
}

/// Invalid coupling parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ParamError {
    /// Requires `N >= 2` and `k + N >= 4(N+1)` so every operator entry is a
    /// square root of a nonnegative ratio.
    #[error("DomainTooSmall: need N >= 2 and k + N >= 4(N+1), got N = {n}, k = {k}")]
    DomainTooSmall { n: i64, k: i64 },
    /// `q - q^-1` or `A - A^-1` vanishes at this point.
    #[error("DegeneratePhase: q - q^-1 or A - A^-1 vanishes for N = {n}, k = {k}")]
    DegeneratePhase { n: i64, k: i64 },
}

/// Evaluation point of the two-variable invariants: rank `N`, level `k`,
/// phase `phi = 4*pi/(k+N)`, `q = e^{i phi}` and `A = e^{i N phi}`.
#[derive(Clone, Copy, Debug)]
pub struct CouplingParams {
    n: i64,
    k: i64,
    phi: f64,
    q: Complex64,
    a: Complex64,
}

impl CouplingParams {
    pub fn new(n: i64, k: i64) -> Result<Self, ParamError> {
        if n < 2 || k + n < 4 * (n + 1) {
            return Err(ParamError::DomainTooSmall { n, k });
        }
        let phi = 4.0 * PI / ((k + n) as f64);
        // Unreachable inside the domain above, but kept as a guard.
        if phi.sin() == 0.0 || (n as f64 * phi).sin() == 0.0 {
            return Err(ParamError::DegeneratePhase { n, k });
        }
        Ok(Self {
            n,
            k,
            phi,
            q: Complex64::from_polar(1.0, phi),
            a: Complex64::from_polar(1.0, n as f64 * phi),
        })
    }

    pub fn rank(&self) -> i64 {
        self.n
    }

    pub fn level(&self) -> i64 {
        self.k
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn q(&self) -> Complex64 {
        self.q
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }
}

/// Scalar kinds a 2x2 operator matrix can be built over.
pub trait Scalar: Clone + PartialEq {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn s_add(&self, rhs: &Self) -> Self;
    fn s_mul(&self, rhs: &Self) -> Self;
}

impl Scalar for Complex64 {
    fn zero_like(&self) -> Self {
        Complex64::ZERO
    }
    fn one_like(&self) -> Self {
        Complex64::ONE
    }
    fn s_add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn s_mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
}

impl Scalar for RadElem {
    fn zero_like(&self) -> Self {
        RadElem::zero(self.basis())
    }
    fn one_like(&self) -> Self {
        RadElem::one(self.basis())
    }
    fn s_add(&self, rhs: &Self) -> Self {
        self.add_unchecked(rhs)
    }
    fn s_mul(&self, rhs: &Self) -> Self {
        self.mul_unchecked(rhs)
    }
}

/// 2x2 matrix over an exact or numeric scalar, with labelled row and column
/// bases that propagate through products.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat2<K> {
    entries: [[K; 2]; 2],
    row_basis: Basis,
    col_basis: Basis,
}

impl<K: Scalar> Mat2<K> {
    pub fn new(entries: [[K; 2]; 2], row_basis: Basis, col_basis: Basis) -> Self {
        Self {
            entries,
            row_basis,
            col_basis,
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> &K {
        &self.entries[i][j]
    }

    pub fn row_basis(&self) -> Basis {
        self.row_basis
    }

    pub fn col_basis(&self) -> Basis {
        self.col_basis
    }

    pub fn is_square(&self) -> bool {
        self.row_basis == self.col_basis
    }

    pub fn identity(basis: Basis, donor: &K) -> Self {
        let one = donor.one_like();
        let zero = donor.zero_like();
        Self::new(
            [[one.clone(), zero.clone()], [zero, one]],
            basis,
            basis,
        )
    }

    /// Matrix product; the column basis of `self` must equal the row basis
    /// of `rhs`.
    pub fn mul(&self, rhs: &Self) -> Result<Self, BasisMismatch> {
        if self.col_basis != rhs.row_basis {
            return Err(BasisMismatch {
                left: self.col_basis,
                right: rhs.row_basis,
            });
        }
        let e = |i: usize, j: usize| -> K {
            self.entries[i][0]
                .s_mul(&rhs.entries[0][j])
                .s_add(&self.entries[i][1].s_mul(&rhs.entries[1][j]))
        };
        Ok(Self::new(
            [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]],
            self.row_basis,
            rhs.col_basis,
        ))
    }

    /// `self^n` by exponentiation by squaring; `n = 0` yields the identity.
    pub fn pow(&self, n: u32) -> Result<Self, BasisMismatch> {
        if !self.is_square() {
            return Err(BasisMismatch {
                left: self.row_basis,
                right: self.col_basis,
            });
        }
        let mut acc = Self::identity(self.row_basis, &self.entries[0][0]);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }
}

impl Mat2<Complex64> {
    /// Conjugate transpose; row and column bases swap.
    pub fn dagger(&self) -> Self {
        let c = |i: usize, j: usize| self.entries[j][i].conj();
        Self::new(
            [[c(0, 0), c(0, 1)], [c(1, 0), c(1, 1)]],
            self.col_basis,
            self.row_basis,
        )
    }

    /// `max_ij |(M M^dagger - I)_ij|`.
    pub fn unitarity_deviation(&self) -> f64 {
        let prod = self.mul(&self.dagger()).expect("bases match by construction");
        let mut dev: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { Complex64::ONE } else { Complex64::ZERO };
                dev = dev.max((prod.entries[i][j] - expect).norm());
            }
        }
        dev
    }
}

impl Mat2<RadElem> {
    /// Numeric instantiation at the unitary point of `params`.
    pub fn eval(&self, params: &CouplingParams) -> Result<Mat2<Complex64>, RingError> {
        let e = |i: usize, j: usize| self.entries[i][j].eval(params.q(), params.a());
        Ok(Mat2::new(
            [[e(0, 0)?, e(0, 1)?], [e(1, 0)?, e(1, 1)?]],
            self.row_basis,
            self.col_basis,
        ))
    }
}

fn sine_ratio_sqrt(num: f64, den: f64) -> f64 {
    let ratio = num / den;
    debug_assert!(ratio > -1e-9, "radicand ratio must be nonnegative");
    ratio.max(0.0).sqrt()
}

/// `sin(pi * num / den)` with exact zeros at integer multiples of `pi`,
/// so boundary levels (`k + N = 4(N+1)`) zero their radicand exactly.
fn sin_pi_ratio(num: i64, den: i64) -> f64 {
    debug_assert!(den > 0);
    let r = num.rem_euclid(2 * den);
    if r % den == 0 {
        return 0.0;
    }
    (PI * r as f64 / den as f64).sin()
}

/// The sines of `phi`, `N phi`, `(N-1) phi`, `(N+1) phi` at
/// `phi = 4 pi / (k + N)`.
fn phase_sines(p: &CouplingParams) -> (f64, f64, f64, f64) {
    let d = p.level() + p.rank();
    (
        sin_pi_ratio(4, d),
        sin_pi_ratio(4 * p.rank(), d),
        sin_pi_ratio(4 * (p.rank() - 1), d),
        sin_pi_ratio(4 * (p.rank() + 1), d),
    )
}

/// Crossing-to-closure change of basis `S`; real symmetric with
/// `S11 = sqrt(sin((N-1)phi) / (2 cos(phi) sin(N phi)))`,
/// `S12 = sqrt(sin((N+1)phi) / (2 cos(phi) sin(N phi)))`, `S22 = -S11`.
pub fn s_numeric(p: &CouplingParams) -> Mat2<Complex64> {
    let (_, sin_n, sin_minus, sin_plus) = phase_sines(p);
    let den = 2.0 * p.phi().cos() * sin_n;
    let s11 = sine_ratio_sqrt(sin_minus, den);
    let s12 = sine_ratio_sqrt(sin_plus, den);
    let re = |x: f64| Complex64::new(x, 0.0);
    Mat2::new(
        [[re(s11), re(s12)], [re(s12), re(-s11)]],
        CLOSURE_BASIS,
        TENSOR_BASIS,
    )
}

/// `S` is real symmetric at the unitary point, so its adjoint has the same
/// entries with the bases swapped.
pub fn s_dagger_numeric(p: &CouplingParams) -> Mat2<Complex64> {
    s_numeric(p).dagger()
}

/// Braid-side crossing `T = diag(q/A, -1/(qA))`.
pub fn t_numeric(p: &CouplingParams) -> Mat2<Complex64> {
    let phi = p.phi();
    let n = p.rank() as f64;
    let t11 = Complex64::from_polar(1.0, (1.0 - n) * phi);
    let t22 = -Complex64::from_polar(1.0, -(1.0 + n) * phi);
    let z = Complex64::ZERO;
    Mat2::new([[t11, z], [z, t22]], TENSOR_BASIS, TENSOR_BASIS)
}

pub fn t_dagger_numeric(p: &CouplingParams) -> Mat2<Complex64> {
    t_numeric(p).dagger()
}

/// Closure-side channel change `Sbar`; real symmetric with
/// `c = sin(phi)/sin(N phi)` on the diagonal and
/// `s = sqrt(sin((N+1)phi) sin((N-1)phi)) / sin(N phi)` off it.
pub fn sbar_numeric(p: &CouplingParams) -> Mat2<Complex64> {
    let (sin_phi, sin_n, sin_minus, sin_plus) = phase_sines(p);
    let c = sin_phi / sin_n;
    let s = sine_ratio_sqrt(sin_plus * sin_minus, sin_n * sin_n);
    let re = |x: f64| Complex64::new(x, 0.0);
    Mat2::new(
        [[re(c), re(s)], [re(s), re(-c)]],
        CLOSURE_BASIS,
        CLOSURE_BASIS,
    )
}

/// Closure-side crossing `Tbar = diag(1, -A)`.
pub fn tbar_numeric(p: &CouplingParams) -> Mat2<Complex64> {
    let z = Complex64::ZERO;
    Mat2::new(
        [[Complex64::ONE, z], [z, -p.a()]],
        CLOSURE_BASIS,
        CLOSURE_BASIS,
    )
}

pub fn tbar_dagger_numeric(p: &CouplingParams) -> Mat2<Complex64> {
    tbar_numeric(p).dagger()
}

/// Non-diagonal crossing in the closure basis:
/// `[[-A^2 c, A s], [A s, c]]` with `c = (q - q^-1)/(A - A^-1)` and
/// `s = sqrt((Aq - 1/(Aq))(A/q - q/A)) / (A - A^-1)`, both real at the
/// unitary point.
pub fn tnd_numeric(p: &CouplingParams) -> Mat2<Complex64> {
    let (sin_phi, sin_n, sin_minus, sin_plus) = phase_sines(p);
    let c = sin_phi / sin_n;
    let s = sine_ratio_sqrt(sin_plus * sin_minus, sin_n * sin_n);
    let a = p.a();
    let re = |x: f64| Complex64::new(x, 0.0);
    Mat2::new(
        [[-a * a * c, a * s], [a * s, re(c)]],
        CLOSURE_BASIS,
        CLOSURE_BASIS,
    )
}

pub fn tnd_dagger_numeric(p: &CouplingParams) -> Mat2<Complex64> {
    tnd_numeric(p).dagger()
}

fn q_minus_qinv() -> LaurentPoly {
    LaurentPoly::from_terms(&[(1, 1, 0), (-1, -1, 0)])
}

fn a_minus_ainv() -> LaurentPoly {
    LaurentPoly::from_terms(&[(1, 0, 1), (-1, 0, -1)])
}

// Bit masks into the standard radicand basis.
const D1: u8 = 0b0001;
const D2: u8 = 0b0010;
const D3: u8 = 0b0100;
const D4: u8 = 0b1000;

/// Exact `S`: prefactor `1/sqrt(D3 D4)` times `[[sqrt(D2), sqrt(D1)],
/// [sqrt(D1), -sqrt(D2)]]`, carried as `sqrt(D_i D3 D4) / (D3 D4)`.
pub fn s_exact(basis: &Arc<RadicandBasis>) -> Mat2<RadElem> {
    let d3d4 = basis.radicand(2) * basis.radicand(3);
    let coeff = RatFunc::new(LaurentPoly::one(), d3d4);
    let e11 = RadElem::with_component(basis, D2 | D3 | D4, coeff.clone());
    let e12 = RadElem::with_component(basis, D1 | D3 | D4, coeff);
    Mat2::new(
        [[e11.clone(), e12.clone()], [e12, e11.neg()]],
        CLOSURE_BASIS,
        TENSOR_BASIS,
    )
}

/// Exact adjoint of `S`: same entries, bases swapped.
pub fn s_dagger_exact(basis: &Arc<RadicandBasis>) -> Mat2<RadElem> {
    let s = s_exact(basis);
    Mat2::new(
        [
            [s.entry(0, 0).clone(), s.entry(1, 0).clone()],
            [s.entry(0, 1).clone(), s.entry(1, 1).clone()],
        ],
        TENSOR_BASIS,
        CLOSURE_BASIS,
    )
}

/// Exact `T = diag(q A^-1, -q^-1 A^-1)`.
pub fn t_exact(basis: &Arc<RadicandBasis>) -> Mat2<RadElem> {
    let t11 = RadElem::from_poly(basis, LaurentPoly::monomial(1, 1, -1));
    let t22 = RadElem::from_poly(basis, LaurentPoly::monomial(-1, -1, -1));
    let z = RadElem::zero(basis);
    Mat2::new([[t11, z.clone()], [z, t22]], TENSOR_BASIS, TENSOR_BASIS)
}

/// Exact `T^dagger = diag(q^-1 A, -q A)`.
pub fn t_dagger_exact(basis: &Arc<RadicandBasis>) -> Mat2<RadElem> {
    let t11 = RadElem::from_poly(basis, LaurentPoly::monomial(1, -1, 1));
    let t22 = RadElem::from_poly(basis, LaurentPoly::monomial(-1, 1, 1));
    let z = RadElem::zero(basis);
    Mat2::new([[t11, z.clone()], [z, t22]], TENSOR_BASIS, TENSOR_BASIS)
}

/// Exact `Sbar = [[c, s], [s, -c]]` with `c = (q-q^-1)/(A-A^-1)` and
/// `s = sqrt(D1 D2)/(A-A^-1)`; self-adjoint.
pub fn sbar_exact(basis: &Arc<RadicandBasis>) -> Mat2<RadElem> {
    let c = RadElem::from_ratfunc(basis, RatFunc::new(q_minus_qinv(), a_minus_ainv()));
    let s = RadElem::with_component(
        basis,
        D1 | D2,
        RatFunc::new(LaurentPoly::one(), a_minus_ainv()),
    );
    Mat2::new(
        [[c.clone(), s.clone()], [s, c.neg()]],
        CLOSURE_BASIS,
        CLOSURE_BASIS,
    )
}

/// Exact `Tbar = diag(1, -A)`.
pub fn tbar_exact(basis: &Arc<RadicandBasis>) -> Mat2<RadElem> {
    let z = RadElem::zero(basis);
    Mat2::new(
        [
            [RadElem::one(basis), z.clone()],
            [z, RadElem::from_poly(basis, LaurentPoly::monomial(-1, 0, 1))],
        ],
        CLOSURE_BASIS,
        CLOSURE_BASIS,
    )
}

/// Exact `Tbar^dagger = diag(1, -A^-1)`.
pub fn tbar_dagger_exact(basis: &Arc<RadicandBasis>) -> Mat2<RadElem> {
    let z = RadElem::zero(basis);
    Mat2::new(
        [
            [RadElem::one(basis), z.clone()],
            [z, RadElem::from_poly(basis, LaurentPoly::monomial(-1, 0, -1))],
        ],
        CLOSURE_BASIS,
        CLOSURE_BASIS,
    )
}

/// Exact non-diagonal crossing
/// `[[-A^2 (q-q^-1)/(A-A^-1), A sqrt(D1 D2)/(A-A^-1)], [A sqrt(D1 D2)/(A-A^-1), (q-q^-1)/(A-A^-1)]]`.
pub fn tnd_exact(basis: &Arc<RadicandBasis>) -> Mat2<RadElem> {
    let c = RatFunc::new(q_minus_qinv(), a_minus_ainv());
    let t11 = RadElem::from_ratfunc(
        basis,
        c.mul_poly(&LaurentPoly::monomial(-1, 0, 2)),
    );
    let t22 = RadElem::from_ratfunc(basis, c);
    let s = RadElem::with_component(
        basis,
        D1 | D2,
        RatFunc::new(LaurentPoly::monomial(1, 0, 1), a_minus_ainv()),
    );
    Mat2::new(
        [[t11, s.clone()], [s, t22]],
        CLOSURE_BASIS,
        CLOSURE_BASIS,
    )
}

/// Exact adjoint of the non-diagonal crossing; the entries are those of
/// `tnd_exact` under `A -> A^-1` on the monomial prefactors.
pub fn tnd_dagger_exact(basis: &Arc<RadicandBasis>) -> Mat2<RadElem> {
    let c = RatFunc::new(q_minus_qinv(), a_minus_ainv());
    let t11 = RadElem::from_ratfunc(
        basis,
        c.mul_poly(&LaurentPoly::monomial(-1, 0, -2)),
    );
    let t22 = RadElem::from_ratfunc(basis, c);
    let s = RadElem::with_component(
        basis,
        D1 | D2,
        RatFunc::new(LaurentPoly::monomial(1, 0, -1), a_minus_ainv()),
    );
    Mat2::new(
        [[t11, s.clone()], [s, t22]],
        CLOSURE_BASIS,
        CLOSURE_BASIS,
    )
}
