//! Scalar rings.
//!
//! Three coefficient rings are supported:
//!
//! * exact rationals ([`Rational`]),
//! * exact Laurent polynomials in a formal variable `s` with rational
//!   coefficients ([`Laurent`]); the quantum parameter is `q = s^2`, so
//!   half-integer powers of `q` stay inside the ring,
//! * double precision complex numbers ([`Complex64`]), compared with an
//!   absolute tolerance.
//!
//! Numerical kernels are generic over [`Ring`]. The dynamically typed
//! [`Scalar`] is used at the file and command-line boundary, where the mode is
//! only known at run time.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num::bigint::BigInt;
use num::{BigRational, One, Signed, ToPrimitive, Zero};
pub use num_complex::Complex64;
use serde_json::Value;
use thiserror::Error;

pub type Rational = BigRational;

/// Default absolute tolerance for complex comparisons.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("scalar mode mismatch: {0} vs {1}")]
    ModeMismatch(ScalarMode, ScalarMode),
    #[error("scalar not a unit")]
    NotUnit,
    #[error("no in-ring square root")]
    NoSquareRoot,
    #[error("bad {mode} literal: {text}")]
    BadLiteral { mode: ScalarMode, text: String },
    #[error("linear solve is not available in {0} mode")]
    SolveUnsupported(ScalarMode),
    #[error("singular linear system")]
    Singular,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScalarMode {
    ExactRational,
    ExactLaurent,
    ComplexFloat,
}

impl ScalarMode {
    pub fn is_exact(self) -> bool {
        self != ScalarMode::ComplexFloat
    }

    /// Name used in data files.
    pub fn file_name(self) -> &'static str {
        match self {
            ScalarMode::ExactRational => "rational",
            ScalarMode::ExactLaurent => "laurent",
            ScalarMode::ComplexFloat => "complex",
        }
    }
}

impl fmt::Display for ScalarMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.file_name())
    }
}

impl FromStr for ScalarMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rational" | "exact-rational" => Ok(ScalarMode::ExactRational),
            "laurent" | "exact-laurent" => Ok(ScalarMode::ExactLaurent),
            "complex" | "complex-float" => Ok(ScalarMode::ComplexFloat),
            other => Err(format!("unknown scalar mode '{other}'")),
        }
    }
}

/// Commutative ring with the extra hooks the algebra code needs.
pub trait Ring:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
{
    const MODE: ScalarMode;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_i64(n: i64) -> Self;
    fn from_rational(q: &Rational) -> Self;

    /// Multiplicative inverse inside the ring. `tol` only matters for
    /// floating point values.
    fn try_inverse(&self, tol: f64) -> Option<Self>;

    /// Square root of a unit: exact modes require a perfect-square monomial,
    /// complex mode uses the principal branch.
    fn sqrt_unit(&self) -> Option<Self>;

    /// Size used for residual norms (max |coefficient| for exact values).
    fn magnitude(&self) -> f64;

    fn to_complex(&self) -> Option<Complex64>;

    fn to_scalar(&self) -> Scalar;
    fn from_scalar(s: &Scalar) -> Result<Self, ScalarError>;

    /// Solve the dense `n x n` system `a x = b` (row-major `a`).
    fn solve(_n: usize, _a: &[Self], _b: &[Self]) -> Result<Vec<Self>, ScalarError> {
        Err(ScalarError::SolveUnsupported(Self::MODE))
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    /// `self / other` when the quotient lies in the ring.
    fn try_divide(&self, other: &Self, tol: f64) -> Option<Self> {
        Some(self.clone() * other.try_inverse(tol)?)
    }
}

// ---------------------------------------------------------------------------
// rationals

fn perfect_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    let n = perfect_sqrt(q.numer())?;
    let d = perfect_sqrt(q.denom())?;
    Some(Rational::new(n, d))
}

fn rational_magnitude(q: &Rational) -> f64 {
    q.abs().to_f64().unwrap_or(f64::INFINITY)
}

impl Ring for Rational {
    const MODE: ScalarMode = ScalarMode::ExactRational;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_i64(n: i64) -> Self {
        Rational::from_integer(n.into())
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn try_inverse(&self, _tol: f64) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
    fn sqrt_unit(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            return None;
        }
        rational_sqrt(self)
    }
    fn magnitude(&self) -> f64 {
        rational_magnitude(self)
    }
    fn to_complex(&self) -> Option<Complex64> {
        Some(Complex64::new(self.to_f64()?, 0.0))
    }
    fn to_scalar(&self) -> Scalar {
        Scalar::Rational(self.clone())
    }
    fn from_scalar(s: &Scalar) -> Result<Self, ScalarError> {
        match s {
            Scalar::Rational(q) => Ok(q.clone()),
            other => Err(ScalarError::ModeMismatch(other.mode(), Self::MODE)),
        }
    }
}

// ---------------------------------------------------------------------------
// Laurent polynomials in s

/// Finitely supported map `exponent -> coefficient` in the variable `s`.
/// Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Laurent {
    terms: BTreeMap<i32, Rational>,
}

impl Laurent {
    pub fn monomial(coef: Rational, exp: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !Zero::is_zero(&coef) {
            terms.insert(exp, coef);
        }
        Laurent { terms }
    }

    /// The variable `s`.
    pub fn s() -> Self {
        Self::monomial(One::one(), 1)
    }

    /// `s^exp`.
    pub fn s_pow(exp: i32) -> Self {
        Self::monomial(One::one(), exp)
    }

    pub fn from_terms<I: IntoIterator<Item = (i32, Rational)>>(iter: I) -> Self {
        let mut out = Laurent::default();
        for (e, c) in iter {
            out.add_term(e, c);
        }
        out
    }

    fn add_term(&mut self, exp: i32, coef: Rational) {
        if Zero::is_zero(&coef) {
            return;
        }
        let slot = self.terms.entry(exp).or_insert_with(Zero::zero);
        *slot += coef;
        if Zero::is_zero(slot) {
            self.terms.remove(&exp);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &Rational)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coefficient(&self, exp: i32) -> Rational {
        self.terms.get(&exp).cloned().unwrap_or_else(Zero::zero)
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Substitute a complex value for `s`.
    pub fn eval(&self, s: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|(e, c)| s.powi(*e) * c.to_f64().unwrap_or(f64::NAN))
            .sum()
    }

    /// Substitute `s -> s^-1`.
    pub fn invert_variable(&self) -> Self {
        Laurent {
            terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    /// Exact quotient by long division from the top degree, `None` when
    /// `other` does not divide `self`.
    pub fn div_exact(&self, other: &Laurent) -> Option<Laurent> {
        let (&top, lead) = other.terms.iter().next_back()?;
        let low = other.min_degree()?;
        let mut rem = self.clone();
        let mut quot = BTreeMap::new();
        while let Some((&e, c)) = rem.terms.iter().next_back() {
            // the remainder's span must stay at least as wide as the divisor's
            if e - rem.min_degree()? < top - low {
                return None;
            }
            let q = Laurent::monomial(c / lead, e - top);
            quot.insert(e - top, c / lead);
            rem = rem - q * other.clone();
        }
        Some(Laurent::from_terms(quot))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = <Laurent as Ring>::one();
        for _ in 0..n {
            out = out * self.clone();
        }
        out
    }
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let unit = <Rational as Ring>::is_one(&abs);
            match (*e, unit) {
                (0, _) => write!(f, "{abs}")?,
                (1, true) => f.write_str("s")?,
                (1, false) => write!(f, "{abs}*s")?,
                (e, true) => write!(f, "s^{e}")?,
                (e, false) => write!(f, "{abs}*s^{e}")?,
            }
        }
        Ok(())
    }
}

impl Add for Laurent {
    type Output = Laurent;
    fn add(mut self, rhs: Laurent) -> Laurent {
        self += rhs;
        self
    }
}

impl AddAssign for Laurent {
    fn add_assign(&mut self, rhs: Laurent) {
        for (e, c) in rhs.terms {
            self.add_term(e, c);
        }
    }
}

impl Neg for Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        Laurent {
            terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl Sub for Laurent {
    type Output = Laurent;
    fn sub(self, rhs: Laurent) -> Laurent {
        self + (-rhs)
    }
}

impl Mul for Laurent {
    type Output = Laurent;
    fn mul(self, rhs: Laurent) -> Laurent {
        let mut out = Laurent::default();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

impl Ring for Laurent {
    const MODE: ScalarMode = ScalarMode::ExactLaurent;

    fn zero() -> Self {
        Laurent::default()
    }
    fn one() -> Self {
        Laurent::monomial(One::one(), 0)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn from_i64(n: i64) -> Self {
        Laurent::monomial(Rational::from_integer(n.into()), 0)
    }
    fn from_rational(q: &Rational) -> Self {
        Laurent::monomial(q.clone(), 0)
    }
    fn try_inverse(&self, _tol: f64) -> Option<Self> {
        if !self.is_monomial() {
            return None;
        }
        let (e, c) = self.terms.iter().next()?;
        Some(Laurent::monomial(c.recip(), -e))
    }
    fn sqrt_unit(&self) -> Option<Self> {
        if !self.is_monomial() {
            return None;
        }
        let (e, c) = self.terms.iter().next()?;
        if e % 2 != 0 {
            return None;
        }
        Some(Laurent::monomial(rational_sqrt(c)?, e / 2))
    }
    fn try_divide(&self, other: &Self, _tol: f64) -> Option<Self> {
        self.div_exact(other)
    }
    fn magnitude(&self) -> f64 {
        self.terms.values().map(rational_magnitude).fold(0.0, f64::max)
    }
    fn to_complex(&self) -> Option<Complex64> {
        match self.terms.len() {
            0 => Some(Complex64::new(0.0, 0.0)),
            1 if self.terms.contains_key(&0) => Some(Complex64::new(self.terms[&0].to_f64()?, 0.0)),
            _ => None,
        }
    }
    fn to_scalar(&self) -> Scalar {
        Scalar::Laurent(self.clone())
    }
    fn from_scalar(s: &Scalar) -> Result<Self, ScalarError> {
        match s {
            Scalar::Laurent(p) => Ok(p.clone()),
            other => Err(ScalarError::ModeMismatch(other.mode(), Self::MODE)),
        }
    }
}

// ---------------------------------------------------------------------------
// complex floats

impl Ring for Complex64 {
    const MODE: ScalarMode = ScalarMode::ComplexFloat;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn from_rational(q: &Rational) -> Self {
        Complex64::new(q.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn try_inverse(&self, tol: f64) -> Option<Self> {
        (self.norm() > tol).then(|| self.inv())
    }
    fn sqrt_unit(&self) -> Option<Self> {
        // -0.0 in the imaginary part would select the lower branch
        let z = Complex64::new(self.re, if self.im == 0.0 { 0.0 } else { self.im });
        Some(z.sqrt())
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn to_complex(&self) -> Option<Complex64> {
        Some(*self)
    }
    fn to_scalar(&self) -> Scalar {
        Scalar::Complex(*self)
    }
    fn from_scalar(s: &Scalar) -> Result<Self, ScalarError> {
        match s {
            Scalar::Complex(z) => Ok(*z),
            other => Err(ScalarError::ModeMismatch(other.mode(), Self::MODE)),
        }
    }
    fn solve(n: usize, a: &[Self], b: &[Self]) -> Result<Vec<Self>, ScalarError> {
        let m = nalgebra::DMatrix::from_row_slice(n, n, a);
        let rhs = nalgebra::DVector::from_column_slice(b);
        let lu = m.clone().lu();
        let x = lu.solve(&rhs).ok_or(ScalarError::Singular)?;
        let scale = m.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let back = &m * &x - &rhs;
        if back.iter().any(|z| !z.is_finite()) || back.iter().any(|z| z.norm() > 1e-8 * scale) {
            return Err(ScalarError::Singular);
        }
        Ok(x.iter().copied().collect())
    }
}

// ---------------------------------------------------------------------------
// dynamic scalars

/// A scalar tagged with its mode.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Rational(Rational),
    Laurent(Laurent),
    Complex(Complex64),
}

impl Scalar {
    pub fn mode(&self) -> ScalarMode {
        match self {
            Scalar::Rational(_) => ScalarMode::ExactRational,
            Scalar::Laurent(_) => ScalarMode::ExactLaurent,
            Scalar::Complex(_) => ScalarMode::ComplexFloat,
        }
    }

    pub fn zero(mode: ScalarMode) -> Scalar {
        match mode {
            ScalarMode::ExactRational => Scalar::Rational(Zero::zero()),
            ScalarMode::ExactLaurent => Scalar::Laurent(Laurent::default()),
            ScalarMode::ComplexFloat => Scalar::Complex(Complex64::new(0.0, 0.0)),
        }
    }

    pub fn one(mode: ScalarMode) -> Scalar {
        match mode {
            ScalarMode::ExactRational => Scalar::Rational(One::one()),
            ScalarMode::ExactLaurent => Scalar::Laurent(<Laurent as Ring>::one()),
            ScalarMode::ComplexFloat => Scalar::Complex(Complex64::new(1.0, 0.0)),
        }
    }

    pub fn checked_add(&self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a + b)),
            (Scalar::Laurent(a), Scalar::Laurent(b)) => Ok(Scalar::Laurent(a.clone() + b.clone())),
            (Scalar::Complex(a), Scalar::Complex(b)) => Ok(Scalar::Complex(a + b)),
            (a, b) => Err(ScalarError::ModeMismatch(a.mode(), b.mode())),
        }
    }

    pub fn checked_mul(&self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a * b)),
            (Scalar::Laurent(a), Scalar::Laurent(b)) => Ok(Scalar::Laurent(a.clone() * b.clone())),
            (Scalar::Complex(a), Scalar::Complex(b)) => Ok(Scalar::Complex(a * b)),
            (a, b) => Err(ScalarError::ModeMismatch(a.mode(), b.mode())),
        }
    }

    pub fn checked_sub(&self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        self.checked_add(&rhs.neg())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Laurent(a) => Scalar::Laurent(-a.clone()),
            Scalar::Complex(a) => Scalar::Complex(-a),
        }
    }

    pub fn invert(&self, tol: f64) -> Result<Scalar, ScalarError> {
        let out = match self {
            Scalar::Rational(a) => a.try_inverse(tol).map(Scalar::Rational),
            Scalar::Laurent(a) => a.try_inverse(tol).map(Scalar::Laurent),
            Scalar::Complex(a) => a.try_inverse(tol).map(Scalar::Complex),
        };
        out.ok_or(ScalarError::NotUnit)
    }

    pub fn sqrt_unit(&self) -> Result<Scalar, ScalarError> {
        let out = match self {
            Scalar::Rational(a) => a.sqrt_unit().map(Scalar::Rational),
            Scalar::Laurent(a) => a.sqrt_unit().map(Scalar::Laurent),
            Scalar::Complex(a) => a.sqrt_unit().map(Scalar::Complex),
        };
        out.ok_or(ScalarError::NoSquareRoot)
    }

    /// Structural equality in exact modes, `|x - y| <= tol` for complex values.
    pub fn eq_within(&self, rhs: &Scalar, tol: f64) -> bool {
        match (self, rhs) {
            (Scalar::Complex(a), Scalar::Complex(b)) => (a - b).norm() <= tol,
            (a, b) => a == b,
        }
    }

    pub fn to_complex(&self) -> Option<Complex64> {
        match self {
            Scalar::Rational(a) => a.to_complex(),
            Scalar::Laurent(a) => a.to_complex(),
            Scalar::Complex(a) => Some(*a),
        }
    }

    /// Parse a literal of the given mode. Rational literals are `"p/q"`
    /// strings or JSON integers, complex literals `[re, im]` pairs or plain
    /// numbers, Laurent literals `{"exponent": "coefficient"}` maps keyed by
    /// powers of `s`. Exact literals are accepted by the wider modes.
    pub fn from_json(mode: ScalarMode, v: &Value) -> Result<Scalar, ScalarError> {
        let bad = || ScalarError::BadLiteral {
            mode,
            text: v.to_string(),
        };
        match mode {
            ScalarMode::ExactRational => parse_rational(v).map(Scalar::Rational).ok_or_else(bad),
            ScalarMode::ExactLaurent => match v {
                Value::Object(map) => {
                    let mut p = Laurent::default();
                    for (k, c) in map {
                        let e: i32 = k.trim().parse().map_err(|_| bad())?;
                        p.add_term(e, parse_rational(c).ok_or_else(bad)?);
                    }
                    Ok(Scalar::Laurent(p))
                }
                other => parse_rational(other)
                    .map(|q| Scalar::Laurent(Laurent::monomial(q, 0)))
                    .ok_or_else(bad),
            },
            ScalarMode::ComplexFloat => match v {
                Value::Array(pair) if pair.len() == 2 => {
                    let re = pair[0].as_f64().ok_or_else(bad)?;
                    let im = pair[1].as_f64().ok_or_else(bad)?;
                    Ok(Scalar::Complex(Complex64::new(re, im)))
                }
                Value::Number(n) => Ok(Scalar::Complex(Complex64::new(n.as_f64().ok_or_else(bad)?, 0.0))),
                Value::String(_) => parse_rational(v)
                    .and_then(|q| q.to_f64())
                    .map(|x| Scalar::Complex(Complex64::new(x, 0.0)))
                    .ok_or_else(bad),
                _ => Err(bad()),
            },
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Scalar::Rational(q) => Value::String(q.to_string()),
            Scalar::Laurent(p) => Value::Object(
                p.terms()
                    .map(|(e, c)| (e.to_string(), Value::String(c.to_string())))
                    .collect(),
            ),
            // adding zero turns -0.0 into 0.0
            Scalar::Complex(z) => serde_json::json!([z.re + 0.0, z.im + 0.0]),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => write!(f, "{q}"),
            Scalar::Laurent(p) => write!(f, "{p}"),
            Scalar::Complex(z) => write!(f, "{z}"),
        }
    }
}

pub fn parse_rational_str(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            (!Zero::is_zero(&d)).then(|| Rational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

fn parse_rational(v: &Value) -> Option<Rational> {
    match v {
        Value::String(s) => parse_rational_str(s),
        Value::Number(n) => n.as_i64().map(|i| Rational::from_integer(i.into())),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn difference_of_squares_in_s() {
        let s = Laurent::s();
        let si = Laurent::s_pow(-1);
        let prod = (s.clone() + si.clone()) * (s - si);
        assert_eq!(prod, Laurent::s_pow(2) - Laurent::s_pow(-2));
    }

    #[test]
    fn exact_division() {
        let a = Laurent::s_pow(2) + Laurent::s_pow(-2);
        let b = Laurent::from_terms([(3, q(1, 2)), (0, q(-4, 1)), (-5, q(7, 3))]);
        assert_eq!((a.clone() * b.clone()).div_exact(&a), Some(b.clone()));
        assert_eq!((a.clone() * b.clone()).try_divide(&b, 0.0), Some(a.clone()));
        assert_eq!(b.div_exact(&a), None);
        assert_eq!(Laurent::s().div_exact(&a), None);
        assert_eq!(<Laurent as Ring>::zero().div_exact(&a), Some(<Laurent as Ring>::zero()));
    }

    #[test]
    fn complex_unit_law() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let x = Complex64::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
            assert_eq!(x * <Complex64 as Ring>::one(), x);
        }
    }

    #[test]
    fn rational_sum() {
        assert_eq!(q(2, 3) + q(1, 6), q(5, 6));
    }

    #[test]
    fn invert_monomial() {
        let x = Laurent::monomial(q(3, 1), 2);
        assert_eq!(x.try_inverse(0.0).unwrap(), Laurent::monomial(q(1, 3), -2));
        let z = Complex64::new(0.0, 2.0);
        let zi = z.try_inverse(DEFAULT_TOL).unwrap();
        assert!((zi - Complex64::new(0.0, -0.5)).norm() < 1e-15);
    }

    #[test]
    fn multi_term_laurent_is_not_a_unit() {
        let x = Scalar::Laurent(Laurent::s() + <Laurent as Ring>::one());
        assert_eq!(x.invert(DEFAULT_TOL), Err(ScalarError::NotUnit));
        assert_eq!(ScalarError::NotUnit.to_string(), "scalar not a unit");
    }

    #[test]
    fn square_roots() {
        assert_eq!(Laurent::s_pow(4).sqrt_unit().unwrap(), Laurent::s_pow(2));
        let r = Complex64::new(-1.0, 0.0).sqrt_unit().unwrap();
        assert!((r - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        let r = Complex64::new(-1.0, -0.0).sqrt_unit().unwrap();
        assert!((r - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert_eq!(
            Laurent::monomial(q(9, 4), 2).sqrt_unit().unwrap(),
            Laurent::monomial(q(3, 2), 1)
        );
        assert!(Laurent::monomial(q(2, 1), 2).sqrt_unit().is_none());
        assert!(Laurent::s_pow(3).sqrt_unit().is_none());
        assert_eq!(
            Scalar::Laurent(Laurent::monomial(q(-1, 1), 0)).sqrt_unit(),
            Err(ScalarError::NoSquareRoot)
        );
    }

    #[test]
    fn mode_mismatch() {
        let a = Scalar::Rational(q(1, 2));
        let b = Scalar::Complex(Complex64::new(1.0, 0.0));
        let err = a.checked_add(&b).unwrap_err();
        assert!(err.to_string().starts_with("scalar mode mismatch"));
        assert!(a.checked_mul(&b).is_err());
    }

    #[test]
    fn literals_round_trip() {
        let v: Value = serde_json::from_str(r#"{"2": "1", "-2": "-3/2"}"#).unwrap();
        let p = Scalar::from_json(ScalarMode::ExactLaurent, &v).unwrap();
        assert_eq!(p, Scalar::Laurent(Laurent::from_terms([(2, q(1, 1)), (-2, q(-3, 2))])));
        assert_eq!(Scalar::from_json(ScalarMode::ExactLaurent, &p.to_json()).unwrap(), p);
        let c = Scalar::from_json(ScalarMode::ComplexFloat, &serde_json::json!([0.5, -2.0])).unwrap();
        assert_eq!(c, Scalar::Complex(Complex64::new(0.5, -2.0)));
        let r = Scalar::from_json(ScalarMode::ExactRational, &serde_json::json!("-4/6")).unwrap();
        assert_eq!(r, Scalar::Rational(q(-2, 3)));
        assert!(Scalar::from_json(ScalarMode::ExactRational, &serde_json::json!("1/0")).is_err());
        assert!(Scalar::from_json(ScalarMode::ExactRational, &serde_json::json!([1, 2])).is_err());
    }

    #[test]
    fn display_laurent() {
        let p = Laurent::from_terms([(2, q(1, 1)), (0, q(-1, 1)), (-3, q(3, 2))]);
        assert_eq!(p.to_string(), "s^2 - 1 + 3/2*s^-3");
    }

    #[test]
    fn complex_solve() {
        let a = [
            Complex64::new(2.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(3.0, 0.0),
        ];
        let b = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        let x = Complex64::solve(2, &a, &b).unwrap();
        let r0 = a[0] * x[0] + a[1] * x[1] - b[0];
        let r1 = a[2] * x[0] + a[3] * x[1] - b[1];
        assert!(r0.norm() < 1e-14 && r1.norm() < 1e-14);
        let sing = [<Complex64 as Ring>::one(); 4];
        assert!(Complex64::solve(2, &sing, &b).is_err());
        assert!(Rational::solve(1, &[q(1, 1)], &[q(1, 1)]).is_err());
    }

    fn small_laurent() -> impl Strategy<Value = Laurent> {
        prop::collection::vec((-4i32..4, -5i64..5, 1i64..4), 0..4)
            .prop_map(|v| Laurent::from_terms(v.into_iter().map(|(e, n, d)| (e, q(n, d)))))
    }

    proptest! {
        #[test]
        fn laurent_ring_laws(a in small_laurent(), b in small_laurent(), c in small_laurent()) {
            prop_assert_eq!((a.clone() + b.clone()) + c.clone(), a.clone() + (b.clone() + c.clone()));
            prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
            prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c));
            prop_assert!(a.terms().all(|(_, c)| !Zero::is_zero(c)));
        }

        #[test]
        fn inverse_is_an_involution(n in -20i64..20, d in 1i64..9, e in -6i32..6) {
            prop_assume!(n != 0);
            let x = Laurent::monomial(q(n, d), e);
            let xi = x.try_inverse(0.0).unwrap();
            prop_assert_eq!(xi.try_inverse(0.0).unwrap(), x.clone());
            prop_assert!((x * xi).is_one());
        }

        #[test]
        fn sqrt_squares_back(n in 1i64..30, d in 1i64..30, e in -5i32..5) {
            let x = Laurent::monomial(q(n * n, d * d), 2 * e);
            let r = x.sqrt_unit().unwrap();
            prop_assert_eq!(r.clone() * r, x);
            let z = Complex64::new(n as f64 - 15.0, d as f64 - 15.0);
            let w = z.sqrt_unit().unwrap();
            prop_assert!((w * w - z).norm() < 1e-12);
        }
    }
}
