//! Univariate polynomials with a central indeterminate `t` over the reals,
//! the quaternions and the dual quaternions.
//!
//! Coefficients are stored in ascending degree order and the coefficient
//! ring need not be commutative: products keep the order of their factors,
//! and division is always right division (`c = quot * d + rem`).

mod motion;
mod real;
mod roots;

pub use motion::{norm_poly, validate_motion, MotionPolynomial};
pub use real::{gcd, max_real_factor, quadratic_factors, QuadraticFactors};
pub use roots::real_roots_complex;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::dualquat::{DualQuaternion, Quaternion};
use crate::error::{Error, Result};

/// Coefficient ring of a polynomial.
pub trait Coeff:
    Copy
    + fmt::Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Mul<f64, Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_real(r: f64) -> Self;
    fn max_abs(&self) -> f64;
    fn conj(&self) -> Self;
    fn inverse(&self) -> Option<Self>;
    fn is_finite(&self) -> bool;
}

impl Coeff for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_real(r: f64) -> Self {
        r
    }
    fn max_abs(&self) -> f64 {
        self.abs()
    }
    fn conj(&self) -> Self {
        *self
    }
    fn inverse(&self) -> Option<Self> {
        if *self == 0.0 {
            None
        } else {
            Some(1.0 / self)
        }
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

impl Coeff for Quaternion {
    fn zero() -> Self {
        Quaternion::ZERO
    }
    fn one() -> Self {
        Quaternion::ONE
    }
    fn from_real(r: f64) -> Self {
        Quaternion::real(r)
    }
    fn max_abs(&self) -> f64 {
        Quaternion::max_abs(self)
    }
    fn conj(&self) -> Self {
        Quaternion::conj(self)
    }
    fn inverse(&self) -> Option<Self> {
        Quaternion::inverse(self)
    }
    fn is_finite(&self) -> bool {
        Quaternion::is_finite(self)
    }
}

impl Coeff for DualQuaternion {
    fn zero() -> Self {
        DualQuaternion::ZERO
    }
    fn one() -> Self {
        DualQuaternion::ONE
    }
    fn from_real(r: f64) -> Self {
        DualQuaternion::real(r)
    }
    fn max_abs(&self) -> f64 {
        DualQuaternion::max_abs(self)
    }
    fn conj(&self) -> Self {
        DualQuaternion::conj(self)
    }
    fn inverse(&self) -> Option<Self> {
        DualQuaternion::inverse(self)
    }
    fn is_finite(&self) -> bool {
        DualQuaternion::is_finite(self)
    }
}

/// Evaluation parameter on the projective line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Param {
    Finite(f64),
    Infinity,
}

impl From<f64> for Param {
    fn from(t: f64) -> Self {
        Param::Finite(t)
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::Finite(t) => write!(f, "{t}"),
            Param::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for Param {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Param::Finite(t) => s.serialize_f64(*t),
            Param::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Param {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(t) if t.is_finite() => Ok(Param::Finite(t)),
            Raw::Text(s) if s == "inf" || s == "infinity" => Ok(Param::Infinity),
            _ => Err(serde::de::Error::custom("expected a finite number or \"inf\"")),
        }
    }
}

/// Dense polynomial; trailing exact zeros are trimmed, so the zero
/// polynomial has no coefficients and degree `None`.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct Poly<T: Coeff> {
    coeffs: Vec<T>,
}

pub type RealPoly = Poly<f64>;
pub type QuatPoly = Poly<Quaternion>;
pub type DQPoly = Poly<DualQuaternion>;

impl<T: Coeff> fmt::Debug for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter()).finish()
    }
}

impl<T: Coeff> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| *c == T::zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Poly::new(vec![c])
    }

    /// `t - h`.
    pub fn linear(h: T) -> Self {
        Poly::new(vec![-h, T::one()])
    }

    /// Product `(t - h_1) * ... * (t - h_n)` in the given order.
    pub fn from_linear_factors(hs: &[T]) -> Self {
        hs.iter().fold(Poly::one(), |acc, h| &acc * &Poly::linear(*h))
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).copied().unwrap_or_else(T::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> T {
        self.coeffs.last().copied().unwrap_or_else(T::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == T::one()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.max_abs()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    /// Drops trailing coefficients of magnitude at most `tol * max(1, |self|)`.
    pub fn trimmed(&self, tol: f64) -> Self {
        let bound = tol * self.max_abs().max(1.0);
        let mut coeffs = self.coeffs.clone();
        while coeffs.last().is_some_and(|c| c.max_abs() <= bound) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn conj(&self) -> Self {
        Poly::new(self.coeffs.iter().map(|c| c.conj()).collect())
    }

    pub fn map<U: Coeff>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    /// Multiplies every coefficient by the real scalar `s`.
    pub fn scale(&self, s: f64) -> Self {
        self.map(|c| *c * s)
    }

    /// `c * self` for a constant `c`.
    pub fn left_mul(&self, c: T) -> Self {
        self.map(|a| c * *a)
    }

    /// `self * c` for a constant `c`.
    pub fn right_mul(&self, c: T) -> Self {
        self.map(|a| *a * c)
    }

    /// Multiplication by a real polynomial (which is central).
    pub fn mul_real(&self, r: &RealPoly) -> Self {
        if self.is_zero() || r.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + r.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in r.coeffs.iter().enumerate() {
                out[i + j] = out[i + j] + *a * *b;
            }
        }
        Poly::new(out)
    }

    /// `sum c_i t0^i`; at infinity the leading coefficient.
    pub fn eval(&self, t0: Param) -> T {
        match t0 {
            Param::Infinity => self.leading(),
            Param::Finite(t) => self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * t + *c),
        }
    }

    /// Right evaluation `sum c_i h^i` (coefficients to the left of the powers).
    /// It vanishes iff `t - h` is a right factor.
    pub fn right_eval(&self, h: T) -> T {
        let mut acc = T::zero();
        let mut power = T::one();
        for c in &self.coeffs {
            acc = acc + *c * power;
            power = power * h;
        }
        acc
    }

    /// Right division `self = quot * d + rem` with `deg rem < deg d`.
    pub fn right_divide(&self, d: &Poly<T>) -> Result<(Poly<T>, Poly<T>)> {
        let dd = d.degree().ok_or(Error::NonInvertibleDivisorLeading)?;
        let lead_inv = d.leading().inverse().ok_or(Error::NonInvertibleDivisorLeading)?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![T::zero(); rem.len() - dd];
        while rem.len() > dd {
            let top = rem.len() - 1;
            let k = rem[top] * lead_inv;
            let shift = top - dd;
            quot[shift] = k;
            for (j, dj) in d.coeffs.iter().enumerate() {
                rem[shift + j] = rem[shift + j] - k * *dj;
            }
            // the leading term cancels by construction
            rem.pop();
        }
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    /// Divides by an invertible leading coefficient from the left, giving a
    /// monic polynomial.
    pub fn make_monic_left(&self) -> Result<Self> {
        let inv = self.leading().inverse().ok_or(Error::NonInvertibleLeading)?;
        let mut out = self.left_mul(inv);
        if let Some(last) = out.coeffs.last_mut() {
            *last = T::one();
        }
        Ok(out)
    }

    /// Divides by an invertible leading coefficient from the right.
    pub fn make_monic_right(&self) -> Result<Self> {
        let inv = self.leading().inverse().ok_or(Error::NonInvertibleLeading)?;
        let mut out = self.right_mul(inv);
        if let Some(last) = out.coeffs.last_mut() {
            *last = T::one();
        }
        Ok(out)
    }

    /// Largest componentwise coefficient difference.
    pub fn distance(&self, other: &Poly<T>) -> f64 {
        (self - other).max_abs()
    }
}

impl<T: Coeff> Add for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, o: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl<T: Coeff> Sub for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, o: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl<T: Coeff> Neg for &Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        self.map(|c| -*c)
    }
}

impl<T: Coeff> Mul for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, o: &Poly<T>) -> Poly<T> {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j] + *a * *b;
            }
        }
        Poly::new(out)
    }
}

impl RealPoly {
    pub fn eval_real(&self, t: f64) -> f64 {
        self.eval(Param::Finite(t))
    }

    pub fn derivative(&self) -> RealPoly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * i as f64)
                .collect(),
        )
    }

    /// Monic quadratic `t^2 - 2 s t + n`.
    pub fn quadratic(s: f64, n: f64) -> RealPoly {
        Poly::new(vec![n + 0.0, -2.0 * s + 0.0, 1.0])
    }

    pub fn to_dq(&self) -> DQPoly {
        self.map(|c| DualQuaternion::real(*c))
    }

    pub fn to_quat(&self) -> QuatPoly {
        self.map(|c| Quaternion::real(*c))
    }
}

impl QuatPoly {
    pub fn to_dq(&self) -> DQPoly {
        self.map(|c| DualQuaternion::from_primal(*c))
    }

    /// Real polynomial formed by one coefficient component (0 = scalar).
    pub fn component(&self, k: usize) -> RealPoly {
        self.map(|c| c.to_array()[k])
    }
}

impl DQPoly {
    pub fn from_parts(primal: &QuatPoly, dual: &QuatPoly) -> DQPoly {
        let n = primal.coeffs.len().max(dual.coeffs.len());
        Poly::new(
            (0..n)
                .map(|i| DualQuaternion::new(primal.coeff(i), dual.coeff(i)))
                .collect(),
        )
    }

    pub fn primal(&self) -> QuatPoly {
        self.map(|c| c.primal)
    }

    pub fn dual(&self) -> QuatPoly {
        self.map(|c| c.dual)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const I: Quaternion = Quaternion::I;
    const J: Quaternion = Quaternion::J;
    const K: Quaternion = Quaternion::K;

    fn dq(p: Quaternion) -> DualQuaternion {
        DualQuaternion::from_primal(p)
    }

    fn lin(h: Quaternion) -> DQPoly {
        DQPoly::linear(dq(h))
    }

    #[test]
    fn products_are_noncommutative() {
        let sq = &lin(I) * &lin(I);
        assert_eq!(
            sq,
            DQPoly::new(vec![dq(Quaternion::real(-1.0)), dq(-I * 2.0), DualQuaternion::ONE])
        );
        let ij = &lin(I) * &lin(J);
        assert_eq!(ij, DQPoly::new(vec![dq(K), dq(-(I + J)), DualQuaternion::ONE]));
        let ji = &lin(J) * &lin(I);
        assert_eq!(ji, DQPoly::new(vec![dq(-K), dq(-(I + J)), DualQuaternion::ONE]));
    }

    #[test]
    fn zero_polynomial_has_no_degree() {
        let z = DQPoly::new(vec![DualQuaternion::ZERO; 3]);
        assert_eq!(z.degree(), None);
        assert!(z.is_zero());
        assert!(matches!(
            lin(I).right_divide(&z),
            Err(Error::NonInvertibleDivisorLeading)
        ));
        let d = DQPoly::new(vec![DualQuaternion::ONE, DualQuaternion::from_dual(I)]);
        assert!(matches!(
            lin(I).right_divide(&d),
            Err(Error::NonInvertibleDivisorLeading)
        ));
    }

    #[test]
    fn division_examples() {
        // t^2 + 1 + eps i by t^2 + 1
        let c = DQPoly::new(vec![
            DualQuaternion::new(Quaternion::ONE, I),
            DualQuaternion::ZERO,
            DualQuaternion::ONE,
        ]);
        let d = RealPoly::quadratic(0.0, 1.0).to_dq();
        let (q, r) = c.right_divide(&d).unwrap();
        assert_eq!(q, DQPoly::one());
        assert_eq!(r, DQPoly::constant(DualQuaternion::from_dual(I)));

        let c = &lin(I) * &lin(J);
        let (q, r) = c.right_divide(&lin(J)).unwrap();
        assert_eq!(q, lin(I));
        assert!(r.is_zero());
        let (_, r) = c.right_divide(&lin(I)).unwrap();
        assert!(!r.is_zero());
    }

    #[test]
    fn right_eval_matches_brute_force_sum() {
        let c = &lin(I) * &lin(J);
        assert_eq!(c.right_eval(dq(J)), DualQuaternion::ZERO);
        assert_eq!(lin(J).right_eval(dq(J)), DualQuaternion::ZERO);
        // c = t^2 - (i+j) t + k at h = i: i^2 - (i+j) i + k = -1 + 1 + k + k = 2k
        assert_eq!(c.right_eval(dq(I)), dq(K * 2.0));
        let (_, r) = c.right_divide(&lin(I)).unwrap();
        assert_eq!(r.coeff(0), dq(K * 2.0));
    }

    #[test]
    fn evaluation() {
        assert_eq!(lin(I).eval(Param::Finite(0.0)), dq(-I));
        let c2 = &lin(I) * &lin(I);
        assert_eq!(c2.eval(Param::Finite(1.0)), dq(-I * 2.0));
        assert_eq!(c2.eval(Param::Infinity), DualQuaternion::ONE);
    }

    #[test]
    fn monic_normalization() {
        let c = DQPoly::new(vec![dq(I), dq(Quaternion::new(0.0, 0.0, 2.0, 0.0))]);
        let m = c.make_monic_left().unwrap();
        assert!(m.is_monic());
        let back = m.left_mul(dq(J * 2.0));
        assert!(back.distance(&c) < 1e-15);
        let m = c.make_monic_right().unwrap();
        assert!(m.right_mul(dq(J * 2.0)).distance(&c) < 1e-15);
    }

    #[test]
    fn trimming_is_relative() {
        let p = RealPoly::new(vec![2.0, 1.0, 1e-12]);
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p.trimmed(1e-9).degree(), Some(1));
    }
}
