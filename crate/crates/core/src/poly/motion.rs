use serde::{Deserialize, Deserializer, Serialize};

use super::{DQPoly, Poly, RealPoly};
use crate::dualquat::DEFAULT_TOL;
use crate::error::{Error, Result};

/// Real and dual scalar parts of `c * conj(c)`. The vector parts vanish
/// identically and are dropped.
pub fn norm_poly(c: &DQPoly) -> (RealPoly, RealPoly) {
    let n = c * &c.conj();
    (n.map(|h| h.primal.w), n.map(|h| h.dual.w))
}

/// Polynomial over the dual quaternions with nonzero real norm polynomial
/// and invertible leading coefficient.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MotionPolynomial {
    poly: DQPoly,
    #[serde(skip)]
    norm: RealPoly,
}

impl MotionPolynomial {
    pub fn poly(&self) -> &DQPoly {
        &self.poly
    }

    /// Cached real norm polynomial.
    pub fn norm(&self) -> &RealPoly {
        &self.norm
    }

    pub fn degree(&self) -> usize {
        self.poly.degree().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.poly.is_monic()
    }

    /// Monic representative `lead^-1 * c`; it parametrizes the same motion
    /// up to a fixed change of the reference frame.
    pub fn to_monic(&self) -> Result<MotionPolynomial> {
        if self.is_monic() {
            return Ok(self.clone());
        }
        let p = self.poly.make_monic_left()?;
        validate_motion(&p, DEFAULT_TOL)
    }

    pub fn into_poly(self) -> DQPoly {
        self.poly
    }
}

impl<'de> Deserialize<'de> for MotionPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let p = DQPoly::deserialize(d)?;
        validate_motion(&p, DEFAULT_TOL).map_err(serde::de::Error::custom)
    }
}

/// Checks the motion polynomial conditions; monicity is not required.
pub fn validate_motion(c: &DQPoly, tol: f64) -> Result<MotionPolynomial> {
    if !c.is_finite() {
        return Err(Error::Parse("non-finite coefficient".into()));
    }
    let (re, du) = norm_poly(c);
    let scale = re.max_abs().max(c.max_abs()).max(1.0);
    if re.max_abs() <= tol * scale * 1e-3 || re.is_zero() {
        return Err(Error::ZeroNorm);
    }
    let defect = du.max_abs();
    if defect > tol * scale {
        return Err(Error::NonRealNorm(defect));
    }
    let lead = c.leading();
    if lead.primal.norm().sqrt() <= tol * c.max_abs().max(1.0) {
        return Err(Error::NonInvertibleLeading);
    }
    Ok(MotionPolynomial {
        poly: c.clone(),
        norm: re,
    })
}

impl From<MotionPolynomial> for DQPoly {
    fn from(m: MotionPolynomial) -> DQPoly {
        m.poly
    }
}

impl Poly<f64> {
    /// Human-readable form used in reports.
    pub fn pretty(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs().iter().enumerate().rev() {
            if *c == 0.0 {
                continue;
            }
            let mono = match i {
                0 => format!("{c}"),
                1 => format!("{c}*t"),
                _ => format!("{c}*t^{i}"),
            };
            parts.push(mono);
        }
        parts.join(" + ")
    }
}
