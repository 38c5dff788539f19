//! Right zeros of a polynomial with a prescribed norm quadratic.

use crate::dualquat::{DualQuaternion, Quaternion};
use crate::error::{Error, Result};
use crate::poly::{DQPoly, RealPoly};
use crate::vec3::{self, Vec3};

/// Residual conditions attached to a solution family.
#[derive(Clone, Debug, PartialEq)]
pub enum FamilyConstraint {
    /// Every member of `basepoint + span(basis)` is a solution.
    Affine,
    /// The primal part may move on the sphere `{ s + v : |v| = radius }`;
    /// for each choice the dual part ranges over the plane orthogonal to `v`.
    /// `basepoint` holds the canonical primal `s - radius * k`.
    PrimalSphere { scalar: f64, radius: f64 },
}

/// All `h` such that `t - h` is a right factor of a polynomial and has a
/// given norm quadratic.
#[derive(Clone, Debug, PartialEq)]
pub enum LinearSolutionSet {
    Unique {
        h: DualQuaternion,
    },
    Family {
        basepoint: DualQuaternion,
        /// Directions in the dual part; `basepoint + sum(theta_i * basis_i)`.
        basis: Vec<DualQuaternion>,
        constraints: FamilyConstraint,
    },
    Empty,
}

impl LinearSolutionSet {
    /// Member for the parameter vector `theta` (ignored for `Unique`).
    pub fn member(&self, theta: &[f64]) -> Option<DualQuaternion> {
        match self {
            LinearSolutionSet::Unique { h } => Some(*h),
            LinearSolutionSet::Family { basepoint, basis, .. } => {
                Some(basis.iter().zip(theta).fold(*basepoint, |acc, (b, x)| acc + *b * *x))
            }
            LinearSolutionSet::Empty => None,
        }
    }
}

/// Orthonormal directions of pure dual parts `eps * q` with `q . v = 0`.
pub(crate) fn dual_basis(v: Vec3, tol: f64) -> Vec<DualQuaternion> {
    let axes = |a: Vec3| DualQuaternion::from_dual(Quaternion::pure(a));
    if vec3::norm(v) <= tol {
        return vec![axes([1.0, 0.0, 0.0]), axes([0.0, 1.0, 0.0]), axes([0.0, 0.0, 1.0])];
    }
    let (e1, e2) = vec3::orthonormal_complement(vec3::normalize(v));
    vec![axes(e1), axes(e2)]
}

/// `(s, n)` with `m = t^2 - 2 s t + n`.
pub(crate) fn quadratic_params(m: &RealPoly) -> (f64, f64) {
    (-0.5 * m.coeff(1), m.coeff(0))
}

/// Remainder of `d` modulo the real quadratic `m`.
pub(crate) fn remainder_mod(d: &DQPoly, m: &RealPoly) -> DQPoly {
    match d.right_divide(&m.to_dq()) {
        Ok((_, r)) => r,
        Err(_) => d.clone(),
    }
}

/// Checks that `h` has trace `2s`, norm `n` and satisfies the Study
/// condition, relative to `scale`.
pub(crate) fn consistent(h: &DualQuaternion, s: f64, n: f64, tol: f64) -> bool {
    let scale = h.max_abs().max(1.0).max(n.abs().sqrt());
    let p = h.primal;
    (p.w - s).abs() <= tol * scale
        && (p.norm() - n).abs() <= tol * scale * scale
        && h.dual.w.abs() <= tol * scale
        && p.dot(&h.dual).abs() <= tol * scale * scale
}

/// Tolerance used for the (nonlinear) trace/norm consistency checks.
pub(crate) fn consistency_tol(tol: f64) -> f64 {
    tol.sqrt()
}

/// Unique zero `h = -r1^-1 r0` of the linear remainder `r = r1 t + r0`.
pub fn linear_zero(r: &DQPoly, tol: f64) -> Result<DualQuaternion> {
    let r = r.trimmed(tol);
    match r.degree() {
        None | Some(0) => Err(Error::ConstantRemainder),
        Some(1) => {
            let r1 = r.coeff(1);
            if r1.primal.norm().sqrt() <= tol * r.max_abs().max(1.0) {
                return Err(Error::NonInvertibleLeading);
            }
            let inv = r1.inverse().ok_or(Error::NonInvertibleLeading)?;
            Ok(-(inv * r.coeff(0)))
        }
        Some(d) => Err(Error::ExceptionalCase(format!("remainder of degree {d} is not linear"))),
    }
}

/// Describes every `h` with `N(t - h) = m` and `t - h` a right factor of `c`.
///
/// With `c = Q m + r1 t + r0`, such `h` satisfy `r1 h + r0 = 0`. Writing
/// `r1 = a + eps b`, `r0 = c0 + eps d` and `h = p + eps q`, the system splits
/// into `a p + c0 = 0` and `a q + b p + d = 0`. An invertible `a` determines
/// `h`; `a = 0` leaves the dual part free up to the Study condition.
pub fn solve_linear_factor(c: &DQPoly, m: &RealPoly, tol: f64) -> LinearSolutionSet {
    let (s, n) = quadratic_params(m);
    let scale = c.max_abs().max(1.0);
    let ctol = consistency_tol(tol);
    let r = remainder_mod(c, m);
    let r1 = r.coeff(1);
    let r0 = r.coeff(0);
    let (a, b, c0, d) = (r1.primal, r1.dual, r0.primal, r0.dual);
    let zero = |q: &Quaternion| q.norm().sqrt() <= tol * scale;

    if !zero(&a) {
        let Some(inv) = r1.inverse() else {
            return LinearSolutionSet::Empty;
        };
        let h = -(inv * r0);
        return if consistent(&h, s, n, ctol) {
            LinearSolutionSet::Unique { h }
        } else {
            LinearSolutionSet::Empty
        };
    }
    if !zero(&c0) {
        return LinearSolutionSet::Empty;
    }
    if !zero(&b) {
        let Some(binv) = b.inverse() else {
            return LinearSolutionSet::Empty;
        };
        let p = -(binv * d);
        let probe = DualQuaternion::from_primal(p);
        if !consistent(&probe, s, n, ctol) {
            return LinearSolutionSet::Empty;
        }
        return LinearSolutionSet::Family {
            basepoint: probe,
            basis: dual_basis(p.vector(), ctol),
            constraints: FamilyConstraint::Affine,
        };
    }
    if !zero(&d) {
        return LinearSolutionSet::Empty;
    }
    // m divides c: primal on a sphere
    let rad2 = n - s * s;
    if rad2 < -ctol * n.abs().max(1.0) {
        return LinearSolutionSet::Empty;
    }
    let radius = rad2.max(0.0).sqrt();
    let p = Quaternion::new(s, 0.0, 0.0, -radius);
    LinearSolutionSet::Family {
        basepoint: DualQuaternion::from_primal(p),
        basis: dual_basis(p.vector(), ctol),
        constraints: FamilyConstraint::PrimalSphere { scalar: s, radius },
    }
}

/// Polynomial defect measuring how far `d` is from admitting a right factor
/// with norm `m`; all entries vanish iff `solve_linear_factor(d, m)` is
/// nonempty (for `d` of degree at least one). Entries are scaled by the size
/// of `d`.
pub(crate) fn factor_defect(d: &DQPoly, m: &RealPoly, tol: f64) -> Vec<f64> {
    let (s, n) = quadratic_params(m);
    let scale = d.max_abs().max(1.0);
    let r = remainder_mod(d, m);
    let r1 = r.coeff(1);
    let r0 = r.coeff(0);
    let (a, b, c0, dd) = (r1.primal, r1.dual, r0.primal, r0.dual);
    if a.norm().sqrt() > tol * scale {
        let Some(inv) = r1.inverse() else {
            return vec![1.0];
        };
        let h = -(inv * r0);
        let p = h.primal;
        return vec![p.w - s, p.norm() - n, h.dual.w, p.dot(&h.dual)];
    }
    let mut out: Vec<f64> = c0.to_array().iter().map(|x| x / scale).collect();
    let nb = b.norm();
    out.push((b.conj() * dd).w / (scale * scale) + s * nb / (scale * scale));
    out.push((dd.norm() - n * nb) / (scale * scale));
    out
}
