//! Quaternions, dual quaternions and the action of the group of dual
//! quaternions with nonzero real norm on three-space.
//!
//! A dual quaternion `h = p + eps*q` with `p != 0` and
//! `p*conj(q) + q*conj(p) = 0` (the Study condition) acts on a point `x` by
//! `(p*x*conj(p) + p*conj(q) - q*conj(p)) / N(p)`. Real multiples act the
//! same way, so poses are projective points of the Study quadric.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::vec3::{self, Vec3};

/// Default absolute/relative tolerance for every "is zero" decision.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    pub const fn real(w: f64) -> Self {
        Quaternion::new(w, 0.0, 0.0, 0.0)
    }

    /// Pure quaternion with vector part `v`.
    pub fn pure(v: Vec3) -> Self {
        Quaternion::new(0.0, v[0], v[1], v[2])
    }

    pub fn vector(&self) -> Vec3 {
        [self.x, self.y, self.z]
    }

    pub fn conj(&self) -> Self {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }

    /// `q * conj(q)`, the squared Euclidean length of the coefficient vector.
    pub fn norm(&self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    /// Euclidean inner product of the coefficient vectors, the scalar part of
    /// `a * conj(b)`.
    pub fn dot(&self, other: &Quaternion) -> f64 {
        self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn inverse(&self) -> Option<Quaternion> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            None
        } else {
            Some(self.conj() * (1.0 / n))
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.w.abs().max(self.x.abs()).max(self.y.abs()).max(self.z.abs())
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Quaternion::new(a[0], a[1], a[2], a[3])
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|c| c.is_finite())
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, o: Quaternion) {
        *self = *self + o;
    }
}

impl SubAssign for Quaternion {
    fn sub_assign(&mut self, o: Quaternion) {
        *self = *self - o;
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, b: Quaternion) -> Quaternion {
        let a = self;
        Quaternion::new(
            a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    fn mul(self, s: f64) -> Quaternion {
        Quaternion::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i + {}j + {}k", self.w, self.x, self.y, self.z)
    }
}

impl Serialize for Quaternion {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_array().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Quaternion {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        <[f64; 4]>::deserialize(d).map(Quaternion::from_array)
    }
}

/// Dual number `re + eps*du` with `eps^2 = 0`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DualNumber {
    pub re: f64,
    pub du: f64,
}

impl DualNumber {
    pub const fn new(re: f64, du: f64) -> Self {
        DualNumber { re, du }
    }
}

impl Mul for DualNumber {
    type Output = DualNumber;
    fn mul(self, o: DualNumber) -> DualNumber {
        DualNumber::new(self.re * o.re, self.re * o.du + self.du * o.re)
    }
}

/// Dual quaternion `primal + eps*dual`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DualQuaternion {
    pub primal: Quaternion,
    pub dual: Quaternion,
}

impl DualQuaternion {
    pub const ZERO: DualQuaternion = DualQuaternion::new(Quaternion::ZERO, Quaternion::ZERO);
    pub const ONE: DualQuaternion = DualQuaternion::new(Quaternion::ONE, Quaternion::ZERO);

    pub const fn new(primal: Quaternion, dual: Quaternion) -> Self {
        DualQuaternion { primal, dual }
    }

    pub const fn real(r: f64) -> Self {
        DualQuaternion::new(Quaternion::real(r), Quaternion::ZERO)
    }

    pub fn from_primal(p: Quaternion) -> Self {
        DualQuaternion::new(p, Quaternion::ZERO)
    }

    /// `eps * q`.
    pub fn from_dual(q: Quaternion) -> Self {
        DualQuaternion::new(Quaternion::ZERO, q)
    }

    /// Displacement `x -> R x + translation` where `R` is the rotation of the
    /// quaternion `rotation` (need not be unit).
    pub fn from_rotation_translation(rotation: Quaternion, translation: Vec3) -> Self {
        let dual = Quaternion::pure(translation) * rotation * -0.5;
        DualQuaternion::new(rotation, dual)
    }

    pub fn conj(&self) -> Self {
        DualQuaternion::new(self.primal.conj(), self.dual.conj())
    }

    /// `h * conj(h)`: real part `N(p)`, dual part `p*conj(q) + q*conj(p)`
    /// (the Study condition defect, times two).
    pub fn norm(&self) -> DualNumber {
        DualNumber::new(self.primal.norm(), 2.0 * self.primal.dot(&self.dual))
    }

    /// Scalar part of `p*conj(q) + q*conj(p)`.
    pub fn study_defect(&self) -> f64 {
        2.0 * self.primal.dot(&self.dual)
    }

    pub fn inverse(&self) -> Option<DualQuaternion> {
        let pi = self.primal.inverse()?;
        Some(DualQuaternion::new(pi, -(pi * self.dual * pi)))
    }

    pub fn max_abs(&self) -> f64 {
        self.primal.max_abs().max(self.dual.max_abs())
    }

    pub fn to_array(&self) -> [f64; 8] {
        let p = self.primal;
        let q = self.dual;
        [p.w, p.x, p.y, p.z, q.w, q.x, q.y, q.z]
    }

    pub fn from_array(a: [f64; 8]) -> Self {
        DualQuaternion::new(
            Quaternion::new(a[0], a[1], a[2], a[3]),
            Quaternion::new(a[4], a[5], a[6], a[7]),
        )
    }

    pub fn is_finite(&self) -> bool {
        self.primal.is_finite() && self.dual.is_finite()
    }

    /// Maximum componentwise difference.
    pub fn distance(&self, other: &DualQuaternion) -> f64 {
        (*self - *other).max_abs()
    }

    /// Applies the displacement to `x`, failing unless the norm is a nonzero
    /// real number within `tol` (relative to `N(p)`).
    pub fn act_on_point(&self, x: Vec3, tol: f64) -> Result<Vec3> {
        let n = self.norm();
        let scale = n.re.max(f64::MIN_POSITIVE);
        if n.re <= 0.0 || !n.re.is_finite() || n.du.abs() > tol * scale.max(1.0) {
            return Err(Error::NotInGroup { re: n.re, du: n.du });
        }
        Ok(self.act_unchecked(x))
    }

    /// The displacement formula without the group membership check.
    pub fn act_unchecked(&self, x: Vec3) -> Vec3 {
        let p = self.primal;
        let q = self.dual;
        let img = p * Quaternion::pure(x) * p.conj() + p * q.conj() - q * p.conj();
        vec3::scale(img.vector(), 1.0 / p.norm())
    }

    /// Applies only the rotational part to a direction.
    pub fn rotate_vector(&self, v: Vec3) -> Vec3 {
        let p = self.primal;
        let img = p * Quaternion::pure(v) * p.conj();
        vec3::scale(img.vector(), 1.0 / p.norm())
    }
}

impl Add for DualQuaternion {
    type Output = DualQuaternion;
    fn add(self, o: DualQuaternion) -> DualQuaternion {
        DualQuaternion::new(self.primal + o.primal, self.dual + o.dual)
    }
}

impl Sub for DualQuaternion {
    type Output = DualQuaternion;
    fn sub(self, o: DualQuaternion) -> DualQuaternion {
        DualQuaternion::new(self.primal - o.primal, self.dual - o.dual)
    }
}

impl Neg for DualQuaternion {
    type Output = DualQuaternion;
    fn neg(self) -> DualQuaternion {
        DualQuaternion::new(-self.primal, -self.dual)
    }
}

impl AddAssign for DualQuaternion {
    fn add_assign(&mut self, o: DualQuaternion) {
        *self = *self + o;
    }
}

impl SubAssign for DualQuaternion {
    fn sub_assign(&mut self, o: DualQuaternion) {
        *self = *self - o;
    }
}

impl Mul for DualQuaternion {
    type Output = DualQuaternion;
    fn mul(self, o: DualQuaternion) -> DualQuaternion {
        DualQuaternion::new(self.primal * o.primal, self.primal * o.dual + self.dual * o.primal)
    }
}

impl Mul<f64> for DualQuaternion {
    type Output = DualQuaternion;
    fn mul(self, s: f64) -> DualQuaternion {
        DualQuaternion::new(self.primal * s, self.dual * s)
    }
}

impl From<Quaternion> for DualQuaternion {
    fn from(p: Quaternion) -> Self {
        DualQuaternion::from_primal(p)
    }
}

impl fmt::Display for DualQuaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + eps({})", self.primal, self.dual)
    }
}

impl Serialize for DualQuaternion {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_array().serialize(s)
    }
}

impl<'de> Deserialize<'de> for DualQuaternion {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        <[f64; 8]>::deserialize(d).map(DualQuaternion::from_array)
    }
}

/// A rigid body pose: a point of the Study quadric outside the exceptional
/// three-space, stored as its canonical representative.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Pose {
    rep: DualQuaternion,
}

impl Pose {
    pub fn rep(&self) -> DualQuaternion {
        self.rep
    }

    /// Largest componentwise difference of canonical representatives.
    pub fn distance(&self, other: &Pose) -> f64 {
        self.rep.distance(&other.rep)
    }
}

impl<'de> Deserialize<'de> for Pose {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let h = DualQuaternion::deserialize(d)?;
        normalize_pose(h, DEFAULT_TOL).map_err(serde::de::Error::custom)
    }
}

/// Canonical representative: unit primal norm, largest-magnitude primal
/// coefficient positive.
pub fn normalize_pose(h: DualQuaternion, tol: f64) -> Result<Pose> {
    if !h.is_finite() {
        return Err(Error::ExceptionalPoint);
    }
    let n = h.primal.norm();
    if n.sqrt() <= tol * h.max_abs().max(1.0) || n == 0.0 {
        return Err(Error::ExceptionalPoint);
    }
    let h = h * (1.0 / n.sqrt());
    let defect = h.study_defect();
    if defect.abs() > tol * h.max_abs().max(1.0) {
        return Err(Error::NotOnStudyQuadric(defect));
    }
    let p = h.primal.to_array();
    let lead = p
        .iter()
        .copied()
        .fold(0.0f64, |acc, c| if c.abs() > acc.abs() { c } else { acc });
    let rep = if lead < 0.0 { -h } else { h };
    Ok(Pose { rep })
}

/// Plücker line: unit direction and moment, `direction . moment = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PluckerLine {
    pub direction: Vec3,
    pub moment: Vec3,
}

impl PluckerLine {
    /// Point of the line closest to the origin.
    pub fn closest_point(&self) -> Vec3 {
        vec3::cross(self.direction, self.moment)
    }

    pub fn through(point: Vec3, direction: Vec3) -> Self {
        let d = vec3::normalize(direction);
        PluckerLine {
            direction: d,
            moment: vec3::cross(point, d),
        }
    }

    /// Distance from `x` to the line.
    pub fn distance_to(&self, x: Vec3) -> f64 {
        let c = self.closest_point();
        let r = vec3::sub(x, c);
        vec3::norm(vec3::cross(r, self.direction))
    }
}

/// Kinematic type of a monic linear motion polynomial `t - h`.
///
/// The rotation angle follows `phi = 2*arctan(t)`; this parametrization is a
/// convention.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Generator {
    Rotation { axis: PluckerLine },
    Translation { direction: Vec3 },
}

impl Generator {
    pub fn is_rotation(&self) -> bool {
        matches!(self, Generator::Rotation { .. })
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Generator::Rotation { .. } => "rotation",
            Generator::Translation { .. } => "translation",
        }
    }
}

/// Classifies `t - h` as a rotation about a fixed axis or a translation in a
/// fixed direction.
pub fn classify_generator(h: &DualQuaternion, tol: f64) -> Result<Generator> {
    if !h.is_finite() {
        return Err(Error::NotLinearMotion("non-finite coefficients".into()));
    }
    let scale = h.max_abs().max(1.0);
    let v = h.primal.vector();
    let u = h.dual.vector();
    if h.dual.w.abs() > tol * scale {
        return Err(Error::NotLinearMotion(format!(
            "dual scalar part {:e} is not zero",
            h.dual.w
        )));
    }
    let vn = vec3::norm(v);
    if vn > tol * scale {
        let defect = vec3::dot(v, u);
        if defect.abs() > tol * scale * scale {
            return Err(Error::NotLinearMotion(format!(
                "Study condition fails (defect {defect:e})"
            )));
        }
        // axis point closest to the origin: (u x v) / |v|^2
        let point = vec3::scale(vec3::cross(u, v), 1.0 / (vn * vn));
        Ok(Generator::Rotation {
            axis: PluckerLine::through(point, v),
        })
    } else {
        let un = vec3::norm(u);
        if un <= tol * scale {
            return Err(Error::NotLinearMotion("h is real; t - h is a real polynomial".into()));
        }
        Ok(Generator::Translation {
            direction: vec3::scale(u, 1.0 / un),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const I: Quaternion = Quaternion::I;
    const J: Quaternion = Quaternion::J;
    const K: Quaternion = Quaternion::K;

    fn close(a: Vec3, b: Vec3, tol: f64) -> bool {
        (0..3).all(|i| (a[i] - b[i]).abs() < tol)
    }

    #[test]
    fn quaternion_relations() {
        assert_eq!(I * J, K);
        assert_eq!(I * I, Quaternion::real(-1.0));
        assert_eq!(J * J, Quaternion::real(-1.0));
        assert_eq!(I * J * K, Quaternion::real(-1.0));
        assert_eq!((Quaternion::ONE + I) * (Quaternion::ONE - I), Quaternion::real(2.0));
        assert_eq!(J * I, -K);
    }

    #[test]
    fn dual_products() {
        let ei = DualQuaternion::from_dual(I);
        let ej = DualQuaternion::from_dual(J);
        assert_eq!(ei * ej, DualQuaternion::ZERO);
        let h = DualQuaternion::new(Quaternion::ONE, I);
        assert_eq!(h * h.conj(), DualQuaternion::ONE);
        assert_eq!(DualQuaternion::ONE * h, h);
    }

    #[test]
    fn norms() {
        let h = DualQuaternion::new(Quaternion::ONE, I);
        assert_eq!(h.norm(), DualNumber::new(1.0, 0.0));
        assert_eq!(DualQuaternion::from_primal(I).norm(), DualNumber::new(1.0, 0.0));
        let h = DualQuaternion::new(Quaternion::ONE, Quaternion::ONE);
        assert_eq!(h.norm(), DualNumber::new(1.0, 2.0));
    }

    #[test]
    fn dual_inverse() {
        let h = DualQuaternion::new(
            Quaternion::new(1.0, 2.0, -1.0, 0.5),
            Quaternion::new(0.3, 0.0, 1.0, -2.0),
        );
        let hi = h.inverse().unwrap();
        assert!((h * hi).distance(&DualQuaternion::ONE) < 1e-14);
        assert!((hi * h).distance(&DualQuaternion::ONE) < 1e-14);
        assert!(DualQuaternion::from_dual(I).inverse().is_none());
    }

    #[test]
    fn act_examples() {
        let h = DualQuaternion::from_primal(-I);
        assert!(close(
            h.act_on_point([0.0, 1.0, 0.0], DEFAULT_TOL).unwrap(),
            [0.0, -1.0, 0.0],
            1e-15
        ));
        let x = [0.3, -2.0, 5.0];
        assert!(close(
            DualQuaternion::ONE.act_on_point(x, DEFAULT_TOL).unwrap(),
            x,
            1e-15
        ));
        // t0 - eps*i translates by 2/t0 along i
        let t0 = 2.5;
        let h = DualQuaternion::new(Quaternion::real(t0), -I);
        let y = h.act_on_point(x, DEFAULT_TOL).unwrap();
        assert!(close(y, [x[0] + 2.0 / t0, x[1], x[2]], 1e-14));
    }

    #[test]
    fn act_rejects_non_group_elements() {
        let h = DualQuaternion::new(Quaternion::ONE, Quaternion::ONE);
        assert!(matches!(
            h.act_on_point([0.0; 3], DEFAULT_TOL),
            Err(Error::NotInGroup { .. })
        ));
        let h = DualQuaternion::from_dual(I);
        assert!(h.act_on_point([0.0; 3], DEFAULT_TOL).is_err());
    }

    #[test]
    fn rotation_translation_constructor() {
        let r = Quaternion::new(0.8, 0.1, -0.3, 0.2);
        let tr = [1.0, -2.0, 0.5];
        let h = DualQuaternion::from_rotation_translation(r, tr);
        assert!(h.study_defect().abs() < 1e-15);
        let y = h.act_on_point([0.0; 3], DEFAULT_TOL).unwrap();
        assert!(close(y, tr, 1e-14));
    }

    #[test]
    fn classify_examples() {
        match classify_generator(&DualQuaternion::from_primal(I), DEFAULT_TOL).unwrap() {
            Generator::Rotation { axis } => {
                assert!(close(axis.direction, [1.0, 0.0, 0.0], 1e-15));
                assert!(close(axis.moment, [0.0; 3], 1e-15));
            }
            g => panic!("unexpected {g:?}"),
        }
        match classify_generator(&DualQuaternion::from_dual(I), DEFAULT_TOL).unwrap() {
            Generator::Translation { direction } => assert!(close(direction, [1.0, 0.0, 0.0], 1e-15)),
            g => panic!("unexpected {g:?}"),
        }
        assert!(classify_generator(&DualQuaternion::real(2.0), DEFAULT_TOL).is_err());
        // dual scalar part nonzero
        let h = DualQuaternion::new(I, Quaternion::ONE);
        assert!(classify_generator(&h, DEFAULT_TOL).is_err());
        // Study condition violated
        let h = DualQuaternion::new(I, I);
        assert!(classify_generator(&h, DEFAULT_TOL).is_err());
    }

    /// Fixed points of the sampled displacements, found independently by
    /// solving (R - 1) x = -translation in least squares, must lie on the
    /// reported axis.
    #[test]
    fn classified_axis_is_fixed_by_the_motion() {
        let (a, f, g) = (1.5, 0.7, -0.4);
        let h = DualQuaternion::new(K, I * -f + J * -(a + g));
        let axis = match classify_generator(&h, DEFAULT_TOL).unwrap() {
            Generator::Rotation { axis } => axis,
            g => panic!("unexpected {g:?}"),
        };
        assert!(close(axis.direction, [0.0, 0.0, 1.0], 1e-15) || close(axis.direction, [0.0, 0.0, -1.0], 1e-15));
        for &t0 in &[-3.0, -0.5, 0.25, 1.0, 4.0] {
            let disp = DualQuaternion::real(t0) - h;
            // fixed point in the plane z = 0: solve x = act(x) via two iterations of the 2x2 system
            let o = disp.act_on_point([0.0; 3], DEFAULT_TOL).unwrap();
            let ex = vec3::sub(disp.act_on_point([1.0, 0.0, 0.0], DEFAULT_TOL).unwrap(), o);
            let ey = vec3::sub(disp.act_on_point([0.0, 1.0, 0.0], DEFAULT_TOL).unwrap(), o);
            // (M - I) x = -o for the 2x2 upper-left block
            let (m00, m01, m10, m11) = (ex[0] - 1.0, ey[0], ex[1], ey[1] - 1.0);
            let det = m00 * m11 - m01 * m10;
            let x = (-o[0] * m11 + o[1] * m01) / det;
            let y = (-o[1] * m00 + o[0] * m10) / det;
            assert!(axis.distance_to([x, y, 0.0]) < 1e-12);
            for s in [-2.0, 0.0, 3.0] {
                let p = vec3::add(axis.closest_point(), vec3::scale(axis.direction, s));
                assert!(close(disp.act_on_point(p, DEFAULT_TOL).unwrap(), p, 1e-12));
            }
        }
    }

    #[test]
    fn pose_normalization() {
        let p = normalize_pose(DualQuaternion::real(2.0), DEFAULT_TOL).unwrap();
        assert_eq!(p.rep(), DualQuaternion::ONE);
        let p = normalize_pose(DualQuaternion::real(-1.0), DEFAULT_TOL).unwrap();
        assert_eq!(p.rep(), DualQuaternion::ONE);
        let h = DualQuaternion::new(I, J);
        assert_eq!(normalize_pose(h, DEFAULT_TOL).unwrap().rep(), h);
        assert_eq!(
            normalize_pose(DualQuaternion::from_dual(I), DEFAULT_TOL),
            Err(Error::ExceptionalPoint)
        );
        assert!(matches!(
            normalize_pose(DualQuaternion::new(Quaternion::ONE, Quaternion::ONE), DEFAULT_TOL),
            Err(Error::NotOnStudyQuadric(_))
        ));
    }

    #[test]
    fn serde_layout() {
        let h = DualQuaternion::from_array([1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0]);
        let s = serde_json::to_string(&h).unwrap();
        assert_eq!(s, "[1.0,2.0,3.0,4.0,5.0,6.0,7.0,8.0]");
        let back: DualQuaternion = serde_json::from_str(&s).unwrap();
        assert_eq!(back, h);
        assert!(serde_json::from_str::<DualQuaternion>("[1,2,3]").is_err());
    }
}
