//! Three-pose Bennett synthesis, Bennett flips, and revolute linkages that
//! trace bounded rational curves.

use serde::{Deserialize, Serialize};

use crate::dualquat::{DualQuaternion, Pose, Quaternion};
use crate::error::{Error, Result};
use crate::factorization::{
    all_factorizations, factor_bounded_with_multiplier, linear_zero, FactorOptions, FactorStatus, Factorization,
};
use crate::linkage::{assemble, Chain, Linkage, Tracer};
use crate::poly::{max_real_factor, real_roots_complex, validate_motion, DQPoly, MotionPolynomial, RealPoly};
use crate::vec3;

/// Symmetric bilinear form whose quadric is the Study quadric:
/// `Q(a, b) = p_a . q_b + q_a . p_b`, so `Q(a, a)` is the Study defect.
pub fn study_form(a: &DualQuaternion, b: &DualQuaternion) -> f64 {
    a.primal.dot(&b.dual) + a.dual.dot(&b.primal)
}

/// Conic through three poses on the Study quadric.
#[derive(Clone, Debug, PartialEq)]
pub struct PoseConic {
    /// `C(t)` with `C(0) ~ p0`, `C(1) ~ p1` and leading coefficient `~ p2`.
    pub raw: DQPoly,
    /// Monic motion `C * lead(C)^-1`.
    pub motion: MotionPolynomial,
    /// `lead(C)`; `motion(t) * frame` is proportional to `raw(t)`.
    pub frame: DualQuaternion,
}

/// Interpolates three poses at the parameters `0`, `1` and infinity by a
/// quadratic curve on the Study quadric.
pub fn interpolate_three_poses(p0: &Pose, p1: &Pose, p2: &Pose, tol: f64) -> Result<PoseConic> {
    let [a, b, c] = [p0.rep(), p1.rep(), p2.rep()];
    let thresh = tol.sqrt();
    let form = |x: &DualQuaternion, y: &DualQuaternion, name: &str| -> Result<f64> {
        let q = study_form(x, y);
        let scale = (1.0 + x.max_abs()) * (1.0 + y.max_abs());
        if q.abs() <= thresh * scale {
            Err(Error::DegeneratePoses(format!(
                "{name} = {q:e}: the poses are not in general position"
            )))
        } else {
            Ok(q)
        }
    };
    let q01 = form(&a, &b, "Q01")?;
    let q02 = form(&a, &c, "Q02")?;
    let q12 = form(&b, &c, "Q12")?;
    // C = Q12 (1 - t) p0 + Q02 t p1 + Q01 t (t - 1) p2
    let raw = DQPoly::new(vec![a * q12, b * q02 - a * q12 - c * q01, c * q01]);
    let frame = raw.leading();
    let inv = frame
        .inverse()
        .ok_or_else(|| Error::DegeneratePoses("leading coefficient not invertible".into()))?;
    let monic = raw.right_mul(inv);
    let mut coeffs = monic.coeffs().to_vec();
    if let Some(last) = coeffs.last_mut() {
        *last = DualQuaternion::ONE;
    }
    let motion = validate_motion(&DQPoly::new(coeffs), tol).map_err(|e| Error::DegeneratePoses(e.to_string()))?;
    Ok(PoseConic { raw, motion, frame })
}

/// Bennett linkage from the two factorizations of a quadratic motion.
#[derive(Clone, Debug, PartialEq)]
pub struct BennettLinkage {
    pub fixed_axes: (DualQuaternion, DualQuaternion),
    pub moving_axes: (DualQuaternion, DualQuaternion),
    pub coupler_motion: MotionPolynomial,
    /// Frame on the coupler that visits the three poses.
    pub probe_frame: DualQuaternion,
}

impl BennettLinkage {
    /// Four-bar loop with joints `h1, h2` and `k1, k2`; the ground link
    /// carries the fixed axes.
    pub fn linkage(&self, tol: f64) -> Result<Linkage> {
        let left: Chain = vec![("h1".into(), self.fixed_axes.0), ("h2".into(), self.moving_axes.0)];
        let right: Chain = vec![("k1".into(), self.fixed_axes.1), ("k2".into(), self.moving_axes.1)];
        assemble(&[(left, right)], tol)
    }
}

/// Three-pose synthesis of a Bennett linkage.
pub fn synthesize_bennett(p0: &Pose, p1: &Pose, p2: &Pose, tol: f64) -> Result<BennettLinkage> {
    let conic = interpolate_three_poses(p0, p1, p2, tol)?;
    let g = max_real_factor(&conic.motion.poly().primal());
    if g.degree() != Some(0) {
        return Err(Error::NonGenericConic(format!(
            "primal part has the real factor {}",
            g.pretty()
        )));
    }
    let fs = all_factorizations(&conic.motion, tol).map_err(|e| match e {
        Error::NonGeneric(s) | Error::ExceptionalCase(s) => Error::NonGenericConic(s),
        other => other,
    })?;
    if fs.len() < 2 {
        return Err(Error::NonGenericConic("the conic has a single factorization".into()));
    }
    let (h, k) = (&fs[0].factors, &fs[1].factors);
    Ok(BennettLinkage {
        fixed_axes: (h[0], k[0]),
        moving_axes: (h[1], k[1]),
        coupler_motion: conic.motion,
        probe_frame: conic.frame,
    })
}

/// Result of a Bennett flip: `(t - m_prev)(t - h) = (t - k)(t - m)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlipResult {
    pub k: DualQuaternion,
    pub m: DualQuaternion,
}

fn norm_quadratic(h: &DualQuaternion) -> RealPoly {
    RealPoly::quadratic(h.primal.w, h.primal.norm())
}

/// Refactors `(t - m_prev)(t - h)` with the right factor taking the norm of
/// `t - m_prev`.
pub fn bennett_flip(m_prev: &DualQuaternion, h: &DualQuaternion, tol: f64) -> Result<FlipResult> {
    let nm = norm_quadratic(m_prev);
    let nh = norm_quadratic(h);
    if nm.distance(&nh) <= 1e-7 * nm.max_abs().max(nh.max_abs()) {
        return Err(Error::DegenerateFlip(format!("both factors have norm {}", nm.pretty())));
    }
    let c = &DQPoly::linear(*m_prev) * &DQPoly::linear(*h);
    let (_, r) = c.right_divide(&nm.to_dq())?;
    let scale = c.max_abs().max(1.0);
    let m = linear_zero(&r.scale(1.0 / scale), tol).map_err(|e| Error::DegenerateFlip(e.to_string()))?;
    let (q, _) = c.right_divide(&DQPoly::linear(m))?;
    Ok(FlipResult { k: -q.coeff(0), m })
}

/// Curvilinear translation along the rational curve `v / w`:
/// `C = w - eps v / 2`, made monic.
pub fn translation_motion_from_curve(v: &[RealPoly; 3], w: &RealPoly, tol: f64) -> Result<MotionPolynomial> {
    let dw = w
        .degree()
        .ok_or_else(|| Error::InvalidCurve("denominator is zero".into()))?;
    if v.iter().any(|c| c.degree().is_some_and(|d| d > dw)) {
        return Err(Error::InvalidCurve(
            "numerator degree exceeds denominator degree".into(),
        ));
    }
    if !w.is_finite() || v.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidCurve("non-finite coefficient".into()));
    }
    if dw > 0 && real_roots_complex(w).iter().any(|z| z.im == 0.0) {
        return Err(Error::UnboundedCurve);
    }
    let coeffs = (0..=dw)
        .map(|i| {
            DualQuaternion::new(
                Quaternion::real(w.coeff(i)),
                Quaternion::new(0.0, -0.5 * v[0].coeff(i), -0.5 * v[1].coeff(i), -0.5 * v[2].coeff(i)),
            )
        })
        .collect();
    let c = DQPoly::new(coeffs).make_monic_left()?;
    validate_motion(&c, tol)
}

/// Default extra joint: rotation about the `k` axis through the origin with
/// norm `t^2 - 2t + 2`.
pub fn default_m0() -> DualQuaternion {
    DualQuaternion::from_primal(Quaternion::new(1.0, 0.0, 0.0, 1.0))
}

/// Linkage tracing a bounded rational curve, built from a rotation
/// factorization by a chain of Bennett flips.
#[derive(Clone, Debug, PartialEq)]
pub struct KempeLinkage {
    pub linkage: Linkage,
    pub factorization: Factorization,
    pub multiplier: RealPoly,
    /// Joint ids `[h_i, m_i, k_i, m_(i-1)]` of each four-bar cell.
    pub cells: Vec<[String; 4]>,
    pub diagnostics: Vec<String>,
}

/// Builds a revolute linkage whose tracer link performs the curvilinear
/// translation along `v / w`; the origin of the tracer link draws the curve.
///
/// The joints are `m_0, h_i, k_i, m_i` with
/// `(t - m_(i-1))(t - h_i) = (t - k_i)(t - m_i)`. The ground link carries
/// `m_0` and `h_1`; the tracer link carries `h_n` and `m_n`.
pub fn kempe_linkage_for_curve(
    v: &[RealPoly; 3],
    w: &RealPoly,
    m0: Option<DualQuaternion>,
    opts: &FactorOptions,
) -> Result<KempeLinkage> {
    let c = translation_motion_from_curve(v, w, opts.tol)?;
    let report = factor_bounded_with_multiplier(&c, None, opts)?;
    if report.status != FactorStatus::Success {
        return Err(Error::NoFactorization(report.diagnostics.join("; ")));
    }
    let f = report.factorizations[0].clone();
    let m0 = m0.unwrap_or_else(default_m0);
    let hs = &f.factors;
    let mut ms = vec![m0];
    let mut ks = Vec::with_capacity(hs.len());
    for h in hs {
        let flip = bennett_flip(ms.last().unwrap_or(&m0), h, opts.tol)?;
        ks.push(flip.k);
        ms.push(flip.m);
    }
    let n = hs.len();
    let loops: Vec<(Chain, Chain)> = (1..=n)
        .map(|i| {
            let mut left: Chain = vec![("m0".into(), m0)];
            left.extend((1..=i).map(|j| (format!("h{j}"), hs[j - 1])));
            let mut right: Chain = (1..=i).map(|j| (format!("k{j}"), ks[j - 1])).collect();
            right.push((format!("m{i}"), ms[i]));
            (left, right)
        })
        .collect();
    let mut linkage = assemble(&loops, opts.tol)?;
    let find = |l: &Linkage, a: &str, b: &str| {
        l.link_containing(&[a, b])
            .map(|x| x.id.clone())
            .ok_or_else(|| Error::InvalidLinkGraph(format!("no link joins {a} and {b}")))
    };
    linkage.ground = find(&linkage, "m0", "h1")?;
    linkage.tracer = Some(Tracer {
        link: find(&linkage, &format!("h{n}"), &format!("m{n}"))?,
        point: [0.0; 3],
    });
    linkage.kinematics()?;
    let cells = (1..=n)
        .map(|i| [format!("h{i}"), format!("m{i}"), format!("k{i}"), format!("m{}", i - 1)])
        .collect();
    let mut diagnostics = report.diagnostics;
    diagnostics.push(format!(
        "{} links, {} joints, {} four-bar cells",
        linkage.links.len(),
        linkage.joints.len(),
        n
    ));
    Ok(KempeLinkage {
        linkage,
        factorization: f,
        multiplier: report.multiplier,
        cells,
        diagnostics,
    })
}

/// Closed 6R loop from two factorizations of a generic cubic.
#[derive(Clone, Debug, PartialEq)]
pub struct SixBar {
    pub linkage: Linkage,
    pub chains: (Factorization, Factorization),
    pub diagnostics: Vec<String>,
}

fn lex_cmp(a: &Factorization, b: &Factorization) -> std::cmp::Ordering {
    let fa = a.factors.iter().flat_map(|h| h.to_array());
    let fb = b.factors.iter().flat_map(|h| h.to_array());
    fa.zip(fb)
        .map(|(x, y)| x.total_cmp(&y))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}

/// Pairs the lexicographically first two distinct factorizations of a
/// generic cubic into a six-bar loop.
pub fn six_bar_from_cubic(c: &MotionPolynomial, tol: f64) -> Result<SixBar> {
    if c.degree() != 3 {
        return Err(Error::InvalidLinkGraph(format!(
            "expected a cubic, got degree {}",
            c.degree()
        )));
    }
    let mut fs = all_factorizations(c, tol)?;
    if fs.len() < 2 {
        return Err(Error::InsufficientFactorizations(fs.len()));
    }
    fs.sort_by(lex_cmp);
    let (a, b) = (fs[0].clone(), fs[1].clone());
    let name = |p: &str, f: &Factorization| -> Chain {
        f.factors
            .iter()
            .enumerate()
            .map(|(i, h)| (format!("{p}{}", i + 1), *h))
            .collect()
    };
    let linkage = assemble(&[(name("h", &a), name("k", &b))], tol)?;
    let mut diagnostics = Vec::new();
    if let Some(p) = common_point(&linkage) {
        diagnostics.push(format!(
            "all axes pass through ({:.6}, {:.6}, {:.6}): spherical linkage",
            p[0], p[1], p[2]
        ));
    }
    Ok(SixBar {
        linkage,
        chains: (a, b),
        diagnostics,
    })
}

/// Point common to all rotation axes, if any (least squares, then checked).
fn common_point(l: &Linkage) -> Option<vec3::Vec3> {
    use nalgebra::{Matrix3, Vector3};
    let mut a = Matrix3::<f64>::zeros();
    let mut rhs = Vector3::<f64>::zeros();
    let mut axes = Vec::new();
    for j in &l.joints {
        let v = j.generator.primal.vector();
        let vv = vec3::dot(v, v);
        if vv == 0.0 {
            return None;
        }
        let d = vec3::normalize(v);
        let p = vec3::scale(vec3::cross(j.generator.dual.vector(), v), 1.0 / vv);
        let dv = Vector3::from(d);
        let proj = Matrix3::identity() - dv * dv.transpose();
        a += proj;
        rhs += proj * Vector3::from(p);
        axes.push((p, d));
    }
    let x = a.lu().solve(&rhs)?;
    let x = [x[0], x[1], x[2]];
    axes.iter()
        .all(|(p, d)| {
            let r = vec3::sub(x, *p);
            vec3::norm(vec3::cross(r, *d)) < 1e-8 * (1.0 + vec3::norm(x))
        })
        .then_some(x)
}
