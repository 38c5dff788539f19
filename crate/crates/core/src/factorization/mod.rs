//! Decomposition of motion polynomials into monic linear factors.
//!
//! Generic polynomials (no real factor in the primal part) are handled by
//! repeated remainder computation; [`factor_with_backtracking`] covers the
//! exceptional cases, and [`factor_bounded_with_multiplier`] searches for a
//! real multiplier that makes a bounded motion factorable into rotations.

mod lookahead;
mod search;
mod solve;

use serde::{Deserialize, Serialize};

use crate::dualquat::{classify_generator, DualQuaternion, Generator, Quaternion};
use crate::error::{Error, Result};
use crate::poly::{
    max_real_factor, quadratic_factors, real_roots_complex, DQPoly, MotionPolynomial, QuadraticFactors, QuatPoly,
    RealPoly,
};

pub use search::{
    factor_bounded_with_multiplier, factor_with_backtracking, is_bounded, multiplier_candidates,
    right_multiply_and_factor,
};
pub use solve::{linear_zero, solve_linear_factor, FamilyConstraint, LinearSolutionSet};

/// Ordered linear factors `h_1 .. h_n` with
/// `(t - h_1) ... (t - h_n) = C * multiplier`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Factorization {
    pub factors: Vec<DualQuaternion>,
    #[serde(with = "coeff_list", default = "RealPoly::one")]
    pub multiplier: RealPoly,
}

impl Factorization {
    pub fn new(factors: Vec<DualQuaternion>) -> Self {
        Factorization {
            factors,
            multiplier: RealPoly::one(),
        }
    }

    /// `(t - h_1) ... (t - h_n)`.
    pub fn product(&self) -> DQPoly {
        DQPoly::from_linear_factors(&self.factors)
    }

    /// Largest coefficient error of the product against `c * multiplier`.
    pub fn residual(&self, c: &DQPoly) -> f64 {
        self.product().distance(&c.mul_real(&self.multiplier))
    }

    /// Kinematic type of every factor.
    pub fn generators(&self, tol: f64) -> Result<Vec<Generator>> {
        self.factors.iter().map(|h| classify_generator(h, tol)).collect()
    }

    /// Norm quadratics `N(t - h_i)`.
    pub fn norms(&self) -> Vec<RealPoly> {
        self.factors
            .iter()
            .map(|h| RealPoly::quadratic(h.primal.w, h.primal.norm()))
            .collect()
    }

    /// Factor lists agree componentwise within `tol`.
    pub fn matches(&self, other: &Factorization, tol: f64) -> bool {
        self.factors.len() == other.factors.len()
            && self
                .factors
                .iter()
                .zip(&other.factors)
                .all(|(a, b)| a.distance(b) <= tol)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FactorStatus {
    Success,
    NoFactorization,
    NeedsMultiplier,
}

/// Outcome of a factorization search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorizationReport {
    pub status: FactorStatus,
    #[serde(with = "coeff_list", default = "RealPoly::one")]
    pub multiplier: RealPoly,
    pub factorizations: Vec<Factorization>,
    #[serde(default)]
    pub diagnostics: Vec<String>,
}

/// Search controls.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorOptions {
    pub tol: f64,
    /// Maximal number of visited search nodes.
    pub budget: usize,
    /// Random family members tried besides the canonical one.
    pub family_samples: usize,
    pub seed: u64,
    /// Stop after this many distinct factorizations.
    pub max_results: usize,
    /// Reject translation factors.
    pub rotations_only: bool,
}

impl Default for FactorOptions {
    fn default() -> Self {
        FactorOptions {
            tol: crate::dualquat::DEFAULT_TOL,
            budget: 10_000,
            family_samples: 3,
            seed: 0,
            max_results: 128,
            rotations_only: false,
        }
    }
}

/// Factorizations equal within this componentwise distance are merged.
pub const DEDUP_TOL: f64 = 1e-7;

mod coeff_list {
    use crate::poly::RealPoly;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(p: &RealPoly, s: S) -> Result<S::Ok, S::Error> {
        p.coeffs().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<RealPoly, D::Error> {
        let c = Vec::<f64>::deserialize(d)?;
        if c.iter().any(|x| !x.is_finite()) {
            return Err(serde::de::Error::custom("non-finite multiplier coefficient"));
        }
        Ok(RealPoly::new(c))
    }
}

fn sort_quadratics(v: &mut [RealPoly]) {
    v.sort_by(|a, b| {
        a.coeff(1)
            .total_cmp(&b.coeff(1))
            .then(a.coeff(0).total_cmp(&b.coeff(0)))
    });
}

/// Real norm polynomial `p * conj(p)` of a quaternion polynomial.
pub fn quat_norm(p: &QuatPoly) -> RealPoly {
    (p * &p.conj()).map(|q| q.w)
}

/// Monic quadratic factors of the norm of `p` (the primal part of a motion
/// polynomial). A real factor `g` of `p` is split off first so that its
/// roots, which appear with doubled multiplicity in the norm, come from `g`
/// directly.
pub fn norm_quadratic_factors(p: &QuatPoly) -> Result<QuadraticFactors> {
    let n = quat_norm(p);
    let g = max_real_factor(p);
    if g.degree().unwrap_or(0) == 0 {
        return quadratic_factors(&n);
    }
    let Ok((rest, rem)) = p.right_divide(&g.to_quat()) else {
        return quadratic_factors(&n);
    };
    if rem.max_abs() > 1e-8 * p.max_abs().max(1.0) {
        return quadratic_factors(&n);
    }
    let mut inner = quadratic_factors(&quat_norm(&rest))?;
    for z in real_roots_complex(&g) {
        if z.im == 0.0 {
            inner.factors.push(RealPoly::quadratic(z.re, z.re * z.re));
        } else if z.im > 0.0 {
            let f = RealPoly::quadratic(z.re, z.norm_sqr());
            inner.factors.push(f.clone());
            inner.factors.push(f);
        }
    }
    sort_quadratics(&mut inner.factors);
    Ok(inner)
}

fn check_monic(c: &DQPoly) -> Result<()> {
    if c.is_monic() {
        Ok(())
    } else {
        Err(Error::NotMonic)
    }
}

fn check_generic(c: &DQPoly) -> Result<()> {
    let g = max_real_factor(&c.primal());
    match g.degree() {
        Some(0) => Ok(()),
        _ => Err(Error::NonGeneric(g.pretty())),
    }
}

/// Newton polish of `factors` so that their product matches `target`
/// (monic, degree `factors.len()`), keeping every factor a linear motion
/// polynomial. Ill-conditioned right zeros (nearly real norm quadratics)
/// otherwise lose several digits.
pub(crate) fn polish(factors: &[DualQuaternion], target: &DQPoly) -> Vec<DualQuaternion> {
    let n = factors.len();
    let scale = 1.0 + target.max_abs();
    let unpack = |x: &[f64]| -> Vec<DualQuaternion> {
        x.chunks(8)
            .map(|c| DualQuaternion::from_array(c.try_into().expect("chunk of 8")))
            .collect()
    };
    let start = DQPoly::from_linear_factors(factors).distance(target);
    if start <= 1e-13 * scale || n == 0 {
        return factors.to_vec();
    }
    let f = |x: &[f64]| -> Vec<f64> {
        let hs = unpack(x);
        let p = DQPoly::from_linear_factors(&hs);
        let mut r = Vec::with_capacity(10 * n);
        for i in 0..n {
            let d = p.coeff(i) - target.coeff(i);
            r.extend_from_slice(&d.to_array());
        }
        for h in &hs {
            r.push(h.dual.w);
            r.push(h.primal.dot(&h.dual));
        }
        r
    };
    let x0: Vec<f64> = factors.iter().flat_map(|h| h.to_array()).collect();
    let x = lookahead::refine(&f, &x0, 8);
    let out = unpack(&x);
    if DQPoly::from_linear_factors(&out).distance(target) < start {
        out
    } else {
        factors.to_vec()
    }
}

/// Pulls right factors with the norm quadratics in `order` (first entry is
/// the rightmost factor).
pub fn factor_generic(c: &MotionPolynomial, order: &[RealPoly], tol: f64) -> Result<Factorization> {
    let poly = c.poly();
    check_monic(poly)?;
    check_generic(poly)?;
    if order.len() != c.degree() {
        return Err(Error::ExceptionalCase(format!(
            "{} norm factors supplied for degree {}",
            order.len(),
            c.degree()
        )));
    }
    let ctol = solve::consistency_tol(tol);
    let mut d = poly.clone();
    let mut factors = Vec::with_capacity(order.len());
    for m in order {
        let scale = d.max_abs().max(1.0);
        let r = solve::remainder_mod(&d, m).scale(1.0 / scale);
        let h = linear_zero(&r, tol).map_err(|e| Error::ExceptionalCase(e.to_string()))?;
        let (s, n) = solve::quadratic_params(m);
        if !solve::consistent(&h, s, n, ctol) {
            return Err(Error::ExceptionalCase(format!(
                "zero {h} does not have norm {}",
                m.pretty()
            )));
        }
        let (q, _) = d.right_divide(&DQPoly::linear(h))?;
        factors.push(h);
        d = q;
    }
    factors.reverse();
    Ok(Factorization::new(polish(&factors, poly)))
}

/// Distinct orderings of a multiset, given as class labels.
fn distinct_permutations(labels: &[usize]) -> Vec<Vec<usize>> {
    fn rec(counts: &mut Vec<usize>, cur: &mut Vec<usize>, len: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for k in 0..counts.len() {
            if counts[k] > 0 {
                counts[k] -= 1;
                cur.push(k);
                rec(counts, cur, len, out);
                cur.pop();
                counts[k] += 1;
            }
        }
    }
    let classes = labels.iter().copied().max().map_or(0, |m| m + 1);
    let mut counts = vec![0; classes];
    for &l in labels {
        counts[l] += 1;
    }
    let mut out = Vec::new();
    rec(&mut counts, &mut Vec::new(), labels.len(), &mut out);
    out
}

/// Groups equal quadratics; returns representatives and class labels.
pub(crate) fn classify_quadratics(f: &[RealPoly], tol: f64) -> (Vec<RealPoly>, Vec<usize>) {
    let mut reps: Vec<RealPoly> = Vec::new();
    let mut labels = Vec::with_capacity(f.len());
    for q in f {
        let scale = q.max_abs().max(1.0);
        match reps.iter().position(|r| r.distance(q) <= tol * scale) {
            Some(i) => labels.push(i),
            None => {
                labels.push(reps.len());
                reps.push(q.clone());
            }
        }
    }
    (reps, labels)
}

/// Every factorization of a generic monic motion polynomial, one per
/// distinct ordering of its norm quadratics.
pub fn all_factorizations(c: &MotionPolynomial, tol: f64) -> Result<Vec<Factorization>> {
    check_monic(c.poly())?;
    check_generic(c.poly())?;
    let nf = norm_quadratic_factors(&c.poly().primal())?;
    let (reps, labels) = classify_quadratics(&nf.factors, 1e-7);
    let mut out: Vec<Factorization> = Vec::new();
    for perm in distinct_permutations(&labels) {
        let order: Vec<RealPoly> = perm.iter().map(|&k| reps[k].clone()).collect();
        let f = factor_generic(c, &order, tol)?;
        if !out.iter().any(|g| g.matches(&f, DEDUP_TOL)) {
            out.push(f);
        }
    }
    Ok(out)
}

/// Linear factorization of a monic quaternion polynomial. A quadratic that
/// divides the current quotient is split as `(t - u)(t - conj(u))` with
/// `u = s + sqrt(n - s^2) k`.
pub fn factor_quaternion(p: &QuatPoly, tol: f64) -> Result<Factorization> {
    if !p.is_monic() {
        return Err(Error::NotMonic);
    }
    let nf = norm_quadratic_factors(p)?;
    let mut d = p.clone();
    let mut factors = Vec::with_capacity(nf.factors.len());
    for m in &nf.factors {
        let (s, n) = solve::quadratic_params(m);
        let scale = d.max_abs().max(1.0);
        let r = match d.right_divide(&m.to_quat()) {
            Ok((_, r)) => r,
            Err(_) => d.clone(),
        };
        let r1 = r.coeff(1);
        let h = if r1.norm().sqrt() > tol.sqrt() * scale {
            let inv = r1.inverse().ok_or(Error::NonInvertibleLeading)?;
            -(inv * r.coeff(0))
        } else {
            Quaternion::new(s, 0.0, 0.0, -(n - s * s).max(0.0).sqrt())
        };
        let (q, _) = d.right_divide(&QuatPoly::linear(h))?;
        factors.push(DualQuaternion::from_primal(h));
        d = q;
    }
    factors.reverse();
    Ok(Factorization::new(polish(&factors, &p.to_dq())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dualquat::DEFAULT_TOL;
    use crate::poly::validate_motion;

    const I: Quaternion = Quaternion::I;
    const J: Quaternion = Quaternion::J;
    const K: Quaternion = Quaternion::K;

    fn dq(p: Quaternion) -> DualQuaternion {
        DualQuaternion::from_primal(p)
    }

    fn motion(hs: &[DualQuaternion]) -> MotionPolynomial {
        validate_motion(&DQPoly::from_linear_factors(hs), DEFAULT_TOL).unwrap()
    }

    #[test]
    fn generic_quadratic_examples() {
        let c = motion(&[dq(I), dq(J)]);
        let m = RealPoly::quadratic(0.0, 1.0);
        let f = factor_generic(&c, &[m.clone(), m.clone()], DEFAULT_TOL).unwrap();
        assert!(f.matches(&Factorization::new(vec![dq(I), dq(J)]), 1e-12));

        let c2 = motion(&[dq(I), dq(I)]);
        let f = factor_generic(&c2, &[m.clone(), m], DEFAULT_TOL).unwrap();
        assert!(f.matches(&Factorization::new(vec![dq(I), dq(I)]), 1e-12));
        assert_eq!(all_factorizations(&c2, DEFAULT_TOL).unwrap().len(), 1);
    }

    #[test]
    fn two_factorizations_of_generic_quadratic() {
        let h1 = DualQuaternion::new(
            Quaternion::new(1.0, 2.0, 0.0, 1.0),
            Quaternion::new(0.0, 1.0, 0.0, -2.0),
        );
        let h2 = DualQuaternion::new(
            Quaternion::new(-0.5, 0.0, 1.0, 0.0),
            Quaternion::new(0.0, 3.0, 0.0, 1.0),
        );
        let c = motion(&[h1, h2]);
        let all = all_factorizations(&c, DEFAULT_TOL).unwrap();
        assert_eq!(all.len(), 2);
        assert!(all.iter().any(|f| f.matches(&Factorization::new(vec![h1, h2]), 1e-9)));
        for f in &all {
            assert!(f.residual(c.poly()) < 1e-10);
            assert!(f.generators(DEFAULT_TOL).unwrap().iter().all(|g| g.is_rotation()));
        }
    }

    #[test]
    fn non_generic_input_is_rejected() {
        let c = motion(&[dq(Quaternion::ONE + I * 0.0 - K * 0.0), dq(J)]);
        assert!(matches!(all_factorizations(&c, DEFAULT_TOL), Err(Error::NonGeneric(_))));
    }

    #[test]
    fn quaternion_examples() {
        // t^2 - (i + j) t + k
        let p = QuatPoly::new(vec![K, -(I + J), Quaternion::ONE]);
        let f = factor_quaternion(&p, DEFAULT_TOL).unwrap();
        assert!(f.matches(&Factorization::new(vec![dq(I), dq(J)]), 1e-12));

        let p = QuatPoly::new(vec![Quaternion::ONE, Quaternion::ZERO, Quaternion::ONE]);
        let f = factor_quaternion(&p, DEFAULT_TOL).unwrap();
        assert!(f.matches(&Factorization::new(vec![dq(K), dq(-K)]), 1e-12));
    }

    #[test]
    fn norm_factors_split_off_real_factor() {
        // (t - 1)(t - j): norm (t - 1)^2 (t^2 + 1)
        let p = &QuatPoly::linear(Quaternion::ONE) * &QuatPoly::linear(J);
        let nf = norm_quadratic_factors(&p).unwrap();
        assert_eq!(
            nf.factors,
            vec![RealPoly::quadratic(1.0, 1.0), RealPoly::quadratic(0.0, 1.0)]
        );
    }

    #[test]
    fn multiset_permutations() {
        assert_eq!(distinct_permutations(&[0, 1, 2]).len(), 6);
        assert_eq!(distinct_permutations(&[0, 0, 1]).len(), 3);
        assert_eq!(distinct_permutations(&[0, 0]).len(), 1);
    }

    #[test]
    fn report_json_round_trip() {
        let r = FactorizationReport {
            status: FactorStatus::Success,
            multiplier: RealPoly::quadratic(0.0, 1.0),
            factorizations: vec![Factorization::new(vec![dq(I)])],
            diagnostics: vec!["ok".into()],
        };
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.contains("\"multiplier\":[1.0,0.0,1.0]"), "{s}");
        let back: FactorizationReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }
}
