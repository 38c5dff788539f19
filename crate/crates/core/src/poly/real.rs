//! Real polynomial utilities: greatest common divisors and the
//! factorization of nonnegative polynomials into monic quadratics.

use super::roots::{root_clusters, CLUSTER_TOL};
use super::{QuatPoly, RealPoly};
use crate::error::{Error, Result};

/// Relative threshold below which a Euclidean remainder counts as zero.
const GCD_TOL: f64 = 1e-8;

/// Largest integer magnitude accepted by the exact gcd path.
const EXACT_LIMIT: f64 = (1u64 << 40) as f64;

fn as_integers(p: &RealPoly) -> Option<Vec<i128>> {
    p.coeffs()
        .iter()
        .map(|c| {
            if c.fract() == 0.0 && c.abs() < EXACT_LIMIT {
                Some(*c as i128)
            } else {
                None
            }
        })
        .collect()
}

fn int_gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn primitive(mut p: Vec<i128>) -> Vec<i128> {
    while p.last() == Some(&0) {
        p.pop();
    }
    let content = p.iter().fold(0, |g, c| int_gcd(g, *c));
    if content > 1 {
        for c in &mut p {
            *c /= content;
        }
    }
    if p.last().is_some_and(|c| *c < 0) {
        for c in &mut p {
            *c = -*c;
        }
    }
    p
}

/// Pseudo-remainder of `a` by `b` (both nonzero); `None` on overflow.
fn pseudo_rem(a: &[i128], b: &[i128]) -> Option<Vec<i128>> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = *b.last()?;
    while r.len() > db && !r.is_empty() {
        let top = *r.last()?;
        let shift = r.len() - 1 - db;
        for c in r.iter_mut() {
            *c = c.checked_mul(lb)?;
        }
        for (j, bj) in b.iter().enumerate() {
            r[shift + j] = r[shift + j].checked_sub(top.checked_mul(*bj)?)?;
        }
        r.pop();
        while r.last() == Some(&0) {
            r.pop();
        }
        if r.iter().any(|c| c.abs() > (1i128 << 100)) {
            r = primitive(r);
        }
    }
    Some(primitive(r))
}

fn exact_gcd(a: &[i128], b: &[i128]) -> Option<Vec<i128>> {
    let mut a = primitive(a.to_vec());
    let mut b = primitive(b.to_vec());
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let r = pseudo_rem(&a, &b)?;
        a = b;
        b = r;
    }
    Some(a)
}

fn float_gcd(a: &RealPoly, b: &RealPoly) -> RealPoly {
    let normalize = |p: &RealPoly| {
        let m = p.max_abs();
        if m == 0.0 {
            p.clone()
        } else {
            p.scale(1.0 / m)
        }
    };
    let mut a = normalize(a);
    let mut b = normalize(b);
    if a.degree() < b.degree() {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        if b.is_zero() {
            return a;
        }
        let (_, r) = match a.right_divide(&b) {
            Ok(qr) => qr,
            Err(_) => return a,
        };
        let scale = a.max_abs().max(b.max_abs());
        let mut r = r;
        while r.leading().abs() <= GCD_TOL * scale && !r.is_zero() {
            r = RealPoly::new(r.coeffs()[..r.coeffs().len() - 1].to_vec());
        }
        if r.max_abs() <= GCD_TOL * scale {
            r = RealPoly::zero();
        }
        a = b;
        b = normalize(&r);
    }
}

fn monic(p: &RealPoly) -> RealPoly {
    match p.make_monic_left() {
        Ok(m) => m,
        Err(_) => RealPoly::zero(),
    }
}

/// Monic greatest common divisor. Integer-valued inputs of moderate size are
/// handled exactly; other inputs by a Euclidean algorithm with a relative
/// zero threshold.
pub fn gcd(a: &RealPoly, b: &RealPoly) -> RealPoly {
    if a.is_zero() {
        return monic(b);
    }
    if b.is_zero() {
        return monic(a);
    }
    if let (Some(ia), Some(ib)) = (as_integers(a), as_integers(b)) {
        if let Some(g) = exact_gcd(&ia, &ib) {
            let lead = *g.last().unwrap_or(&1) as f64;
            return RealPoly::new(g.iter().map(|c| *c as f64 / lead).collect());
        }
    }
    monic(&float_gcd(a, b))
}

/// The maximal monic real polynomial dividing `p`, i.e. the gcd of its four
/// component polynomials. The zero polynomial yields zero.
pub fn max_real_factor(p: &QuatPoly) -> RealPoly {
    (0..4).map(|k| p.component(k)).fold(
        RealPoly::zero(),
        |g, c| {
            if g.degree() == Some(0) {
                g
            } else {
                gcd(&g, &c)
            }
        },
    )
}

/// Multiset of monic quadratic factors of a nonnegative polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticFactors {
    /// Sorted by (linear coefficient, constant coefficient); repeated
    /// factors appear repeatedly.
    pub factors: Vec<RealPoly>,
    /// Conditioning warnings (near-multiple roots, reconstruction drift).
    pub warnings: Vec<String>,
}

impl QuadraticFactors {
    /// Distinct factors in order of first appearance.
    pub fn distinct(&self, tol: f64) -> Vec<RealPoly> {
        let mut out: Vec<RealPoly> = Vec::new();
        for f in &self.factors {
            if !out.iter().any(|g| g.distance(f) <= tol) {
                out.push(f.clone());
            }
        }
        out
    }
}

/// Factors the nonnegative polynomial `n / lead(n)` into monic quadratics.
/// Real roots (which must have even multiplicity) are paired into
/// `(t - r)^2`.
pub fn quadratic_factors(n: &RealPoly) -> Result<QuadraticFactors> {
    let deg = n.degree().ok_or(Error::NotNonnegative)?;
    if deg % 2 == 1 {
        return Err(Error::OddDegree(deg));
    }
    if n.leading() < 0.0 {
        return Err(Error::NotNonnegative);
    }
    if deg == 0 {
        return Ok(QuadraticFactors {
            factors: Vec::new(),
            warnings: Vec::new(),
        });
    }
    let clusters = root_clusters(n);
    let mut factors = Vec::new();
    let mut upper = 0;
    let mut lower = 0;
    for c in &clusters {
        if c.center.im == 0.0 {
            if c.multiplicity % 2 == 1 {
                return Err(Error::NotNonnegative);
            }
            for _ in 0..c.multiplicity / 2 {
                factors.push(RealPoly::quadratic(c.center.re, c.center.re * c.center.re));
            }
        } else if c.center.im > 0.0 {
            upper += c.multiplicity;
            for _ in 0..c.multiplicity {
                factors.push(RealPoly::quadratic(c.center.re, c.center.norm_sqr()));
            }
        } else {
            lower += c.multiplicity;
        }
    }
    if upper != lower || 2 * factors.len() != deg {
        return Err(Error::NotNonnegative);
    }
    factors.sort_by(|a, b| {
        a.coeff(1)
            .total_cmp(&b.coeff(1))
            .then(a.coeff(0).total_cmp(&b.coeff(0)))
    });

    let mut warnings = Vec::new();
    for (i, a) in clusters.iter().enumerate() {
        for b in clusters.iter().skip(i + 1) {
            let sep = (a.center - b.center).norm();
            if sep < 5.0 * CLUSTER_TOL * a.center.norm().max(1.0) {
                warnings.push(format!(
                    "roots {} and {} are only {sep:.2e} apart; the quadratic factors are ill-conditioned",
                    a.center, b.center
                ));
            }
        }
    }
    let product = factors.iter().fold(RealPoly::one(), |acc, f| &acc * f);
    let target = n.scale(1.0 / n.leading());
    let drift = product.distance(&target) / target.max_abs().max(1.0);
    if drift > 1e-7 {
        warnings.push(format!("quadratic factors reproduce the input only to {drift:.2e}"));
    }
    Ok(QuadraticFactors { factors, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dualquat::Quaternion;
    use crate::poly::QuatPoly;

    fn p(c: &[f64]) -> RealPoly {
        RealPoly::new(c.to_vec())
    }

    #[test]
    fn gcd_exact_path() {
        // (t^2+1)(t-2) and (t^2+1)(t+3)
        let a = &p(&[1.0, 0.0, 1.0]) * &p(&[-2.0, 1.0]);
        let b = &p(&[1.0, 0.0, 1.0]) * &p(&[3.0, 1.0]);
        assert_eq!(gcd(&a, &b), p(&[1.0, 0.0, 1.0]));
        assert_eq!(gcd(&a, &p(&[5.0])), p(&[1.0]));
        assert_eq!(gcd(&RealPoly::zero(), &a.scale(2.0)), a);
    }

    #[test]
    fn gcd_float_path() {
        let g = p(&[0.37, -1.1, 1.0]);
        let a = &g * &p(&[0.5, 1.3]);
        let b = &g * &p(&[-0.25, 0.1, 2.7]);
        let r = gcd(&a, &b);
        assert!(r.distance(&g) < 1e-10, "{r:?}");
    }

    #[test]
    fn max_real_factor_examples() {
        let scalar = QuatPoly::new(vec![Quaternion::ONE, Quaternion::ZERO, Quaternion::ONE]);
        assert_eq!(max_real_factor(&scalar), p(&[1.0, 0.0, 1.0]));
        // (t - 1)(t - j) = t^2 - (1 + j) t + j: components t^2 - t and 1 - t
        let a = QuatPoly::linear(Quaternion::ONE);
        let b = QuatPoly::linear(Quaternion::J);
        assert_eq!(max_real_factor(&(&a * &b)), p(&[-1.0, 1.0]));
        // (t - i)(t - j) has no real factor
        let c = &QuatPoly::linear(Quaternion::I) * &b;
        assert_eq!(max_real_factor(&c), p(&[1.0]));
        // (t^2 + 1)(t - i)
        let c = QuatPoly::linear(Quaternion::I).mul_real(&p(&[1.0, 0.0, 1.0]));
        assert_eq!(max_real_factor(&c), p(&[1.0, 0.0, 1.0]));
    }

    #[test]
    fn quadratic_factor_examples() {
        let q = quadratic_factors(&p(&[1.0, 0.0, 2.0, 0.0, 1.0])).unwrap();
        assert_eq!(q.factors.len(), 2);
        for f in &q.factors {
            assert!(f.distance(&p(&[1.0, 0.0, 1.0])) < 1e-12);
        }
        let q = quadratic_factors(&(&p(&[1.0, 0.0, 1.0]) * &p(&[4.0, 0.0, 1.0]))).unwrap();
        assert!(q.factors[0].distance(&p(&[1.0, 0.0, 1.0])) < 1e-12);
        assert!(q.factors[1].distance(&p(&[4.0, 0.0, 1.0])) < 1e-12);
        let q = quadratic_factors(&p(&[0.0, 0.0, 1.0])).unwrap();
        assert_eq!(q.factors, vec![p(&[0.0, 0.0, 1.0])]);
        assert!(q.warnings.is_empty());
    }

    #[test]
    fn quadratic_factor_errors() {
        assert_eq!(quadratic_factors(&p(&[1.0, 1.0, 0.0, 1.0])), Err(Error::OddDegree(3)));
        // t^2 - 1 changes sign
        assert_eq!(quadratic_factors(&p(&[-1.0, 0.0, 1.0])), Err(Error::NotNonnegative));
        assert_eq!(quadratic_factors(&p(&[1.0, 0.0, -1.0])), Err(Error::NotNonnegative));
    }
}
