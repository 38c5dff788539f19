//! Complex roots of real polynomials (Aberth–Ehrlich iteration followed by
//! cluster averaging for multiple roots).

use num_complex::Complex64;

use super::RealPoly;

const MAX_ITER: usize = 500;

/// Roots are merged into one multiple root when closer than this, relative
/// to `max(1, |z|)`.
pub(crate) const CLUSTER_TOL: f64 = 2e-3;

fn eval_c(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
}

fn eval_with_derivative(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

fn derivative_coeffs(coeffs: &[f64], order: usize) -> Vec<f64> {
    let mut c = coeffs.to_vec();
    for _ in 0..order {
        c = c.iter().enumerate().skip(1).map(|(i, a)| a * i as f64).collect();
    }
    c
}

fn aberth(coeffs: &[f64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    let monic: Vec<f64> = coeffs.iter().map(|c| c / lead).collect();
    // Cauchy-type radius for the initial circle
    let radius = 1.0 + monic[..n].iter().map(|c| c.abs()).fold(0.0, f64::max).min(1e6);
    let mean = -monic[n - 1] / n as f64;
    let r0 = (radius - mean.abs()).max(0.5);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Complex64::new(mean, 0.0) + Complex64::from_polar(r0, angle)
        })
        .collect();
    for _ in 0..MAX_ITER {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let (p, dp) = eval_with_derivative(&monic, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let diff = z[i] - z[j];
                    if diff.norm() > 0.0 {
                        s += Complex64::new(1.0, 0.0) / diff;
                    }
                }
            }
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if step.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm() / z[i].norm().max(1.0));
            }
        }
        if max_step < 1e-16 {
            break;
        }
    }
    z
}

/// Newton polish on the `order`-th derivative, which has a simple root where
/// the polynomial has a root of multiplicity `order + 1`.
fn polish(coeffs: &[f64], z: Complex64, order: usize) -> Complex64 {
    let c = derivative_coeffs(coeffs, order);
    let mut z = z;
    for _ in 0..8 {
        let (p, dp) = eval_with_derivative(&c, z);
        if dp.norm() == 0.0 {
            break;
        }
        let step = p / dp;
        if !step.is_finite() {
            break;
        }
        let next = z - step;
        if eval_c(&c, next).norm() > p.norm() {
            break;
        }
        z = next;
        if step.norm() < 1e-17 * z.norm().max(1.0) {
            break;
        }
    }
    z
}

/// Cluster of numerically coincident roots.
#[derive(Clone, Debug)]
pub(crate) struct RootCluster {
    pub center: Complex64,
    pub multiplicity: usize,
}

/// Roots grouped into clusters with polished centers; conjugate symmetry is
/// enforced (centers with tiny imaginary parts are made real).
pub(crate) fn root_clusters(p: &RealPoly) -> Vec<RootCluster> {
    let coeffs = p.coeffs();
    let Some(n) = p.degree() else {
        return Vec::new();
    };
    if n == 0 {
        return Vec::new();
    }
    // factor out roots at zero exactly
    let zeros = coeffs.iter().take_while(|c| **c == 0.0).count();
    let rest = &coeffs[zeros..];
    let mut raw = if rest.len() > 1 { aberth(rest) } else { Vec::new() };
    raw.extend(std::iter::repeat_n(Complex64::new(0.0, 0.0), zeros));

    // single-linkage clustering
    let mut assigned = vec![usize::MAX; raw.len()];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in 0..raw.len() {
        if assigned[i] != usize::MAX {
            continue;
        }
        let g = groups.len();
        assigned[i] = g;
        let mut members = vec![i];
        let mut k = 0;
        while k < members.len() {
            let a = raw[members[k]];
            for j in 0..raw.len() {
                if assigned[j] == usize::MAX {
                    let tol = CLUSTER_TOL * a.norm().max(raw[j].norm()).max(1.0);
                    if (raw[j] - a).norm() < tol {
                        assigned[j] = g;
                        members.push(j);
                    }
                }
            }
            k += 1;
        }
        groups.push(members);
    }
    let mut clusters: Vec<RootCluster> = groups
        .into_iter()
        .map(|members| {
            let m = members.len();
            let sum: Complex64 = members.iter().map(|&i| raw[i]).sum();
            let center = polish(coeffs, sum / m as f64, m - 1);
            RootCluster {
                center,
                multiplicity: m,
            }
        })
        .collect();
    for c in &mut clusters {
        if c.center.im.abs() < CLUSTER_TOL * c.center.norm().max(1.0) * 1e-3 {
            c.center.im = 0.0;
        }
    }
    clusters
}

/// All complex roots with multiplicity. Conjugate pairs are returned as exact
/// conjugates; roots with negligible imaginary part are returned as real.
pub fn real_roots_complex(p: &RealPoly) -> Vec<Complex64> {
    let mut out = Vec::new();
    let clusters = root_clusters(p);
    for c in &clusters {
        for _ in 0..c.multiplicity {
            out.push(c.center);
        }
    }
    // symmetrize conjugate pairs
    let mut used = vec![false; out.len()];
    for i in 0..out.len() {
        if used[i] || out[i].im <= 0.0 {
            continue;
        }
        let target = out[i].conj();
        let best = (0..out.len())
            .filter(|&j| !used[j] && j != i && out[j].im < 0.0)
            .min_by(|&a, &b| (out[a] - target).norm().total_cmp(&(out[b] - target).norm()));
        if let Some(j) = best {
            let re = 0.5 * (out[i].re + out[j].re);
            let im = 0.5 * (out[i].im - out[j].im);
            out[i] = Complex64::new(re, im);
            out[j] = Complex64::new(re, -im);
            used[i] = true;
            used[j] = true;
        }
    }
    out.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reconstruct(roots: &[Complex64], lead: f64) -> Vec<f64> {
        let mut c = vec![Complex64::new(lead, 0.0)];
        for r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
            for (i, a) in c.iter().enumerate() {
                next[i + 1] += a;
                next[i] -= a * r;
            }
            c = next;
        }
        c.iter().map(|z| z.re).collect()
    }

    #[test]
    fn simple_examples() {
        let r = real_roots_complex(&RealPoly::new(vec![1.0, 0.0, 1.0]));
        assert_eq!(r.len(), 2);
        assert!((r[0] - Complex64::new(0.0, -1.0)).norm() < 1e-14);
        assert!((r[1] - Complex64::new(0.0, 1.0)).norm() < 1e-14);
        let r = real_roots_complex(&RealPoly::new(vec![-3.0, 1.0]));
        assert_eq!(r.len(), 1);
        assert!((r[0] - Complex64::new(3.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn multiple_real_root_and_complex_pair() {
        // (t - 2)^2 (t^2 + 1) = t^4 - 4t^3 + 5t^2 - 4t + 4
        let p = RealPoly::new(vec![4.0, -4.0, 5.0, -4.0, 1.0]);
        let r = real_roots_complex(&p);
        assert_eq!(r.len(), 4);
        let twos = r
            .iter()
            .filter(|z| (**z - Complex64::new(2.0, 0.0)).norm() < 1e-12)
            .count();
        assert_eq!(twos, 2);
        let rec = reconstruct(&r, 1.0);
        for (a, b) in rec.iter().zip(p.coeffs()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn fourfold_roots_are_recovered_exactly_enough() {
        // (t^2 + 1)^4
        let p = RealPoly::new(vec![1.0, 0.0, 4.0, 0.0, 6.0, 0.0, 4.0, 0.0, 1.0]);
        let r = real_roots_complex(&p);
        assert_eq!(r.len(), 8);
        for z in &r {
            assert!((z.norm() - 1.0).abs() < 1e-12, "{z}");
            assert!(z.re.abs() < 1e-12);
        }
    }
}
