//! Small nonlinear least-squares solver for family parameters.

use nalgebra::{DMatrix, DVector};

const MAX_ITER: usize = 200;

/// Levenberg-Marquardt iteration from `x0`. Returns a point where every
/// residual is at most `tol` in magnitude, or `None`.
pub(crate) fn solve_zero(f: &dyn Fn(&[f64]) -> Vec<f64>, x0: &[f64], tol: f64) -> Option<Vec<f64>> {
    let n = x0.len();
    let mut x = DVector::from_column_slice(x0);
    let mut r = DVector::from_vec(f(x.as_slice()));
    let m = r.len();
    if m == 0 {
        return Some(x0.to_vec());
    }
    let mut cost = r.norm_squared();
    let mut lambda = 1e-3;
    for _ in 0..MAX_ITER {
        if r.amax() <= tol {
            return Some(x.as_slice().to_vec());
        }
        let mut jac = DMatrix::<f64>::zeros(m, n);
        for j in 0..n {
            let step = 1e-6 * x[j].abs().max(1.0);
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[j] += step;
            xm[j] -= step;
            let fp = f(xp.as_slice());
            let fm = f(xm.as_slice());
            if fp.len() != m || fm.len() != m {
                return None;
            }
            for i in 0..m {
                jac[(i, j)] = (fp[i] - fm[i]) / (2.0 * step);
            }
        }
        let jt = jac.transpose();
        let jtj = &jt * &jac;
        let grad = &jt * &r;
        loop {
            let mut a = jtj.clone();
            for k in 0..n {
                a[(k, k)] += lambda * (1.0 + jtj[(k, k)]);
            }
            let Some(delta) = a.lu().solve(&(-&grad)) else {
                lambda *= 10.0;
                if lambda > 1e12 {
                    return None;
                }
                continue;
            };
            let xn = &x + &delta;
            let rn = f(xn.as_slice());
            if rn.len() != m {
                return None;
            }
            let rn = DVector::from_vec(rn);
            let cn = rn.norm_squared();
            if cn.is_finite() && cn < cost {
                x = xn;
                r = rn;
                cost = cn;
                lambda = (lambda / 3.0).max(1e-12);
                break;
            }
            lambda *= 4.0;
            if lambda > 1e12 {
                return (r.amax() <= tol).then(|| x.as_slice().to_vec());
            }
        }
    }
    (r.amax() <= tol).then(|| x.as_slice().to_vec())
}

/// Gauss-Newton refinement of an (over)determined consistent system. Steps
/// are taken only while they reduce the largest residual; the best point
/// found is returned.
pub(crate) fn refine(f: &dyn Fn(&[f64]) -> Vec<f64>, x0: &[f64], iters: usize) -> Vec<f64> {
    let n = x0.len();
    let mut x = DVector::from_column_slice(x0);
    let mut r = DVector::from_vec(f(x.as_slice()));
    let m = r.len();
    for _ in 0..iters {
        if r.amax() == 0.0 {
            break;
        }
        let mut jac = DMatrix::<f64>::zeros(m, n);
        for j in 0..n {
            let step = 1e-7 * x[j].abs().max(1.0);
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[j] += step;
            xm[j] -= step;
            let (fp, fm) = (f(xp.as_slice()), f(xm.as_slice()));
            for i in 0..m {
                jac[(i, j)] = (fp[i] - fm[i]) / (2.0 * step);
            }
        }
        let Ok(delta) = jac.svd(true, true).solve(&(-&r), 1e-13) else {
            break;
        };
        let xn = &x + &delta;
        let rn = DVector::from_vec(f(xn.as_slice()));
        if rn.amax().is_nan() || rn.amax() >= r.amax() {
            break;
        }
        x = xn;
        r = rn;
    }
    x.as_slice().to_vec()
}
