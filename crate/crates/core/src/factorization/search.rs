//! Depth-first factorization search for exceptional motion polynomials and
//! the real-multiplier search for bounded motions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::lookahead::solve_zero;
use super::solve::{self, dual_basis, factor_defect, FamilyConstraint, LinearSolutionSet};
use super::{
    check_monic, classify_quadratics, norm_quadratic_factors, FactorOptions, FactorStatus, Factorization,
    FactorizationReport, DEDUP_TOL,
};
use crate::dualquat::{classify_generator, DualQuaternion, Quaternion};
use crate::error::{Error, Result};
use crate::poly::{max_real_factor, quadratic_factors, validate_motion, DQPoly, MotionPolynomial, QuatPoly, RealPoly};
use crate::vec3;

const MAX_NOTES: usize = 16;

struct Search<'a> {
    opts: &'a FactorOptions,
    target: DQPoly,
    nodes: usize,
    exhausted: bool,
    found: Vec<Factorization>,
    rejected: usize,
    rng: ChaCha8Rng,
    notes: Vec<String>,
}

/// Forces a vanishing dual scalar part and the Study condition.
fn snap(h: DualQuaternion) -> DualQuaternion {
    let p = h.primal;
    let mut q = h.dual;
    q.w = 0.0;
    let v = p.vector();
    let vv = vec3::dot(v, v);
    if vv > 0.0 {
        let k = vec3::dot(v, q.vector()) / vv;
        q -= Quaternion::pure(vec3::scale(v, k));
    }
    DualQuaternion::new(p, q)
}

fn random_unit(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let v = [
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ];
        let n = vec3::norm(v);
        if n > 0.1 && n <= 1.0 {
            return vec3::scale(v, 1.0 / n);
        }
    }
}

fn without_one(list: &[RealPoly], m: &RealPoly) -> Vec<RealPoly> {
    let mut out = list.to_vec();
    if let Some(i) = out.iter().position(|x| x.distance(m) <= 1e-7 * m.max_abs().max(1.0)) {
        out.remove(i);
    }
    out
}

impl Search<'_> {
    fn ctol(&self) -> f64 {
        solve::consistency_tol(self.opts.tol)
    }

    fn note(&mut self, s: String) {
        if self.notes.len() < MAX_NOTES && !self.notes.contains(&s) {
            self.notes.push(s);
        }
    }

    fn done(&self) -> bool {
        self.exhausted || self.found.len() >= self.opts.max_results
    }

    /// `suffix` holds the factors pulled so far, rightmost first.
    fn dfs(&mut self, d: &DQPoly, remaining: &[RealPoly], suffix: &mut Vec<DualQuaternion>) {
        if remaining.is_empty() {
            self.accept(suffix);
            return;
        }
        let (distinct, _) = classify_quadratics(remaining, 1e-7);
        for m in distinct {
            if self.done() {
                return;
            }
            self.nodes += 1;
            if self.nodes > self.opts.budget {
                self.exhausted = true;
                return;
            }
            let rest = without_one(remaining, &m);
            let sol = solve::solve_linear_factor(d, &m, self.opts.tol);
            let candidates = match &sol {
                LinearSolutionSet::Empty => continue,
                LinearSolutionSet::Unique { h } => vec![snap(*h)],
                LinearSolutionSet::Family { .. } => {
                    self.note(format!(
                        "level {}: family of right factors with norm {}; canonical member plus samples tried",
                        suffix.len() + 1,
                        m.pretty()
                    ));
                    self.family_candidates(d, &sol, &rest)
                }
            };
            for h in candidates {
                if self.done() {
                    return;
                }
                match classify_generator(&h, self.opts.tol) {
                    Ok(g) if g.is_rotation() || !self.opts.rotations_only => {}
                    _ => continue,
                }
                let Ok((q, r)) = d.right_divide(&DQPoly::linear(h)) else {
                    continue;
                };
                if r.max_abs() > 1e-7 * d.max_abs().max(1.0) {
                    continue;
                }
                suffix.push(h);
                self.dfs(&q, &rest, suffix);
                suffix.pop();
            }
        }
    }

    fn accept(&mut self, suffix: &[DualQuaternion]) {
        let mut factors = suffix.to_vec();
        factors.reverse();
        let f = Factorization::new(super::polish(&factors, &self.target));
        let bound = 1e-8 * (1.0 + self.target.max_abs());
        if f.residual(&self.target) > bound {
            self.rejected += 1;
            return;
        }
        if !self.found.iter().any(|g| g.matches(&f, DEDUP_TOL)) {
            self.found.push(f);
        }
    }

    fn family_candidates(&mut self, d: &DQPoly, sol: &LinearSolutionSet, rest: &[RealPoly]) -> Vec<DualQuaternion> {
        let LinearSolutionSet::Family {
            basepoint, constraints, ..
        } = sol
        else {
            return Vec::new();
        };
        let ctol = self.ctol();
        let samples = self.opts.family_samples;
        let mut primals = vec![basepoint.primal];
        if let FamilyConstraint::PrimalSphere { scalar, radius } = constraints {
            if *radius > 0.0 {
                for _ in 0..samples {
                    let u = random_unit(&mut self.rng);
                    let mut p = Quaternion::pure(vec3::scale(u, *radius));
                    p.w = *scalar;
                    primals.push(p);
                }
            }
        }
        let (next, _) = classify_quadratics(rest, 1e-7);
        let spread = d.max_abs().max(1.0);
        let mut out: Vec<DualQuaternion> = Vec::new();
        for p in primals {
            if self.opts.rotations_only && vec3::norm(p.vector()) <= ctol {
                continue;
            }
            let basis = dual_basis(p.vector(), ctol);
            let base = DualQuaternion::from_primal(p);
            let member = |theta: &[f64]| snap(basis.iter().zip(theta).fold(base, |acc, (b, x)| acc + *b * *x));
            let dim = basis.len();
            let mut thetas: Vec<Vec<f64>> = vec![vec![0.0; dim]];
            let mut starts: Vec<Vec<f64>> = vec![vec![0.0; dim]];
            for _ in 0..samples {
                starts.push((0..dim).map(|_| self.rng.gen_range(-1.0..1.0) * spread).collect());
            }
            for m in &next {
                let defect = |theta: &[f64]| -> Vec<f64> {
                    let h = member(theta);
                    match d.right_divide(&DQPoly::linear(h)) {
                        Ok((q, _)) => factor_defect(&q, m, self.opts.tol),
                        Err(_) => vec![f64::INFINITY],
                    }
                };
                for x0 in &starts {
                    if let Some(theta) = solve_zero(&defect, x0, 1e-11) {
                        thetas.push(theta);
                    }
                }
            }
            for _ in 0..samples {
                thetas.push((0..dim).map(|_| self.rng.gen_range(-1.0..1.0) * spread).collect());
            }
            for theta in thetas {
                let h = member(&theta);
                if !out.iter().any(|g| g.distance(&h) <= 1e-9 * spread) {
                    out.push(h);
                }
            }
        }
        out
    }
}

fn run_search(c: &DQPoly, opts: &FactorOptions) -> Result<(Vec<Factorization>, bool, Vec<String>)> {
    check_monic(c)?;
    let nf = norm_quadratic_factors(&c.primal())?;
    let mut search = Search {
        opts,
        target: c.clone(),
        nodes: 0,
        exhausted: false,
        found: Vec::new(),
        rejected: 0,
        rng: ChaCha8Rng::seed_from_u64(opts.seed),
        notes: nf.warnings.clone(),
    };
    search.dfs(c, &nf.factors, &mut Vec::new());
    let mut notes = search.notes;
    notes.push(format!("visited {} search nodes", search.nodes));
    if search.rejected > 0 {
        notes.push(format!(
            "{} candidate factor lists failed the reconstruction check",
            search.rejected
        ));
    }
    Ok((search.found, search.exhausted, notes))
}

fn report_from(
    found: Vec<Factorization>,
    exhausted: bool,
    mut diagnostics: Vec<String>,
    budget: usize,
) -> FactorizationReport {
    if exhausted {
        diagnostics.push(format!(
            "search budget of {budget} nodes exhausted; the tree was not fully explored"
        ));
    }
    let status = if !found.is_empty() {
        FactorStatus::Success
    } else if exhausted {
        FactorStatus::NeedsMultiplier
    } else {
        FactorStatus::NoFactorization
    };
    FactorizationReport {
        status,
        multiplier: RealPoly::one(),
        factorizations: found,
        diagnostics,
    }
}

/// Depth-first search over the orderings of the norm quadratics, branching on
/// unique right factors and on representatives of solution families.
pub fn factor_with_backtracking(c: &MotionPolynomial, opts: &FactorOptions) -> Result<FactorizationReport> {
    let (found, exhausted, notes) = run_search(c.poly(), opts)?;
    Ok(report_from(found, exhausted, notes, opts.budget))
}

/// True iff the norm polynomial has no real roots.
pub fn is_bounded(c: &MotionPolynomial) -> bool {
    match norm_quadratic_factors(&c.poly().primal()) {
        Ok(nf) => nf.factors.iter().all(|f| {
            let s = -0.5 * f.coeff(1);
            let n = f.coeff(0);
            n - s * s > 1e-10 * n.abs().max(1.0)
        }),
        Err(_) => false,
    }
}

/// Multiplier candidates in search order: 1, single quadratic factors of the
/// primal real factor, their products up to degree `max_deg`, then products
/// containing squares up to degree `2 * max_deg`.
pub fn multiplier_candidates(g: &RealPoly, max_deg: usize) -> Result<Vec<RealPoly>> {
    let fs = match g.degree() {
        Some(d) if d >= 2 => quadratic_factors(g)?.distinct(1e-7),
        _ => Vec::new(),
    };
    let k = fs.len();
    let mut plain: Vec<(usize, Vec<u32>)> = Vec::new();
    let mut squared: Vec<(usize, Vec<u32>)> = Vec::new();
    let combos = 3usize.pow(k.min(8) as u32);
    for code in 1..combos {
        let mut e = Vec::with_capacity(k);
        let mut x = code;
        for _ in 0..k.min(8) {
            e.push((x % 3) as u32);
            x /= 3;
        }
        let deg: usize = e.iter().map(|&a| 2 * a as usize).sum();
        if e.iter().all(|&a| a <= 1) {
            if deg <= max_deg {
                plain.push((deg, e));
            }
        } else if deg <= 2 * max_deg {
            squared.push((deg, e));
        }
    }
    let key = |a: &(usize, Vec<u32>)| (a.0, a.1.iter().rev().copied().collect::<Vec<_>>());
    plain.sort_by_key(key);
    squared.sort_by_key(key);
    let build = |e: &[u32]| {
        e.iter()
            .zip(&fs)
            .fold(RealPoly::one(), |acc, (&a, f)| (0..a).fold(acc, |acc, _| &acc * f))
    };
    let mut out = vec![RealPoly::one()];
    out.extend(plain.iter().map(|(_, e)| build(e)));
    out.extend(squared.iter().map(|(_, e)| build(e)));
    Ok(out)
}

/// Searches for a real multiplier `R` such that `c * R` factors into
/// rotations. `max_deg` defaults to the degree of the real factor of the
/// primal part.
pub fn factor_bounded_with_multiplier(
    c: &MotionPolynomial,
    max_deg: Option<usize>,
    opts: &FactorOptions,
) -> Result<FactorizationReport> {
    check_monic(c.poly())?;
    if !is_bounded(c) {
        return Err(Error::Unbounded);
    }
    let g = max_real_factor(&c.poly().primal());
    let max_deg = max_deg.unwrap_or(g.degree().unwrap_or(0));
    let candidates = multiplier_candidates(&g, max_deg)?;
    let listing: Vec<String> = candidates.iter().map(|r| r.pretty()).collect();
    let mut diagnostics = vec![format!("multiplier candidates: [{}]", listing.join(", "))];
    let ropts = FactorOptions {
        rotations_only: true,
        ..opts.clone()
    };
    let mut any_exhausted = false;
    for r in &candidates {
        let cr = validate_motion(&c.poly().mul_real(r), opts.tol)?;
        let (found, exhausted, notes) = run_search(cr.poly(), &ropts)?;
        any_exhausted |= exhausted;
        if !found.is_empty() {
            diagnostics.push(format!("multiplier {} succeeded", r.pretty()));
            diagnostics.extend(notes);
            let factorizations = found
                .into_iter()
                .map(|mut f| {
                    f.multiplier = r.clone();
                    f
                })
                .collect();
            return Ok(FactorizationReport {
                status: FactorStatus::Success,
                multiplier: r.clone(),
                factorizations,
                diagnostics,
            });
        }
        diagnostics.push(format!(
            "multiplier {}: no rotation factorization{}",
            r.pretty(),
            if exhausted { " (budget exhausted)" } else { "" }
        ));
    }
    let _ = any_exhausted;
    Ok(FactorizationReport {
        status: FactorStatus::NeedsMultiplier,
        multiplier: RealPoly::one(),
        factorizations: Vec::new(),
        diagnostics,
    })
}

/// Factors `c * h_poly` for a user-supplied monic quaternion polynomial.
pub fn right_multiply_and_factor(
    c: &MotionPolynomial,
    h_poly: &QuatPoly,
    opts: &FactorOptions,
) -> Result<FactorizationReport> {
    if !h_poly.is_monic() {
        return Err(Error::NotMonic);
    }
    let product = c.poly() * &h_poly.to_dq();
    let cp = validate_motion(&product, opts.tol)?;
    let mut report = factor_with_backtracking(&cp, opts)?;
    report.diagnostics.insert(
        0,
        "factored C*H; points fixed by H retain their trajectories under C*H".into(),
    );
    Ok(report)
}
