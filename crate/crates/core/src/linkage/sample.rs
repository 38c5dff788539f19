use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Kinematics, Linkage};
use crate::dualquat::DualQuaternion;
use crate::error::{Error, Result};
use crate::poly::Param;
use crate::vec3::{self, Vec3};

/// Positions of all links and joints at one parameter value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigurationSample {
    pub t: Param,
    /// Displacement of each link relative to the ground link, with unit
    /// primal part.
    pub link_displacements: BTreeMap<String, DualQuaternion>,
    /// Axis point closest to the origin (in the home configuration),
    /// carried along by the link before the joint.
    pub joint_positions: BTreeMap<String, Vec3>,
    /// Largest relative disagreement of the two chain products of a loop.
    pub loop_residual: f64,
}

fn eval_chain(path: &[DualQuaternion], t: Param) -> Result<DualQuaternion> {
    let Param::Finite(x) = t else {
        return Ok(DualQuaternion::ONE);
    };
    let mut acc = DualQuaternion::ONE;
    for h in path {
        let f = DualQuaternion::real(x) - *h;
        if f.primal.norm() <= 1e-12 * x.abs().max(1.0).powi(2) {
            return Err(Error::SingularParameter(x));
        }
        acc = acc * f;
    }
    Ok(acc)
}

fn unit(d: DualQuaternion) -> DualQuaternion {
    d * (1.0 / d.primal.norm().sqrt())
}

/// Home-configuration anchor of a joint axis: the axis point closest to the
/// origin, or the origin for translations.
pub(crate) fn axis_anchor(h: &DualQuaternion) -> Vec3 {
    let v = h.primal.vector();
    let vv = vec3::dot(v, v);
    if vv <= 1e-24 * h.max_abs().max(1.0).powi(2) {
        return [0.0; 3];
    }
    vec3::scale(vec3::cross(h.dual.vector(), v), 1.0 / vv)
}

/// Home-configuration axis (or translation) direction of a joint.
pub(crate) fn axis_direction(h: &DualQuaternion) -> Vec3 {
    let v = h.primal.vector();
    if vec3::norm(v) <= 1e-12 * h.max_abs().max(1.0) {
        vec3::normalize(h.dual.vector())
    } else {
        vec3::normalize(v)
    }
}

struct Frames {
    rel: Vec<DualQuaternion>,
}

fn frames(kin: &Kinematics, t: Param) -> Result<Frames> {
    let ground = eval_chain(&kin.paths[kin.ground], t)?;
    let ginv = ground.inverse().ok_or(Error::SingularParameter(match t {
        Param::Finite(x) => x,
        Param::Infinity => f64::INFINITY,
    }))?;
    let rel = kin
        .paths
        .iter()
        .map(|p| Ok(unit(ginv * eval_chain(p, t)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Frames { rel })
}

/// Largest relative residual between the two chain products of any loop at
/// `t`.
pub fn loop_residual(l: &Linkage, t: Param) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for lp in &l.loops {
        let a = eval_chain(&l.chain_generators(&lp.left)?, t)?;
        let b = eval_chain(&l.chain_generators(&lp.right)?, t)?;
        worst = worst.max(a.distance(&b) / a.max_abs().max(b.max_abs()).max(1e-300));
    }
    Ok(worst)
}

/// Forward kinematics at `t`.
pub fn sample_configuration(l: &Linkage, t: Param) -> Result<ConfigurationSample> {
    let kin = l.kinematics()?;
    let fr = frames(&kin, t)?;
    let link_displacements = l
        .links
        .iter()
        .zip(&fr.rel)
        .map(|(link, d)| (link.id.clone(), *d))
        .collect();
    let joint_positions = l
        .joints
        .iter()
        .zip(&kin.sides)
        .map(|(j, (before, _))| (j.id.clone(), fr.rel[*before].act_unchecked(axis_anchor(&j.generator))))
        .collect();
    Ok(ConfigurationSample {
        t,
        link_displacements,
        joint_positions,
        loop_residual: loop_residual(l, t)?,
    })
}

/// Positions of a point fixed to `link_id`, relative to the ground link.
pub fn trajectory(l: &Linkage, link_id: &str, point: Vec3, samples: &[f64]) -> Result<Vec<Vec3>> {
    let kin = l.kinematics()?;
    let idx = l
        .link_index(link_id)
        .ok_or_else(|| Error::InvalidLinkGraph(format!("unknown link {link_id}")))?;
    samples
        .iter()
        .map(|&t| Ok(frames(&kin, Param::Finite(t))?.rel[idx].act_unchecked(point)))
        .collect()
}

/// `count` equally spaced parameters in `[lo, hi]`, moved at least `1e-3`
/// away from real roots of joint norm polynomials.
pub fn spaced_samples(l: &Linkage, lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let roots: Vec<f64> = l
        .joints
        .iter()
        .filter(|j| vec3::norm(j.generator.primal.vector()) <= 1e-9 * j.generator.max_abs().max(1.0))
        .map(|j| j.generator.primal.w)
        .collect();
    let steps = count.saturating_sub(1).max(1) as f64;
    (0..count)
        .map(|i| {
            let mut t = lo + (hi - lo) * i as f64 / steps;
            for r in &roots {
                if (t - r).abs() < 1e-3 {
                    t = r + 1e-3;
                }
            }
            t
        })
        .collect()
}

/// Twenty-five equally spaced parameters in `[-5, 5]` (see
/// [`spaced_samples`]).
pub fn default_samples(l: &Linkage) -> Vec<f64> {
    spaced_samples(l, -5.0, 5.0, 25)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinkDeviation {
    pub link: String,
    /// Largest change of a distance between two revolute axis anchors.
    pub max_distance_deviation: f64,
    /// Largest change of an angle between two joint directions (radians).
    pub max_angle_deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RigidityReport {
    pub links: Vec<LinkDeviation>,
    /// Largest disagreement between a joint's position carried by the link
    /// before it and by the link after it.
    pub joint_consistency: f64,
    pub max_deviation: f64,
    pub notes: Vec<String>,
}

fn angle(a: Vec3, b: Vec3) -> f64 {
    vec3::norm(vec3::cross(a, b)).atan2(vec3::dot(a, b))
}

/// Checks that joints on a common link keep their mutual distances and
/// angles over `samples`. Joint positions come from the link before each
/// joint, so a loop that does not close shows up as a deviation.
pub fn rigidity_check(l: &Linkage, samples: &[f64]) -> Result<RigidityReport> {
    let kin = l.kinematics()?;
    let anchors: Vec<Vec3> = l.joints.iter().map(|j| axis_anchor(&j.generator)).collect();
    let dirs: Vec<Vec3> = l.joints.iter().map(|j| axis_direction(&j.generator)).collect();
    let revolute: Vec<bool> = l.joints.iter().map(|j| j.kind == super::JointKind::Rotation).collect();
    let members: Vec<Vec<usize>> = (0..l.links.len())
        .map(|li| {
            (0..l.joints.len())
                .filter(|&j| kin.sides[j].0 == li || kin.sides[j].1 == li)
                .collect()
        })
        .collect();

    let mut notes = Vec::new();
    if revolute.iter().any(|r| !r) {
        notes.push("translation joints are excluded from distance checks".into());
    }
    let mut first: Vec<Option<(Vec<f64>, Vec<f64>)>> = vec![None; l.links.len()];
    let mut dev = vec![(0.0f64, 0.0f64); l.links.len()];
    let mut consistency: f64 = 0.0;
    let mut skipped = 0;
    for &t in samples {
        let fr = match frames(&kin, Param::Finite(t)) {
            Ok(f) => f,
            Err(_) => {
                skipped += 1;
                continue;
            }
        };
        let mut pos = Vec::with_capacity(l.joints.len());
        let mut dir = Vec::with_capacity(l.joints.len());
        for j in 0..l.joints.len() {
            let (b, a) = kin.sides[j];
            let pb = fr.rel[b].act_unchecked(anchors[j]);
            let db = fr.rel[b].rotate_vector(dirs[j]);
            let da = fr.rel[a].rotate_vector(dirs[j]);
            consistency = consistency.max(vec3::distance(db, da));
            if revolute[j] {
                let pa = fr.rel[a].act_unchecked(anchors[j]);
                consistency = consistency.max(vec3::distance(pb, pa));
            }
            pos.push(pb);
            dir.push(db);
        }
        for (li, js) in members.iter().enumerate() {
            let mut dists = Vec::new();
            let mut angles = Vec::new();
            for (x, &a) in js.iter().enumerate() {
                for &b in &js[x + 1..] {
                    if revolute[a] && revolute[b] {
                        dists.push(vec3::distance(pos[a], pos[b]));
                    }
                    angles.push(angle(dir[a], dir[b]));
                }
            }
            match &first[li] {
                None => first[li] = Some((dists, angles)),
                Some((d0, a0)) => {
                    for (x, y) in d0.iter().zip(&dists) {
                        dev[li].0 = dev[li].0.max((x - y).abs());
                    }
                    for (x, y) in a0.iter().zip(&angles) {
                        dev[li].1 = dev[li].1.max((x - y).abs());
                    }
                }
            }
        }
    }
    if skipped > 0 {
        notes.push(format!("{skipped} singular samples skipped"));
    }
    let links: Vec<LinkDeviation> = l
        .links
        .iter()
        .zip(&dev)
        .map(|(link, (d, a))| LinkDeviation {
            link: link.id.clone(),
            max_distance_deviation: *d,
            max_angle_deviation: *a,
        })
        .collect();
    let max_deviation = links
        .iter()
        .map(|d| d.max_distance_deviation.max(d.max_angle_deviation))
        .fold(consistency, f64::max);
    Ok(RigidityReport {
        links,
        joint_consistency: consistency,
        max_deviation,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::super::{assemble, Chain};
    use super::*;
    use crate::dualquat::{Quaternion, DEFAULT_TOL};
    use crate::factorization::all_factorizations;
    use crate::poly::{validate_motion, DQPoly};

    fn bennett() -> Linkage {
        let hs = [
            super::super::tests::random_rotation(11),
            super::super::tests::random_rotation(12),
        ];
        let c = validate_motion(&DQPoly::from_linear_factors(&hs), DEFAULT_TOL).unwrap();
        let fs = all_factorizations(&c, DEFAULT_TOL).unwrap();
        let name = |p: &str, f: &[DualQuaternion]| -> Chain {
            f.iter()
                .enumerate()
                .map(|(i, h)| (format!("{p}{}", i + 1), *h))
                .collect()
        };
        assemble(&[(name("h", &fs[0].factors), name("k", &fs[1].factors))], DEFAULT_TOL).unwrap()
    }

    #[test]
    fn at_infinity_everything_is_home() {
        let l = bennett();
        let s = sample_configuration(&l, Param::Infinity).unwrap();
        for d in s.link_displacements.values() {
            assert!(d.distance(&DualQuaternion::ONE) < 1e-15);
        }
    }

    #[test]
    fn bennett_loop_closes_and_is_rigid() {
        let l = bennett();
        for t in [-3.0, -0.7, 0.0, 0.4, 2.5] {
            assert!(loop_residual(&l, Param::Finite(t)).unwrap() < 1e-12);
        }
        let r = rigidity_check(&l, &default_samples(&l)).unwrap();
        assert!(r.max_deviation < 1e-9, "{r:?}");
        let ground = l.ground.clone();
        let g = trajectory(&l, &ground, [1.0, 2.0, 3.0], &[-1.0, 0.5, 3.0]).unwrap();
        assert!(g.iter().all(|p| vec3::distance(*p, [1.0, 2.0, 3.0]) < 1e-12));
    }

    #[test]
    fn perturbed_generator_is_detected() {
        let l = bennett();
        let h = l.joint("h2").unwrap().generator;
        let shift = vec3::cross(h.primal.vector(), [0.0, 0.0, 1e-3]);
        let bad = l.with_generator("h2", h + DualQuaternion::from_dual(Quaternion::pure(shift)));
        let r = rigidity_check(&bad, &default_samples(&bad)).unwrap();
        assert!(r.max_deviation > 1e-4, "{r:?}");
    }
}
