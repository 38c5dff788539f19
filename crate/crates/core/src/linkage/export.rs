use std::fmt::Write as _;
use std::str::FromStr;

use super::sample::{axis_direction, default_samples, sample_configuration, trajectory};
use super::{JointKind, Linkage, CLOSURE_TOL};
use crate::dualquat::classify_generator;
use crate::error::{Error, Result};
use crate::poly::Param;
use crate::vec3::{self, Vec3};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Json,
    Svg,
    Csv,
}

impl FromStr for ExportFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(ExportFormat::Json),
            "svg" => Ok(ExportFormat::Svg),
            "csv" => Ok(ExportFormat::Csv),
            other => Err(Error::Parse(format!("unknown export format {other}"))),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExportOptions {
    /// Parameters for sampled output; empty means [`default_samples`].
    pub samples: Vec<f64>,
}

/// Parallelism threshold for the planarity test.
const PLANAR_TOL: f64 = 1e-8;

/// Common axis direction of a planar linkage.
fn planar_axis(l: &Linkage) -> Result<Vec3> {
    let mut axis: Option<Vec3> = None;
    for j in l.joints.iter().filter(|j| j.kind == JointKind::Rotation) {
        let d = axis_direction(&j.generator);
        match axis {
            None => axis = Some(d),
            Some(a) => {
                if vec3::norm(vec3::cross(a, d)) > PLANAR_TOL {
                    return Err(Error::NotPlanar);
                }
            }
        }
    }
    let axis = axis.ok_or(Error::NotPlanar)?;
    for j in l.joints.iter().filter(|j| j.kind == JointKind::Translation) {
        if vec3::dot(axis, axis_direction(&j.generator)).abs() > PLANAR_TOL {
            return Err(Error::NotPlanar);
        }
    }
    Ok(axis)
}

fn samples_or_default(l: &Linkage, o: &ExportOptions) -> Vec<f64> {
    if o.samples.is_empty() {
        default_samples(l)
    } else {
        o.samples.clone()
    }
}

fn svg(l: &Linkage, o: &ExportOptions) -> Result<String> {
    let axis = planar_axis(l)?;
    let (e1, e2) = vec3::orthonormal_complement(axis);
    let project = |p: Vec3| (vec3::dot(p, e1), -vec3::dot(p, e2));
    let samples = samples_or_default(l, o);
    let mut paths: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
    let mut per_joint: Vec<Vec<(f64, f64)>> = vec![Vec::new(); l.joints.len()];
    for &t in &samples {
        let s = sample_configuration(l, Param::Finite(t))?;
        for (k, j) in l.joints.iter().enumerate() {
            per_joint[k].push(project(s.joint_positions[&j.id]));
        }
    }
    for (j, pts) in l.joints.iter().zip(per_joint) {
        paths.push((j.id.clone(), pts));
    }
    let tracer = match &l.tracer {
        Some(tr) => Some(
            trajectory(l, &tr.link, tr.point, &samples)?
                .into_iter()
                .map(project)
                .collect::<Vec<_>>(),
        ),
        None => None,
    };
    let all = paths.iter().flat_map(|p| p.1.iter()).chain(tracer.iter().flatten());
    let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for &(x, y) in all {
        x0 = x0.min(x);
        y0 = y0.min(y);
        x1 = x1.max(x);
        y1 = y1.max(y);
    }
    if x0 > x1 {
        (x0, y0, x1, y1) = (-1.0, -1.0, 1.0, 1.0);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-6);
    let margin = 0.05 * span;
    let stroke = span / 400.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}">"#,
        x0 - margin,
        y0 - margin,
        x1 - x0 + 2.0 * margin,
        y1 - y0 + 2.0 * margin
    );
    let points = |pts: &[(f64, f64)]| {
        pts.iter()
            .map(|(x, y)| format!("{x},{y}"))
            .collect::<Vec<_>>()
            .join(" ")
    };
    for (id, pts) in &paths {
        let _ = writeln!(
            out,
            r#"  <polyline class="joint-path" data-joint="{id}" fill="none" stroke="gray" stroke-width="{stroke}" points="{}"/>"#,
            points(pts)
        );
    }
    if let Some(pts) = &tracer {
        let _ = writeln!(
            out,
            r#"  <polyline id="tracer" fill="none" stroke="red" stroke-width="{}" points="{}"/>"#,
            2.0 * stroke,
            points(pts)
        );
    }
    for (id, pts) in &paths {
        if let Some((x, y)) = pts.first() {
            let _ = writeln!(
                out,
                r#"  <circle data-joint="{id}" cx="{x}" cy="{y}" r="{}" fill="black"/>"#,
                3.0 * stroke
            );
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn csv(l: &Linkage, o: &ExportOptions) -> Result<String> {
    let samples = samples_or_default(l, o);
    let mut out = String::from("t,joint_id,x,y,z\n");
    for &t in &samples {
        let s = sample_configuration(l, Param::Finite(t))?;
        for j in &l.joints {
            let p = s.joint_positions[&j.id];
            let _ = writeln!(out, "{t},{},{},{},{}", j.id, p[0], p[1], p[2]);
        }
        if let Some(tr) = &l.tracer {
            let p = trajectory(l, &tr.link, tr.point, &[t])?[0];
            let _ = writeln!(out, "{t},tracer,{},{},{}", p[0], p[1], p[2]);
        }
    }
    Ok(out)
}

/// Serializes a linkage. SVG output requires all rotation axes to be
/// parallel; it is drawn in the plane orthogonal to them.
pub fn export(l: &Linkage, format: ExportFormat, options: &ExportOptions) -> Result<String> {
    match format {
        ExportFormat::Json => serde_json::to_string_pretty(l).map_err(|e| Error::Parse(e.to_string())),
        ExportFormat::Svg => svg(l, options),
        ExportFormat::Csv => csv(l, options),
    }
}

/// Reads linkage JSON and checks it: link structure, joint kinds and loop
/// closure.
pub fn import_json(s: &str, tol: f64) -> Result<Linkage> {
    let l: Linkage = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    for j in &l.joints {
        if !j.generator.is_finite() {
            return Err(Error::Parse(format!("joint {} is not finite", j.id)));
        }
        let g = classify_generator(&j.generator, tol)?;
        let kind = if g.is_rotation() {
            JointKind::Rotation
        } else {
            JointKind::Translation
        };
        if kind != j.kind {
            return Err(Error::InvalidLinkGraph(format!(
                "joint {} is declared {:?} but is a {}",
                j.id,
                j.kind,
                g.kind_name()
            )));
        }
    }
    l.kinematics()?;
    for (index, lp) in l.loops.iter().enumerate() {
        let a = super::chain_product(&l.chain_generators(&lp.left)?);
        let b = super::chain_product(&l.chain_generators(&lp.right)?);
        let residual = a.distance(&b) / (1.0 + a.max_abs().max(b.max_abs()));
        if residual > CLOSURE_TOL {
            return Err(Error::ClosureMismatch { index, residual });
        }
    }
    Ok(l)
}
