//! Readers for the JSON input files.
//!
//! All readers reject non-finite numbers and polynomials of degree above
//! [`MAX_DEGREE`]. Malformed input yields [`Error::Parse`]; well-formed
//! input violating a mathematical precondition yields the corresponding
//! domain error.

use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::dualquat::{normalize_pose, DualQuaternion, Pose, Quaternion};
use crate::error::{Error, Result};
use crate::factorization::FactorizationReport;
use crate::linkage::{import_json, Linkage};
use crate::poly::{validate_motion, DQPoly, MotionPolynomial, QuatPoly, RealPoly};

/// Largest accepted polynomial degree.
pub const MAX_DEGREE: usize = 64;

/// Largest accepted input size in bytes.
pub const MAX_INPUT: usize = 1 << 22;

fn from_json<T: DeserializeOwned>(s: &str) -> Result<T> {
    if s.len() > MAX_INPUT {
        return Err(Error::Parse(format!("input exceeds {MAX_INPUT} bytes")));
    }
    serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
}

fn check_len(n: usize) -> Result<()> {
    if n > MAX_DEGREE + 1 {
        Err(Error::Parse(format!("degree exceeds {MAX_DEGREE}")))
    } else {
        Ok(())
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Coeffs<T> {
    coeffs: Vec<T>,
}

fn finite(xs: &[f64]) -> Result<()> {
    if xs.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::Parse("non-finite coefficient".into()))
    }
}

/// `{"coeffs": [c0, c1, ...]}`, lowest degree first.
pub fn parse_real_poly(s: &str) -> Result<RealPoly> {
    let c: Coeffs<f64> = from_json(s)?;
    check_len(c.coeffs.len())?;
    finite(&c.coeffs)?;
    Ok(RealPoly::new(c.coeffs))
}

fn dq_from(a: [f64; 8]) -> Result<DualQuaternion> {
    finite(&a)?;
    Ok(DualQuaternion::from_array(a))
}

/// `{"coeffs": [[8 numbers], ...]}`, lowest degree first.
pub fn parse_dqpoly(s: &str) -> Result<DQPoly> {
    let c: Coeffs<[f64; 8]> = from_json(s)?;
    check_len(c.coeffs.len())?;
    let coeffs = c.coeffs.into_iter().map(dq_from).collect::<Result<Vec<_>>>()?;
    Ok(DQPoly::new(coeffs))
}

/// A dual quaternion polynomial that satisfies the motion polynomial
/// conditions.
pub fn parse_motion(s: &str, tol: f64) -> Result<MotionPolynomial> {
    validate_motion(&parse_dqpoly(s)?, tol)
}

/// `{"coeffs": [[4 numbers], ...]}`; 8-tuples with zero dual part are also
/// accepted.
pub fn parse_quat_poly(s: &str) -> Result<QuatPoly> {
    let c: Coeffs<Vec<f64>> = from_json(s)?;
    check_len(c.coeffs.len())?;
    let coeffs = c
        .coeffs
        .into_iter()
        .map(|v| {
            finite(&v)?;
            match v.len() {
                4 => Ok(Quaternion::new(v[0], v[1], v[2], v[3])),
                8 if v[4..].iter().all(|x| *x == 0.0) => Ok(Quaternion::new(v[0], v[1], v[2], v[3])),
                8 => Err(Error::Parse("quaternion coefficient has a dual part".into())),
                n => Err(Error::Parse(format!("coefficient of length {n}"))),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(QuatPoly::new(coeffs))
}

/// A single 8-tuple.
pub fn parse_dual_quaternion(s: &str) -> Result<DualQuaternion> {
    dq_from(from_json(s)?)
}

/// Array of three pose 8-tuples.
pub fn parse_poses(s: &str, tol: f64) -> Result<[Pose; 3]> {
    let raw: Vec<[f64; 8]> = from_json(s)?;
    if raw.len() != 3 {
        return Err(Error::Parse(format!("expected 3 poses, got {}", raw.len())));
    }
    let mut out = Vec::with_capacity(3);
    for a in raw {
        out.push(normalize_pose(dq_from(a)?, tol)?);
    }
    let [a, b, c]: [Pose; 3] = out.try_into().map_err(|_| Error::Parse("expected 3 poses".into()))?;
    Ok([a, b, c])
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CurveFile {
    v: [Coeffs<f64>; 3],
    w: Coeffs<f64>,
}

/// `{"v": [x, y, z], "w": den}` with each entry `{"coeffs": [...]}`; the
/// curve is `v / w`.
pub fn parse_curve(s: &str) -> Result<([RealPoly; 3], RealPoly)> {
    let c: CurveFile = from_json(s)?;
    let mk = |p: Coeffs<f64>| -> Result<RealPoly> {
        check_len(p.coeffs.len())?;
        finite(&p.coeffs)?;
        Ok(RealPoly::new(p.coeffs))
    };
    let [x, y, z] = c.v;
    Ok(([mk(x)?, mk(y)?, mk(z)?], mk(c.w)?))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FlipFile {
    m_prev: [f64; 8],
    h: [f64; 8],
}

/// `{"m_prev": [8], "h": [8]}`.
pub fn parse_flip(s: &str) -> Result<(DualQuaternion, DualQuaternion)> {
    let f: FlipFile = from_json(s)?;
    Ok((dq_from(f.m_prev)?, dq_from(f.h)?))
}

/// Linkage JSON, validated.
pub fn parse_linkage(s: &str, tol: f64) -> Result<Linkage> {
    if s.len() > MAX_INPUT {
        return Err(Error::Parse(format!("input exceeds {MAX_INPUT} bytes")));
    }
    import_json(s, tol)
}

/// Factorization report JSON as written by the command-line tool.
pub fn parse_report(s: &str) -> Result<FactorizationReport> {
    let r: FactorizationReport = from_json(s)?;
    for f in &r.factorizations {
        check_len(f.factors.len())?;
        if f.factors.iter().any(|h| !h.is_finite()) {
            return Err(Error::Parse("non-finite factor".into()));
        }
    }
    Ok(r)
}
