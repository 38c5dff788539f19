//! Minimal three-vector helpers on `[f64; 3]`.

pub type Vec3 = [f64; 3];

pub fn add(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn scale(a: Vec3, s: f64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

pub fn distance(a: Vec3, b: Vec3) -> f64 {
    norm(sub(a, b))
}

/// Unit vector along `a`; the zero vector is returned unchanged.
pub fn normalize(a: Vec3) -> Vec3 {
    let n = norm(a);
    if n == 0.0 {
        a
    } else {
        scale(a, 1.0 / n)
    }
}

/// Two unit vectors completing `d` (assumed unit) to an orthonormal frame.
/// For `d` along the third axis this is the first and second axis.
pub fn orthonormal_complement(d: Vec3) -> (Vec3, Vec3) {
    let k = d
        .iter()
        .map(|c| c.abs())
        .enumerate()
        .fold((0, -1.0), |acc, (i, c)| if c > acc.1 { (i, c) } else { acc });
    let (seed_a, seed_b) = match k.0 {
        0 => ([0.0, 1.0, 0.0], [0.0, 0.0, 1.0]),
        1 => ([0.0, 0.0, 1.0], [1.0, 0.0, 0.0]),
        _ => ([1.0, 0.0, 0.0], [0.0, 1.0, 0.0]),
    };
    let e1 = normalize(sub(seed_a, scale(d, dot(seed_a, d))));
    let mut e2 = sub(seed_b, scale(d, dot(seed_b, d)));
    e2 = normalize(sub(e2, scale(e1, dot(e2, e1))));
    (e1, e2)
}
