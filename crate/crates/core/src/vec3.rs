//! Minimal 3-vector helpers over `[f64; 3]`.

pub const UNIT_X: [f64; 3] = [1.0, 0.0, 0.0];
pub const UNIT_Y: [f64; 3] = [0.0, 1.0, 0.0];
pub const UNIT_Z: [f64; 3] = [0.0, 0.0, 1.0];

/// The canonical axes in x, y, z order.
pub const CANONICAL_AXES: [[f64; 3]; 3] = [UNIT_X, UNIT_Y, UNIT_Z];

pub fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn add(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn scale(a: [f64; 3], s: f64) -> [f64; 3] {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub fn neg(a: [f64; 3]) -> [f64; 3] {
    [-a[0], -a[1], -a[2]]
}

pub fn norm_sq(a: [f64; 3]) -> f64 {
    dot(a, a)
}

pub fn norm(a: [f64; 3]) -> f64 {
    norm_sq(a).sqrt()
}

pub fn dist_sq(a: [f64; 3], b: [f64; 3]) -> f64 {
    norm_sq(sub(a, b))
}

pub fn dist(a: [f64; 3], b: [f64; 3]) -> f64 {
    dist_sq(a, b).sqrt()
}

/// Returns `a / |a|`, or `None` when the norm is at or below `1e-12`.
pub fn normalize(a: [f64; 3]) -> Option<[f64; 3]> {
    let n = norm(a);
    if n <= 1e-12 {
        None
    } else {
        Some(scale(a, 1.0 / n))
    }
}

/// Index of the component with the largest absolute value (first on ties).
pub fn argmax_abs(a: [f64; 3]) -> usize {
    let mut best = 0;
    for i in 1..3 {
        if a[i].abs() > a[best].abs() {
            best = i;
        }
    }
    best
}

/// Flips `a` so its largest-magnitude component is non-negative.
pub fn canonical_sign(a: [f64; 3]) -> [f64; 3] {
    if a[argmax_abs(a)] < 0.0 {
        neg(a)
    } else {
        a
    }
}
