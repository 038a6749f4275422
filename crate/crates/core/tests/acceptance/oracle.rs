//! Independent oracles for the acceptance gate: everything here is
//! deliberately written from scratch (hand-rolled quaternion algebra,
//! double-loop minima, O(N^2) Chamfer, cyclic Jacobi eigensolver) so
//! that agreement with the library is meaningful.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normal(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller; the 1 - u guard keeps the log argument positive.
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random::<f64>();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Uniform random rotation as raw scalar-first components.
pub fn random_quat(rng: &mut ChaCha8Rng) -> [f64; 4] {
    loop {
        let q = [normal(rng), normal(rng), normal(rng), normal(rng)];
        let n = q.iter().map(|c| c * c).sum::<f64>().sqrt();
        if n > 1e-6 {
            return q.map(|c| c / n);
        }
    }
}

pub fn random_unit3(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let v = [normal(rng), normal(rng), normal(rng)];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-6 {
            return v.map(|c| c / n);
        }
    }
}

/// Hamilton product of scalar-first quaternions.
pub fn quat_mul(a: [f64; 4], b: [f64; 4]) -> [f64; 4] {
    let [aw, ax, ay, az] = a;
    let [bw, bx, by, bz] = b;
    [
        aw * bw - ax * bx - ay * by - az * bz,
        aw * bx + ax * bw + ay * bz - az * by,
        aw * by - ax * bz + ay * bw + az * bx,
        aw * bz + ax * by - ay * bx + az * bw,
    ]
}

pub fn quat_from_axis_angle(axis: [f64; 3], angle: f64) -> [f64; 4] {
    let h = angle / 2.0;
    let s = h.sin();
    [h.cos(), s * axis[0], s * axis[1], s * axis[2]]
}

/// Geodesic distance between rotations, straight from the definition.
pub fn quat_distance(a: [f64; 4], b: [f64; 4]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    2.0 * dot.abs().clamp(0.0, 1.0).acos()
}

/// The equivalent rotations of `q_gt` under an `n_eq`-sampled spin
/// about `axis`, built with the hand-rolled algebra above.
pub fn eq_rotational(q_gt: [f64; 4], axis: [f64; 3], n_eq: usize) -> Vec<[f64; 4]> {
    (0..n_eq)
        .map(|i| {
            let angle = std::f64::consts::TAU * i as f64 / n_eq as f64;
            quat_mul(q_gt, quat_from_axis_angle(axis, angle))
        })
        .collect()
}

/// Equivalents of a mirror part: identity plus half-turns about each
/// plane normal plus their pairwise products, deduplicated.
pub fn eq_mirror(q_gt: [f64; 4], planes: &[[f64; 3]]) -> Vec<[f64; 4]> {
    let mut reps = vec![[1.0, 0.0, 0.0, 0.0]];
    for u in planes {
        reps.push(quat_from_axis_angle(*u, std::f64::consts::PI));
    }
    for i in 1..=planes.len() {
        for j in i + 1..=planes.len() {
            let prod = quat_mul(reps[i], reps[j]);
            reps.push(prod);
        }
    }
    let mut out: Vec<[f64; 4]> = Vec::new();
    for rep in reps {
        let q = quat_mul(q_gt, rep);
        if !out.iter().any(|m| quat_distance(*m, q) < 1e-6) {
            out.push(q);
        }
    }
    out
}

pub fn min_distance_to(q: [f64; 4], set: &[[f64; 4]]) -> f64 {
    set.iter()
        .map(|m| quat_distance(q, *m))
        .fold(f64::INFINITY, f64::min)
}

/// Mean over candidates of the hard minimum distance to the set: the
/// per-candidate loss at infinite sharpness.
pub fn mean_min_loss(cands: &[[f64; 4]], set: &[[f64; 4]]) -> f64 {
    cands.iter().map(|q| min_distance_to(*q, set)).sum::<f64>() / cands.len() as f64
}

/// O(N*M) one-sided Chamfer, straight double loop.
pub fn chamfer_brute(a: &[[f64; 3]], b: &[[f64; 3]]) -> f64 {
    let total: f64 = a
        .iter()
        .map(|p| {
            b.iter()
                .map(|q| {
                    let d = [p[0] - q[0], p[1] - q[1], p[2] - q[2]];
                    (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
                })
                .fold(f64::INFINITY, f64::min)
        })
        .sum();
    total / a.len() as f64
}

pub fn chamfer_brute_sym(a: &[[f64; 3]], b: &[[f64; 3]]) -> f64 {
    0.5 * (chamfer_brute(a, b) + chamfer_brute(b, a))
}

/// Reflection of every point across the plane through the centroid.
pub fn reflect_brute(points: &[[f64; 3]], u: [f64; 3]) -> Vec<[f64; 3]> {
    let n = points.len() as f64;
    let mut c = [0.0; 3];
    for p in points {
        for k in 0..3 {
            c[k] += p[k] / n;
        }
    }
    points
        .iter()
        .map(|p| {
            let rel = [p[0] - c[0], p[1] - c[1], p[2] - c[2]];
            let along = 2.0 * (rel[0] * u[0] + rel[1] * u[1] + rel[2] * u[2]);
            [p[0] - along * u[0], p[1] - along * u[1], p[2] - along * u[2]]
        })
        .collect()
}

/// Average over plane normals of the symmetric Chamfer between the
/// cloud and its reflection, all by brute force.
pub fn mirror_geom_brute(points: &[[f64; 3]], planes: &[[f64; 3]]) -> f64 {
    planes
        .iter()
        .map(|u| {
            let reflected = reflect_brute(points, *u);
            chamfer_brute_sym(points, &reflected)
        })
        .sum::<f64>()
        / planes.len() as f64
}

/// Cyclic Jacobi eigensolver for a symmetric 3x3 matrix; returns
/// eigenvalues sorted descending with matching unit eigenvectors as
/// rows. Independent of the library's closed-form solver.
pub fn jacobi_eig3(m: [[f64; 3]; 3]) -> ([f64; 3], [[f64; 3]; 3]) {
    let mut a = m;
    let mut v = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    for _ in 0..100 {
        let off = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
        if off < 1e-30 {
            break;
        }
        for (p, q) in [(0, 1), (0, 2), (1, 2)] {
            if a[p][q].abs() < 1e-300 {
                continue;
            }
            let theta = 0.5 * (a[q][q] - a[p][p]) / a[p][q];
            let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;
            let mut next = a;
            for k in 0..3 {
                next[p][k] = c * a[p][k] - s * a[q][k];
                next[q][k] = s * a[p][k] + c * a[q][k];
            }
            let row = next;
            for k in 0..3 {
                next[k][p] = c * row[k][p] - s * row[k][q];
                next[k][q] = s * row[k][p] + c * row[k][q];
            }
            a = next;
            for k in 0..3 {
                let vp = v[k][p];
                let vq = v[k][q];
                v[k][p] = c * vp - s * vq;
                v[k][q] = s * vp + c * vq;
            }
        }
    }
    let mut pairs: Vec<(f64, [f64; 3])> = (0..3)
        .map(|i| (a[i][i], [v[0][i], v[1][i], v[2][i]]))
        .collect();
    pairs.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap());
    (
        [pairs[0].0, pairs[1].0, pairs[2].0],
        [pairs[0].1, pairs[1].1, pairs[2].1],
    )
}

pub fn mat_vec(m: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    [
        m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
        m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
        m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
    ]
}

#[allow(dead_code)]
pub fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}
