//! Per-point local reference frames from neighborhood covariance.
//!
//! Each point gets a frame from its K nearest neighbors: power iteration on
//! the direction covariance yields a leading axis, a fixed world reference
//! completes it to a right-handed basis, and neighborhood directions can be
//! re-expressed in that basis. Scalar features (trace, anisotropy) summarize
//! the neighborhood extent.

use crate::cloud::PointCloud;
use crate::vec3;
use crate::{Error, Result};

/// Default neighbor count.
pub const DEFAULT_NEIGHBORS: usize = 8;

/// Deterministic start vector for power iteration.
pub const POWER_START: [f64; 3] = [
    0.577_350_269_189_625_8,
    0.577_350_269_189_625_8,
    0.577_350_269_189_625_8,
];

/// A point's nearest neighbors and the direction vectors toward them.
#[derive(Debug, Clone)]
pub struct Neighborhood {
    pub center_index: usize,
    pub neighbor_indices: Vec<usize>,
    /// p_j - p_i for each neighbor j, in `neighbor_indices` order.
    pub directions: Vec<[f64; 3]>,
}

/// Right-handed orthonormal basis attached to a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalFrame {
    pub e1: [f64; 3],
    pub e2: [f64; 3],
    pub e3: [f64; 3],
}

/// Frame plus the scalar neighborhood features.
#[derive(Debug, Clone)]
pub struct PointFrame {
    pub frame: LocalFrame,
    pub trace: f64,
    pub anisotropy: f64,
}

/// The `m` nearest neighbors of point `i` (itself excluded), distance ties
/// broken by lower index; returns fewer only when the cloud is smaller.
pub fn knn(cloud: &PointCloud, i: usize, m: usize) -> Neighborhood {
    assert!(cloud.len() >= 2, "need a second point to have neighbors");
    assert!(m >= 1, "need at least one neighbor");
    let p = cloud.points[i];
    let mut order: Vec<(f64, usize)> = cloud
        .points
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != i)
        .map(|(j, q)| (vec3::dist_sq(*q, p), j))
        .collect();
    order.sort_by(|a, b| a.partial_cmp(b).unwrap());
    order.truncate(m.min(cloud.len() - 1));
    Neighborhood {
        center_index: i,
        neighbor_indices: order.iter().map(|(_, j)| *j).collect(),
        directions: order
            .iter()
            .map(|(_, j)| vec3::sub(cloud.points[*j], p))
            .collect(),
    }
}

/// Direction second moment S = (1/M) Σ R_ij R_ijᵀ; symmetric positive
/// semidefinite. Panics on an empty neighborhood.
pub fn covariance(nb: &Neighborhood) -> [[f64; 3]; 3] {
    assert!(!nb.directions.is_empty(), "covariance of no directions");
    let mut s = [[0.0; 3]; 3];
    for d in &nb.directions {
        for r in 0..3 {
            for c in 0..3 {
                s[r][c] += d[r] * d[c];
            }
        }
    }
    let inv_m = 1.0 / nb.directions.len() as f64;
    for row in s.iter_mut() {
        for x in row.iter_mut() {
            *x *= inv_m;
        }
    }
    s
}

fn mat_vec(s: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    [
        vec3::dot(s[0], v),
        vec3::dot(s[1], v),
        vec3::dot(s[2], v),
    ]
}

/// Power iteration v <- normalize(S v), run `iters` times from `v0`, then
/// sign-canonicalized. One step mirrors the cheapest usable estimate; ~50
/// steps converge to the dominant eigenvector when a spectral gap exists.
pub fn principal_direction(
    s: &[[f64; 3]; 3],
    v0: [f64; 3],
    iters: usize,
) -> Result<[f64; 3]> {
    assert!(iters >= 1, "need at least one iteration");
    let mut v = v0;
    for _ in 0..iters {
        let sv = mat_vec(s, v);
        let norm = vec3::norm(sv);
        if norm <= 1e-12 {
            return Err(Error::DegenerateCovariance { norm });
        }
        v = vec3::scale(sv, 1.0 / norm);
    }
    Ok(vec3::canonical_sign(v))
}

/// Completes `e1` to a right-handed orthonormal frame against the fixed
/// reference t = (1,0,0), switching to (0,1,0) when e1 is nearly collinear
/// with it. The fallback always succeeds: no unit vector is collinear with
/// both references.
pub fn build_frame(e1: [f64; 3]) -> LocalFrame {
    let t = if vec3::dot(e1, vec3::UNIT_X).abs() > 0.99 {
        vec3::UNIT_Y
    } else {
        vec3::UNIT_X
    };
    let e2 = vec3::normalize(vec3::cross(e1, t)).expect("reference not collinear with e1");
    let e3 = vec3::cross(e1, e2);
    LocalFrame { e1, e2, e3 }
}

/// Re-expresses directions in the frame: Eᵀ d per direction. Norms are
/// preserved because E is orthonormal.
pub fn project_local(frame: &LocalFrame, directions: &[[f64; 3]]) -> Vec<[f64; 3]> {
    directions
        .iter()
        .map(|d| {
            [
                vec3::dot(frame.e1, *d),
                vec3::dot(frame.e2, *d),
                vec3::dot(frame.e3, *d),
            ]
        })
        .collect()
}

/// Scalar neighborhood features: the covariance trace (overall extent) and
/// the squared Frobenius distance from its isotropic part (anisotropy).
pub fn frame_features(s: &[[f64; 3]; 3]) -> (f64, f64) {
    let tr = s[0][0] + s[1][1] + s[2][2];
    let mean = tr / 3.0;
    let mut a = 0.0;
    for r in 0..3 {
        for c in 0..3 {
            let dev = s[r][c] - if r == c { mean } else { 0.0 };
            a += dev * dev;
        }
    }
    (tr, a)
}

/// Frame and features for every point: knn -> covariance -> power iteration
/// -> frame completion. Points whose covariance degenerates (for example
/// coincident neighbors) yield None instead of aborting the cloud.
pub fn cloud_frames(cloud: &PointCloud, m: usize, iters: usize) -> Vec<Option<PointFrame>> {
    assert!(cloud.len() >= m + 1, "cloud too small for m neighbors");
    (0..cloud.len())
        .map(|i| {
            let nb = knn(cloud, i, m);
            let s = covariance(&nb);
            match principal_direction(&s, POWER_START, iters) {
                Ok(e1) => {
                    let (trace, anisotropy) = frame_features(&s);
                    Some(PointFrame {
                        frame: build_frame(e1),
                        trace,
                        anisotropy,
                    })
                }
                Err(_) => None,
            }
        })
        .collect()
}
