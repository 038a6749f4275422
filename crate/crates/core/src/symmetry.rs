//! Symmetry descriptions, equivalent rotation sets, reflection consistency,
//! and annotation-free symmetry estimation from raw geometry.
//!
//! A part's symmetry turns one ground-truth rotation into a whole set of
//! physically indistinguishable ones. This module generates those sets,
//! scores candidate mirror planes by how well the cloud matches its own
//! reflection, and estimates a rotational axis distribution by probing
//! self-similarity under canonical-axis rotations.

use crate::cloud::{chamfer_to_index, NnIndex, PointCloud};
use crate::quat::UnitQuaternion;
use crate::vec3;
use crate::{Error, Result};

/// Stabilizer added to Chamfer values before inversion in score formulas.
pub const DEFAULT_SCORE_EPS: f64 = 1e-8;

/// Number of self-similarity probe angles per canonical axis.
pub const DEFAULT_PROBE_ANGLES: usize = 8;

/// Default retention threshold on mirror-plane scores.
pub const DEFAULT_KEEP_THRESHOLD: f64 = 0.25;

/// Which family of equivalent solutions a part admits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetryKind {
    Rotational,
    Mirror,
    Asymmetric,
}

/// A part's symmetry: kind, soft distribution over canonical axes, and (for
/// mirror symmetry) the retained plane normals, all in the part's canonical
/// frame.
#[derive(Debug, Clone)]
pub struct SymmetrySpec {
    pub kind: SymmetryKind,
    /// Non-negative weights over the x, y, z axes, summing to 1. Uniform
    /// filler for asymmetric parts.
    pub axis_distribution: [f64; 3],
    /// Unit normals of retained mirror planes, empty unless kind is Mirror.
    pub plane_normals: Vec<[f64; 3]>,
}

impl SymmetrySpec {
    pub fn rotational(axis_distribution: [f64; 3]) -> Self {
        check_distribution(axis_distribution);
        Self {
            kind: SymmetryKind::Rotational,
            axis_distribution,
            plane_normals: Vec::new(),
        }
    }

    pub fn mirror(axis_distribution: [f64; 3], plane_normals: Vec<[f64; 3]>) -> Self {
        check_distribution(axis_distribution);
        assert!(plane_normals.len() <= 3, "at most three mirror planes");
        Self {
            kind: SymmetryKind::Mirror,
            axis_distribution,
            plane_normals,
        }
    }

    pub fn asymmetric() -> Self {
        Self {
            kind: SymmetryKind::Asymmetric,
            axis_distribution: [1.0 / 3.0; 3],
            plane_normals: Vec::new(),
        }
    }
}

fn check_distribution(pi: [f64; 3]) {
    let sum: f64 = pi.iter().sum();
    assert!(
        pi.iter().all(|w| *w >= 0.0) && (sum - 1.0).abs() < 1e-6,
        "axis distribution must be non-negative and sum to 1, got {pi:?}"
    );
}

/// Rotations that pose a symmetric part indistinguishably from `gt`.
#[derive(Debug, Clone)]
pub struct EquivalentSet {
    pub quaternions: Vec<UnitQuaternion>,
    /// The ground truth the set was generated around; always an element.
    pub gt: UnitQuaternion,
}

/// Blends canonical axes by the weights and renormalizes to unit length.
pub fn synth_axis(pi: [f64; 3]) -> Result<[f64; 3]> {
    vec3::normalize(pi).ok_or(Error::DegenerateAxis {
        norm: vec3::norm(pi),
    })
}

/// Completes `n` to a right-handed orthonormal triple using the direction
/// hint `n_raw`: n' is the normalized rejection of n_raw from n, n'' their
/// cross product.
pub fn orthonormal_triple(
    n: [f64; 3],
    n_raw: [f64; 3],
) -> Result<([f64; 3], [f64; 3], [f64; 3])> {
    let raw_norm = vec3::norm(n_raw);
    if raw_norm < 1e-12 {
        return Err(Error::ParallelInput { angle: 0.0 });
    }
    // Angle between the lines (direction-insensitive), in [0, pi/2].
    let cos_angle = (vec3::dot(n_raw, n).abs() / raw_norm).clamp(0.0, 1.0);
    let angle = cos_angle.acos();
    if angle <= 1e-4 {
        return Err(Error::ParallelInput { angle });
    }
    let rejection = vec3::sub(n_raw, vec3::scale(n, vec3::dot(n_raw, n)));
    let n_prime = vec3::normalize(rejection).expect("angle guard keeps the rejection finite");
    let n_second = vec3::cross(n, n_prime);
    Ok((n, n_prime, n_second))
}

/// All rotations of `q_gt` about the part's own `axis` by n_eq uniform
/// angles; element 0 is `q_gt` itself.
pub fn equivalent_set_rotational(
    q_gt: &UnitQuaternion,
    axis: [f64; 3],
    n_eq: usize,
) -> EquivalentSet {
    assert!(n_eq >= 1, "need at least one equivalent sample");
    let mut quaternions = Vec::with_capacity(n_eq);
    quaternions.push(*q_gt);
    for i in 1..n_eq {
        let angle = std::f64::consts::TAU * i as f64 / n_eq as f64;
        let spin = UnitQuaternion::from_axis_angle(axis, angle)
            .expect("unit axis with finite angle");
        quaternions.push(q_gt.compose(&spin));
    }
    EquivalentSet {
        quaternions,
        gt: *q_gt,
    }
}

/// Proper-rotation equivalents of a mirror-symmetric part: `q_gt` composed
/// with half-turns about each plane normal, plus their pairwise products,
/// deduplicated. The half-turn is the rotation that combines a reflection
/// across the plane with the part's own reflection symmetry, keeping every
/// element a proper rotation.
pub fn equivalent_set_mirror(q_gt: &UnitQuaternion, planes: &[[f64; 3]]) -> EquivalentSet {
    let mut reps = vec![UnitQuaternion::identity()];
    let half_turns: Vec<UnitQuaternion> = planes
        .iter()
        .map(|u| UnitQuaternion::from_axis_angle(*u, std::f64::consts::PI).expect("unit normal"))
        .collect();
    for r in &half_turns {
        reps.push(*r);
    }
    for i in 0..half_turns.len() {
        for j in i + 1..half_turns.len() {
            reps.push(half_turns[i].compose(&half_turns[j]));
        }
    }
    let mut quaternions: Vec<UnitQuaternion> = vec![*q_gt];
    for rep in reps.iter().skip(1) {
        let candidate = q_gt.compose(rep);
        let duplicate = quaternions
            .iter()
            .any(|q| q.angular_distance(&candidate) < 1e-6);
        if !duplicate {
            quaternions.push(candidate);
        }
    }
    EquivalentSet {
        quaternions,
        gt: *q_gt,
    }
}

/// Reflects every point across the plane through the cloud's centroid with
/// unit normal `u`, preserving order.
pub fn reflect_cloud(cloud: &PointCloud, u: [f64; 3]) -> PointCloud {
    assert!(!cloud.is_empty(), "reflection of an empty cloud");
    let c = cloud.centroid();
    PointCloud::new(
        cloud
            .points
            .iter()
            .map(|p| {
                let offset = 2.0 * vec3::dot(vec3::sub(*p, c), u);
                vec3::sub(*p, vec3::scale(u, offset))
            })
            .collect(),
    )
}

/// Symmetrized Chamfer distance between the cloud and its own reflection
/// across the plane with normal `u`; near zero for true mirror planes.
pub fn mirror_consistency(cloud: &PointCloud, u: [f64; 3]) -> f64 {
    let reflected = reflect_cloud(cloud, u);
    crate::cloud::chamfer_bidirectional(cloud, &reflected)
}

/// Scores the three candidate planes by inverse mirror inconsistency.
/// Each score lies in [0, 1] and the three sum to at most 1.
pub fn plane_scores(cloud: &PointCloud, planes: &[[f64; 3]; 3], eps: f64) -> [f64; 3] {
    assert!(eps > 0.0, "stabilizer must be positive");
    let inv: Vec<f64> = planes
        .iter()
        .map(|u| 1.0 / (mirror_consistency(cloud, *u) + eps))
        .collect();
    let total: f64 = inv.iter().sum::<f64>() + eps;
    [inv[0] / total, inv[1] / total, inv[2] / total]
}

/// Estimates a rotational symmetry axis by probing self-similarity under
/// rotations about each canonical axis.
///
/// For each axis, the cloud (centered at its centroid) is compared against
/// itself rotated by `n_probe_angles` uniform angles interior to (0, 2pi);
/// low average Chamfer means high self-similarity. Cubed inverse
/// inconsistencies are normalized into the weight vector, and the returned
/// axis is their blend. The probe set is closed under angle negation, which
/// makes the weights equivariant under relabeling of the coordinate axes.
pub fn estimate_rotational_axis(
    cloud: &PointCloud,
    n_probe_angles: usize,
) -> ([f64; 3], [f64; 3]) {
    assert!(cloud.len() >= 16, "too few points to probe symmetry");
    assert!(n_probe_angles >= 4, "too few probe angles");
    let centered = cloud.centered();
    let index = NnIndex::build(&centered.points);
    let mut weights = [0.0; 3];
    for (k, axis) in vec3::CANONICAL_AXES.iter().enumerate() {
        let mut total = 0.0;
        for t in 1..=n_probe_angles {
            let angle = std::f64::consts::TAU * t as f64 / (n_probe_angles + 1) as f64;
            let spin = UnitQuaternion::from_axis_angle(*axis, angle).expect("unit axis");
            // Both Chamfer directions reduce to queries against the static
            // index: min over rotated points of |p - R b| equals the nearest
            // distance of the inversely rotated query.
            let inv_spin = spin.inverse();
            let forward = chamfer_to_index(&centered.rotated(&inv_spin), &index);
            let backward = chamfer_to_index(&centered.rotated(&spin), &index);
            total += 0.5 * (forward + backward);
        }
        let mean_inconsistency = total / n_probe_angles as f64;
        // Cubing the inverse sharpens the distribution: sampling noise keeps
        // the Chamfer contrast between the true axis and the others mild
        // (roughly 5x on a 1024-point cylinder), and the linear inverse
        // would smear the blended axis 15 degrees off. Ratios are all that
        // change, so ordering and relabeling equivariance are untouched.
        weights[k] = 1.0 / (mean_inconsistency + DEFAULT_SCORE_EPS).powi(3);
    }
    let sum: f64 = weights.iter().sum();
    let pi = [weights[0] / sum, weights[1] / sum, weights[2] / sum];
    let axis = synth_axis(pi).expect("normalized weights cannot vanish");
    (axis, pi)
}

/// Estimates mirror planes: the canonical axes ordered by the rotational
/// axis weights serve as the candidate triple, each plane is scored by
/// mirror consistency, and planes at or above `keep_threshold` are kept.
///
/// Candidates snap to canonical axes (rather than blending weights into a
/// diagonal direction) because a weight vector spread over several axes
/// means several distinct symmetry planes, not one tilted plane.
pub fn estimate_mirror_planes(cloud: &PointCloud, keep_threshold: f64) -> Result<SymmetrySpec> {
    assert!(cloud.len() >= 16, "too few points to score planes");
    let (_, pi) = estimate_rotational_axis(cloud, DEFAULT_PROBE_ANGLES);
    // Canonical axes by descending weight; ties resolve in x, y, z order.
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| {
        pi[b]
            .partial_cmp(&pi[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let triple = [
        vec3::CANONICAL_AXES[order[0]],
        vec3::CANONICAL_AXES[order[1]],
        vec3::CANONICAL_AXES[order[2]],
    ];
    let scores = plane_scores(cloud, &triple, DEFAULT_SCORE_EPS);
    let retained: Vec<[f64; 3]> = (0..3)
        .filter(|&j| scores[j] >= keep_threshold)
        .map(|j| triple[j])
        .collect();
    if retained.is_empty() {
        return Err(Error::NoPlaneRetained {
            threshold: keep_threshold,
        });
    }
    Ok(SymmetrySpec::mirror(pi, retained))
}
