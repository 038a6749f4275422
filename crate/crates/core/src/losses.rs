//! Symmetry-aware objective functions.
//!
//! Rotation error against a symmetric part is the distance to a whole set
//! of equivalent solutions, not to one ground truth. The losses here softly
//! minimize over such sets with a temperature-controlled weighted average,
//! in three flavors per symmetry kind: a warm-up form that hedges across
//! canonical axes, a per-candidate form, and a final-estimate form. A
//! finite-difference gradient helper drives the manifold refinement.

use crate::candidates::CandidateSet;
use crate::cloud::PointCloud;
use crate::quat::{TangentVector, UnitQuaternion};
use crate::symmetry::{
    equivalent_set_mirror, equivalent_set_rotational, mirror_consistency, EquivalentSet,
    SymmetryKind, SymmetrySpec,
};
use crate::vec3;
use crate::{Error, Result};

/// Default finite-difference step, radians.
pub const GRAD_STEP: f64 = 1e-4;

/// Temperature for the soft minimum.
#[derive(Debug, Clone, Copy)]
pub struct SoftMinConfig {
    pub beta: f64,
}

impl SoftMinConfig {
    pub fn new(beta: f64) -> Self {
        assert!(beta > 0.0, "temperature must be positive");
        Self { beta }
    }
}

impl Default for SoftMinConfig {
    fn default() -> Self {
        Self { beta: 10.0 }
    }
}

/// Which phase of the fit the loss serves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LossStage {
    Warmup,
    Main,
}

/// Boltzmann-weighted average exp(-beta(x - min)) over the values: a smooth
/// stand-in for the minimum, bounded by [min, mean], and within
/// log(N)/beta of the true minimum whenever the minimum is 0.
pub fn softmin(values: &[f64], cfg: &SoftMinConfig) -> f64 {
    assert!(!values.is_empty(), "soft-min of an empty list");
    assert!(
        values.iter().all(|v| v.is_finite()),
        "soft-min needs finite values"
    );
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut weight_sum = 0.0;
    let mut value_sum = 0.0;
    for &x in values {
        // Shifting by the minimum keeps every exponent in (-inf, 0].
        let w = (-cfg.beta * (x - min)).exp();
        weight_sum += w;
        value_sum += w * x;
    }
    value_sum / weight_sum
}

fn distances_to_set(q: &UnitQuaternion, eq: &EquivalentSet) -> Vec<f64> {
    eq.quaternions
        .iter()
        .map(|e| q.angular_distance(e))
        .collect()
}

/// Average over candidates of the soft-min distance to one axis'
/// equivalent set.
fn axis_warmup_term(
    candidates: &CandidateSet,
    q_gt: &UnitQuaternion,
    axis: [f64; 3],
    n_eq: usize,
    cfg: &SoftMinConfig,
) -> f64 {
    let eq = equivalent_set_rotational(q_gt, axis, n_eq);
    cand_rot_loss(candidates, &eq, cfg)
}

/// Warm-up rotational loss: soft-min distances to each canonical axis'
/// equivalent set, averaged over candidates, then a hard minimum across the
/// three axes. The outer minimum stays hard because axis choice is a
/// discrete hypothesis, not a quantity to smooth.
pub fn warmup_rot_loss(
    candidates: &CandidateSet,
    q_gt: &UnitQuaternion,
    n_eq: usize,
    cfg: &SoftMinConfig,
) -> f64 {
    assert!(n_eq >= 1, "need at least one equivalent sample");
    vec3::CANONICAL_AXES
        .iter()
        .map(|axis| axis_warmup_term(candidates, q_gt, *axis, n_eq, cfg))
        .fold(f64::INFINITY, f64::min)
}

/// Per-candidate rotational loss against a fixed equivalent set:
/// (1/K) Σ_j softmin_i d(q_j, q^eq_i).
pub fn cand_rot_loss(candidates: &CandidateSet, eq: &EquivalentSet, cfg: &SoftMinConfig) -> f64 {
    assert!(!eq.quaternions.is_empty(), "empty equivalent set");
    let total: f64 = candidates
        .quaternions
        .iter()
        .map(|q| softmin(&distances_to_set(q, eq), cfg))
        .sum();
    total / candidates.quaternions.len() as f64
}

/// Final-estimate rotational loss: soft-min distance from one quaternion to
/// the equivalent set.
pub fn final_rot_loss(q_final: &UnitQuaternion, eq: &EquivalentSet, cfg: &SoftMinConfig) -> f64 {
    assert!(!eq.quaternions.is_empty(), "empty equivalent set");
    softmin(&distances_to_set(q_final, eq), cfg)
}

/// Average mirror inconsistency of the cloud over the given plane normals.
pub fn mirror_geom_term(cloud: &PointCloud, planes: &[[f64; 3]]) -> f64 {
    assert!(!planes.is_empty(), "geometry term over no planes");
    planes
        .iter()
        .map(|u| mirror_consistency(cloud, *u))
        .sum::<f64>()
        / planes.len() as f64
}

/// Mirror-symmetry loss: an angle term over reflection-generated equivalent
/// sets plus a geometry term, summed with unit weights.
///
/// Warm-up hedges over the canonical planes (a two-element reflection set
/// per plane, candidate-averaged, hard minimum across planes) and averages
/// all three plane consistencies; the final estimate is unused there. The
/// main stage scores `q_final` against the set generated by the estimated
/// planes jointly. The ground truth generates the equivalent sets in both
/// stages.
pub fn mirror_loss(
    q_final: &UnitQuaternion,
    q_gt: &UnitQuaternion,
    candidates: &CandidateSet,
    cloud: &PointCloud,
    spec: &SymmetrySpec,
    stage: LossStage,
    cfg: &SoftMinConfig,
) -> Result<f64> {
    assert!(
        spec.kind == SymmetryKind::Mirror,
        "mirror loss over a non-mirror part"
    );
    match stage {
        LossStage::Warmup => {
            let angle = vec3::CANONICAL_AXES
                .iter()
                .map(|axis| {
                    let eq = equivalent_set_mirror(q_gt, &[*axis]);
                    cand_rot_loss(candidates, &eq, cfg)
                })
                .fold(f64::INFINITY, f64::min);
            let geom = mirror_geom_term(cloud, &vec3::CANONICAL_AXES);
            Ok(angle + geom)
        }
        LossStage::Main => {
            if spec.plane_normals.is_empty() {
                return Err(Error::EmptyPlaneSet);
            }
            let eq = equivalent_set_mirror(q_gt, &spec.plane_normals);
            let angle = final_rot_loss(q_final, &eq, cfg);
            let geom = mirror_geom_term(cloud, &spec.plane_normals);
            Ok(angle + geom)
        }
    }
}

/// Loss for parts with no symmetry: plain angular distance.
pub fn asym_loss(q: &UnitQuaternion, q_gt: &UnitQuaternion) -> f64 {
    q.angular_distance(q_gt)
}

/// Central finite differences of `objective` at (q, t): three tangent
/// directions (probes exp(±h e_k) composed on the left of q) and three
/// translation axes.
pub fn loss_gradient<F>(
    objective: F,
    q: &UnitQuaternion,
    t: [f64; 3],
    h: f64,
) -> Result<([f64; 3], [f64; 3])>
where
    F: Fn(&UnitQuaternion, [f64; 3]) -> f64,
{
    assert!(h > 1e-7 && h < 1e-2, "step size out of the stable range");
    let probe = |q: &UnitQuaternion, t: [f64; 3]| -> Result<f64> {
        let value = objective(q, t);
        if value.is_finite() {
            Ok(value)
        } else {
            Err(Error::NonFiniteObjective { value })
        }
    };
    let mut rot = [0.0; 3];
    let mut trans = [0.0; 3];
    for k in 0..3 {
        let mut step = [0.0; 3];
        step[k] = h;
        let forward = UnitQuaternion::exp_map(TangentVector(step)).compose(q);
        step[k] = -h;
        let backward = UnitQuaternion::exp_map(TangentVector(step)).compose(q);
        rot[k] = (probe(&forward, t)? - probe(&backward, t)?) / (2.0 * h);

        let mut shift = t;
        shift[k] += h;
        let plus = probe(q, shift)?;
        shift[k] -= 2.0 * h;
        let minus = probe(q, shift)?;
        trans[k] = (plus - minus) / (2.0 * h);
    }
    Ok((rot, trans))
}
