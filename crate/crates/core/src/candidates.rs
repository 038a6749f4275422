//! Statistics over sets of candidate rotations.
//!
//! A sampling or refinement stage produces K candidate quaternions around a
//! working estimate. This module condenses such a set into a 16-number
//! summary: the average tangent offset from the set mean, a concentration
//! score, and the eigenstructure of the offset second-moment matrix.

use crate::eig3;
use crate::quat::{mean_quaternion, TangentVector, UnitQuaternion};
use crate::vec3;
use crate::Result;

/// Eigenvalues closer than this are treated as one eigenspace and re-based
/// onto canonical axes so the output is deterministic.
const EIGEN_CLUSTER_GAP: f64 = 1e-10;

/// A non-empty list of unit quaternions, usually produced by perturbing one
/// estimate K times.
#[derive(Debug, Clone)]
pub struct CandidateSet {
    pub quaternions: Vec<UnitQuaternion>,
}

impl CandidateSet {
    /// Panics on an empty list; element unit norm is carried by the type.
    pub fn new(quaternions: Vec<UnitQuaternion>) -> Self {
        assert!(
            !quaternions.is_empty(),
            "a candidate set needs at least one element"
        );
        Self { quaternions }
    }
}

/// Fixed-size summary of a candidate set.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateFeature {
    /// Average tangent offset from the set mean, radians.
    pub mean_offset: [f64; 3],
    /// Average squared cosine similarity to the set mean, in [0, 1].
    pub concentration: f64,
    /// Second-moment eigenvalues, descending, radians squared.
    pub eigenvalues: [f64; 3],
    /// Matching unit eigenvectors v1, v2, v3 (rows).
    pub eigenvectors: [[f64; 3]; 3],
}

impl CandidateFeature {
    /// Flat layout, 16 numbers: offset (3), concentration (1),
    /// eigenvalues (3), then v1, v2, v3 (9).
    pub fn flatten(&self) -> [f64; 16] {
        let mut out = [0.0; 16];
        out[..3].copy_from_slice(&self.mean_offset);
        out[3] = self.concentration;
        out[4..7].copy_from_slice(&self.eigenvalues);
        for k in 0..3 {
            out[7 + 3 * k..10 + 3 * k].copy_from_slice(&self.eigenvectors[k]);
        }
        out
    }
}

/// Residual rotations r_i = q_mean^{-1} ⊗ q_i, each hemisphere-aligned to
/// the identity so the later log map returns minimal-angle offsets.
pub fn residuals(set: &CandidateSet, q_mean: &UnitQuaternion) -> Vec<UnitQuaternion> {
    let identity = UnitQuaternion::identity();
    let inv = q_mean.inverse();
    set.quaternions
        .iter()
        .map(|q| inv.compose(q).hemisphere_align(&identity))
        .collect()
}

/// Axis-angle offsets δ_i = log(r_i), elementwise.
pub fn tangent_offsets(residuals: &[UnitQuaternion]) -> Vec<TangentVector> {
    residuals.iter().map(|r| r.log_map()).collect()
}

/// Arithmetic mean of the offsets. Panics on an empty list.
pub fn mean_offset(offsets: &[TangentVector]) -> [f64; 3] {
    assert!(!offsets.is_empty(), "mean of an empty offset list");
    let mut acc = [0.0; 3];
    for d in offsets {
        acc = vec3::add(acc, d.0);
    }
    vec3::scale(acc, 1.0 / offsets.len() as f64)
}

/// Average squared cosine similarity (1/K) Σ |⟨q_i, q_mean⟩|².
///
/// 1 iff every candidate is ±q_mean, 0 when all are a half turn away. The
/// upper clamp only absorbs last-ulp rounding of the dot product.
pub fn concentration(set: &CandidateSet, q_mean: &UnitQuaternion) -> f64 {
    let k = set.quaternions.len() as f64;
    let sum: f64 = set
        .quaternions
        .iter()
        .map(|q| {
            let d = q.dot(q_mean);
            d * d
        })
        .sum();
    (sum / k).min(1.0)
}

/// Eigendecomposition of M = (1/K) Σ δ_i δ_iᵀ, eigenvalues descending.
///
/// Eigenvectors are sign-canonicalized (largest-magnitude component made
/// positive); near-equal eigenvalues share an eigenspace that is re-based
/// onto canonical axes. Panics on an empty list.
pub fn second_moment_eig(offsets: &[TangentVector]) -> ([f64; 3], [[f64; 3]; 3]) {
    assert!(!offsets.is_empty(), "second moment of an empty offset list");
    let k = offsets.len() as f64;
    let mut m = [[0.0; 3]; 3];
    for d in offsets {
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] += d.0[i] * d.0[j];
            }
        }
    }
    for row in m.iter_mut() {
        for x in row.iter_mut() {
            *x /= k;
        }
    }
    let (values, vectors) = eig3::eigen_symmetric(m);
    (values, canonicalize_eigenvectors(values, vectors))
}

/// Full summary of a candidate set: mean, residual offsets, concentration,
/// second-moment eigenstructure.
pub fn encode(set: &CandidateSet) -> Result<CandidateFeature> {
    let q_mean = mean_quaternion(&set.quaternions)?;
    let rs = residuals(set, &q_mean);
    let ds = tangent_offsets(&rs);
    let (eigenvalues, eigenvectors) = second_moment_eig(&ds);
    Ok(CandidateFeature {
        mean_offset: mean_offset(&ds),
        concentration: concentration(set, &q_mean),
        eigenvalues,
        eigenvectors,
    })
}

/// Within each near-degenerate eigenvalue cluster, rebuild the basis from
/// canonical axes (x, y, z priority, Gram-Schmidt); then make every vector's
/// largest-magnitude component positive. Output is deterministic even for
/// isotropic inputs.
fn canonicalize_eigenvectors(values: [f64; 3], mut vectors: [[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut start = 0;
    while start < 3 {
        let mut end = start + 1;
        while end < 3 && (values[end - 1] - values[end]).abs() < EIGEN_CLUSTER_GAP {
            end += 1;
        }
        if end - start > 1 {
            rebase_cluster(&mut vectors, start, end);
        }
        start = end;
    }
    for v in vectors.iter_mut() {
        *v = vec3::canonical_sign(*v);
    }
    vectors
}

fn rebase_cluster(vectors: &mut [[f64; 3]; 3], start: usize, end: usize) {
    let span: Vec<[f64; 3]> = vectors[start..end].to_vec();
    let mut chosen: Vec<[f64; 3]> = Vec::with_capacity(end - start);
    for axis in vec3::CANONICAL_AXES {
        if chosen.len() == end - start {
            break;
        }
        // Project the axis into the eigenspace, then strip prior picks.
        let mut cand = [0.0; 3];
        for basis in &span {
            cand = vec3::add(cand, vec3::scale(*basis, vec3::dot(*basis, axis)));
        }
        for prior in &chosen {
            cand = vec3::sub(cand, vec3::scale(*prior, vec3::dot(*prior, cand)));
        }
        let n = vec3::norm(cand);
        if n > 1e-6 {
            chosen.push(vec3::scale(cand, 1.0 / n));
        }
    }
    // A d-dimensional subspace always catches d of the three canonical axes,
    // so this fills; keep the raw basis if numerics ever say otherwise.
    if chosen.len() == end - start {
        for (offset, v) in chosen.iter().enumerate() {
            vectors[start + offset] = *v;
        }
    }
}
