//! Unit quaternions on the 3-sphere, tangent-space maps, and rigid transforms.
//!
//! Conventions, fixed crate-wide:
//! - storage is scalar-first `(w, x, y, z)` with Hamilton composition;
//! - `q` and `-q` encode the same rotation (double cover), and every distance
//!   here is sign-insensitive;
//! - `log_map` uses the principal branch: the hemisphere of `q` closest to the
//!   identity, so the returned angle lies in `[0, pi)`.

use rand::Rng;

use crate::rand_util;
use crate::vec3;
use crate::{Error, Result};

/// Norm threshold below which a 4-vector cannot be normalized.
const NORM_FLOOR: f64 = 1e-12;
/// Norm threshold below which an averaged quaternion is considered cancelled.
const MEAN_FLOOR: f64 = 1e-9;
/// Angle below which `exp_map` switches to its series expansion.
const EXP_SERIES_THRESHOLD: f64 = 1e-8;

fn dot4(a: [f64; 4], b: [f64; 4]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
}

fn norm4(a: [f64; 4]) -> f64 {
    dot4(a, a).sqrt()
}

/// A rotation stored as a scalar-first unit quaternion.
///
/// Constructors guarantee `w^2 + x^2 + y^2 + z^2 = 1` within 1e-9; arithmetic
/// renormalizes to keep repeated composition from drifting.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitQuaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// A rotation expressed in the tangent space at the identity: `angle * axis`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TangentVector(pub [f64; 3]);

impl TangentVector {
    pub fn zero() -> Self {
        TangentVector([0.0; 3])
    }

    pub fn norm(&self) -> f64 {
        vec3::norm(self.0)
    }
}

impl UnitQuaternion {
    pub fn identity() -> Self {
        UnitQuaternion {
            w: 1.0,
            x: 0.0,
            y: 0.0,
            z: 0.0,
        }
    }

    /// Builds a unit quaternion from raw components by normalizing them.
    pub fn normalize(components: [f64; 4]) -> Result<Self> {
        let n = norm4(components);
        if n <= NORM_FLOOR {
            return Err(Error::NearZeroNorm { norm: n });
        }
        Ok(UnitQuaternion {
            w: components[0] / n,
            x: components[1] / n,
            y: components[2] / n,
            z: components[3] / n,
        })
    }

    /// Rotation of `angle` radians about `axis` (normalized internally).
    pub fn from_axis_angle(axis: [f64; 3], angle: f64) -> Result<Self> {
        let n = vec3::norm(axis);
        if n <= NORM_FLOOR {
            return Err(Error::NearZeroNorm { norm: n });
        }
        let half = 0.5 * angle;
        let s = half.sin() / n;
        Ok(UnitQuaternion {
            w: half.cos(),
            x: axis[0] * s,
            y: axis[1] * s,
            z: axis[2] * s,
        })
    }

    pub fn components(&self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn vector(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(&self, other: &UnitQuaternion) -> f64 {
        dot4(self.components(), other.components())
    }

    /// Hamilton product `self * other` (apply `other` first, then `self` when
    /// rotating vectors), renormalized.
    pub fn compose(&self, other: &UnitQuaternion) -> UnitQuaternion {
        let (aw, ax, ay, az) = (self.w, self.x, self.y, self.z);
        let (bw, bx, by, bz) = (other.w, other.x, other.y, other.z);
        let raw = [
            aw * bw - ax * bx - ay * by - az * bz,
            aw * bx + ax * bw + ay * bz - az * by,
            aw * by - ax * bz + ay * bw + az * bx,
            aw * bz + ax * by - ay * bx + az * bw,
        ];
        // Inputs are unit, so the norm is 1 up to rounding; division is safe.
        let n = norm4(raw);
        UnitQuaternion {
            w: raw[0] / n,
            x: raw[1] / n,
            y: raw[2] / n,
            z: raw[3] / n,
        }
    }

    /// Conjugate; for unit quaternions this is the inverse rotation.
    pub fn inverse(&self) -> UnitQuaternion {
        UnitQuaternion {
            w: self.w,
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }

    /// Flips sign so that `<self, reference> >= 0`; an exactly zero dot
    /// product leaves `self` unchanged.
    pub fn hemisphere_align(&self, reference: &UnitQuaternion) -> UnitQuaternion {
        if self.dot(reference) >= 0.0 {
            *self
        } else {
            -*self
        }
    }

    /// Principal-branch logarithm: returns `angle * axis` with the angle taken
    /// in `[0, pi)` from the hemisphere of `self` closest to the identity.
    pub fn log_map(&self) -> TangentVector {
        let (w, v) = if self.w < 0.0 {
            (-self.w, vec3::neg(self.vector()))
        } else {
            (self.w, self.vector())
        };
        let s = vec3::norm(v);
        if s <= NORM_FLOOR {
            // angle ~ 2s, axis ~ v/s: the product collapses to 2v.
            return TangentVector(vec3::scale(v, 2.0));
        }
        let angle = 2.0 * s.atan2(w);
        TangentVector(vec3::scale(v, angle / s))
    }

    /// Exponential map: `delta = angle * axis` to `(cos(angle/2),
    /// sin(angle/2) * axis)`. A series expansion covers angles below 1e-8
    /// where the direct quotient would divide by zero.
    pub fn exp_map(delta: TangentVector) -> UnitQuaternion {
        let d = delta.0;
        let angle = vec3::norm(d);
        let k = if angle < EXP_SERIES_THRESHOLD {
            // sin(angle/2)/angle = 1/2 - angle^2/48 + O(angle^4)
            0.5 - angle * angle / 48.0
        } else {
            (0.5 * angle).sin() / angle
        };
        UnitQuaternion {
            w: (0.5 * angle).cos(),
            x: d[0] * k,
            y: d[1] * k,
            z: d[2] * k,
        }
    }

    /// Geodesic distance on the rotation group, sign-insensitive:
    /// `2 * arccos(clamp(|<q1, q2>|, 0, 1))`, in `[0, pi]`.
    pub fn angular_distance(&self, other: &UnitQuaternion) -> f64 {
        2.0 * self.dot(other).abs().clamp(0.0, 1.0).acos()
    }

    /// Applies the rotation to a point.
    pub fn rotate(&self, p: [f64; 3]) -> [f64; 3] {
        // v' = v + w * (2 qv x v) + qv x (2 qv x v)
        let qv = self.vector();
        let t = vec3::scale(vec3::cross(qv, p), 2.0);
        vec3::add(p, vec3::add(vec3::scale(t, self.w), vec3::cross(qv, t)))
    }

    /// Uniform random rotation: a normalized standard 4-dimensional Gaussian.
    pub fn sample_uniform<R: Rng>(rng: &mut R) -> UnitQuaternion {
        loop {
            let raw = [
                rand_util::standard_normal(rng),
                rand_util::standard_normal(rng),
                rand_util::standard_normal(rng),
                rand_util::standard_normal(rng),
            ];
            if let Ok(q) = UnitQuaternion::normalize(raw) {
                return q;
            }
        }
    }
}

impl std::ops::Neg for UnitQuaternion {
    type Output = UnitQuaternion;

    fn neg(self) -> UnitQuaternion {
        UnitQuaternion {
            w: -self.w,
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }
}

/// Sign-aligned average of a non-empty set of rotations.
///
/// The naive component mean picks a reference hemisphere; every element is
/// sign-aligned to it, averaged again, and the result normalized back to the
/// sphere. Errors with [`Error::DegenerateMean`] when either average cancels
/// below 1e-9, which is exactly the perfectly antipodal case: such a set has
/// no preferred hemisphere, so no mean is reported.
pub fn mean_quaternion(quaternions: &[UnitQuaternion]) -> Result<UnitQuaternion> {
    assert!(!quaternions.is_empty(), "mean of an empty quaternion set");
    let k = quaternions.len() as f64;
    let mut naive = [0.0; 4];
    for q in quaternions {
        let c = q.components();
        for i in 0..4 {
            naive[i] += c[i] / k;
        }
    }
    let naive_norm = norm4(naive);
    if naive_norm <= MEAN_FLOOR {
        return Err(Error::DegenerateMean { norm: naive_norm });
    }
    let mut aligned = [0.0; 4];
    for q in quaternions {
        let c = q.components();
        let sign = if dot4(c, naive) >= 0.0 { 1.0 } else { -1.0 };
        for i in 0..4 {
            aligned[i] += sign * c[i] / k;
        }
    }
    let aligned_norm = norm4(aligned);
    if aligned_norm <= MEAN_FLOOR {
        return Err(Error::DegenerateMean {
            norm: aligned_norm,
        });
    }
    Ok(UnitQuaternion {
        w: aligned[0] / aligned_norm,
        x: aligned[1] / aligned_norm,
        y: aligned[2] / aligned_norm,
        z: aligned[3] / aligned_norm,
    })
}

/// A rigid transform: rotate, then translate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RigidTransform {
    pub rotation: UnitQuaternion,
    pub translation: [f64; 3],
}

impl RigidTransform {
    pub fn identity() -> Self {
        RigidTransform {
            rotation: UnitQuaternion::identity(),
            translation: [0.0; 3],
        }
    }

    pub fn new(rotation: UnitQuaternion, translation: [f64; 3]) -> Self {
        RigidTransform {
            rotation,
            translation,
        }
    }

    /// `self * other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &RigidTransform) -> RigidTransform {
        RigidTransform {
            rotation: self.rotation.compose(&other.rotation),
            translation: vec3::add(
                self.rotation.rotate(other.translation),
                self.translation,
            ),
        }
    }

    pub fn inverse(&self) -> RigidTransform {
        let inv_rot = self.rotation.inverse();
        RigidTransform {
            rotation: inv_rot,
            translation: vec3::neg(inv_rot.rotate(self.translation)),
        }
    }

    pub fn apply(&self, p: [f64; 3]) -> [f64; 3] {
        vec3::add(self.rotation.rotate(p), self.translation)
    }
}
