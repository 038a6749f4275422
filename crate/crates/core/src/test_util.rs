//! Shared helpers for unit tests.

use crate::quat::UnitQuaternion;

/// Component-level disagreement, insensitive to the double-cover sign.
/// Preferred over `angular_distance` for near-equality checks: arccos
/// amplifies 1-ulp dot-product rounding to ~1e-8 near zero distance, while
/// this stays at the rounding scale (and ~ half the angle for small angles).
pub fn component_gap(a: &UnitQuaternion, b: &UnitQuaternion) -> f64 {
    let ca = a.components();
    let cb = b.components();
    let mut diff = 0.0f64;
    let mut sum = 0.0f64;
    for i in 0..4 {
        diff += (ca[i] - cb[i]) * (ca[i] - cb[i]);
        sum += (ca[i] + cb[i]) * (ca[i] + cb[i]);
    }
    diff.sqrt().min(sum.sqrt())
}
