//! Symmetry-aware rotation and pose estimation for point-cloud part models.
//!
//! The crate provides the geometric core of a pose-fitting toolkit in which a
//! part's symmetry (rotational about a canonical axis, mirror planes, or none)
//! is treated as a first-class citizen of the objective function rather than a
//! labeling problem:
//!
//! - [`quat`]: unit quaternions on the 3-sphere, tangent-space maps, rigid
//!   transforms, and sign-aware averaging.
//! - [`candidates`]: statistics of a set of rotation hypotheses (mean offset,
//!   concentration, second-moment eigenstructure) packed into a fixed feature.
//! - [`cloud`]: point clouds, exact nearest-neighbor queries, Chamfer
//!   distances.
//! - [`symmetry`]: equivalent rotation sets, reflection consistency, and
//!   canonical-axis symmetry estimation from geometry alone.
//! - [`losses`]: soft-minimum symmetry-aware rotation losses and a
//!   finite-difference gradient helper.
//! - [`frames`]: per-point local reference frames from neighborhood
//!   covariance.
//! - [`fitter`]: the candidates -> refine -> aggregate pose fitter.
//! - [`shapes`], [`scene`], [`metrics`], [`bench`], [`io`]: a synthetic
//!   benchmark harness with deterministic scene generation and CSV reporting.
//!
//! All randomness flows through explicitly seeded generators; every public
//! entry point is deterministic given its seed arguments.

pub mod bench;
pub mod candidates;
pub mod cloud;
mod eig3;
mod error;
pub mod fitter;
pub mod frames;
pub mod io;
pub mod losses;
pub mod metrics;
pub mod quat;
pub(crate) mod rand_util;
pub mod scene;
pub mod shapes;
pub mod symmetry;
#[cfg(test)]
pub(crate) mod test_util;
pub mod vec3;

pub use error::{Error, Result};
