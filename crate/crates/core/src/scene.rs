//! Synthetic scene generation: a shape cloud posed by a random rigid
//! transform, corrupted by Gaussian noise and half-space cropping.
//!
//! Everything derives from one scene seed through fixed sub-streams, so
//! a scene is reproducible from `(spec, seed, noise, crop)` alone.

use crate::cloud::PointCloud;
use crate::fitter::PoseEstimate;
use crate::quat::UnitQuaternion;
use crate::rand_util::{derive_seed, rng_from_seed, standard_normal3};
use crate::shapes::{gen_shape, ShapeSpec};
use crate::vec3;
use rand::Rng;

/// One benchmark scene: the model cloud in canonical pose, the observed
/// cloud after the ground-truth transform plus corruption, and the
/// transform itself.
#[derive(Debug, Clone)]
pub struct Scene {
    pub model: PointCloud,
    pub observed: PointCloud,
    pub gt: PoseEstimate,
    pub noise_sigma: f64,
    pub crop_fraction: f64,
}

/// Removes the `fraction` of points sitting farthest along `direction`,
/// keeping the rest in their original order. Rounds the removal count
/// down, so `fraction = 0.5` keeps ceil(n/2) points.
pub fn crop_extreme(cloud: &PointCloud, direction: [f64; 3], fraction: f64) -> PointCloud {
    assert!((0.0..=0.5).contains(&fraction), "crop fraction outside [0, 0.5]");
    let n = cloud.len();
    let n_remove = (fraction * n as f64).floor() as usize;
    if n_remove == 0 {
        return cloud.clone();
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        let di = vec3::dot(cloud.points[i], direction);
        let dj = vec3::dot(cloud.points[j], direction);
        dj.partial_cmp(&di).unwrap().then(i.cmp(&j))
    });
    let mut removed = vec![false; n];
    for &i in order.iter().take(n_remove) {
        removed[i] = true;
    }
    PointCloud::new(
        cloud
            .points
            .iter()
            .zip(&removed)
            .filter(|(_, r)| !**r)
            .map(|(p, _)| *p)
            .collect(),
    )
}

/// Builds a scene from one seed: the model is sampled fresh, the
/// ground-truth rotation is uniform on the rotation group (normalized
/// 4-component Gaussian), the translation uniform in [-0.5, 0.5]^3,
/// per-point isotropic Gaussian noise is added, and a random half-space
/// crop removes the requested fraction of points.
pub fn make_scene(
    spec: &ShapeSpec,
    scene_seed: u64,
    noise_sigma: f64,
    crop_fraction: f64,
) -> Scene {
    assert!(
        noise_sigma.is_finite() && noise_sigma >= 0.0,
        "noise sigma must be finite and non-negative"
    );
    assert!(
        (0.0..=0.5).contains(&crop_fraction),
        "crop fraction outside [0, 0.5]"
    );
    let model = gen_shape(spec, derive_seed(scene_seed, 0));

    let mut pose_rng = rng_from_seed(derive_seed(scene_seed, 1));
    let rotation = UnitQuaternion::sample_uniform(&mut pose_rng);
    let translation = [
        pose_rng.random::<f64>() - 0.5,
        pose_rng.random::<f64>() - 0.5,
        pose_rng.random::<f64>() - 0.5,
    ];

    let mut noise_rng = rng_from_seed(derive_seed(scene_seed, 2));
    let posed = PointCloud::new(
        model
            .points
            .iter()
            .map(|p| {
                let moved = vec3::add(rotation.rotate(*p), translation);
                if noise_sigma > 0.0 {
                    vec3::add(moved, vec3::scale(standard_normal3(&mut noise_rng), noise_sigma))
                } else {
                    moved
                }
            })
            .collect(),
    );

    let mut crop_rng = rng_from_seed(derive_seed(scene_seed, 3));
    let observed = if crop_fraction > 0.0 {
        let direction = loop {
            if let Some(d) = vec3::normalize(standard_normal3(&mut crop_rng)) {
                break d;
            }
        };
        crop_extreme(&posed, direction, crop_fraction)
    } else {
        posed
    };

    Scene {
        model,
        observed,
        gt: PoseEstimate { rotation, translation },
        noise_sigma,
        crop_fraction,
    }
}
