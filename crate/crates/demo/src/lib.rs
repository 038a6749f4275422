//! Browser demo bindings: three operations over the core toolkit, each
//! returning a JSON string the static page renders directly. The JSON is
//! assembled by hand; every value is a number, a fixed key, or a shape
//! name, so no escaping is ever needed. All functions are plain Rust and
//! are exercised natively by the unit tests; the wasm-bindgen attribute
//! only adds the browser glue.

use sympose::cloud::PointCloud;
use sympose::fitter::{fit_pose, FitConfig, FitMode};
use sympose::losses::LossStage;
use sympose::metrics::{rot_error_mod_sym, trans_error, DENSE_EQ_SAMPLES};
use sympose::scene::make_scene;
use sympose::shapes::{gen_shape, ShapeKind, ShapeSpec};
use sympose::symmetry::{
    estimate_mirror_planes, estimate_rotational_axis, SymmetryKind, SymmetrySpec,
    DEFAULT_KEEP_THRESHOLD, DEFAULT_PROBE_ANGLES,
};
use wasm_bindgen::prelude::wasm_bindgen;

fn err_json(message: &str) -> String {
    format!("{{\"error\":\"{message}\"}}")
}

fn points_json(cloud: &PointCloud) -> String {
    let rows: Vec<String> = cloud
        .points
        .iter()
        .map(|p| format!("[{:.5},{:.5},{:.5}]", p[0], p[1], p[2]))
        .collect();
    format!("[{}]", rows.join(","))
}

fn vec3_json(v: [f64; 3]) -> String {
    format!("[{:.5},{:.5},{:.5}]", v[0], v[1], v[2])
}

fn pose_json(rotation: &sympose::quat::UnitQuaternion, translation: [f64; 3]) -> String {
    let q = rotation.components();
    format!(
        "{{\"rotation\":[{:.6},{:.6},{:.6},{:.6}],\"translation\":{}}}",
        q[0],
        q[1],
        q[2],
        q[3],
        vec3_json(translation)
    )
}

fn sym_json(spec: &SymmetrySpec) -> String {
    let kind = match spec.kind {
        SymmetryKind::Rotational => "rotational",
        SymmetryKind::Mirror => "mirror",
        SymmetryKind::Asymmetric => "asymmetric",
    };
    let planes: Vec<String> = spec.plane_normals.iter().map(|n| vec3_json(*n)).collect();
    format!(
        "{{\"kind\":\"{kind}\",\"weights\":{},\"planes\":[{}]}}",
        vec3_json(spec.axis_distribution),
        planes.join(",")
    )
}

fn parse_spec(shape: &str, samples: usize) -> Result<ShapeSpec, String> {
    let kind = ShapeKind::parse(shape)
        .ok_or_else(|| format!("unknown shape '{shape}'"))?;
    if !(16..=8192).contains(&samples) {
        return Err(format!("samples {samples} outside 16..=8192"));
    }
    Ok(ShapeSpec::new(kind, samples))
}

/// Names of the available shapes, most symmetric first.
#[wasm_bindgen]
pub fn shapes() -> String {
    let names: Vec<String> = ShapeKind::ALL
        .iter()
        .map(|k| format!("\"{}\"", k.name()))
        .collect();
    format!("[{}]", names.join(","))
}

/// Samples a model cloud in canonical pose.
#[wasm_bindgen]
pub fn gen_cloud(shape: &str, seed: u32, samples: usize) -> String {
    let spec = match parse_spec(shape, samples) {
        Ok(spec) => spec,
        Err(message) => return err_json(&message),
    };
    let cloud = gen_shape(&spec, seed as u64);
    format!("{{\"shape\":\"{shape}\",\"points\":{}}}", points_json(&cloud))
}

/// Runs both symmetry estimators on a freshly sampled model cloud.
#[wasm_bindgen]
pub fn probe_symmetry(shape: &str, seed: u32, samples: usize) -> String {
    let spec = match parse_spec(shape, samples) {
        Ok(spec) => spec,
        Err(message) => return err_json(&message),
    };
    let cloud = gen_shape(&spec, seed as u64);
    let (axis, pi) = estimate_rotational_axis(&cloud, DEFAULT_PROBE_ANGLES);
    let planes = match estimate_mirror_planes(&cloud, DEFAULT_KEEP_THRESHOLD) {
        Ok(spec) => {
            let rows: Vec<String> =
                spec.plane_normals.iter().map(|n| vec3_json(*n)).collect();
            format!("[{}]", rows.join(","))
        }
        Err(_) => "[]".to_string(),
    };
    format!(
        "{{\"shape\":\"{shape}\",\"axis\":{},\"weights\":{},\"planes\":{planes}}}",
        vec3_json(axis),
        vec3_json(pi)
    )
}

/// Mean finite objective per iteration of one phase, as [iteration, value]
/// pairs.
fn trace_json(report: &sympose::fitter::FitReport, phase: LossStage) -> String {
    let mut sums: Vec<(f64, usize)> = Vec::new();
    for entry in &report.objective_trace {
        if entry.phase != phase || !entry.value.is_finite() {
            continue;
        }
        if sums.len() <= entry.iteration {
            sums.resize(entry.iteration + 1, (0.0, 0));
        }
        sums[entry.iteration].0 += entry.value;
        sums[entry.iteration].1 += 1;
    }
    let rows: Vec<String> = sums
        .iter()
        .enumerate()
        .filter(|(_, (_, n))| *n > 0)
        .map(|(i, (total, n))| format!("[{i},{:.6}]", total / *n as f64))
        .collect();
    format!("[{}]", rows.join(","))
}

/// Builds a scene, fits the pose, and reports clouds, poses, errors, and
/// the per-phase objective trace.
#[wasm_bindgen]
pub fn fit_demo(
    shape: &str,
    seed: u32,
    samples: usize,
    noise: f64,
    crop: f64,
    blind: bool,
) -> String {
    let spec = match parse_spec(shape, samples) {
        Ok(spec) => spec,
        Err(message) => return err_json(&message),
    };
    if !(0.0..=0.05).contains(&noise) {
        return err_json(&format!("noise {noise} outside 0..=0.05"));
    }
    if !(0.0..=0.5).contains(&crop) {
        return err_json(&format!("crop {crop} outside 0..=0.5"));
    }
    let scene = make_scene(&spec, seed as u64, noise, crop);
    let cfg = FitConfig::default();
    let mode = if blind {
        FitMode::Blind
    } else {
        FitMode::Supervised(scene.gt.rotation)
    };
    let report = match fit_pose(
        &scene.observed,
        &scene.model,
        spec.true_symmetry().kind,
        &cfg,
        mode,
    ) {
        Ok(report) => report,
        Err(error) => return err_json(&format!("fit failed: {error}")),
    };
    let rot_err = rot_error_mod_sym(
        &report.estimate.rotation,
        &scene.gt.rotation,
        &spec.true_symmetry(),
        DENSE_EQ_SAMPLES,
    );
    let trans_err = trans_error(report.estimate.translation, scene.gt.translation);
    let survivors = report
        .aggregate_weights
        .iter()
        .filter(|w| **w > 0.0)
        .count();
    let objective: f64 = report
        .per_candidate_final_objectives
        .iter()
        .zip(&report.aggregate_weights)
        .filter(|(_, w)| **w > 0.0)
        .map(|(o, w)| o * w)
        .sum();
    format!(
        "{{\"shape\":\"{shape}\",\"model\":{},\"observed\":{},\"gt\":{},\"estimate\":{},\
         \"rot_err_deg\":{rot_err:.6},\"trans_err_cm\":{trans_err:.6},\
         \"objective\":{objective:.6},\"survivors\":{survivors},\"k\":{},\
         \"estimated_symmetry\":{},\"trace\":{{\"warmup\":{},\"main\":{}}}}}",
        points_json(&scene.model),
        points_json(&scene.observed),
        pose_json(&scene.gt.rotation, scene.gt.translation),
        pose_json(&report.estimate.rotation, report.estimate.translation),
        report.aggregate_weights.len(),
        sym_json(&report.estimated_symmetry),
        trace_json(&report, LossStage::Warmup),
        trace_json(&report, LossStage::Main),
    )
}
