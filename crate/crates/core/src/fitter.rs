//! Candidate-based pose fitting: perturb, refine, aggregate.
//!
//! A pool of perturbed rotation candidates is refined independently by
//! finite-difference descent on a symmetry-aware objective, then collapsed
//! into one estimate by a Boltzmann-weighted quaternion mean. Fitting runs
//! in two phases: a warm-up objective built from canonical axes, then a
//! main objective built from the symmetry estimated on the model cloud.

use crate::candidates::CandidateSet;
use crate::cloud::{chamfer_to_index, NnIndex, PointCloud};
use crate::losses::{
    asym_loss, cand_rot_loss, loss_gradient, mirror_geom_term, LossStage, SoftMinConfig, GRAD_STEP,
};
use crate::quat::{TangentVector, UnitQuaternion};
use crate::rand_util::{rng_from_seed, standard_normal3};
use crate::symmetry::{
    equivalent_set_mirror, equivalent_set_rotational, estimate_mirror_planes,
    estimate_rotational_axis, synth_axis, EquivalentSet, SymmetryKind, SymmetrySpec,
    DEFAULT_KEEP_THRESHOLD, DEFAULT_PROBE_ANGLES,
};
use crate::vec3;
use crate::{Error, Result};

/// Step size below which refinement stops.
const MIN_ETA: f64 = 1e-6;

/// Rigid pose: rotation plus translation in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoseEstimate {
    pub rotation: UnitQuaternion,
    pub translation: [f64; 3],
}

/// Knobs for the candidate pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitConfig {
    /// Candidate count.
    pub k: usize,
    /// Candidate perturbation scale, radians.
    pub sigma: f64,
    /// Descent iterations per candidate in the main phase.
    pub steps: usize,
    /// Initial step size, halved on non-decrease.
    pub eta: f64,
    /// Equivalent samples per rotational set.
    pub n_eq: usize,
    /// Soft-min temperature.
    pub beta: f64,
    /// Descent iterations per candidate in the warm-up phase.
    pub warmup_steps: usize,
    /// RNG seed for candidate generation.
    pub seed: u64,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig {
            k: 64,
            sigma: 0.3,
            steps: 100,
            eta: 0.5,
            n_eq: 36,
            beta: 10.0,
            warmup_steps: 30,
            seed: 0,
        }
    }
}

impl FitConfig {
    /// Panics on parameters no fit can run with.
    pub fn validate(&self) {
        assert!(self.k >= 1, "need at least one candidate");
        assert!(self.steps >= 1 && self.warmup_steps >= 1 && self.n_eq >= 1);
        assert!(self.sigma >= 0.0, "sigma must be non-negative");
        assert!(self.eta > 0.0, "eta must be positive");
        assert!(self.beta > 0.0, "beta must be positive");
    }
}

/// Ground-truth supervision or model-registration fitting.
#[derive(Debug, Clone, Copy)]
pub enum FitMode {
    Supervised(UnitQuaternion),
    Blind,
}

/// One objective sample: which phase, which candidate, which descent
/// iteration (0 is the pre-descent value), and the objective value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceEntry {
    pub phase: LossStage,
    pub candidate: usize,
    pub iteration: usize,
    pub value: f64,
}

/// Everything a fit produces, including per-candidate diagnostics.
#[derive(Debug, Clone)]
pub struct FitReport {
    pub estimate: PoseEstimate,
    /// Main-phase objective of each candidate after refinement; failed
    /// candidates carry infinity.
    pub per_candidate_final_objectives: Vec<f64>,
    /// Aggregation weights, zero for failed candidates, summing to one.
    pub aggregate_weights: Vec<f64>,
    pub estimated_symmetry: SymmetrySpec,
    pub objective_trace: Vec<TraceEntry>,
}

/// Draws k candidates q_i = exp(sigma * z_i) "compose" q_init with z_i
/// standard normal from the seeded generator; sigma = 0 copies q_init.
pub fn generate_candidates(
    q_init: &UnitQuaternion,
    k: usize,
    sigma: f64,
    seed: u64,
) -> CandidateSet {
    assert!(sigma >= 0.0, "sigma must be non-negative");
    assert!(k >= 1, "need at least one candidate");
    let mut rng = rng_from_seed(seed);
    let quaternions = (0..k)
        .map(|_| {
            let z = standard_normal3(&mut rng);
            UnitQuaternion::exp_map(TangentVector(vec3::scale(z, sigma))).compose(q_init)
        })
        .collect();
    CandidateSet::new(quaternions)
}

/// Tangent-space descent on a rotation objective: step along the negative
/// finite-difference gradient, reject steps that fail to decrease the
/// objective and halve the step size; stops after `steps` iterations or
/// once the step size drops below 1e-6. The returned trace starts at the
/// initial value and never increases.
pub fn refine_candidate<F>(
    q: &UnitQuaternion,
    objective: F,
    steps: usize,
    eta: f64,
) -> Result<(UnitQuaternion, Vec<f64>)>
where
    F: Fn(&UnitQuaternion) -> f64,
{
    assert!(eta > 0.0, "eta must be positive");
    let mut current = *q;
    let mut value = objective(&current);
    if !value.is_finite() {
        return Err(Error::NonFiniteObjective { value });
    }
    let mut trace = Vec::with_capacity(steps + 1);
    trace.push(value);
    let mut step = eta;
    // The gradient only changes when the iterate moves, so a rejected step
    // reuses it instead of re-probing the objective.
    let mut cached_gradient: Option<[f64; 3]> = None;
    for _ in 0..steps {
        if step < MIN_ETA {
            break;
        }
        let gradient = match cached_gradient {
            Some(g) => g,
            None => {
                let (rot, _) =
                    loss_gradient(|qq, _| objective(qq), &current, [0.0; 3], GRAD_STEP)?;
                cached_gradient = Some(rot);
                rot
            }
        };
        let delta = TangentVector(vec3::scale(gradient, -step));
        let proposal = UnitQuaternion::exp_map(delta).compose(&current);
        let proposed = objective(&proposal);
        if proposed.is_finite() && proposed < value {
            current = proposal;
            value = proposed;
            cached_gradient = None;
        } else {
            step *= 0.5;
        }
        trace.push(value);
    }
    Ok((current, trace))
}

/// Collapses candidates into one rotation: Boltzmann weights of the
/// objectives at temperature `beta`, hemisphere alignment against the
/// best candidate (lowest objective, ties to the lowest index), weighted
/// component mean, renormalized.
pub fn aggregate(
    candidates: &CandidateSet,
    objectives: &[f64],
    beta: f64,
) -> Result<(UnitQuaternion, Vec<f64>)> {
    let k = candidates.quaternions.len();
    assert_eq!(k, objectives.len(), "one objective per candidate");
    assert!(objectives.iter().all(|o| o.is_finite()), "objectives must be finite");
    assert!(beta > 0.0, "beta must be positive");
    let mut best = 0;
    for i in 1..k {
        if objectives[i] < objectives[best] {
            best = i;
        }
    }
    let floor = objectives[best];
    let raw: Vec<f64> = objectives.iter().map(|o| (-beta * (o - floor)).exp()).collect();
    let total: f64 = raw.iter().sum();
    let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
    let reference = candidates.quaternions[best];
    let mut sum = [0.0; 4];
    for (q, w) in candidates.quaternions.iter().zip(&weights) {
        let aligned = q.hemisphere_align(&reference).components();
        for (s, c) in sum.iter_mut().zip(aligned) {
            *s += w * c;
        }
    }
    let norm = sum.iter().map(|c| c * c).sum::<f64>().sqrt();
    if norm <= 1e-9 {
        return Err(Error::DegenerateMean { norm });
    }
    Ok((UnitQuaternion::normalize(sum)?, weights))
}

/// Closed-form translation once the rotation is fixed: the offset that
/// matches the rotated model centroid to the observed centroid.
pub fn estimate_translation(
    p_obs: &PointCloud,
    model: &PointCloud,
    q: &UnitQuaternion,
) -> [f64; 3] {
    assert!(!p_obs.is_empty() && !model.is_empty(), "clouds must be non-empty");
    vec3::sub(p_obs.centroid(), q.rotate(model.centroid()))
}

/// The 24 rotations mapping the coordinate axes onto themselves (identity
/// included), generated by closing quarter turns under composition.
/// Deterministic insertion order.
fn coarse_rotation_hypotheses() -> Vec<UnitQuaternion> {
    let quarter = std::f64::consts::FRAC_PI_2;
    let generators: Vec<UnitQuaternion> = vec3::CANONICAL_AXES
        .iter()
        .map(|axis| UnitQuaternion::from_axis_angle(*axis, quarter).expect("unit axis"))
        .collect();
    let mut elems = vec![UnitQuaternion::identity()];
    let mut frontier = elems.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for e in &frontier {
            for g in &generators {
                let p = g.compose(e);
                if !elems.iter().any(|x| x.angular_distance(&p) < 1e-6) {
                    elems.push(p);
                    next.push(p);
                }
            }
        }
        frontier = next;
    }
    debug_assert_eq!(elems.len(), 24);
    elems
}

/// Rotation-only registration Chamfer between the posed model and the
/// observation, both centered so the centroid-matching translation is
/// implicit. Both directions reduce to static-index queries: the reverse
/// direction queries the model index with inversely rotated points.
struct ChamferObjective {
    model: PointCloud,
    obs: PointCloud,
    model_index: NnIndex,
    obs_index: NnIndex,
}

impl ChamferObjective {
    fn new(p_obs: &PointCloud, model: &PointCloud) -> Self {
        let model = model.centered();
        let obs = p_obs.centered();
        let model_index = NnIndex::build(&model.points);
        let obs_index = NnIndex::build(&obs.points);
        ChamferObjective { model, obs, model_index, obs_index }
    }

    fn eval(&self, q: &UnitQuaternion) -> f64 {
        let forward = chamfer_to_index(&self.model.rotated(q), &self.obs_index);
        let backward = chamfer_to_index(&self.obs.rotated(&q.inverse()), &self.model_index);
        0.5 * (forward + backward)
    }
}

/// Per-candidate rotation objective for one phase of one fit.
enum Objective<'a> {
    /// Soft-min distance to the nearest of several equivalent sets plus a
    /// constant geometric term (hard-min over sets realizes the canonical
    /// warm-up; a single set realizes the main phase).
    Sets {
        sets: Vec<EquivalentSet>,
        constant: f64,
        soft: SoftMinConfig,
    },
    /// Plain angular distance to the ground truth.
    Direct { q_gt: UnitQuaternion },
    /// Registration Chamfer against the observation.
    Registration(&'a ChamferObjective),
}

impl Objective<'_> {
    fn eval(&self, q: &UnitQuaternion) -> f64 {
        match self {
            Objective::Sets { sets, constant, soft } => {
                let single = CandidateSet::new(vec![*q]);
                sets.iter()
                    .map(|set| cand_rot_loss(&single, set, soft))
                    .fold(f64::INFINITY, f64::min)
                    + constant
            }
            Objective::Direct { q_gt } => asym_loss(q, q_gt),
            Objective::Registration(chamfer) => chamfer.eval(q),
        }
    }
}

/// Two-phase candidate fit.
///
/// Initialization (blind: best of 24 coarse rotations by registration
/// Chamfer; supervised: the ground truth) seeds the candidate pool; the
/// warm-up phase refines against canonical-axis objectives, the symmetry
/// of the model cloud is then estimated, and the main phase refines
/// against the estimated symmetry before aggregation. Candidates whose
/// refinement fails are recorded with infinite objective and zero weight;
/// the fit aborts only when fewer than half survive.
pub fn fit_pose(
    p_obs: &PointCloud,
    model: &PointCloud,
    sym_kind: SymmetryKind,
    cfg: &FitConfig,
    mode: FitMode,
) -> Result<FitReport> {
    cfg.validate();
    assert!(!p_obs.is_empty() && !model.is_empty(), "clouds must be non-empty");
    let soft = SoftMinConfig::new(cfg.beta);

    let chamfer = ChamferObjective::new(p_obs, model);
    let q_init = match mode {
        FitMode::Supervised(q_gt) => q_gt,
        FitMode::Blind => {
            let hypotheses = coarse_rotation_hypotheses();
            let mut best = hypotheses[0];
            let mut best_value = chamfer.eval(&best);
            for h in &hypotheses[1..] {
                let value = chamfer.eval(h);
                if value < best_value {
                    best = *h;
                    best_value = value;
                }
            }
            best
        }
    };

    let candidates = generate_candidates(&q_init, cfg.k, cfg.sigma, cfg.seed);

    let warmup_objective = match mode {
        FitMode::Blind => Objective::Registration(&chamfer),
        FitMode::Supervised(q_gt) => match sym_kind {
            SymmetryKind::Rotational => Objective::Sets {
                sets: vec3::CANONICAL_AXES
                    .iter()
                    .map(|axis| equivalent_set_rotational(&q_gt, *axis, cfg.n_eq))
                    .collect(),
                constant: 0.0,
                soft,
            },
            SymmetryKind::Mirror => Objective::Sets {
                sets: vec3::CANONICAL_AXES
                    .iter()
                    .map(|axis| equivalent_set_mirror(&q_gt, &[*axis]))
                    .collect(),
                constant: mirror_geom_term(model, &vec3::CANONICAL_AXES),
                soft,
            },
            SymmetryKind::Asymmetric => Objective::Direct { q_gt },
        },
    };

    let mut trace = Vec::new();
    let mut warmed = Vec::with_capacity(cfg.k);
    for (i, q) in candidates.quaternions.iter().enumerate() {
        match refine_candidate(q, |qq| warmup_objective.eval(qq), cfg.warmup_steps, cfg.eta) {
            Ok((refined, values)) => {
                for (it, v) in values.iter().enumerate() {
                    trace.push(TraceEntry {
                        phase: LossStage::Warmup,
                        candidate: i,
                        iteration: it,
                        value: *v,
                    });
                }
                warmed.push(Some(refined));
            }
            Err(_) => warmed.push(None),
        }
    }

    let estimated_symmetry = match sym_kind {
        SymmetryKind::Rotational => {
            let (_, pi) = estimate_rotational_axis(model, DEFAULT_PROBE_ANGLES);
            SymmetrySpec::rotational(pi)
        }
        SymmetryKind::Mirror => estimate_mirror_planes(model, DEFAULT_KEEP_THRESHOLD)?,
        SymmetryKind::Asymmetric => SymmetrySpec::asymmetric(),
    };

    let main_objective = match mode {
        FitMode::Blind => Objective::Registration(&chamfer),
        FitMode::Supervised(q_gt) => match sym_kind {
            SymmetryKind::Rotational => {
                let axis = synth_axis(estimated_symmetry.axis_distribution)?;
                Objective::Sets {
                    sets: vec![equivalent_set_rotational(&q_gt, axis, cfg.n_eq)],
                    constant: 0.0,
                    soft,
                }
            }
            SymmetryKind::Mirror => Objective::Sets {
                sets: vec![equivalent_set_mirror(&q_gt, &estimated_symmetry.plane_normals)],
                constant: mirror_geom_term(model, &estimated_symmetry.plane_normals),
                soft,
            },
            SymmetryKind::Asymmetric => Objective::Direct { q_gt },
        },
    };

    let mut finals = Vec::with_capacity(cfg.k);
    let mut objectives = vec![f64::INFINITY; cfg.k];
    for (i, start) in warmed.iter().enumerate() {
        let Some(start) = start else {
            finals.push(None);
            continue;
        };
        match refine_candidate(start, |qq| main_objective.eval(qq), cfg.steps, cfg.eta) {
            Ok((refined, values)) => {
                for (it, v) in values.iter().enumerate() {
                    trace.push(TraceEntry {
                        phase: LossStage::Main,
                        candidate: i,
                        iteration: it,
                        value: *v,
                    });
                }
                objectives[i] = *values.last().expect("trace never empty");
                finals.push(Some(refined));
            }
            Err(_) => finals.push(None),
        }
    }

    let survivors: Vec<usize> = (0..cfg.k).filter(|i| finals[*i].is_some()).collect();
    if survivors.len() * 2 < cfg.k {
        return Err(Error::TooFewCandidates { survived: survivors.len(), total: cfg.k });
    }
    let surviving_set = CandidateSet::new(
        survivors
            .iter()
            .map(|i| finals[*i].expect("filtered to survivors"))
            .collect(),
    );
    let surviving_objectives: Vec<f64> = survivors.iter().map(|i| objectives[*i]).collect();
    let (q_final, packed_weights) = aggregate(&surviving_set, &surviving_objectives, cfg.beta)?;
    let mut aggregate_weights = vec![0.0; cfg.k];
    for (slot, w) in survivors.iter().zip(&packed_weights) {
        aggregate_weights[*slot] = *w;
    }

    let translation = estimate_translation(p_obs, model, &q_final);
    Ok(FitReport {
        estimate: PoseEstimate { rotation: q_final, translation },
        per_candidate_final_objectives: objectives,
        aggregate_weights,
        estimated_symmetry,
        objective_trace: trace,
    })
}
