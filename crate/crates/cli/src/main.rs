//! Command-line front end: shape sampling, scene synthesis, pose
//! fitting, symmetry probing, and the benchmark runner.
//!
//! Exit codes: 0 success, 2 configuration or argument errors, 3 file
//! errors, 4 numerical failures.

use clap::{Parser, Subcommand, ValueEnum};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use sympose::bench::{load_config, run_benchmark, scene_fit_config, BenchConfig};
use sympose::fitter::{fit_pose, FitMode, FitReport};
use sympose::metrics::{rot_error_mod_sym, trans_error, DENSE_EQ_SAMPLES};
use sympose::scene::{make_scene, Scene};
use sympose::shapes::{gen_shape, ShapeKind, ShapeSpec, DEFAULT_SAMPLES};
use sympose::symmetry::{
    estimate_mirror_planes, estimate_rotational_axis, SymmetryKind, DEFAULT_KEEP_THRESHOLD,
    DEFAULT_PROBE_ANGLES,
};
use sympose::{io, Error};

#[derive(Parser)]
#[command(
    name = "sympose",
    version,
    about = "Symmetry-aware pose estimation on synthetic point clouds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    /// Initialize candidates at the scene's ground-truth rotation.
    Supervised,
    /// Recover the pose from the clouds alone.
    Blind,
}

fn parse_shape(name: &str) -> Result<ShapeKind, String> {
    ShapeKind::parse(name).ok_or_else(|| {
        let known: Vec<&str> = ShapeKind::ALL.iter().map(|k| k.name()).collect();
        format!("unknown shape {name:?}; known: {}", known.join(", "))
    })
}

#[derive(Subcommand)]
enum Command {
    /// Sample a shape surface into a point-cloud file.
    Gen {
        #[arg(long, value_parser = parse_shape)]
        shape: ShapeKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Points to sample (at least 16).
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        /// Output cloud file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Synthesize a scene: model cloud, corrupted observed cloud, and
    /// the ground-truth pose, written as three files.
    Scene {
        #[arg(long, value_parser = parse_shape)]
        shape: ShapeKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        /// Observation noise, standard deviation in model units.
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        /// Fraction of points removed by a half-space crop, up to 0.5.
        #[arg(long, default_value_t = 0.0)]
        crop: f64,
        /// Output stem; writes <stem>.model.txt, <stem>.observed.txt,
        /// <stem>.gt.txt.
        #[arg(long)]
        out: PathBuf,
    },
    /// Synthesize one scene and fit its pose.
    Fit {
        #[arg(long, value_parser = parse_shape)]
        shape: ShapeKind,
        /// Scene seed; a seed from a benchmark CSV reproduces that row.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        #[arg(long, default_value_t = 0.0)]
        crop: f64,
        #[arg(long, value_enum, default_value_t = Mode::Supervised)]
        mode: Mode,
        /// Benchmark-format config file; its [fit] section tunes the
        /// fitter, command-line flags win on overlap.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Write the estimated pose here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Probe a cloud file for rotational-axis and mirror-plane symmetry.
    Sym {
        /// Point-cloud file to analyze.
        input: PathBuf,
    },
    /// Run the scene benchmark and print a summary.
    Bench {
        /// Benchmark config file; flags below override it.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Master seed override.
        #[arg(long)]
        seed: Option<u64>,
        /// Restrict to one shape.
        #[arg(long, value_parser = parse_shape)]
        shape: Option<ShapeKind>,
        /// Scenes per shape.
        #[arg(long)]
        n_scenes: Option<usize>,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        /// Write the per-scene CSV here (overrides the config's path).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Config { .. } => 2,
        Error::Io(_) | Error::Parse { .. } => 3,
        _ => 4,
    }
}

fn path_str(path: &Path) -> String {
    path.to_string_lossy().into_owned()
}

fn describe_fit(scene: &Scene, report: &FitReport, spec: &ShapeSpec) -> String {
    let est = &report.estimate;
    let rot_err = rot_error_mod_sym(
        &est.rotation,
        &scene.gt.rotation,
        &spec.true_symmetry(),
        DENSE_EQ_SAMPLES,
    );
    let trans_err = trans_error(est.translation, scene.gt.translation);
    let survivors = report
        .aggregate_weights
        .iter()
        .filter(|w| **w > 0.0)
        .count();
    let objective: f64 = report
        .aggregate_weights
        .iter()
        .zip(&report.per_candidate_final_objectives)
        .filter(|(w, _)| **w > 0.0)
        .map(|(w, o)| w * o)
        .sum();
    let q = est.rotation.components();
    let mut out = String::new();
    out.push_str(&format!("shape: {}\n", spec.kind.name()));
    out.push_str(&format!(
        "estimated rotation (w x y z): {:.6} {:.6} {:.6} {:.6}\n",
        q[0], q[1], q[2], q[3]
    ));
    out.push_str(&format!(
        "estimated translation: {:.6} {:.6} {:.6}\n",
        est.translation[0], est.translation[1], est.translation[2]
    ));
    match report.estimated_symmetry.kind {
        SymmetryKind::Rotational => {
            let pi = report.estimated_symmetry.axis_distribution;
            out.push_str(&format!(
                "estimated symmetry: rotational, axis weights {:.3} {:.3} {:.3}\n",
                pi[0], pi[1], pi[2]
            ));
        }
        SymmetryKind::Mirror => {
            let names: Vec<String> = report
                .estimated_symmetry
                .plane_normals
                .iter()
                .map(|n| format!("[{:.0} {:.0} {:.0}]", n[0], n[1], n[2]))
                .collect();
            out.push_str(&format!(
                "estimated symmetry: mirror, planes {}\n",
                names.join(" ")
            ));
        }
        SymmetryKind::Asymmetric => out.push_str("estimated symmetry: none\n"),
    }
    out.push_str(&format!(
        "rotation error mod symmetry: {rot_err:.4} deg\n\
         translation error: {trans_err:.4} cm\n\
         aggregate objective: {objective:.6}\n\
         survivors: {survivors} of {}\n",
        report.aggregate_weights.len()
    ));
    out
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Gen { shape, seed, samples, out } => {
            let cloud = gen_shape(&ShapeSpec::new(shape, samples), seed);
            io::write_cloud(&out, &cloud)?;
            println!("wrote {} points to {}", cloud.len(), path_str(&out));
        }
        Command::Scene { shape, seed, samples, noise, crop, out } => {
            let scene = make_scene(&ShapeSpec::new(shape, samples), seed, noise, crop);
            let stem = path_str(&out);
            io::write_cloud(format!("{stem}.model.txt"), &scene.model)?;
            io::write_cloud(format!("{stem}.observed.txt"), &scene.observed)?;
            io::write_pose(format!("{stem}.gt.txt"), &scene.gt)?;
            println!(
                "wrote {stem}.model.txt ({} points), {stem}.observed.txt ({} points), \
                 {stem}.gt.txt",
                scene.model.len(),
                scene.observed.len()
            );
        }
        Command::Fit { shape, seed, samples, noise, crop, mode, config, out } => {
            let base = match config {
                Some(path) => load_config(&path_str(&path))?,
                None => BenchConfig::default(),
            };
            let spec = ShapeSpec::new(shape, samples);
            let scene = make_scene(&spec, seed, noise, crop);
            let fit_cfg = scene_fit_config(&base.fit, seed);
            let fit_mode = match mode {
                Mode::Supervised => FitMode::Supervised(scene.gt.rotation),
                Mode::Blind => FitMode::Blind,
            };
            let report = fit_pose(
                &scene.observed,
                &scene.model,
                spec.true_symmetry().kind,
                &fit_cfg,
                fit_mode,
            )?;
            print!("{}", describe_fit(&scene, &report, &spec));
            if let Some(path) = out {
                io::write_pose(&path, &report.estimate)?;
                println!("wrote estimate to {}", path_str(&path));
            }
        }
        Command::Sym { input } => {
            let cloud = io::read_cloud(&input)?;
            let (axis, pi) = estimate_rotational_axis(&cloud, DEFAULT_PROBE_ANGLES);
            println!(
                "rotational axis estimate: {:.4} {:.4} {:.4}",
                axis[0], axis[1], axis[2]
            );
            println!(
                "axis weights: {:.4} {:.4} {:.4}",
                pi[0], pi[1], pi[2]
            );
            match estimate_mirror_planes(&cloud, DEFAULT_KEEP_THRESHOLD) {
                Ok(spec) => {
                    let names: Vec<String> = spec
                        .plane_normals
                        .iter()
                        .map(|n| format!("[{:.0} {:.0} {:.0}]", n[0], n[1], n[2]))
                        .collect();
                    println!("mirror planes kept: {}", names.join(" "));
                }
                Err(Error::NoPlaneRetained { .. }) => println!("mirror planes kept: none"),
                Err(other) => return Err(other),
            }
        }
        Command::Bench { config, seed, shape, n_scenes, mode, out } => {
            let mut cfg = match config {
                Some(path) => load_config(&path_str(&path))?,
                None => BenchConfig::default(),
            };
            if let Some(seed) = seed {
                cfg.fit.seed = seed;
            }
            if let Some(shape) = shape {
                cfg.kinds = vec![shape];
            }
            if let Some(n) = n_scenes {
                cfg.n_scenes = n;
            }
            if let Some(mode) = mode {
                cfg.blind = matches!(mode, Mode::Blind);
            }
            if let Some(path) = out {
                cfg.csv_path = Some(path_str(&path));
            }
            let run = run_benchmark(&cfg)?;
            if let Some(path) = &cfg.csv_path {
                std::fs::write(path, run.to_csv())?;
                println!("wrote {} rows to {path}", run.rows.len());
            }
            print!("{}", run.summary());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
