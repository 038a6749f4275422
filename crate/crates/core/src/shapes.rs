//! Synthetic desk-scale shapes with known symmetry.
//!
//! Each shape is a closed surface description sampled into a point cloud
//! by area-weighted face sampling, plus the symmetry its pose actually
//! has: rotational about z for the round shapes, canonical mirror planes
//! for the boxes, nothing for the bracket.

use crate::cloud::PointCloud;
use crate::rand_util::rng_from_seed;
use crate::symmetry::SymmetrySpec;
use crate::vec3;
use rand::Rng;
use std::f64::consts::TAU;

/// Default points per sampled cloud.
pub const DEFAULT_SAMPLES: usize = 1024;

/// The shape catalogue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ShapeKind {
    Cylinder,
    Cone,
    Box,
    Cube,
    LBracket,
    Knob,
}

impl ShapeKind {
    pub const ALL: [ShapeKind; 6] = [
        ShapeKind::Cylinder,
        ShapeKind::Cone,
        ShapeKind::Box,
        ShapeKind::Cube,
        ShapeKind::LBracket,
        ShapeKind::Knob,
    ];

    /// Stable lowercase name used in files and on the command line.
    pub fn name(&self) -> &'static str {
        match self {
            ShapeKind::Cylinder => "cylinder",
            ShapeKind::Cone => "cone",
            ShapeKind::Box => "box",
            ShapeKind::Cube => "cube",
            ShapeKind::LBracket => "l_bracket",
            ShapeKind::Knob => "knob",
        }
    }

    pub fn parse(name: &str) -> Option<ShapeKind> {
        Self::ALL.iter().copied().find(|k| k.name() == name)
    }
}

/// Shape plus sampling density. Dimensions are fixed per kind (desk
/// scale, meters); the cloud and the symmetry both derive from them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeSpec {
    pub kind: ShapeKind,
    pub sample_count: usize,
}

impl ShapeSpec {
    pub fn new(kind: ShapeKind, sample_count: usize) -> ShapeSpec {
        assert!(sample_count >= 16, "too few samples for a usable cloud");
        ShapeSpec { kind, sample_count }
    }

    pub fn with_default_samples(kind: ShapeKind) -> ShapeSpec {
        ShapeSpec::new(kind, DEFAULT_SAMPLES)
    }

    /// The symmetry the pose of this shape actually has: continuous
    /// rotation about z for the round shapes, the canonical mirror
    /// planes for box and cube, nothing for the bracket.
    pub fn true_symmetry(&self) -> SymmetrySpec {
        match self.kind {
            ShapeKind::Cylinder | ShapeKind::Cone | ShapeKind::Knob => {
                SymmetrySpec::rotational([0.0, 0.0, 1.0])
            }
            ShapeKind::Box | ShapeKind::Cube => SymmetrySpec::mirror(
                [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0],
                vec![vec3::UNIT_X, vec3::UNIT_Y, vec3::UNIT_Z],
            ),
            ShapeKind::LBracket => SymmetrySpec::asymmetric(),
        }
    }
}

/// Cylinder dimensions: radius 0.05 m, height 0.2 m.
pub const CYLINDER_RADIUS: f64 = 0.05;
pub const CYLINDER_HEIGHT: f64 = 0.2;
/// Cone dimensions: base radius 0.05 m, height 0.15 m.
pub const CONE_RADIUS: f64 = 0.05;
pub const CONE_HEIGHT: f64 = 0.15;
/// Box extents 0.1 x 0.2 x 0.3 m, cube side 0.1 m.
pub const BOX_EXTENTS: [f64; 3] = [0.1, 0.2, 0.3];
pub const CUBE_SIDE: f64 = 0.1;
/// L bracket: arm lengths along x and y, extrusion width along z, and
/// the two arm thicknesses. All different so no two poses coincide.
pub const BRACKET_ARM_X: f64 = 0.12;
pub const BRACKET_ARM_Y: f64 = 0.08;
pub const BRACKET_WIDTH: f64 = 0.03;
pub const BRACKET_THICK_X: f64 = 0.02;
pub const BRACKET_THICK_Y: f64 = 0.035;
/// Knob sections bottom-up as (radius, height): base, stem, cap.
pub const KNOB_SECTIONS: [(f64, f64); 3] = [(0.04, 0.05), (0.015, 0.06), (0.03, 0.04)];

/// One sampleable surface patch with its area.
enum Face {
    /// origin + s*u + t*v, s,t in [0,1).
    Rect { origin: [f64; 3], u: [f64; 3], v: [f64; 3] },
    /// Horizontal annulus at height z, radii [inner, outer] (inner 0 for
    /// a full disk).
    Annulus { z: f64, inner: f64, outer: f64 },
    /// Cylinder side between two heights.
    Side { radius: f64, z0: f64, z1: f64 },
    /// Cone side from base radius at z0 tapering to zero at z1.
    Taper { radius: f64, z0: f64, z1: f64 },
}

impl Face {
    fn area(&self) -> f64 {
        match self {
            Face::Rect { u, v, .. } => vec3::norm(vec3::cross(*u, *v)),
            Face::Annulus { inner, outer, .. } => {
                std::f64::consts::PI * (outer * outer - inner * inner)
            }
            Face::Side { radius, z0, z1 } => TAU * radius * (z1 - z0),
            Face::Taper { radius, z0, z1 } => {
                let h = z1 - z0;
                let slant = (radius * radius + h * h).sqrt();
                std::f64::consts::PI * radius * slant
            }
        }
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> [f64; 3] {
        match self {
            Face::Rect { origin, u, v } => {
                let s = rng.random::<f64>();
                let t = rng.random::<f64>();
                vec3::add(*origin, vec3::add(vec3::scale(*u, s), vec3::scale(*v, t)))
            }
            Face::Annulus { z, inner, outer } => {
                let u = rng.random::<f64>();
                let r = (inner * inner + u * (outer * outer - inner * inner)).sqrt();
                let angle = TAU * rng.random::<f64>();
                [r * angle.cos(), r * angle.sin(), *z]
            }
            Face::Side { radius, z0, z1 } => {
                let angle = TAU * rng.random::<f64>();
                let z = z0 + (z1 - z0) * rng.random::<f64>();
                [radius * angle.cos(), radius * angle.sin(), z]
            }
            Face::Taper { radius, z0, z1 } => {
                // Area density along the axis is proportional to the local
                // radius, which falls linearly to zero at the tip.
                let u = rng.random::<f64>();
                let frac = 1.0 - u.sqrt();
                let r = radius * (1.0 - frac);
                let z = z0 + (z1 - z0) * frac;
                let angle = TAU * rng.random::<f64>();
                [r * angle.cos(), r * angle.sin(), z]
            }
        }
    }
}

fn cuboid_faces(extents: [f64; 3]) -> Vec<Face> {
    let [a, b, c] = extents;
    let (hx, hy, hz) = (a / 2.0, b / 2.0, c / 2.0);
    vec![
        // z = -hz and z = +hz
        Face::Rect { origin: [-hx, -hy, -hz], u: [a, 0.0, 0.0], v: [0.0, b, 0.0] },
        Face::Rect { origin: [-hx, -hy, hz], u: [a, 0.0, 0.0], v: [0.0, b, 0.0] },
        // y = -hy and y = +hy
        Face::Rect { origin: [-hx, -hy, -hz], u: [a, 0.0, 0.0], v: [0.0, 0.0, c] },
        Face::Rect { origin: [-hx, hy, -hz], u: [a, 0.0, 0.0], v: [0.0, 0.0, c] },
        // x = -hx and x = +hx
        Face::Rect { origin: [-hx, -hy, -hz], u: [0.0, b, 0.0], v: [0.0, 0.0, c] },
        Face::Rect { origin: [hx, -hy, -hz], u: [0.0, b, 0.0], v: [0.0, 0.0, c] },
    ]
}

/// Extruded prism faces for an axis-aligned rectangle footprint
/// [x0,x1] x [y0,y1], z across the full width; only the requested side
/// walls are emitted so the two bracket arms can share their joint.
fn prism_walls(x0: f64, x1: f64, y0: f64, y1: f64, hz: f64, sides: [bool; 4]) -> Vec<Face> {
    let mut faces = vec![
        Face::Rect { origin: [x0, y0, -hz], u: [x1 - x0, 0.0, 0.0], v: [0.0, y1 - y0, 0.0] },
        Face::Rect { origin: [x0, y0, hz], u: [x1 - x0, 0.0, 0.0], v: [0.0, y1 - y0, 0.0] },
    ];
    let c = 2.0 * hz;
    if sides[0] {
        // y = y0
        faces.push(Face::Rect {
            origin: [x0, y0, -hz],
            u: [x1 - x0, 0.0, 0.0],
            v: [0.0, 0.0, c],
        });
    }
    if sides[1] {
        // y = y1
        faces.push(Face::Rect {
            origin: [x0, y1, -hz],
            u: [x1 - x0, 0.0, 0.0],
            v: [0.0, 0.0, c],
        });
    }
    if sides[2] {
        // x = x0
        faces.push(Face::Rect {
            origin: [x0, y0, -hz],
            u: [0.0, y1 - y0, 0.0],
            v: [0.0, 0.0, c],
        });
    }
    if sides[3] {
        // x = x1
        faces.push(Face::Rect {
            origin: [x1, y0, -hz],
            u: [0.0, y1 - y0, 0.0],
            v: [0.0, 0.0, c],
        });
    }
    faces
}

fn shape_faces(kind: ShapeKind) -> Vec<Face> {
    match kind {
        ShapeKind::Cylinder => {
            let h = CYLINDER_HEIGHT / 2.0;
            vec![
                Face::Side { radius: CYLINDER_RADIUS, z0: -h, z1: h },
                Face::Annulus { z: -h, inner: 0.0, outer: CYLINDER_RADIUS },
                Face::Annulus { z: h, inner: 0.0, outer: CYLINDER_RADIUS },
            ]
        }
        ShapeKind::Cone => {
            let h = CONE_HEIGHT / 2.0;
            vec![
                Face::Taper { radius: CONE_RADIUS, z0: -h, z1: h },
                Face::Annulus { z: -h, inner: 0.0, outer: CONE_RADIUS },
            ]
        }
        ShapeKind::Box => cuboid_faces(BOX_EXTENTS),
        ShapeKind::Cube => cuboid_faces([CUBE_SIDE; 3]),
        ShapeKind::LBracket => {
            // L footprint in the first quadrant before centering: an arm
            // along x of length BRACKET_ARM_X and thickness
            // BRACKET_THICK_Y, and an arm along y of length BRACKET_ARM_Y
            // and thickness BRACKET_THICK_X, overlapping at the corner.
            // The shared interior wall is omitted from both.
            let hz = BRACKET_WIDTH / 2.0;
            let cx = BRACKET_ARM_X / 2.0;
            let cy = BRACKET_ARM_Y / 2.0;
            let mut faces = Vec::new();
            // x arm: [0, ARM_X] x [0, THICK_Y]; open on its top edge
            // where the y arm joins, i.e. y = THICK_Y for x < THICK_X.
            faces.extend(prism_walls(
                0.0,
                BRACKET_THICK_X,
                0.0,
                BRACKET_THICK_Y,
                hz,
                [true, false, true, false],
            ));
            faces.extend(prism_walls(
                BRACKET_THICK_X,
                BRACKET_ARM_X,
                0.0,
                BRACKET_THICK_Y,
                hz,
                [true, true, false, true],
            ));
            // y arm above the joint: [0, THICK_X] x [THICK_Y, ARM_Y].
            faces.extend(prism_walls(
                0.0,
                BRACKET_THICK_X,
                BRACKET_THICK_Y,
                BRACKET_ARM_Y,
                hz,
                [false, true, true, true],
            ));
            // Center on the bounding box.
            for face in &mut faces {
                if let Face::Rect { origin, .. } = face {
                    origin[0] -= cx;
                    origin[1] -= cy;
                }
            }
            faces
        }
        ShapeKind::Knob => {
            let total: f64 = KNOB_SECTIONS.iter().map(|(_, h)| h).sum();
            let mut faces = Vec::new();
            let mut z = -total / 2.0;
            faces.push(Face::Annulus { z, inner: 0.0, outer: KNOB_SECTIONS[0].0 });
            for (i, (r, h)) in KNOB_SECTIONS.iter().enumerate() {
                faces.push(Face::Side { radius: *r, z0: z, z1: z + h });
                z += h;
                match KNOB_SECTIONS.get(i + 1) {
                    Some((next_r, _)) => {
                        let (inner, outer) = (r.min(*next_r), r.max(*next_r));
                        if outer > inner {
                            faces.push(Face::Annulus { z, inner, outer });
                        }
                    }
                    None => faces.push(Face::Annulus { z, inner: 0.0, outer: *r }),
                }
            }
            faces
        }
    }
}

/// Samples the shape surface: faces are chosen with probability
/// proportional to area (cumulative table + one uniform draw), points
/// uniformly within the face. Deterministic under the seed.
pub fn gen_shape(spec: &ShapeSpec, seed: u64) -> PointCloud {
    assert!(spec.sample_count >= 16, "too few samples for a usable cloud");
    let faces = shape_faces(spec.kind);
    let mut cumulative = Vec::with_capacity(faces.len());
    let mut total = 0.0;
    for f in &faces {
        total += f.area();
        cumulative.push(total);
    }
    let mut rng = rng_from_seed(seed);
    let points = (0..spec.sample_count)
        .map(|_| {
            let pick = rng.random::<f64>() * total;
            let idx = cumulative.partition_point(|c| *c < pick).min(faces.len() - 1);
            faces[idx].sample(&mut rng)
        })
        .collect();
    PointCloud::new(points)
}
