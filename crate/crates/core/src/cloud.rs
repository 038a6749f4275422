//! Point clouds, exact nearest-neighbor queries, and Chamfer distances.
//!
//! Chamfer values feed tolerance-based decisions (symmetry scoring, fit
//! objectives), so nearest neighbors are exact: a uniform-grid index with a
//! ring search that only terminates once no unscanned cell can beat the
//! incumbent, and a plain scan below [`BRUTE_THRESHOLD`] points.

use crate::quat::{RigidTransform, UnitQuaternion};
use crate::vec3;

/// Below this size a linear scan beats building a grid.
pub const BRUTE_THRESHOLD: usize = 256;

/// Ordered list of 3D points, meters.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    pub points: Vec<[f64; 3]>,
}

impl PointCloud {
    pub fn new(points: Vec<[f64; 3]>) -> Self {
        Self { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Arithmetic mean of the points. Panics on an empty cloud.
    pub fn centroid(&self) -> [f64; 3] {
        assert!(!self.points.is_empty(), "centroid of an empty cloud");
        let mut acc = [0.0; 3];
        for p in &self.points {
            acc = vec3::add(acc, *p);
        }
        vec3::scale(acc, 1.0 / self.points.len() as f64)
    }

    pub fn transformed(&self, t: &RigidTransform) -> PointCloud {
        PointCloud::new(self.points.iter().map(|p| t.apply(*p)).collect())
    }

    pub fn rotated(&self, q: &UnitQuaternion) -> PointCloud {
        PointCloud::new(self.points.iter().map(|p| q.rotate(*p)).collect())
    }

    pub fn translated(&self, v: [f64; 3]) -> PointCloud {
        PointCloud::new(self.points.iter().map(|p| vec3::add(*p, v)).collect())
    }

    /// The cloud shifted so its centroid sits at the origin.
    pub fn centered(&self) -> PointCloud {
        let c = self.centroid();
        self.translated(vec3::neg(c))
    }
}

/// Exact nearest-neighbor index over a fixed point set.
///
/// Build once per static cloud and query many times; queries never mutate.
#[derive(Debug)]
pub enum NnIndex {
    Brute(Vec<[f64; 3]>),
    Grid(GridIndex),
}

impl NnIndex {
    /// Panics on an empty point set.
    pub fn build(points: &[[f64; 3]]) -> NnIndex {
        assert!(!points.is_empty(), "index over an empty point set");
        if points.len() < BRUTE_THRESHOLD {
            NnIndex::Brute(points.to_vec())
        } else {
            NnIndex::Grid(GridIndex::build(points))
        }
    }

    /// Squared distance from `q` to its nearest indexed point.
    pub fn nearest_dist_sq(&self, q: [f64; 3]) -> f64 {
        match self {
            NnIndex::Brute(points) => points
                .iter()
                .map(|p| vec3::dist_sq(*p, q))
                .fold(f64::INFINITY, f64::min),
            NnIndex::Grid(grid) => grid.nearest_dist_sq(q),
        }
    }

    pub fn nearest_dist(&self, q: [f64; 3]) -> f64 {
        self.nearest_dist_sq(q).sqrt()
    }
}

/// Uniform-grid spatial hash with exact ring-expansion queries.
#[derive(Debug)]
pub struct GridIndex {
    points: Vec<[f64; 3]>,
    origin: [f64; 3],
    cell: f64,
    dims: [i64; 3],
    /// Point indices per cell, row-major over `dims`.
    buckets: Vec<Vec<u32>>,
}

impl GridIndex {
    fn build(points: &[[f64; 3]]) -> GridIndex {
        let mut lo = points[0];
        let mut hi = points[0];
        for p in points {
            for k in 0..3 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        let extent = vec3::sub(hi, lo);
        let max_extent = extent[0].max(extent[1]).max(extent[2]);
        let side = (points.len() as f64).cbrt().ceil().max(1.0);
        let cell = if max_extent > 0.0 {
            max_extent / side
        } else {
            1.0
        };
        let mut dims = [0i64; 3];
        for k in 0..3 {
            dims[k] = (extent[k] / cell).floor() as i64 + 1;
        }
        let mut grid = GridIndex {
            points: points.to_vec(),
            origin: lo,
            cell,
            dims,
            buckets: vec![Vec::new(); (dims[0] * dims[1] * dims[2]) as usize],
        };
        for (i, p) in points.iter().enumerate() {
            let c = grid.cell_of(*p);
            let idx = grid.flat_index(c);
            grid.buckets[idx].push(i as u32);
        }
        grid
    }

    fn cell_of(&self, p: [f64; 3]) -> [i64; 3] {
        let mut c = [0i64; 3];
        for k in 0..3 {
            let raw = ((p[k] - self.origin[k]) / self.cell).floor() as i64;
            c[k] = raw.clamp(0, self.dims[k] - 1);
        }
        c
    }

    fn flat_index(&self, c: [i64; 3]) -> usize {
        ((c[0] * self.dims[1] + c[1]) * self.dims[2] + c[2]) as usize
    }

    fn nearest_dist_sq(&self, q: [f64; 3]) -> f64 {
        // The query's cell, unclamped: it may lie outside the grid box.
        let mut home = [0i64; 3];
        for k in 0..3 {
            home[k] = ((q[k] - self.origin[k]) / self.cell).floor() as i64;
        }
        // Outermost ring that still intersects the box.
        let mut last_ring = 0i64;
        for k in 0..3 {
            last_ring = last_ring.max(home[k]).max(self.dims[k] - 1 - home[k]);
        }
        let mut best = f64::INFINITY;
        let mut ring = 0i64;
        loop {
            self.scan_ring(home, ring, q, &mut best);
            // Any unscanned point sits in a ring > `ring`, hence at least
            // ring*cell away. Equality keeps the search exact.
            let bound = ring as f64 * self.cell;
            if best <= bound * bound || ring >= last_ring {
                return best;
            }
            ring += 1;
        }
    }

    fn scan_ring(&self, home: [i64; 3], ring: i64, q: [f64; 3], best: &mut f64) {
        let lo = |k: usize| (home[k] - ring).max(0);
        let hi = |k: usize| (home[k] + ring).min(self.dims[k] - 1);
        for i in lo(0)..=hi(0) {
            for j in lo(1)..=hi(1) {
                for k in lo(2)..=hi(2) {
                    let cheb = (i - home[0])
                        .abs()
                        .max((j - home[1]).abs())
                        .max((k - home[2]).abs());
                    if cheb != ring {
                        continue;
                    }
                    for &pi in &self.buckets[self.flat_index([i, j, k])] {
                        let d = vec3::dist_sq(self.points[pi as usize], q);
                        if d < *best {
                            *best = d;
                        }
                    }
                }
            }
        }
    }
}

/// One-sided Chamfer distance (1/|A|) Σ_a min_b ‖a − b‖, exact neighbors.
/// Panics if either cloud is empty.
pub fn chamfer_one_sided(a: &PointCloud, b: &PointCloud) -> f64 {
    assert!(!a.is_empty() && !b.is_empty(), "Chamfer over an empty cloud");
    let index = NnIndex::build(&b.points);
    chamfer_to_index(a, &index)
}

/// One-sided Chamfer against a prebuilt index; lets hot loops reuse the
/// index of a static cloud.
pub fn chamfer_to_index(a: &PointCloud, b: &NnIndex) -> f64 {
    assert!(!a.is_empty(), "Chamfer over an empty cloud");
    let sum: f64 = a.points.iter().map(|p| b.nearest_dist(*p)).sum();
    sum / a.points.len() as f64
}

/// Symmetrized Chamfer: half the sum of the two one-sided values.
pub fn chamfer_bidirectional(a: &PointCloud, b: &PointCloud) -> f64 {
    0.5 * (chamfer_one_sided(a, b) + chamfer_one_sided(b, a))
}
