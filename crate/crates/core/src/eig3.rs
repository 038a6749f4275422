//! Eigendecomposition of symmetric 3x3 matrices by cyclic Jacobi rotations.
//!
//! Deterministic: fixed sweep order, fixed convergence threshold, no
//! randomness. Accuracy is at the 1e-14 scale for well-conditioned inputs,
//! comfortably inside the 1e-8 contract of the callers.

/// Returns eigenvalues (descending) and matching unit eigenvectors.
///
/// The input must be symmetric; only the upper triangle is read. Ties keep
/// the order produced by the sweep, which downstream canonicalization makes
/// deterministic.
pub fn eigen_symmetric(m: [[f64; 3]; 3]) -> ([f64; 3], [[f64; 3]; 3]) {
    let mut a = m;
    // v accumulates the rotations; starts as identity.
    let mut v = [[0.0; 3]; 3];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }

    const MAX_SWEEPS: usize = 64;
    const OFF_DIAG_FLOOR: f64 = 1e-30;
    for _ in 0..MAX_SWEEPS {
        let off = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
        if off <= OFF_DIAG_FLOOR {
            break;
        }
        for &(p, q) in &[(0usize, 1usize), (0, 2), (1, 2)] {
            let apq = a[p][q];
            if apq == 0.0 {
                continue;
            }
            // Classic Jacobi rotation zeroing a[p][q].
            let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
            let t = if theta >= 0.0 {
                1.0 / (theta + (1.0 + theta * theta).sqrt())
            } else {
                -1.0 / (-theta + (1.0 + theta * theta).sqrt())
            };
            let c = 1.0 / (1.0 + t * t).sqrt();
            let s = t * c;

            let app = a[p][p];
            let aqq = a[q][q];
            a[p][p] = app - t * apq;
            a[q][q] = aqq + t * apq;
            a[p][q] = 0.0;
            a[q][p] = 0.0;
            let r = 3 - p - q;
            let arp = a[r][p];
            let arq = a[r][q];
            a[r][p] = c * arp - s * arq;
            a[p][r] = a[r][p];
            a[r][q] = s * arp + c * arq;
            a[q][r] = a[r][q];

            for row in v.iter_mut() {
                let vp = row[p];
                let vq = row[q];
                row[p] = c * vp - s * vq;
                row[q] = s * vp + c * vq;
            }
        }
    }

    // Sort eigenpairs by descending eigenvalue; stable on ties.
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| {
        a[j][j]
            .partial_cmp(&a[i][i])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut values = [0.0; 3];
    let mut vectors = [[0.0; 3]; 3];
    for (rank, &idx) in order.iter().enumerate() {
        values[rank] = a[idx][idx];
        for row in 0..3 {
            vectors[rank][row] = v[row][idx];
        }
    }
    (values, vectors)
}
