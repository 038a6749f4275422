use thiserror::Error;

/// Failure modes shared across the crate.
///
/// Numerical degeneracies are reported, never silently patched: an antipodal
/// candidate set has no usable mean, a zero axis blend has no direction, and
/// so on. The I/O and config variants carry line numbers so command-line
/// diagnostics can point at the offending input.
#[derive(Debug, Error)]
pub enum Error {
    /// A vector that must be normalized has norm at or below 1e-12.
    #[error("vector norm {norm:.3e} is too close to zero to normalize")]
    NearZeroNorm { norm: f64 },

    /// The candidate quaternions cancel out (perfectly antipodal set).
    #[error("quaternion mean is degenerate: candidates cancel to norm {norm:.3e}")]
    DegenerateMean { norm: f64 },

    /// The axis weights blend to a direction with norm at or below 1e-9.
    #[error("axis weights blend to a degenerate direction (norm {norm:.3e})")]
    DegenerateAxis { norm: f64 },

    /// The secondary reference is parallel to the primary axis.
    #[error("reference direction is within {angle:.3e} rad of the primary axis")]
    ParallelInput { angle: f64 },

    /// No mirror plane scored at or above the keep threshold.
    #[error("no mirror plane scored at or above the keep threshold {threshold}")]
    NoPlaneRetained { threshold: f64 },

    /// The main-stage mirror loss was asked to run with zero planes.
    #[error("mirror loss requires at least one plane in the main stage")]
    EmptyPlaneSet,

    /// An objective returned NaN or infinity at a probe point.
    #[error("objective returned a non-finite value ({value}) during evaluation")]
    NonFiniteObjective { value: f64 },

    /// A neighborhood covariance annihilates the power-iteration start vector.
    #[error("neighborhood covariance is degenerate (iterate norm {norm:.3e})")]
    DegenerateCovariance { norm: f64 },

    /// Too many pose candidates failed refinement to trust an aggregate.
    #[error("only {survived} of {total} pose candidates survived refinement")]
    TooFewCandidates { survived: usize, total: usize },

    /// A config file failed to parse; `line` is 1-based.
    #[error("config error at line {line}: {message}")]
    Config { line: usize, message: String },

    /// A data file (point cloud, pose) failed to parse; `line` is 1-based.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
