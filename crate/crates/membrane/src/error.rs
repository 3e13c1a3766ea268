//! Error type shared across the library.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A perturbation series left its useful range: successive retained
    /// terms stopped decreasing in magnitude.
    #[error("series outside its useful range at h = {h}: term {index} has |t| = {magnitude:.3e}, previous {previous:.3e}")]
    SeriesDiverged {
        h: f64,
        index: usize,
        magnitude: f64,
        previous: f64,
    },

    #[error("series truncation failure: {0}")]
    TruncationFailure(String),

    #[error("coefficient overflow: |coeff| = {magnitude:.3e} exceeded {limit:.3e} before convergence")]
    CoefficientOverflow { magnitude: f64, limit: f64 },

    #[error("bracketing failed for the characteristic value: scanned R in [{lo}, {hi}], no branch with {expected_roots} roots")]
    BracketingFailed {
        lo: f64,
        hi: f64,
        expected_roots: usize,
    },

    #[error("requested tolerance {tol:.3e} unachievable at the configured integrator step; best residual {best:.3e}")]
    TolUnachievable { tol: f64, best: f64 },

    #[error("match-factor consistency spread {spread:.3e} across 30/45/60 degrees exceeds {tol:.3e}; wrong R branch")]
    MatchFactorInconsistent { spread: f64, tol: f64 },

    #[error("lambda scan exhausted at ceiling {ceiling} before locating root index {index}")]
    ScanExhausted { ceiling: f64, index: u32 },

    #[error("no convergent radial representation at beta = {beta}: {detail}")]
    NoRadialRepresentation { beta: f64, detail: String },

    #[error("nodal ellipse count mismatch: expected {expected}, found {found} (missed lambda root upstream?)")]
    NodalCountMismatch { expected: usize, found: usize },

    #[error("modes are not near-degenerate: relative gap {gap:.3e} exceeds threshold {threshold:.3e}")]
    NotNearDegenerate { gap: f64, threshold: f64 },

    #[error("quadrature failed to converge: successive orders disagree by {disagreement:.3e} (tolerance {tol:.3e})")]
    QuadratureNotConverged { disagreement: f64, tol: f64 },

    #[error("field violates required symmetry: max deviation {deviation:.3e}")]
    FieldSymmetryViolation { deviation: f64 },

    #[error("geometry mismatch between field and mode set")]
    GeometryMismatch,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
