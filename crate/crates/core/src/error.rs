use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Input outside the admissible parameter range.
    #[error("domain error: {0}")]
    Domain(String),
    /// Point given in the wrong coordinate chart.
    #[error("expected a point in the {expected} chart, got {got}")]
    WrongChart {
        expected: &'static str,
        got: &'static str,
    },
    /// Point on the boundary (arc, slits) where the map or function is undefined.
    #[error("point lies on the boundary: {0}")]
    OnBoundary(String),
    /// Removable or genuine singularity of a displayed closed form.
    #[error("point lies on a singular locus: {0}")]
    SingularLocus(String),
    /// No slit half-width solves the mass condition; the extremal polynomial is trivial.
    #[error("degree {n} is in the trivial regime (limiting mass {limit_mass:.6} <= 1)")]
    TrivialRegime { n: usize, limit_mass: f64 },
    #[error("ill-conditioned linear system (condition estimate {0:.3e})")]
    IllConditioned(f64),
    #[error("linear program failed: {0}")]
    Lp(String),
    #[error("certification failed: {0}")]
    Certification(String),
    #[error("no convergence: {0}")]
    NoConvergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;
