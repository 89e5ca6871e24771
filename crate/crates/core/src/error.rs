use thiserror::Error;

/// Every failure the library can report.
///
/// Variants are grouped by the CLI exit code they map to: input validation
/// problems exit with 2, computational failures with 3.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("points coincide (r = {r:e}); the free Green's function diverges in D = {dim}")]
    CoincidentPoints { dim: usize, r: f64 },
    #[error("energy {re} + {im}i lies on the positive real axis; pass a retarded energy instead")]
    BranchCut { re: f64, im: f64 },
    #[error("dimension {0} is not supported here")]
    UnsupportedDim(usize),
    #[error("argument outside the domain: {0}")]
    DomainError(String),
    #[error("bare coupling is undefined at cutoff {cutoff}: 1/lambda vanishes")]
    PoleCrossing { cutoff: f64 },
    #[error("coupling {spec} is not legal in D = {dim}")]
    IllegalSpec { dim: usize, spec: String },
    #[error("renormalized coupling must be nonzero")]
    ZeroCoupling,
    #[error("running coupling blows up between mu = {mu} and mu' = {mu_prime}")]
    CouplingBlowup { mu: f64, mu_prime: f64 },
    #[error("energy {energy} is a pole of the Green's function (|det M| = {det:e})")]
    AtPole { energy: f64, det: f64 },
    #[error("{0} did not converge")]
    NonConvergence(String),
    #[error("quadrature tail estimate {estimate:e} exceeds tolerance {tol:e}")]
    TailBoundExceeded { estimate: f64, tol: f64 },
    #[error("lattice box too small: boundary amplitude ratio {ratio:e}")]
    InsufficientBox { ratio: f64 },
    #[error("k*h = {kh} exceeds 0.1")]
    DispersionError { kh: f64 },
    #[error("could not bracket the first well branch: {0}")]
    BranchAmbiguity(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::CoincidentPoints { .. } => "CoincidentPoints",
            Error::BranchCut { .. } => "BranchCut",
            Error::UnsupportedDim(_) => "UnsupportedDim",
            Error::DomainError(_) => "DomainError",
            Error::PoleCrossing { .. } => "PoleCrossing",
            Error::IllegalSpec { .. } => "IllegalSpec",
            Error::ZeroCoupling => "ZeroCoupling",
            Error::CouplingBlowup { .. } => "CouplingBlowup",
            Error::AtPole { .. } => "AtPole",
            Error::NonConvergence(_) => "NonConvergence",
            Error::TailBoundExceeded { .. } => "TailBoundExceeded",
            Error::InsufficientBox { .. } => "InsufficientBox",
            Error::DispersionError { .. } => "DispersionError",
            Error::BranchAmbiguity(_) => "BranchAmbiguity",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }

    /// True for errors caused by malformed or inconsistent input rather than
    /// by the computation itself.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::UnsupportedDim(_)
                | Error::IllegalSpec { .. }
                | Error::InvalidInput(_)
                | Error::DomainError(_)
                | Error::BranchCut { .. }
                | Error::ZeroCoupling
                | Error::DispersionError { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
