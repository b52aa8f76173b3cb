use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// Numeric payloads are carried as `f64` so the type stays independent of
/// the scalar parameter.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("spherical top: asymmetry magnitude P = {p:e} is below tolerance")]
    SphericalTop { p: f64 },
    #[error("symmetric top: {which} (k1^2 = {k1sq:e})")]
    SymmetricTop { which: &'static str, k1sq: f64 },
    #[error("invalid moments of inertia: {0}")]
    InvalidOrdering(String),
    #[error("e1 = {e1} is outside the open interval (1/2, 1)")]
    OutOfRange { e1: f64 },
    #[error("complete elliptic integral diverges at k^2 = 1")]
    Divergent,
    #[error("elliptic parameter k^2 = {0} is outside [0, 1]")]
    ParameterRange(f64),
    #[error("polynomial is not divisible by the scale factor (max remainder {remainder:e})")]
    NotDivisible { remainder: f64 },
    #[error("coefficient matrix is singular or ill-conditioned (condition {condition:e})")]
    Singular { condition: f64 },
    #[error("species {species} does not belong to the parity kind of l = {ell}")]
    WrongKind { ell: u32, species: String },
    #[error("degenerate Lamé eigenvalues for l = {ell}, species {species} (spacing {spacing:e})")]
    DegenerateEigenvalues {
        ell: u32,
        species: String,
        spacing: f64,
    },
    #[error("eigensolver failed: {0}")]
    Eigensolver(String),
    #[error("eigenvalue sum rule violated for l = {ell}, species {pair}: |h1 + h2 - l(l+1)| = {defect:e}")]
    MatchFailure { ell: u32, pair: String, defect: f64 },
    #[error("configuration has no Q/P scale (built from e1 alone)")]
    MissingScale,
    #[error("spheroconal coordinate inversion did not converge")]
    InversionFailure,
    #[error("ladder end reached")]
    LadderEnd,
    #[error("projection onto the l = {ell} basis leaves residual {residual:e}")]
    ProjectionResidual { ell: u32, residual: f64 },
    #[error("finite-difference Richardson check failed (difference {difference:e})")]
    GridTooCoarse { difference: f64 },
    #[error("least-squares basis is rank deficient (Gram condition {condition:e})")]
    RankDeficient { condition: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
