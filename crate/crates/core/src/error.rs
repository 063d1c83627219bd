use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library can report.
///
/// Variants are grouped by [`ErrorKind`], which is what the command-line
/// frontend turns into an exit code.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("gamma has a pole at {0}")]
    PoleOfGamma(Complex64),

    #[error("kernel series did not converge within {max_terms} terms at tau = {tau}")]
    SeriesNotConverged { max_terms: usize, tau: Complex64 },

    #[error("z = {z} is at the pole {pole}")]
    AtPole { z: Complex64, pole: Complex64 },

    #[error("entire part has growth order {order}, above the admissible {limit}")]
    GrowthOrderViolation { order: f64, limit: f64 },

    #[error("coefficients vanish identically, nothing to fit")]
    DegenerateFit,

    #[error("series terms do not decrease from n = 0")]
    NoMinimum,

    #[error("direction {theta} lies within {eps} of the singular direction {direction}")]
    SingularDirection { theta: f64, direction: f64, eps: f64 },

    #[error("integration ray passes at distance {distance} from a pole (margin {margin})")]
    RayHitsPole { distance: f64, margin: f64 },

    #[error("tail bound fails: {0}")]
    TailBoundFails(String),

    #[error("arg t = {arg} is outside the sector around {theta} of half-opening {half_opening}")]
    OutsideSector { arg: f64, theta: f64, half_opening: f64 },

    #[error("arg t = {arg} is outside the jump sector of the Stokes line {direction}")]
    OutsideJumpSector { arg: f64, direction: f64 },

    #[error("z = {z} is outside the disc |z| < {radius}")]
    OutsideDisc { z: Complex64, radius: f64 },

    #[error("pole image {point} lies on a boundary ray of the sector")]
    PoleOnBoundaryRay { point: Complex64 },

    #[error("datum has no poles")]
    NoPoles,

    #[error("eps = {0} leaves a sector no wider than the summability opening")]
    EpsilonTooLarge(f64),

    #[error("finite-difference stencil leaves the domain: {0}")]
    StencilOutOfDomain(String),

    #[error("datum has no Stokes lines")]
    NoStokesLines,
}

/// Coarse classification of [`Error`] values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ErrorKind {
    Usage,
    NonConvergence,
    Singular,
    DomainGuard,
    NotApplicable,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        use Error::*;
        match self {
            InvalidInput(_) | GrowthOrderViolation { .. } | EpsilonTooLarge(_) => ErrorKind::Usage,
            SeriesNotConverged { .. } | TailBoundFails(_) | NoMinimum | DegenerateFit => {
                ErrorKind::NonConvergence
            }
            SingularDirection { .. } | RayHitsPole { .. } | PoleOnBoundaryRay { .. } => {
                ErrorKind::Singular
            }
            PoleOfGamma(_)
            | AtPole { .. }
            | OutsideSector { .. }
            | OutsideJumpSector { .. }
            | OutsideDisc { .. }
            | StencilOutOfDomain(_) => ErrorKind::DomainGuard,
            NoPoles | NoStokesLines => ErrorKind::NotApplicable,
        }
    }

    /// Short variant name, used in reports and CLI messages.
    pub fn name(&self) -> &'static str {
        use Error::*;
        match self {
            InvalidInput(_) => "InvalidInput",
            PoleOfGamma(_) => "PoleOfGamma",
            SeriesNotConverged { .. } => "SeriesNotConverged",
            AtPole { .. } => "AtPole",
            GrowthOrderViolation { .. } => "GrowthOrderViolation",
            DegenerateFit => "DegenerateFit",
            NoMinimum => "NoMinimum",
            SingularDirection { .. } => "SingularDirection",
            RayHitsPole { .. } => "RayHitsPole",
            TailBoundFails(_) => "TailBoundFails",
            OutsideSector { .. } => "OutsideSector",
            OutsideJumpSector { .. } => "OutsideJumpSector",
            OutsideDisc { .. } => "OutsideDisc",
            PoleOnBoundaryRay { .. } => "PoleOnBoundaryRay",
            NoPoles => "NoPoles",
            EpsilonTooLarge(_) => "EpsilonTooLarge",
            StencilOutOfDomain(_) => "StencilOutOfDomain",
            NoStokesLines => "NoStokesLines",
        }
    }
}
