use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A constructor argument violates its domain.
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },
    /// The sampled function has not decayed at the edge of the grid.
    GridTooNarrow {
        edge_ratio: f64,
    },
    ZeroMomentum,
    NoConvergence {
        abs_error: f64,
        tol: f64,
    },
    PoleAtBoundary {
        pole: f64,
        endpoint: f64,
    },
    /// `rate * cutoff < 1`: the tail is not dominated by oscillation.
    RateTooSmall {
        rate: f64,
        cutoff: f64,
    },
    VanishingCoefficient {
        modulus: f64,
    },
    PlateauNotReached,
    FitIllConditioned {
        snapshots: usize,
    },
    BoundaryContamination {
        time: f64,
        edge_density: f64,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter { name, reason } => write!(f, "invalid {name}: {reason}"),
            Error::GridTooNarrow { edge_ratio } => write!(
                f,
                "grid too narrow: edge amplitude is {edge_ratio:e} of the peak"
            ),
            Error::ZeroMomentum => write!(f, "coefficient requested at zero momentum"),
            Error::NoConvergence { abs_error, tol } => write!(
                f,
                "quadrature did not converge: error estimate {abs_error:e} > tolerance {tol:e}"
            ),
            Error::PoleAtBoundary { pole, endpoint } => {
                write!(f, "pole at {pole} too close to endpoint {endpoint}")
            }
            Error::RateTooSmall { rate, cutoff } => write!(
                f,
                "oscillation rate {rate} too small for tail cutoff {cutoff}"
            ),
            Error::VanishingCoefficient { modulus } => {
                write!(
                    f,
                    "coefficient modulus {modulus:e} too small for a phase derivative"
                )
            }
            Error::PlateauNotReached => {
                write!(f, "channel probability has not reached a plateau")
            }
            Error::FitIllConditioned { snapshots } => {
                write!(f, "centroid fit window has only {snapshots} snapshots")
            }
            Error::BoundaryContamination { time, edge_density } => write!(
                f,
                "edge density {edge_density:e} at t = {time} exceeds the boundary budget"
            ),
        }
    }
}

impl core::error::Error for Error {}
