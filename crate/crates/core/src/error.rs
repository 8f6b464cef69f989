use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A hopping kernel violated one of its construction invariants.
    InvalidKernel(&'static str),
    /// An operation that needs a real band was given a non-Hermitian kernel.
    NonHermitianKernel,
    InvalidLattice(&'static str),
    InvalidArgument(&'static str),
    /// The perturbation (or a packet) touches the boundary region.
    SupportViolation { site: i64 },
    SupportViolation2D { site: (i64, i64) },
    ShapeMismatch { expected: usize, found: usize },
    StepUnderflow { t: f64, step: f64 },
    NonFinite { t: f64 },
    /// Complex Bloch roots were requested for an energy inside the band.
    InsideBand { energy: f64 },
    RootFinding { degree: usize },
    PacketOverlap { amplitude: f64 },
    InsufficientSignal { site: i64, amplitude: f64 },
    Undersampled { dt: f64, max_dt: f64 },
    OutOfRange { value: f64, min: f64, max: f64 },
    WindowTooNarrow { tail: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidKernel(msg) => write!(f, "invalid hopping kernel: {msg}"),
            Error::NonHermitianKernel => write!(f, "operation requires a hermitian kernel"),
            Error::InvalidLattice(msg) => write!(f, "invalid lattice: {msg}"),
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::SupportViolation { site } => {
                write!(f, "site {site} lies outside the lattice interior")
            }
            Error::SupportViolation2D { site } => write!(
                f,
                "site ({}, {}) lies outside the lattice interior",
                site.0, site.1
            ),
            Error::ShapeMismatch { expected, found } => {
                write!(f, "shape mismatch: expected {expected} entries, found {found}")
            }
            Error::StepUnderflow { t, step } => {
                write!(f, "step size underflow at t = {t} (h = {step:e})")
            }
            Error::NonFinite { t } => write!(f, "non-finite amplitude at t = {t}"),
            Error::InsideBand { energy } => {
                write!(f, "energy {energy} lies inside the lattice band")
            }
            Error::RootFinding { degree } => {
                write!(f, "polynomial root finder did not converge (degree {degree})")
            }
            Error::PacketOverlap { amplitude } => write!(
                f,
                "initial packet overlaps the perturbation (amplitude {amplitude:e})"
            ),
            Error::InsufficientSignal { site, amplitude } => write!(
                f,
                "insufficient signal at site {site} (mean amplitude {amplitude:e})"
            ),
            Error::Undersampled { dt, max_dt } => {
                write!(f, "signal undersampled: dt = {dt:e} exceeds {max_dt:e}")
            }
            Error::OutOfRange { value, min, max } => {
                write!(f, "{value} outside the admissible range ({min}, {max})")
            }
            Error::WindowTooNarrow { tail } => {
                write!(f, "integration window too narrow (tail estimate {tail:e})")
            }
        }
    }
}

impl core::error::Error for Error {}
