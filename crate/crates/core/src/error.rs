use thiserror::Error;

/// Which square-root argument went negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Radicand {
    C8,
    C9,
}

impl std::fmt::Display for Radicand {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Radicand::C8 => f.write_str("c8"),
            Radicand::C9 => f.write_str("c9"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("parameter outside the admissible domain: {0}")]
    Domain(String),

    #[error("negative radicand {which} = {value:e}")]
    NegativeRadicand { which: Radicand, value: f64 },

    #[error("energy {energy} outside the physical window ({lo}, {hi})")]
    WindowViolation { energy: f64, lo: f64, hi: f64 },

    #[error("no physical energy window: lower edge {lo} >= upper edge {hi}")]
    NoPhysicalWindow { lo: f64, hi: f64 },

    #[error("no root found in ({lo}, {hi}); f(lo) = {f_lo:?}, f(hi) = {f_hi:?}")]
    NoRootFound {
        lo: f64,
        hi: f64,
        f_lo: Option<f64>,
        f_hi: Option<f64>,
    },

    #[error("bisection root {energy} has no oracle partner within {tolerance:e}")]
    OracleMismatch { energy: f64, tolerance: f64 },

    #[error("eliminant polynomial vanishes identically")]
    DegenerateLeadingCoefficient,

    #[error("wavefunction is not normalizable: {0}")]
    NonNormalizable(String),

    #[error("coupling denominator {value:e} is too close to zero")]
    DenominatorNearZero { value: f64 },

    #[error("grid too coarse: {interior} interior points, need at least {required}")]
    GridTooCoarse { interior: usize, required: usize },

    #[error("invalid doublet: {0}")]
    InvalidDoublet(String),

    #[error("wrong symmetry limit: expected {expected}")]
    WrongSymmetry { expected: &'static str },
}

pub type Result<T> = std::result::Result<T, Error>;
