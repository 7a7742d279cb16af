use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite argument: {0}")]
    NonFinite(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("pole of the transform at z = {re} + {im}i")]
    Pole { re: f64, im: f64 },

    #[error("fractional power evaluated on the branch cut at z = {0}")]
    BranchCut(f64),

    #[error("transform does not decay at infinity: numerator degree {numerator} vs denominator degree {denominator}")]
    Growth { numerator: f64, denominator: f64 },

    #[error("inversion did not converge at t = {t}: estimated relative error {estimate:.3e} exceeds {tolerance:.1e}")]
    NonConvergence {
        t: f64,
        estimate: f64,
        tolerance: f64,
    },

    #[error("series truncated at {modes} modes leaves a tail of about {tail:.3e} (tolerance {tolerance:.1e})")]
    Truncation {
        modes: usize,
        tail: f64,
        tolerance: f64,
    },

    #[error("time-stepping became unstable after {steps} steps (field norm {norm:.3e})")]
    Unstable { steps: usize, norm: f64 },

    #[error("root finder failed for root {index}")]
    RootFinding { index: usize },

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
