use alloc::string::String;

use thiserror::Error;

use crate::laurent::Precision;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(String, String),
    #[error("generator `{0}` already exists")]
    NameCollision(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("element is not a unit")]
    NotUnit,
    #[error("element is not nilpotent")]
    NotNilpotent,
    #[error("series is not invertible")]
    NotInvertible,
    #[error("insufficient precision: need coefficients below degree {needed}, known below {have}")]
    InsufficientPrecision { needed: i64, have: Precision },
    #[error("not an admissible parameter: order {0}, expected 1")]
    NotAdmissible(i64),
    #[error("element is not in G0: order of h is {0}")]
    NotInG0(i64),
    #[error("series is not in V+ V-: {0}")]
    NotInVplusVminus(String),
    #[error("lie extraction: quotient is not of the form 1 + a*e1*e2: {0}")]
    LieShape(String),
    #[error("contradictory bounds: {0}")]
    Bounds(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Run `f` at horizons `start, 2 start, ...` up to `cap`, retrying only on
/// [`Error::InsufficientPrecision`].
pub fn with_horizon<T>(start: i64, cap: i64, mut f: impl FnMut(i64) -> Result<T>) -> Result<T> {
    let mut upto = start.max(1);
    loop {
        match f(upto) {
            Err(Error::InsufficientPrecision { .. }) if upto < cap => upto = (upto * 2).min(cap),
            other => return other,
        }
    }
}
