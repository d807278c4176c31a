use thiserror::Error;

use crate::kinematics::IntervalClass;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// The time-evolution semigroup is only defined for `t >= 0`.
    #[error("semigroup domain violation: time {0} is negative; evolution is defined only for t >= 0")]
    SemigroupDomain(f64),

    /// A checked translation was requested outside the closed forward cone.
    #[error("causality domain violation: translation is {0}, only forward-cone translations are bounded")]
    CausalityDomain(IntervalClass),

    #[error("spin mismatch: 2j = {left} vs 2j = {right}")]
    SpinMismatch { left: u32, right: u32 },

    #[error("not a proper orthochronous Lorentz transformation: {0}")]
    NotProperOrthochronous(String),

    #[error("matrix is not unitary (deviation {0:e})")]
    NotUnitary(f64),

    #[error("vanishing norm: cannot normalize")]
    ZeroNorm,

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("point z = {re} + {im}i lies outside the analyticity strip of half-width {half_width}")]
    OutsideStrip { re: f64, im: f64, half_width: f64 },

    #[error("spectral bounds violate the strip conditions: {0}")]
    InvalidSpectrum(String),

    #[error("operation requires the one-dimensional reduced grid")]
    RequiresOneD,

    #[error("observable is not selfadjoint: relative imaginary part {0:e}")]
    NotSelfAdjoint(f64),

    #[error("initial state is not localized in V: outside probability {0:e}")]
    NotLocalized(f64),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
