use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The argument lies within the pole guard of a lattice point of the
    /// Weierstrass function, or the evaluated solution has a pole there.
    #[error("argument {at} is within the pole guard")]
    PoleProximity { at: f64 },

    #[error("negative radicand R(y0) = {value}")]
    NegativeRadicand { value: f64 },

    /// `z(t) = d(t)^2` went non-positive, so `d` is not real.
    #[error("z({t}) = {z} is not positive; d(t) is not real")]
    RealityViolation { t: f64, z: f64 },

    #[error("stencil point t = {t} lies outside the field's time domain")]
    StencilOutOfDomain { t: f64 },

    #[error("residual magnitude {value:e} is at round-off level")]
    DegenerateResiduals { value: f64 },

    #[error("non-finite sample at index {index}")]
    NonFiniteSamples { index: usize },

    #[error("solution pole inside the window near x = {x} at t = {t}")]
    WindowContainsPole { x: f64, t: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
