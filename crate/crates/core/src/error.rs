//! Crate-wide error type.

use crate::spectral::Mode;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("field contains non-finite values")]
    NonFiniteField,

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// Wood anomaly: a lateral wavenumber sits on (or within guard distance
    /// of) one of the medium circles, so the longitudinal wavenumber on that
    /// side degenerates and the transparent boundary conditions break down.
    #[error("resonance (Wood anomaly) at mode {mode} on the {side} side")]
    Resonance { mode: Mode, side: &'static str },

    /// A coefficient denominator fell below its guard; the mode must be
    /// excluded rather than silently amplified.
    #[error("small divisor `{denominator}` at mode {mode}")]
    SmallDivisor {
        mode: Mode,
        denominator: &'static str,
    },

    #[error(
        "component {component} is unrecoverable: every transfer coefficient is below the guard"
    )]
    UnrecoverableComponent { component: u8 },

    #[error("relative error undefined: reference surface has zero norm")]
    ZeroNormReference,
}

pub type Result<T> = std::result::Result<T, Error>;
