use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid value for `{name}` ({value}): {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("`{name}` = {value} is outside the validity range: {reason}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("quantum numbers out of range: l = {l}, m = {m}")]
    QuantumNumbers { l: i32, m: i32 },

    #[error("invalid axis {0}; expected 1, 2 or 3")]
    Axis(u8),

    #[error("non-finite state encountered at tau = {tau}")]
    NumericalBlowup { tau: f64 },

    #[error("field amplitude {amplitude:e} fell below the polar-form guard at tau = {tau}")]
    SingularField { amplitude: f64, tau: f64 },

    #[error("permanent polarization is zero: the instability is switched off and the gain time is infinite")]
    MechanismOff,

    #[error("{0}")]
    Inconsistent(String),
}

pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and strictly positive",
        })
    }
}
