use alloc::string::String;

/// Errors raised by the models.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("unknown species `{name}`; available: {available}")]
    UnknownSpecies { name: String, available: String },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("micromotion amplitude outside stability interval (0, 0.908): q = {q}")]
    Unstable { q: f64 },

    #[error("infeasible design target: {0}")]
    InfeasibleDesign(String),

    #[error("laser does not cool: cooling rate {rate:e} 1/s is not positive")]
    NotCooling { rate: f64 },

    #[error("truncation breach: population {mass:e} near the top of a {levels}-level space exceeds {tolerance:e}")]
    TruncationBreach { mass: f64, levels: usize, tolerance: f64 },

    #[error("truncation inadequate: |alpha|^2 = {mean} exceeds n_max/4 = {limit}")]
    TruncationInadequate { mean: f64, limit: f64 },

    #[error("target occupation {target} is not above the steady state {steady}")]
    UnreachableTarget { target: f64, steady: f64 },

    #[error("shot budget diverges: cooling rate {cooling_rate:e} 1/s does not exceed heating {heating_rate:e} quanta/s")]
    DivergentBudget { cooling_rate: f64, heating_rate: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("unknown gate scheme `{0}`; expected `ms` or `fast_kick`")]
    UnknownScheme(String),

    #[error("integration failed: {0}")]
    Integration(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

/// Rejects values that are not finite and strictly positive.
pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(invalid(name, alloc::format!("must be finite and > 0, got {value}")))
    }
}

pub(crate) fn require_non_negative(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(invalid(name, alloc::format!("must be finite and >= 0, got {value}")))
    }
}
