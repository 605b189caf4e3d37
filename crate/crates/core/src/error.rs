use thiserror::Error;

/// Errors raised by the channel model and the network simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    /// An input parameter lies outside its physical domain.
    #[error("parameter `{name}` out of domain: {value} ({requirement})")]
    ParameterDomain {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },

    /// A derived quantity came out NaN or infinite.
    #[error("`{name}` evaluated to a non-finite value ({value})")]
    NonFinite { name: &'static str, value: f64 },

    /// The two-pole circuit is not in the overdamped regime.
    #[error(
        "circuit not overdamped: (R/2L)^2 = {damping_sq:e} must exceed 1/(LC) = {natural_sq:e}"
    )]
    NotOverdamped { damping_sq: f64, natural_sq: f64 },

    #[error("closed-form group delay is only defined for the standard two-pole phase")]
    UnsupportedCombination,

    /// A network scenario that cannot be simulated as configured.
    #[error("invalid scenario: {0}")]
    Scenario(String),
}

pub type Result<T, E = ModelError> = std::result::Result<T, E>;

pub(crate) fn require(
    name: &'static str,
    value: f64,
    ok: bool,
    requirement: &'static str,
) -> Result<()> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(ModelError::ParameterDomain {
            name,
            value,
            requirement,
        })
    }
}

pub(crate) fn finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(ModelError::NonFinite { name, value })
    }
}
