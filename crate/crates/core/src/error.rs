use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter violated one of its invariants. `constraint` names the
    /// violated relation, e.g. `"alpha > 0"`.
    #[error("invalid parameter {name} = {value}: requires {constraint}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    #[error("invalid quadrature spec: {0}")]
    InvalidSpec(String),

    #[error(
        "quadrature did not converge after {subdivisions} subdivisions \
         (error estimate {estimate:e}, tolerance {tolerance:e})"
    )]
    NonConvergence {
        subdivisions: usize,
        estimate: f64,
        tolerance: f64,
    },

    #[error("integrand is not finite at {at}")]
    NonFiniteIntegrand { at: f64 },

    #[error("{0} is outside the domain of the operation")]
    OutOfDomain(String),

    #[error("action variable is not monotone for alpha = {alpha}: H'(s) = {derivative:e} at s = {s}")]
    NotMonotone { alpha: f64, s: f64, derivative: f64 },

    #[error("J = {value} is outside the range of the action map (requires J > {lower})")]
    OutOfRange { value: f64, lower: f64 },

    #[error("{0}")]
    Unsupported(String),
}

pub(crate) fn require(ok: bool, name: &'static str, value: f64, constraint: &'static str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            constraint,
        })
    }
}

pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<()> {
    require(value > 0.0 && value.is_finite(), name, value, "a finite value > 0")
}
