//! Error type shared by the whole crate.

use thiserror::Error;

use crate::closed_form::Scheme;

/// Errors produced by the analysis and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A quantity that must be strictly positive (and finite) was not.
    #[error("{name} must be strictly positive and finite, got {value}")]
    NonPositive { name: &'static str, value: f64 },

    /// A probability parameter left the open unit interval.
    #[error("{name} must lie strictly inside (0, 1), got {value}")]
    OutOfUnitInterval { name: &'static str, value: f64 },

    /// Argument outside the real domain of the requested Lambert W branch.
    #[error("argument {x} is outside the domain of the {branch} Lambert W branch")]
    LambertDomain { x: f64, branch: &'static str },

    /// The diversity power solution has no positive normalized threshold for
    /// this outage target.
    #[error(
        "target outage probability {p_out} is infeasible for the diversity power \
         solution; the smallest feasible target is about {min_feasible:e}"
    )]
    InfeasibleTarget { p_out: f64, min_feasible: f64 },

    /// A simulator was handed an allocation computed for a different scheme.
    #[error("power allocation is for the {got} scheme, expected {expected}")]
    SchemeMismatch { expected: Scheme, got: Scheme },

    /// A trial plan must request at least one trial and a nonzero chunk size.
    #[error("trial plan must request at least one trial and a nonzero chunk size")]
    EmptyTrialPlan,
}

pub type Result<T> = std::result::Result<T, Error>;
