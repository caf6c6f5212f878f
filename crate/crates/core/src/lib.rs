//! Energy-efficiency analysis of cooperative cellular uplink transmission.
//!
//! Two users with both a cellular and a short-range radio can send their
//! uplink packets in three ways: each on their own (traditional), by
//! exchanging packets over the cellular band and then transmitting jointly
//! (intra-network cooperation), or by exchanging over the short-range band
//! first (inter-network cooperation). Given a target outage probability and
//! data rate, this crate computes the minimum transmit powers of each scheme
//! in closed form, the resulting bits-per-joule energy efficiency, and an
//! independent Monte Carlo estimate of the same quantities for verification.
//!
//! The math core is generic over the scalar type (`f32`/`f64`) via
//! `num-traits`; the `*64` aliases below are what most callers want.

pub mod closed_form;
pub mod error;
pub mod lambert;
pub mod link_budget;
pub mod monte_carlo;
pub mod real;

pub use closed_form::{
    DecodePrior, EfficiencyReport, IntraOptions, PowerAllocation, Scheme, Targets,
};
pub use error::{Error, Result};
pub use lambert::{Branch, BranchedArg};
pub use link_budget::{Geometry, Link, LinkGain, RadioParams};
pub use monte_carlo::{DecodeOutcome, OutageEstimate, TrialPlan};
pub use real::Real;

/// `f64` instantiations, the default working precision.
pub type RadioParams64 = RadioParams<f64>;
pub type Geometry64 = Geometry<f64>;
pub type LinkGain64 = LinkGain<f64>;
pub type Targets64 = Targets<f64>;
pub type PowerAllocation64 = PowerAllocation<f64>;
pub type EfficiencyReport64 = EfficiencyReport<f64>;
pub type DecodePrior64 = DecodePrior<f64>;
pub type OutageEstimate64 = OutageEstimate<f64>;

/// `f32` instantiations for callers that trade precision for size.
pub type RadioParams32 = RadioParams<f32>;
pub type Geometry32 = Geometry<f32>;
pub type LinkGain32 = LinkGain<f32>;
pub type Targets32 = Targets<f32>;
pub type PowerAllocation32 = PowerAllocation<f32>;
pub type EfficiencyReport32 = EfficiencyReport<f32>;
pub type DecodePrior32 = DecodePrior<f32>;
pub type OutageEstimate32 = OutageEstimate<f32>;
