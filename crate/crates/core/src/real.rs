//! Scalar abstraction for the math core.
//!
//! Every formula in this crate is plain scalar arithmetic, so the whole
//! analysis is generic over the floating-point type. `f64` is what the CLI
//! and the verification suite use; `f32` works wherever its precision is
//! acceptable.

use std::fmt::Debug;

use num_traits::float::FloatConst;
use num_traits::{Float, FromPrimitive};

/// Floating-point scalar the analysis is generic over.
pub trait Real: Float + FloatConst + FromPrimitive + Debug + Send + Sync + 'static {}

impl<T> Real for T where T: Float + FloatConst + FromPrimitive + Debug + Send + Sync + 'static {}

/// Speed of light in m/s, exact by definition.
pub const SPEED_OF_LIGHT_M_PER_S: f64 = 299_792_458.0;

/// Lifts an `f64` constant into the scalar type.
#[inline]
pub(crate) fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("finite f64 constant must convert")
}
