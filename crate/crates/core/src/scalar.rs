//! Scalar abstraction for the geometric core.

use num_traits::{Float, FromPrimitive, NumCast};
use std::fmt::Debug;

/// Floating point scalar used by geometry and perturbation: `f32` or `f64`.
pub trait Scalar: Float + FromPrimitive + NumCast + Debug + Default + Send + Sync + 'static {
    /// Lossy conversion from an `f64` literal.
    fn lit(v: f64) -> Self {
        <Self as NumCast>::from(v).expect("finite literal")
    }

    fn to_f64_lossy(self) -> f64 {
        <f64 as NumCast>::from(self).unwrap_or(f64::NAN)
    }

    /// Containment slack used when comparing rect edges.
    fn containment_eps() -> Self;
}

impl Scalar for f32 {
    fn containment_eps() -> Self {
        1e-4
    }
}

impl Scalar for f64 {
    fn containment_eps() -> Self {
        1e-9
    }
}
