//! Scalar abstraction shared by every numerical module.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal into `Self`, rounding if needed.
    fn lit(v: f64) -> Self;

    /// Converts to `f64` for reporting and serialization.
    fn as_f64(self) -> f64;

    /// Converts a count into `Self`.
    fn of_usize(v: usize) -> Self {
        Self::lit(v as f64)
    }
}

impl Real for f32 {
    #[inline]
    fn lit(v: f64) -> Self {
        v as f32
    }
    #[inline]
    fn as_f64(self) -> f64 {
        self as f64
    }
}

impl Real for f64 {
    #[inline]
    fn lit(v: f64) -> Self {
        v
    }
    #[inline]
    fn as_f64(self) -> f64 {
        self
    }
}

/// `+1` for non-negative input, `-1` otherwise. Zero maps to `+1`.
#[inline]
pub fn spin_sign<T: Real>(x: T) -> i8 {
    if x < T::zero() {
        -1
    } else {
        1
    }
}
