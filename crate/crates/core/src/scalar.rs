//! Floating-point scalar abstraction shared by every numeric routine.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Real scalar the statistics and entropy routines are generic over.
///
/// Implemented for `f32` and `f64`. Match counting only ever compares
/// differences against the tolerance, so the integer counts are exact for
/// either width; the logarithms are evaluated in the scalar's own precision.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + FromStr + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossless-where-possible conversion from a count.
    #[inline]
    fn from_count(n: u64) -> Self {
        <Self as FromPrimitive>::from_u64(n).expect("count representable as float")
    }

    #[inline]
    fn from_len(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).expect("length representable as float")
    }

    /// Literal helper for constants written as `f64`.
    #[inline]
    fn lit(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("literal representable as float")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
