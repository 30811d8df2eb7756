//! Numeric scalar abstraction used by rule statistics, class scores and metrics.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::str::FromStr;

use num_traits::{Float, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating point type in which supports, confidences and evaluation metrics
/// are computed. Implemented for `f32` and `f64`.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Default
    + Debug
    + Display
    + FromStr
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable as float")
    }

    fn from_f64_lossy(v: f64) -> Self {
        Self::from_f64(v).expect("finite value")
    }

    fn hundred() -> Self {
        Self::from_f64_lossy(100.0)
    }

    /// `num / den * 100`, or zero when `den` is zero.
    fn percent(num: usize, den: usize) -> Self {
        if den == 0 {
            Self::zero()
        } else {
            Self::from_count(num) * Self::hundred() / Self::from_count(den)
        }
    }

    /// `num / den`, or zero when `den` is zero.
    fn ratio(num: usize, den: usize) -> Self {
        if den == 0 {
            Self::zero()
        } else {
            Self::from_count(num) / Self::from_count(den)
        }
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
