//! Scalar abstractions shared by the generic kernels.
//!
//! The counting kernels only need ring operations on integers and ordered
//! field operations on map coordinates. Exact results require exact types
//! (`BigInt`, `BigRational`); fixed-width and floating types are accepted
//! wherever the arithmetic stays in range, e.g. for quick evaluation.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_traits::{FromPrimitive, Num};

/// Integer-like values a sequence operator can sum with signs.
pub trait RingValue: Clone + Num + Neg<Output = Self> + Debug + Display {}

impl<T> RingValue for T where T: Clone + Num + Neg<Output = Self> + Debug + Display {}

/// Ordered field used for the coordinates of a piecewise-linear map.
pub trait Coord:
    Clone + Num + Neg<Output = Self> + PartialOrd + FromPrimitive + Debug + Display
{
}

impl<T> Coord for T where
    T: Clone + Num + Neg<Output = Self> + PartialOrd + FromPrimitive + Debug + Display
{
}

/// Nonnegative tallies stored in an edge tensor.
pub trait Tally: Clone + Num + Debug + Display {}

impl<T> Tally for T where T: Clone + Num + Debug + Display {}

pub(crate) fn coord<T: Coord>(v: i64) -> T {
    T::from_i64(v).expect("coordinate type cannot represent a small integer")
}
