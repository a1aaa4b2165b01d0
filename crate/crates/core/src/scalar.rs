use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Real floating-point scalar every routine in this crate is generic over.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Debug + Display + LowerExp + Default + Sum + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable in scalar type")
    }

    /// `x` raised to at least `factor * epsilon`, so fixed f64-calibrated
    /// tolerances stay meaningful in lower precision.
    fn tol_floor(x: f64, factor: f64) -> Self {
        Self::lit(x).max(Self::epsilon() * Self::lit(factor))
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
