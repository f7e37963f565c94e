use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar used by the asymptotic spectra engine.
pub trait Real: Float + FromPrimitive + ToPrimitive + Debug + Display + LowerExp + Send + Sync + 'static {
    /// Converts an `f64` constant.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("constant representable in scalar type")
    }

    #[inline]
    fn from_count(x: usize) -> Self {
        Self::from_usize(x).expect("count representable in scalar type")
    }

    /// `x`, but never finer than a few ulps at 1.0 for this type.
    #[inline]
    fn tolerance(x: f64) -> Self {
        Self::lit(x).max(Self::epsilon() * Self::lit(4.0))
    }
}

impl<T> Real for T where T: Float + FromPrimitive + ToPrimitive + Debug + Display + LowerExp + Send + Sync + 'static {}
