//! Scalar abstraction.
//!
//! Every numeric kernel in this crate is generic over a floating-point
//! scalar so the same code runs in `f32` and `f64`.  Concrete `f64` aliases
//! for the main public types live at the crate root.

/// Floating-point scalar used throughout the crate.
///
/// A thin alias over the `num-traits` capabilities the kernels actually
/// need.  Implemented for `f32` and `f64`.
pub trait Real:
    num_traits::Float
    + num_traits::FromPrimitive
    + core::fmt::Debug
    + core::fmt::Display
    + core::iter::Sum
    + Send
    + Sync
    + 'static
{
    /// Conversion from an `f64` constant (tolerances, schedule literals).
    ///
    /// Panics if the constant is not representable, which cannot happen for
    /// the in-crate constants this is used with.
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("constant must be representable in the scalar type")
    }

    /// Conversion from an index (schedule evaluation).
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("index must be representable in the scalar type")
    }

    /// Lossy view as `f64`, used for error payloads and reports.
    fn as_f64(self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conversions_round_trip() {
        assert_eq!(f64::of(1.5), 1.5);
        assert_eq!(f32::of(0.25), 0.25f32);
        assert_eq!(f64::of_usize(17), 17.0);
        assert_eq!(2.5f64.as_f64(), 2.5);
    }
}
