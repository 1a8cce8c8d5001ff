//! Scalar abstraction: everything in the toolkit is generic over the real
//! floating-point type, with complex arithmetic layered on top via
//! `num_complex::Complex`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar the toolkit runs on: `f32` or `f64`.
///
/// Bundles the `num-traits` floating-point surface with `nalgebra`'s
/// `RealField` so that dense factorizations over `Complex<T>` are available.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Debug
    + Display
    + nalgebra::RealField
    + Copy
    + 'static
{
    /// Convert an `f64` literal into the scalar type.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal does not fit the scalar type")
    }

    /// Lossy conversion back to `f64`, used for diagnostics and JSON output.
    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Complex number over the generic scalar.
pub type Cx<T> = Complex<T>;

// `Float` and `RealField` define methods with the same names, which makes
// method syntax ambiguous on a generic `T: Scalar`. These free functions pin
// the `num_traits::Float` versions.

#[inline]
pub(crate) fn sqrt<T: Scalar>(x: T) -> T {
    Float::sqrt(x)
}

#[inline]
pub(crate) fn abs<T: Scalar>(x: T) -> T {
    Float::abs(x)
}

#[inline]
pub(crate) fn powi<T: Scalar>(x: T, n: i32) -> T {
    Float::powi(x, n)
}

#[inline]
pub(crate) fn fmax<T: Scalar>(a: T, b: T) -> T {
    Float::max(a, b)
}

#[inline]
pub(crate) fn fmin<T: Scalar>(a: T, b: T) -> T {
    Float::min(a, b)
}

/// Machine-precision scale used for "exact within rounding" assertions:
/// `max(1e-12, 1e3 * eps)` so that `f32` instantiations remain usable.
#[inline]
pub(crate) fn exactness_tol<T: Scalar>() -> T {
    fmax(T::of(1e-12), T::epsilon() * T::of(1e3))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literal_roundtrip() {
        assert_eq!(f64::of(0.5), 0.5);
        assert_eq!(f32::of(0.5), 0.5f32);
        assert_eq!(0.5f64.to_f64_lossy(), 0.5);
    }

    #[test]
    fn exactness_scales_with_precision() {
        assert!(exactness_tol::<f64>() <= 1e-12 + 1e-18);
        assert!(exactness_tol::<f32>() > 1e-4);
    }
}
