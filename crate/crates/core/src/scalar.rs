//! Floating point abstraction used by the numerical core.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into this type.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    /// Lossy conversion back to `f64`, used for reporting and error payloads.
    #[inline]
    fn f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn half() -> Self {
        Self::of(0.5)
    }

    #[inline]
    fn two() -> Self {
        Self::of(2.0)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// `sin(x)/x` with the removable singularity filled in.
pub fn sinc<T: Scalar>(x: T) -> T {
    if x.abs() < T::of(1e-4) {
        // Taylor series; the x⁴ term keeps full precision at the cutoff.
        let x2 = x * x;
        T::one() - x2 / T::of(6.0) + x2 * x2 / T::of(120.0)
    } else {
        x.sin() / x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sinc_is_continuous_at_cutoff() {
        let below = sinc(0.99999e-4_f64);
        let above = sinc(1.00001e-4_f64);
        assert!((below - above).abs() < 1e-12);
        assert_eq!(sinc(0.0_f64), 1.0);
        assert!((sinc(std::f64::consts::PI)).abs() < 1e-16);
    }

    #[test]
    fn literal_conversion() {
        assert_eq!(<f32 as Scalar>::of(0.5), 0.5_f32);
        assert_eq!(2.5_f32.f64(), 2.5);
    }
}
