//! Scalar abstraction shared by every numeric routine in the crate.

use nalgebra::{Complex, RealField};
use num_traits::{FromPrimitive, ToPrimitive};

/// Real scalar the bounds are computed in (`f32` or `f64`).
///
/// Elementary functions come from [`RealField`]; conversions from literals
/// go through [`FromPrimitive`].
pub trait Real:
    RealField + Copy + FromPrimitive + ToPrimitive + std::fmt::Display + Send + Sync + 'static
{
    /// Converts an `f64` literal. Panics only for non-representable values,
    /// which cannot happen for `f32`/`f64`.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex counterpart of a [`Real`].
pub type Cplx<T> = Complex<T>;

/// Unit phasor `exp(j·phase)`.
#[inline]
pub fn cis<T: Real>(phase: T) -> Cplx<T> {
    let (s, c) = phase.sin_cos();
    Complex::new(c, s)
}

#[inline]
pub(crate) fn real<T: Real>(x: T) -> Cplx<T> {
    Complex::new(x, T::zero())
}

#[inline]
pub(crate) fn imag<T: Real>(x: T) -> Cplx<T> {
    Complex::new(T::zero(), x)
}
