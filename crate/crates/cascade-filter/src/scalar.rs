//! Scalar abstraction shared by every numerical routine.

use std::fmt::{Debug, Display, LowerExp};

use nalgebra::RealField;
use num_complex::Complex;
use num_traits::{FromPrimitive, ToPrimitive};

/// Real floating-point scalar the engine is generic over (`f32` or `f64`).
pub trait Real:
    RealField + Copy + FromPrimitive + ToPrimitive + Debug + Display + LowerExp + Send + Sync + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex amplitude over a real scalar.
pub type Cplx<T> = Complex<T>;

/// Converts an `f64` literal into the working scalar.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("literal representable in scalar type")
}

/// Converts a scalar back to `f64` for reporting.
#[inline]
pub fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().expect("scalar convertible to f64")
}

#[inline]
pub fn re<T: Real>(x: T) -> Cplx<T> {
    Complex::new(x, T::zero())
}

#[inline]
pub fn im<T: Real>(x: T) -> Cplx<T> {
    Complex::new(T::zero(), x)
}

#[inline]
pub fn czero<T: Real>() -> Cplx<T> {
    Complex::new(T::zero(), T::zero())
}

#[inline]
pub fn cone<T: Real>() -> Cplx<T> {
    Complex::new(T::one(), T::zero())
}

/// `e^z` without relying on the `Float` bound.
#[inline]
pub fn cexp<T: Real>(z: Cplx<T>) -> Cplx<T> {
    let m = z.re.exp();
    Complex::new(m * z.im.cos(), m * z.im.sin())
}

/// Principal square root.
#[inline]
pub fn csqrt<T: Real>(z: Cplx<T>) -> Cplx<T> {
    <Cplx<T> as nalgebra::ComplexField>::sqrt(z)
}

/// Principal logarithm.
#[inline]
pub fn cln<T: Real>(z: Cplx<T>) -> Cplx<T> {
    Complex::new(z.norm_sqr().sqrt().ln(), z.im.atan2(z.re))
}

#[inline]
pub fn cabs<T: Real>(z: Cplx<T>) -> T {
    z.norm_sqr().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_and_log_round_trip() {
        let z = Complex::new(0.3_f64, -1.7);
        let w = cln(cexp(z));
        assert!((w - z).norm() < 1e-15);
    }

    #[test]
    fn sqrt_is_principal() {
        let r = csqrt(Complex::new(-4.0_f64, 0.0));
        assert!((r - Complex::new(0.0, 2.0)).norm() < 1e-15);
        let r32 = csqrt(Complex::new(-4.0_f32, 0.0));
        assert!((r32.im - 2.0).abs() < 1e-6);
    }
}
