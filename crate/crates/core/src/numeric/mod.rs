//! Scalar abstraction shared by the double and extended precision code paths.

pub mod bigfloat;
pub mod fft;
pub mod lu;

use std::fmt::Debug;
use std::ops::Neg;

use num_complex::Complex;
use num_traits::Num;

pub use bigfloat::BigFloat;

/// Real scalar used by the generic solvers.
pub trait Real: Clone + Debug + Num + Neg<Output = Self> + PartialOrd + Send + Sync + 'static {
    fn abs_val(&self) -> Self;
    fn sqrt_val(&self) -> Self;
    fn to_f64(&self) -> f64;
    /// The value of `x` carried at this number's working precision.
    fn lift_like(&self, x: f64) -> Self;

    /// Linear convolution of coefficient vectors; `unit` carries the working precision.
    fn convolve(a: &[Complex<Self>], b: &[Complex<Self>], unit: &Self) -> Vec<Complex<Self>> {
        fft::linear_convolve(a, b, unit)
    }
}

impl Real for f64 {
    fn abs_val(&self) -> f64 {
        self.abs()
    }
    fn sqrt_val(&self) -> f64 {
        self.sqrt()
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn lift_like(&self, x: f64) -> f64 {
        x
    }
    fn convolve(a: &[Complex<f64>], b: &[Complex<f64>], _unit: &f64) -> Vec<Complex<f64>> {
        fft::convolve_f64(a, b)
    }
}

/// `|re| + |im|`, cheap and exact enough for pivoting.
pub fn abs1<R: Real>(z: &Complex<R>) -> R {
    z.re.abs_val() + z.im.abs_val()
}

/// Modulus evaluated in `f64`.
pub fn modulus_f64<R: Real>(z: &Complex<R>) -> f64 {
    z.re.to_f64().hypot(z.im.to_f64())
}

pub fn to_c64<R: Real>(z: &Complex<R>) -> Complex<f64> {
    Complex::new(z.re.to_f64(), z.im.to_f64())
}

/// Adds `t` into the running sum `(s, comp)` with Neumaier compensation.
pub fn neumaier_add<R: Real>(s: &mut R, comp: &mut R, t: R) {
    let sum = s.clone() + t.clone();
    if s.abs_val() >= t.abs_val() {
        *comp = comp.clone() + ((s.clone() - sum.clone()) + t);
    } else {
        *comp = comp.clone() + ((t - sum.clone()) + s.clone());
    }
    *s = sum;
}
