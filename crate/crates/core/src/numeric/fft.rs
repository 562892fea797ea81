//! Radix-2 FFT and linear convolution over any [`Real`] scalar.

use std::cell::RefCell;

use num_complex::{Complex, Complex64};
use num_traits::Zero;
use rustfft::FftPlanner;

use super::Real;

/// Twiddles `exp(sign * 2 pi i k / n)` for `k < n / 2`, built from half-angle steps.
fn twiddles<R: Real>(n: usize, inverse: bool, unit: &R) -> Vec<Complex<R>> {
    let half = n / 2;
    if half == 0 {
        return Vec::new();
    }
    // angle 2 pi / n: start at pi (n = 2) and pi / 2 (n = 4), then halve
    let (mut c, mut s) = if n == 2 { (unit.lift_like(-1.0), unit.lift_like(0.0)) } else { (unit.lift_like(0.0), unit.lift_like(1.0)) };
    let mut m = 4;
    let one = unit.lift_like(1.0);
    let two = unit.lift_like(2.0);
    while m < n {
        let c_half = ((one.clone() + c) / two.clone()).sqrt_val();
        s = s / (two.clone() * c_half.clone());
        c = c_half;
        m *= 2;
    }
    let w = Complex::new(c, if inverse { s } else { -s });
    let mut out = Vec::with_capacity(half);
    let mut cur = Complex::new(one, unit.lift_like(0.0));
    for _ in 0..half {
        out.push(cur.clone());
        cur = &cur * &w;
    }
    out
}

/// In-place transform of a power-of-two length buffer; the inverse includes the `1/n` factor.
pub fn fft_in_place<R: Real>(data: &mut [Complex<R>], inverse: bool, unit: &R) {
    let n = data.len();
    assert!(n.is_power_of_two(), "FFT length must be a power of two");
    if n == 1 {
        return;
    }
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            data.swap(i, j);
        }
    }
    let tw = twiddles(n, inverse, unit);
    let mut len = 2;
    while len <= n {
        let step = n / len;
        for start in (0..n).step_by(len) {
            for k in 0..len / 2 {
                let v = &data[start + k + len / 2] * &tw[k * step];
                let u = data[start + k].clone();
                data[start + k] = u.clone() + v.clone();
                data[start + k + len / 2] = u - v;
            }
        }
        len *= 2;
    }
    if inverse {
        let scale = unit.lift_like(1.0 / n as f64);
        for z in data.iter_mut() {
            *z = Complex::new(z.re.clone() * scale.clone(), z.im.clone() * scale.clone());
        }
    }
}

/// Linear convolution through a zero-padded power-of-two FFT.
pub fn linear_convolve<R: Real>(a: &[Complex<R>], b: &[Complex<R>], unit: &R) -> Vec<Complex<R>> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let out_len = a.len() + b.len() - 1;
    let size = out_len.next_power_of_two();
    let zero = Complex::new(unit.lift_like(0.0), unit.lift_like(0.0));
    let mut fa = a.to_vec();
    fa.resize(size, zero.clone());
    let mut fb = b.to_vec();
    fb.resize(size, zero);
    fft_in_place(&mut fa, false, unit);
    fft_in_place(&mut fb, false, unit);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x = &*x * y;
    }
    fft_in_place(&mut fa, true, unit);
    fa.truncate(out_len);
    fa
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Linear convolution in double precision on top of `rustfft`.
pub fn convolve_f64(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let out_len = a.len() + b.len() - 1;
    let size = out_len.next_power_of_two();
    let (fwd, inv) = PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        (p.plan_fft_forward(size), p.plan_fft_inverse(size))
    });
    let mut fa = a.to_vec();
    fa.resize(size, Complex64::zero());
    let mut fb = b.to_vec();
    fb.resize(size, Complex64::zero());
    fwd.process(&mut fa);
    fwd.process(&mut fb);
    let scale = 1.0 / size as f64;
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x = *x * y * scale;
    }
    inv.process(&mut fa);
    fa.truncate(out_len);
    fa
}

/// Quadratic reference product.
pub fn schoolbook<R: Real>(a: &[Complex<R>], b: &[Complex<R>]) -> Vec<Complex<R>> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Complex::<R>::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].clone() + x * y;
        }
    }
    out
}
