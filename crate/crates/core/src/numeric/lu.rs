//! Dense LU factorization with partial pivoting over any [`Real`] scalar.

use num_complex::Complex;
use num_traits::{One, Zero};

use super::{abs1, modulus_f64, Real};

pub struct Lu<R: Real> {
    n: usize,
    lu: Vec<Complex<R>>,
    /// Row `i` of `P A` is row `perm[i]` of `A`.
    perm: Vec<usize>,
    inv_diag: Vec<Complex<R>>,
    norm1: f64,
}

impl<R: Real> Lu<R> {
    /// Factors a row-major `n x n` matrix. Returns `None` when a pivot column is exactly zero.
    pub fn factor(mut a: Vec<Complex<R>>, n: usize) -> Option<Lu<R>> {
        assert_eq!(a.len(), n * n);
        let norm1 = (0..n)
            .map(|j| (0..n).map(|i| modulus_f64(&a[i * n + j])).sum::<f64>())
            .fold(0.0, f64::max);
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let mut p = k;
            let mut best = abs1(&a[k * n + k]);
            for i in k + 1..n {
                let v = abs1(&a[i * n + k]);
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best.is_zero() {
                return None;
            }
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let inv = Complex::<R>::one() / a[k * n + k].clone();
            let (top, bottom) = a.split_at_mut((k + 1) * n);
            let row_k = &top[k * n..];
            for row in bottom.chunks_mut(n) {
                if row[k].is_zero() {
                    continue;
                }
                let l = &row[k] * &inv;
                for j in k + 1..n {
                    row[j] = row[j].clone() - &l * &row_k[j];
                }
                row[k] = l;
            }
        }
        let inv_diag = (0..n).map(|i| Complex::<R>::one() / a[i * n + i].clone()).collect();
        Some(Lu { n, lu: a, perm, inv_diag, norm1 })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// 1-norm of the factored matrix.
    pub fn norm1(&self) -> f64 {
        self.norm1
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[Complex<R>]) -> Vec<Complex<R>> {
        let n = self.n;
        let mut y: Vec<Complex<R>> = self.perm.iter().map(|&p| b[p].clone()).collect();
        for i in 0..n {
            let row = &self.lu[i * n..i * n + i];
            let mut acc = y[i].clone();
            for (l, yj) in row.iter().zip(&y[..i]) {
                acc = acc - l * yj;
            }
            y[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = y[i].clone();
            for j in i + 1..n {
                acc = acc - &self.lu[i * n + j] * &y[j];
            }
            y[i] = acc * &self.inv_diag[i];
        }
        y
    }

    /// Solves `A^H x = b`.
    pub fn solve_adjoint(&self, b: &[Complex<R>]) -> Vec<Complex<R>> {
        let n = self.n;
        let mut y: Vec<Complex<R>> = b.to_vec();
        for i in 0..n {
            let mut acc = y[i].clone();
            for j in 0..i {
                acc = acc - self.lu[j * n + i].conj() * &y[j];
            }
            y[i] = acc * self.inv_diag[i].conj();
        }
        for i in (0..n).rev() {
            let mut acc = y[i].clone();
            for j in i + 1..n {
                acc = acc - self.lu[j * n + i].conj() * &y[j];
            }
            y[i] = acc;
        }
        let mut x = vec![Complex::<R>::zero(); n];
        for (i, w) in y.into_iter().enumerate() {
            x[self.perm[i]] = w;
        }
        x
    }

    /// Estimate of the 1-norm condition number (Hager's method with Higham's safeguard).
    pub fn cond1_estimate(&self, unit: &R) -> f64 {
        let n = self.n;
        let lift = |z: Complex<f64>| Complex::new(unit.lift_like(z.re), unit.lift_like(z.im));
        let norm_1 = |v: &[Complex<R>]| v.iter().map(modulus_f64).sum::<f64>();
        let mut x: Vec<Complex<R>> = (0..n).map(|_| lift(Complex::new(1.0 / n as f64, 0.0))).collect();
        let mut est = 0.0;
        let mut last_j = None;
        for iter in 0..5 {
            let y = self.solve(&x);
            let ynorm = norm_1(&y);
            if iter > 0 && ynorm <= est {
                break;
            }
            est = ynorm;
            let xi: Vec<Complex<R>> = y
                .iter()
                .map(|v| {
                    let z = super::to_c64(v);
                    let m = z.norm();
                    lift(if m > 0.0 && m.is_finite() { z / m } else { Complex::new(1.0, 0.0) })
                })
                .collect();
            let z = self.solve_adjoint(&xi);
            let j = (0..n)
                .max_by(|&a, &b| modulus_f64(&z[a]).total_cmp(&modulus_f64(&z[b])))
                .unwrap_or(0);
            if last_j == Some(j) {
                break;
            }
            last_j = Some(j);
            x = (0..n).map(|i| lift(Complex::new(if i == j { 1.0 } else { 0.0 }, 0.0))).collect();
        }
        let alt: Vec<Complex<R>> = (0..n)
            .map(|i| {
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                let mag = if n > 1 { 1.0 + i as f64 / (n - 1) as f64 } else { 1.0 };
                lift(Complex::new(sign * mag, 0.0))
            })
            .collect();
        let alt_est = 2.0 * norm_1(&self.solve(&alt)) / (3.0 * n as f64);
        est.max(alt_est) * self.norm1
    }
}
