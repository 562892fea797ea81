//! Characteristic polynomials and reduction modulo a monic polynomial.

use std::fmt;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{GspError, Result};
use crate::graph::Graph;
use crate::numeric::{neumaier_add, Real};

/// Relative threshold below which a coefficient counts as zero for degree detection.
pub const EPS_TRIM: f64 = 1e-12;
/// Relative threshold for snapping imaginary parts of real-matrix coefficients.
pub const EPS_REALIFY: f64 = 1e-9;
/// Largest size accepted by [`charpoly_exact`].
pub const EXACT_MAX_N: usize = 64;

const MONIC_TOL: f64 = 1e-12;

fn czero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// Dense complex polynomial, `coeffs[k]` multiplies `x^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(czero());
        }
        Polynomial { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![czero(); k + 1];
        c[k] = Complex64::new(1.0, 0.0);
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Highest power whose coefficient exceeds `EPS_TRIM * max_abs`; zero for the zero polynomial.
    pub fn degree(&self) -> usize {
        let tol = EPS_TRIM * self.max_abs();
        self.coeffs.iter().rposition(|z| z.norm() > tol).unwrap_or(0)
    }

    /// Highest exactly nonzero coefficient. Unlike [`Polynomial::degree`] this ignores the
    /// relative threshold, so a monic polynomial with large lower coefficients keeps its 1.
    pub fn leading(&self) -> Complex64 {
        self.coeffs[self.top()]
    }

    pub(crate) fn top(&self) -> usize {
        self.coeffs.iter().rposition(|z| *z != czero()).unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        (self.leading() - Complex64::new(1.0, 0.0)).norm() <= MONIC_TOL
    }

    /// Drops coefficients above [`Polynomial::degree`].
    pub fn trimmed(&self) -> Polynomial {
        Polynomial::new(self.coeffs[..=self.degree()].to_vec())
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(czero(), |acc, &c| acc * x + c)
    }

    /// Schoolbook product.
    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        Polynomial::new(crate::numeric::fft::schoolbook(&self.coeffs, &other.coeffs))
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let n = self.len().max(other.len());
        let get = |p: &Polynomial, k: usize| p.coeffs.get(k).copied().unwrap_or_default();
        Polynomial::new((0..n).map(|k| get(self, k) + get(other, k)).collect())
    }

    /// Imaginary parts below `EPS_REALIFY * max_abs` set to zero.
    pub fn realified(&self) -> Polynomial {
        let tol = EPS_REALIFY * self.max_abs();
        Polynomial::new(
            self.coeffs.iter().map(|z| if z.im.abs() < tol { Complex64::new(z.re, 0.0) } else { *z }).collect(),
        )
    }

    /// Human readable monomial form, e.g. `1 + 2x - x^3`.
    pub fn to_poly_string(&self) -> String {
        poly_string(&self.coeffs)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_poly_string())
    }
}

/// Monomial-basis text for a coefficient vector, skipping terms below the trim threshold.
pub fn poly_string(coeffs: &[Complex64]) -> String {
    let tol = EPS_TRIM * coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut out = String::new();
    for (k, &c) in coeffs.iter().enumerate() {
        if c.norm() <= tol || c.norm() == 0.0 {
            continue;
        }
        let power = match k {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{k}"),
        };
        let real = c.im.abs() <= tol;
        let (negative, body) = if real {
            let mag = c.re.abs();
            let coef = if mag == 1.0 && k > 0 { String::new() } else { format!("{mag}") };
            (c.re < 0.0, coef)
        } else {
            (false, format!("({})", crate::io::format_complex(c)))
        };
        let term = format!("{body}{power}");
        match (out.is_empty(), negative) {
            (true, true) => out.push_str(&format!("-{term}")),
            (true, false) => out.push_str(&term),
            (false, true) => out.push_str(&format!(" - {term}")),
            (false, false) => out.push_str(&format!(" + {term}")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Polynomial with exact integer coefficients, ascending powers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
    }

    /// Nearest double-precision coefficients.
    pub fn to_polynomial(&self) -> Polynomial {
        Polynomial::new(
            self.coeffs.iter().map(|c| Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0)).collect(),
        )
    }
}

/// Orders points so each next one maximizes the product of distances to those already taken.
/// Multiplying out linear factors in this order keeps intermediate coefficients tame.
pub fn leja_order(z: &[Complex64]) -> Vec<Complex64> {
    let n = z.len();
    if n == 0 {
        return Vec::new();
    }
    let mut used = vec![false; n];
    let mut score = vec![0.0f64; n];
    let first = (0..n).max_by(|&a, &b| z[a].norm().total_cmp(&z[b].norm()).then(b.cmp(&a))).unwrap();
    let mut out = Vec::with_capacity(n);
    let mut cur = first;
    loop {
        used[cur] = true;
        out.push(z[cur]);
        if out.len() == n {
            break;
        }
        for i in 0..n {
            if !used[i] {
                score[i] += (z[i] - z[cur]).norm().ln();
            }
        }
        cur = (0..n)
            .filter(|&i| !used[i])
            .max_by(|&a, &b| score[a].total_cmp(&score[b]).then(b.cmp(&a)))
            .unwrap();
    }
    out
}

/// `prod (x - lambda_i)`, multiplied out in Leja order.
pub fn charpoly_from_eigenvalues(lambda: &[Complex64]) -> Polynomial {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for r in leja_order(lambda) {
        let mut next = vec![czero(); c.len() + 1];
        for (k, &ck) in c.iter().enumerate() {
            next[k + 1] += ck;
            next[k] -= r * ck;
        }
        c = next;
    }
    Polynomial::new(c)
}

/// Exact characteristic polynomial of an integer adjacency (Faddeev-LeVerrier in big integers).
pub fn charpoly_exact(g: &Graph) -> Result<IntPolynomial> {
    let n = g.n();
    if n > EXACT_MAX_N {
        return Err(GspError::TooLarge { n, limit: EXACT_MAX_N });
    }
    let entries = g.integer_entries()?;
    let sparse: Vec<(usize, usize, BigInt)> = entries
        .iter()
        .enumerate()
        .filter(|(_, &v)| v != 0)
        .map(|(k, &v)| (k / n, k % n, BigInt::from(v)))
        .collect();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::from(1);
    // m holds M_k; starts at the identity
    let mut m: Vec<BigInt> = (0..n * n).map(|k| BigInt::from((k / n == k % n) as i32)).collect();
    for k in 1..=n {
        let mut am = vec![BigInt::zero(); n * n];
        for (i, l, w) in &sparse {
            let (dst, src) = (&mut am[i * n..(i + 1) * n], &m[l * n..(l + 1) * n]);
            for (d, s) in dst.iter_mut().zip(src) {
                if !s.is_zero() {
                    *d += w * s;
                }
            }
        }
        let trace: BigInt = (0..n).map(|i| &am[i * n + i]).sum();
        let (q, r) = (-trace).div_rem(&BigInt::from(k));
        debug_assert!(r.is_zero(), "trace not divisible by {k}");
        for i in 0..n {
            am[i * n + i] += &q;
        }
        coeffs[n - k] = q;
        m = am;
    }
    Ok(IntPolynomial::new(coeffs))
}

/// Characteristic polynomial of the `n`-vertex path: `D_n = x D_{n-1} - D_{n-2}`, `D_0 = 1`, `D_1 = x`.
pub fn chebyshev_path_charpoly(n: usize) -> IntPolynomial {
    let mut prev = vec![BigInt::from(1)];
    if n == 0 {
        return IntPolynomial::new(prev);
    }
    let mut cur = vec![BigInt::zero(), BigInt::from(1)];
    for _ in 2..=n {
        let mut next = vec![BigInt::zero(); cur.len() + 1];
        for (k, c) in cur.iter().enumerate() {
            next[k + 1] += c;
        }
        for (k, c) in prev.iter().enumerate() {
            next[k] -= c;
        }
        prev = std::mem::replace(&mut cur, next);
    }
    IntPolynomial::new(cur)
}

/// Synthetic division of `p` (in place) by the monic polynomial `x^N + c_{N-1} x^{N-1} + ... + c_0`,
/// given `c = [c_0, ..., c_{N-1}]`. Leaves the remainder in `p[..N]` and returns the quotient.
/// Accumulation into each remainder slot is compensated.
pub(crate) fn reduce_monic_in_place<R: Real>(p: &mut Vec<Complex<R>>, c: &[Complex<R>]) -> Vec<Complex<R>> {
    let n = c.len();
    if p.len() <= n {
        return Vec::new();
    }
    let zero = p[0].re.lift_like(0.0);
    let mut comp: Vec<Complex<R>> = vec![Complex::new(zero.clone(), zero.clone()); p.len()];
    let mut quotient = vec![Complex::new(zero.clone(), zero); p.len() - n];
    for k in (n..p.len()).rev() {
        let q = p[k].clone() + comp[k].clone();
        for (i, ci) in c.iter().enumerate() {
            let j = k - n + i;
            let t = -(&q * ci);
            let (pj, cj) = (&mut p[j], &mut comp[j]);
            neumaier_add(&mut pj.re, &mut cj.re, t.re);
            neumaier_add(&mut pj.im, &mut cj.im, t.im);
        }
        quotient[k - n] = q;
    }
    p.truncate(n);
    for (pj, cj) in p.iter_mut().zip(comp) {
        *pj = pj.clone() + cj;
    }
    quotient
}

/// `log2` of the largest coefficient of `x^j mod delta` over `N <= j <= 2N - 2`, where `c` holds
/// the `N` trailing coefficients of the monic `delta`. Bounds how much reducing a product of two
/// degree `N - 1` polynomials can magnify rounding errors.
pub(crate) fn reduction_growth_log2(c: &[Complex64]) -> f64 {
    let n = c.len();
    if n < 2 {
        return 0.0;
    }
    let mut r = vec![czero(); n];
    r[n - 1] = Complex64::new(1.0, 0.0);
    let (mut scale, mut worst) = (0.0f64, 0.0f64);
    for _ in n..=2 * n - 2 {
        let top = r[n - 1];
        r.rotate_right(1);
        r[0] = czero();
        for (ri, ci) in r.iter_mut().zip(c) {
            *ri -= top * ci;
        }
        let m = r.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if m == 0.0 || !m.is_finite() {
            break;
        }
        r.iter_mut().for_each(|z| *z /= m);
        scale += m.log2();
        worst = worst.max(scale);
    }
    worst
}

fn monic_tail(delta: &Polynomial) -> Result<Vec<Complex64>> {
    let d = delta.top();
    if !delta.is_monic() {
        return Err(GspError::NonMonic(crate::io::format_complex(delta.leading())));
    }
    Ok(delta.coeffs()[..d].to_vec())
}

/// Quotient and remainder of `p / delta` for monic `delta`.
pub fn div_rem(p: &Polynomial, delta: &Polynomial) -> Result<(Polynomial, Polynomial)> {
    let c = monic_tail(delta)?;
    let n = c.len();
    let mut r = p.trimmed().into_coeffs();
    let q = reduce_monic_in_place(&mut r, &c);
    r.resize(n.max(1), czero());
    Ok((Polynomial::new(q), Polynomial::new(r)))
}

/// Remainder of `p` modulo the monic `delta`, returned with exactly `deg(delta)` coefficients.
pub fn reduce_mod(p: &Polynomial, delta: &Polynomial) -> Result<Polynomial> {
    Ok(div_rem(p, delta)?.1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(p: &IntPolynomial) -> Vec<i64> {
        p.coeffs().iter().map(|c| c.to_i64().unwrap()).collect()
    }

    fn roots_of_unity(n: usize) -> Vec<Complex64> {
        (0..n).map(|k| Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * k as f64 / n as f64)).collect()
    }

    #[test]
    fn reduction_growth() {
        let re = |v: f64| Complex64::new(v, 0.0);
        assert_eq!(reduction_growth_log2(&[re(-1.0), re(0.0), re(0.0), re(0.0)]), 0.0);
        // x^2 - 4: x^2 mod delta = 4
        assert!((reduction_growth_log2(&[re(-4.0), re(0.0)]) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn chebyshev_recursion() {
        assert_eq!(ints(&chebyshev_path_charpoly(0)), [1]);
        assert_eq!(ints(&chebyshev_path_charpoly(2)), [-1, 0, 1]);
        assert_eq!(ints(&chebyshev_path_charpoly(3)), [0, -2, 0, 1]);
        assert_eq!(ints(&chebyshev_path_charpoly(8)), [1, 0, -10, 0, 15, 0, -7, 0, 1]);
    }

    #[test]
    fn exact_small_cases() {
        assert_eq!(ints(&charpoly_exact(&Graph::cycle(5).unwrap()).unwrap()), [-1, 0, 0, 0, 0, 1]);
        assert_eq!(ints(&charpoly_exact(&Graph::path(3).unwrap()).unwrap()), [0, -2, 0, 1]);
        assert!(matches!(charpoly_exact(&Graph::cycle(65).unwrap()), Err(GspError::TooLarge { .. })));
    }

    #[test]
    fn unity_roots_give_x_n_minus_one() {
        let p = charpoly_from_eigenvalues(&roots_of_unity(16)).realified();
        let mut expect = vec![czero(); 17];
        expect[0] = Complex64::new(-1.0, 0.0);
        expect[16] = Complex64::new(1.0, 0.0);
        for (a, b) in p.coeffs().iter().zip(&expect) {
            assert!((a - b).norm() < 1e-13);
        }
        let x = charpoly_from_eigenvalues(&[czero()]);
        assert_eq!(x.coeffs(), [czero(), Complex64::new(1.0, 0.0)]);
    }

    #[test]
    fn leja_starts_at_largest() {
        let z = [Complex64::new(0.1, 0.0), Complex64::new(-3.0, 0.0), Complex64::new(2.9, 0.0)];
        let o = leja_order(&z);
        assert_eq!(o[0], z[1]);
        assert_eq!(o[1], z[2]);
    }

    #[test]
    fn reduce_wraps_around() {
        let delta = Polynomial::from_real(&[-1.0, 0.0, 0.0, 0.0, 1.0]);
        let r = reduce_mod(&Polynomial::monomial(4), &delta).unwrap();
        assert_eq!(r.coeffs(), Polynomial::from_real(&[1.0, 0.0, 0.0, 0.0]).coeffs());
        let low = Polynomial::from_real(&[1.0, 2.0]);
        assert_eq!(reduce_mod(&low, &delta).unwrap().coeffs()[..2], low.coeffs()[..]);
        assert!(reduce_mod(&low, &Polynomial::from_real(&[1.0, 2.0])).is_err());
    }

    #[test]
    fn reduce_agrees_at_roots_of_path8() {
        let delta = chebyshev_path_charpoly(8).to_polynomial();
        // x^8 (x^2 + 1)
        let mut c = vec![czero(); 11];
        c[8] = Complex64::new(1.0, 0.0);
        c[10] = Complex64::new(1.0, 0.0);
        let p = Polynomial::new(c);
        let r = reduce_mod(&p, &delta).unwrap();
        for k in 1..=8 {
            let x = Complex64::new(2.0 * (k as f64 * std::f64::consts::PI / 9.0).cos(), 0.0);
            let (pv, rv) = (p.eval(x), r.eval(x));
            assert!((pv - rv).norm() <= 1e-12 * pv.norm().max(1.0), "{pv} {rv}");
        }
    }

    #[test]
    fn poly_strings() {
        assert_eq!(poly_string(&[Complex64::new(1.0, 0.0)]), "1");
        assert_eq!(Polynomial::from_real(&[1.0, 2.0]).to_poly_string(), "1 + 2x");
        assert_eq!(Polynomial::from_real(&[0.0, -1.0, 0.0, 2.5]).to_poly_string(), "-x + 2.5x^3");
        assert_eq!(Polynomial::from_real(&[0.0, 0.0]).to_poly_string(), "0");
        assert_eq!(Polynomial::from_real(&[1.0, 1e-20, 1.0]).to_poly_string(), "1 + x^2");
        let z = Polynomial::new(vec![czero(), Complex64::new(1.0, -2.0)]);
        assert_eq!(z.to_poly_string(), "(1-2j)x");
    }
}
