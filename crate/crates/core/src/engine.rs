//! Impulsive-basis arithmetic at a chosen working precision.
//!
//! The vertex impulsive basis `D_imp` is a Krylov matrix and is routinely too ill-conditioned for
//! double precision (the path graph reaches `cond ~ 1e28` at N = 64). Everything that touches
//! `D_imp^{-1}` or the companion coefficients therefore runs on a [`ZEngine`] whose scalar is either
//! `f64` or a [`BigFloat`] with enough bits to absorb the conditioning.

use std::borrow::Cow;

use num_complex::{Complex, Complex64};
use num_traits::Zero;

use crate::charpoly::{poly_string, reduce_monic_in_place};
use crate::error::Result;
use crate::numeric::lu::Lu;
use crate::numeric::{modulus_f64, to_c64, BigFloat, Real};
use crate::signal::{check_len, Domain, GraphSignal};

/// Coefficients in the vertex impulsive basis (`p_imp`), held at the model's working precision.
#[derive(Clone, Debug)]
pub struct ZSignal {
    repr: ZRepr,
}

#[derive(Clone, Debug)]
pub(crate) enum ZRepr {
    Double(Vec<Complex64>),
    Extended(Vec<Complex<BigFloat>>),
}

impl ZSignal {
    pub(crate) fn from_repr(repr: ZRepr) -> Self {
        ZSignal { repr }
    }

    pub fn len(&self) -> usize {
        match &self.repr {
            ZRepr::Double(v) => v.len(),
            ZRepr::Extended(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Significant bits carried per real component.
    pub fn precision_bits(&self) -> u32 {
        match &self.repr {
            ZRepr::Double(_) => 53,
            ZRepr::Extended(v) => v.iter().map(|z| z.re.precision().max(z.im.precision())).max().unwrap_or(0),
        }
    }

    /// Coefficients rounded to double precision.
    pub fn to_vec(&self) -> Vec<Complex64> {
        match &self.repr {
            ZRepr::Double(v) => v.clone(),
            ZRepr::Extended(v) => v.iter().map(to_c64).collect(),
        }
    }

    pub fn to_signal(&self) -> GraphSignal {
        GraphSignal::new(self.to_vec(), Domain::VertexZ)
    }

    pub fn max_abs(&self) -> f64 {
        self.to_vec().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`, with the subtraction done at working precision.
    pub fn max_abs_diff(&self, other: &ZSignal) -> Result<f64> {
        check_len(self.len(), other.len())?;
        Ok(match (&self.repr, &other.repr) {
            (ZRepr::Extended(a), ZRepr::Extended(b)) => diff_max(a, b),
            (ZRepr::Extended(a), ZRepr::Double(b)) => diff_max(a, &BigFloat::lift_slice(b, a)),
            (ZRepr::Double(a), ZRepr::Extended(b)) => diff_max(&BigFloat::lift_slice(a, b), b),
            (ZRepr::Double(a), ZRepr::Double(b)) => diff_max(a, b),
        })
    }

    /// Monomial text `p0 + p1 x + ...`.
    pub fn to_poly_string(&self) -> String {
        poly_string(&self.to_vec())
    }
}

fn diff_max<R: Real>(a: &[Complex<R>], b: &[Complex<R>]) -> f64 {
    a.iter().zip(b).map(|(x, y)| modulus_f64(&(x.clone() - y.clone()))).fold(0.0, f64::max)
}

impl BigFloat {
    fn lift_slice(v: &[Complex64], like: &[Complex<BigFloat>]) -> Vec<Complex<BigFloat>> {
        let prec = like.first().map(|z| z.re.precision()).unwrap_or(0);
        v.iter().map(|z| Complex::new(BigFloat::from_f64(z.re, prec), BigFloat::from_f64(z.im, prec))).collect()
    }
}

/// Scalars an engine can run on.
pub(crate) trait EngineScalar: Real {
    fn wrap(v: Vec<Complex<Self>>) -> ZRepr;
    fn view(r: &ZRepr) -> Option<&[Complex<Self>]>;
}

impl EngineScalar for f64 {
    fn wrap(v: Vec<Complex64>) -> ZRepr {
        ZRepr::Double(v)
    }
    fn view(r: &ZRepr) -> Option<&[Complex64]> {
        match r {
            ZRepr::Double(v) => Some(v),
            ZRepr::Extended(_) => None,
        }
    }
}

impl EngineScalar for BigFloat {
    fn wrap(v: Vec<Complex<BigFloat>>) -> ZRepr {
        ZRepr::Extended(v)
    }
    fn view(r: &ZRepr) -> Option<&[Complex<BigFloat>]> {
        match r {
            ZRepr::Extended(v) => Some(v),
            ZRepr::Double(_) => None,
        }
    }
}

pub(crate) struct ZEngine<R: EngineScalar> {
    n: usize,
    unit: R,
    adjacency: Vec<(usize, usize, Complex<R>)>,
    d_imp: Vec<Complex<R>>,
    lu: Option<Lu<R>>,
    cond: f64,
    /// `c = -D_imp^{-1} A^N delta_0`, the charpoly tail implied by the Krylov sequence.
    krylov: Option<Vec<Complex<R>>>,
    charpoly: Vec<Complex<R>>,
    ridge: Option<Lu<R>>,
}

impl<R: EngineScalar> ZEngine<R> {
    pub(crate) fn build(unit: R, nonzeros: &[(usize, usize, Complex64)], delta0: &[Complex64]) -> Self {
        let n = delta0.len();
        let mut e = ZEngine {
            n,
            adjacency: nonzeros.iter().map(|&(i, j, w)| (i, j, lift(&unit, w))).collect(),
            unit,
            d_imp: Vec::new(),
            lu: None,
            cond: f64::INFINITY,
            krylov: None,
            charpoly: Vec::new(),
            ridge: None,
        };
        let mut d = vec![e.zero(); n * n];
        let mut v = e.lift_vec(delta0);
        for k in 0..n {
            for (i, z) in v.iter().enumerate() {
                d[i * n + k] = z.clone();
            }
            v = e.shift(&v);
        }
        e.lu = Lu::factor(d.clone(), n);
        if let Some(lu) = &e.lu {
            e.cond = lu.cond1_estimate(&e.unit);
            e.krylov = Some(lu.solve(&v).into_iter().map(|z| -z).collect());
        }
        e.d_imp = d;
        e
    }

    fn zero(&self) -> Complex<R> {
        Complex::new(self.unit.lift_like(0.0), self.unit.lift_like(0.0))
    }

    pub(crate) fn lift_vec(&self, v: &[Complex64]) -> Vec<Complex<R>> {
        v.iter().map(|&z| lift(&self.unit, z)).collect()
    }

    /// The working-precision view of `p`, converting if it came from a different engine.
    pub(crate) fn take<'a>(&self, p: &'a ZSignal) -> Cow<'a, [Complex<R>]> {
        match R::view(&p.repr) {
            Some(v) => Cow::Borrowed(v),
            None => Cow::Owned(self.lift_vec(&p.to_vec())),
        }
    }

    pub(crate) fn wrap(&self, v: Vec<Complex<R>>) -> ZSignal {
        ZSignal::from_repr(R::wrap(v))
    }

    pub(crate) fn cond(&self) -> f64 {
        self.cond
    }

    #[cfg(test)]
    pub(crate) fn krylov_charpoly(&self) -> Option<Vec<Complex64>> {
        self.krylov.as_ref().map(|c| c.iter().map(to_c64).collect())
    }

    pub(crate) fn use_krylov_charpoly(&mut self) -> bool {
        match &self.krylov {
            Some(c) => {
                self.charpoly = c.clone();
                true
            }
            None => false,
        }
    }

    pub(crate) fn set_charpoly(&mut self, c: &[Complex64]) {
        self.charpoly = self.lift_vec(c);
    }

    pub(crate) fn charpoly_f64(&self) -> Vec<Complex64> {
        self.charpoly.iter().map(to_c64).collect()
    }

    /// Tikhonov-regularized solver `(D^H D + mu I)^{-1} D^H`.
    pub(crate) fn set_ridge(&mut self, mu: f64) {
        let n = self.n;
        let mut g = vec![self.zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = self.zero();
                for k in 0..n {
                    acc = acc + self.d_imp[k * n + i].conj() * &self.d_imp[k * n + j];
                }
                g[i * n + j] = acc;
            }
            g[i * n + i] = g[i * n + i].clone() + lift(&self.unit, Complex64::new(mu, 0.0));
        }
        self.ridge = Lu::factor(g, n);
    }

    /// `A v`.
    pub(crate) fn shift(&self, v: &[Complex<R>]) -> Vec<Complex<R>> {
        let mut out = vec![self.zero(); self.n];
        for (i, j, w) in &self.adjacency {
            out[*i] = out[*i].clone() + w * &v[*j];
        }
        out
    }

    /// Solves `D_imp p = s`; `None` when the impulsive basis is singular.
    pub(crate) fn gzt(&self, s: &[Complex<R>]) -> Option<Vec<Complex<R>>> {
        if let Some(r) = &self.ridge {
            let n = self.n;
            let rhs: Vec<Complex<R>> = (0..n)
                .map(|i| {
                    (0..n).fold(self.zero(), |acc, k| acc + self.d_imp[k * n + i].conj() * &s[k])
                })
                .collect();
            return Some(r.solve(&rhs));
        }
        self.lu.as_ref().map(|lu| lu.solve(s))
    }

    /// `D_imp p`.
    pub(crate) fn igzt(&self, p: &[Complex<R>]) -> Vec<Complex<R>> {
        let n = self.n;
        (0..n)
            .map(|i| {
                let row = &self.d_imp[i * n..(i + 1) * n];
                row.iter().zip(p).fold(self.zero(), |acc, (d, x)| acc + d * x)
            })
            .collect()
    }

    /// `sum_k p_k A^k t`, Horner style.
    pub(crate) fn filter_apply(&self, p: &[Complex<R>], t: &[Complex<R>]) -> Vec<Complex<R>> {
        let mut acc = vec![self.zero(); self.n];
        for pk in p.iter().rev() {
            acc = self.shift(&acc);
            for (a, x) in acc.iter_mut().zip(t) {
                *a = a.clone() + pk * x;
            }
        }
        acc
    }

    /// `C_comp p`.
    pub(crate) fn companion_shift(&self, p: &[Complex<R>]) -> Vec<Complex<R>> {
        let n = self.n;
        let last = p[n - 1].clone();
        (0..n)
            .map(|i| {
                let carry = if i == 0 { self.zero() } else { p[i - 1].clone() };
                carry - &self.charpoly[i] * &last
            })
            .collect()
    }

    /// `(p_s(x) p_t(x)) mod charpoly`. With `pad`, trailing exact zeros are dropped first so the
    /// reduction is skipped whenever the true product degree stays below N.
    pub(crate) fn product(&self, ps: &[Complex<R>], pt: &[Complex<R>], pad: bool) -> Vec<Complex<R>> {
        let cut = |v: &[Complex<R>]| -> usize {
            if pad {
                v.iter().rposition(|z| !z.is_zero()).map_or(1, |k| k + 1)
            } else {
                v.len()
            }
        };
        let mut u = R::convolve(&ps[..cut(ps)], &pt[..cut(pt)], &self.unit);
        if u.len() > self.n {
            reduce_monic_in_place(&mut u, &self.charpoly);
        }
        u.resize(self.n, self.zero());
        u
    }
}

fn lift<R: Real>(unit: &R, z: Complex64) -> Complex<R> {
    Complex::new(unit.lift_like(z.re), unit.lift_like(z.im))
}

/// Engine at one of the two supported scalar types.
pub(crate) enum Engine {
    Double(ZEngine<f64>),
    Extended(ZEngine<BigFloat>),
}

impl Engine {
    pub(crate) fn precision_bits(&self) -> u32 {
        match self {
            Engine::Double(_) => 53,
            Engine::Extended(e) => e.unit.precision(),
        }
    }

    pub(crate) fn cond(&self) -> f64 {
        match self {
            Engine::Double(e) => e.cond(),
            Engine::Extended(e) => e.cond(),
        }
    }
}

/// Runs `$body` with `$e` bound to the concrete engine.
macro_rules! with_engine {
    ($engine:expr, |$e:ident| $body:expr) => {
        match $engine {
            $crate::engine::Engine::Double($e) => $body,
            $crate::engine::Engine::Extended($e) => $body,
        }
    };
}
pub(crate) use with_engine;
