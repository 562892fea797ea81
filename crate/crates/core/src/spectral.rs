//! Eigendecomposition of the shift: GFT, graph frequencies, spectral shift and impulses.

use std::sync::OnceLock;

use ndarray::{Array1, Array2, ArrayView1};
use ndarray_linalg::{Eig, Eigh, Factorize, Inverse, Solve, UPLO};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{GspError, Result};
use crate::graph::{validate_permutation, Graph};
use crate::signal::{Domain, GraphSignal};

/// Relative tolerance under which two real parts count as tied when ordering eigenvalues.
const TIE_TOL: f64 = 1e-9;

/// Eigenpair ordering.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub enum EigenOrdering {
    /// Descending real part, ties broken by descending imaginary part.
    #[default]
    Default,
    /// Position `k` takes the `perm[k]`-th eigenpair of the default ordering.
    Permutation(Vec<usize>),
}

impl EigenOrdering {
    pub fn tag(&self) -> &'static str {
        match self {
            EigenOrdering::Default => "default",
            EigenOrdering::Permutation(_) => "permutation",
        }
    }
}

/// Tag recorded in exports for the eigenvector gauge.
pub const NORMALIZATION_TAG: &str = "unit-2norm-largest-entry-real-positive";

/// `A = igft * diag(lambda) * gft`, with `gft = igft^{-1}`.
#[derive(Debug)]
pub struct SpectralDecomposition {
    gft: Array2<Complex64>,
    igft: Array2<Complex64>,
    lambda: Array1<Complex64>,
    ordering: EigenOrdering,
    hermitian: bool,
    m_shift: OnceLock<Array2<Complex64>>,
}

/// Serializable view of a decomposition.
#[derive(Debug, Serialize)]
pub struct DecompositionExport {
    pub n: usize,
    pub lambda: Vec<[f64; 2]>,
    pub gft: Vec<[f64; 2]>,
    pub ordering: String,
    pub normalization: String,
}

pub(crate) fn pairs(v: impl IntoIterator<Item = Complex64>) -> Vec<[f64; 2]> {
    v.into_iter().map(|z| [z.re, z.im]).collect()
}

/// Indices in the default order: descending real part, near-ties by descending imaginary part.
pub fn default_order(lambda: &[Complex64]) -> Vec<usize> {
    let scale = 1.0 + lambda.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let tol = TIE_TOL * scale;
    let mut idx: Vec<usize> = (0..lambda.len()).collect();
    idx.sort_by(|&a, &b| lambda[b].re.total_cmp(&lambda[a].re).then(a.cmp(&b)));
    let mut start = 0;
    while start < idx.len() {
        let head = lambda[idx[start]].re;
        let mut end = start + 1;
        while end < idx.len() && head - lambda[idx[end]].re <= tol {
            end += 1;
        }
        idx[start..end].sort_by(|&a, &b| lambda[b].im.total_cmp(&lambda[a].im).then(a.cmp(&b)));
        start = end;
    }
    idx
}

/// Unit 2-norm, first entry of (near) maximal modulus rotated onto the positive real axis.
fn normalize_column(col: &mut [Complex64]) {
    let norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return;
    }
    let max = col.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let pivot = col.iter().find(|z| z.norm() >= (1.0 - 1e-9) * max).copied().unwrap_or_default();
    let phase = pivot.conj() / pivot.norm();
    for z in col.iter_mut() {
        *z = *z * phase / norm;
    }
}

fn min_gap(lambda: &[Complex64]) -> f64 {
    let mut gap = f64::INFINITY;
    for i in 0..lambda.len() {
        for k in i + 1..lambda.len() {
            gap = gap.min((lambda[i] - lambda[k]).norm());
        }
    }
    gap
}

/// Decomposition with the default ordering.
pub fn decompose(g: &Graph) -> Result<SpectralDecomposition> {
    decompose_with(g, &EigenOrdering::Default)
}

/// Decomposition with an explicit ordering.
pub fn decompose_with(g: &Graph, ordering: &EigenOrdering) -> Result<SpectralDecomposition> {
    let n = g.n();
    let a = g.adjacency();
    let hermitian = g.is_hermitian();
    let (raw_lambda, raw_vecs) = if hermitian {
        let (w, v) = a.eigh(UPLO::Lower).map_err(|e| GspError::ConvergenceFailure(e.to_string()))?;
        (w.mapv(|x| Complex64::new(x, 0.0)), v)
    } else {
        a.eig().map_err(|e| GspError::ConvergenceFailure(e.to_string()))?
    };
    if raw_lambda.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(GspError::ConvergenceFailure("non-finite eigenvalue".into()));
    }
    let raw: Vec<Complex64> = raw_lambda.to_vec();
    let base = default_order(&raw);
    let order: Vec<usize> = match ordering {
        EigenOrdering::Default => base,
        EigenOrdering::Permutation(p) => {
            validate_permutation(p, n)?;
            p.iter().map(|&k| base[k]).collect()
        }
    };
    let lambda: Array1<Complex64> = order.iter().map(|&k| raw[k]).collect();
    let rho = lambda.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let threshold = 1e-8 * (1.0 + rho);
    let gap = min_gap(lambda.as_slice().unwrap());
    if gap <= threshold {
        return Err(GspError::DistinctnessViolation { gap, threshold });
    }
    let mut igft = Array2::zeros((n, n));
    for (dst, &src) in order.iter().enumerate() {
        let mut col = raw_vecs.column(src).to_vec();
        normalize_column(&mut col);
        igft.column_mut(dst).assign(&ArrayView1::from(&col));
    }
    let gft = if hermitian {
        igft.t().mapv(|z: Complex64| z.conj())
    } else {
        igft.inv().map_err(|e| GspError::SolveFailure(format!("eigenvector matrix: {e}")))?
    };
    Ok(SpectralDecomposition { gft, igft, lambda, ordering: ordering.clone(), hermitian, m_shift: OnceLock::new() })
}

impl SpectralDecomposition {
    pub fn n(&self) -> usize {
        self.lambda.len()
    }

    pub fn gft(&self) -> &Array2<Complex64> {
        &self.gft
    }

    pub fn igft(&self) -> &Array2<Complex64> {
        &self.igft
    }

    pub fn lambda(&self) -> &[Complex64] {
        self.lambda.as_slice().expect("contiguous")
    }

    pub fn ordering(&self) -> &EigenOrdering {
        &self.ordering
    }

    /// Whether the shift was routed to the Hermitian solver.
    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn spectral_radius(&self) -> f64 {
        self.lambda.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `GFT s`.
    pub fn gft_apply(&self, s: &GraphSignal) -> Result<GraphSignal> {
        s.expect_len(self.n())?;
        Ok(GraphSignal::new(self.gft.dot(&ArrayView1::from(s.values())).to_vec(), Domain::Spectral))
    }

    /// `GFT^{-1} s_hat`.
    pub fn igft_apply(&self, s_hat: &GraphSignal) -> Result<GraphSignal> {
        s_hat.expect_len(self.n())?;
        Ok(GraphSignal::new(self.igft.dot(&ArrayView1::from(s_hat.values())).to_vec(), Domain::Vertex))
    }

    /// `M = GFT conj(Lambda) GFT^{-1}`, computed once by solving against the factored eigenvector matrix.
    pub fn spectral_shift(&self) -> &Array2<Complex64> {
        self.m_shift.get_or_init(|| {
            let n = self.n();
            let f = self.igft.factorize().expect("eigenvector matrix was invertible at construction");
            let mut m = Array2::zeros((n, n));
            for j in 0..n {
                let rhs: Array1<Complex64> = (0..n).map(|i| self.lambda[i].conj() * self.igft[[i, j]]).collect();
                let col = f.solve(&rhs).expect("factored matrix is nonsingular");
                m.column_mut(j).assign(&col);
            }
            m
        })
    }

    /// `delta_0 = GFT^{-1} (1/sqrt N) 1`.
    pub fn vertex_impulse(&self) -> GraphSignal {
        let n = self.n();
        let flat = Array1::from_elem(n, Complex64::new(1.0 / (n as f64).sqrt(), 0.0));
        GraphSignal::new(self.igft.dot(&flat).to_vec(), Domain::Vertex)
    }

    /// `D_imp`, column `k` is `A^k delta_0`.
    pub fn impulse_matrix(&self, g: &Graph) -> Result<Array2<Complex64>> {
        let n = self.n();
        crate::signal::check_len(n, g.n())?;
        let mut d = Array2::zeros((n, n));
        let mut v = self.vertex_impulse();
        for k in 0..n {
            d.column_mut(k).assign(&ArrayView1::from(v.values()));
            if k + 1 < n {
                v = g.shift_apply(&v)?;
            }
        }
        Ok(d)
    }

    /// `D_sp,imp = (1/sqrt N) conj(V)`.
    pub fn spectral_impulse_matrix(&self) -> Array2<Complex64> {
        let s = 1.0 / (self.n() as f64).sqrt();
        crate::companion::vandermonde(self.lambda()).mapv(|z| z.conj() * s)
    }

    pub fn export(&self) -> DecompositionExport {
        DecompositionExport {
            n: self.n(),
            lambda: pairs(self.lambda.iter().copied()),
            gft: pairs(self.gft.iter().copied()),
            ordering: self.ordering.tag().to_string(),
            normalization: NORMALIZATION_TAG.to_string(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.export())?)
    }
}
