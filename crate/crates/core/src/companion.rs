//! Companion shift, companion graph, Vandermonde matrix and the cached companion model.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use ndarray::Array2;
use ndarray_linalg::SVD;
use num_complex::{Complex, Complex64};
use serde::Serialize;

use crate::charpoly::{charpoly_exact, charpoly_from_eigenvalues, reduction_growth_log2, Polynomial};
use crate::engine::{Engine, ZEngine, ZSignal};
use crate::error::{GspError, Result};
use crate::graph::{Graph, GraphKind};
use crate::numeric::lu::Lu;
use crate::numeric::{modulus_f64, BigFloat};
use crate::spectral::{decompose_with, pairs, EigenOrdering, SpectralDecomposition};

/// Condition numbers above this are reported as warnings.
pub const COND_WARN: f64 = 1e12;
/// Largest condition number a double-precision solve will accept.
pub const DOUBLE_SOLVE_LIMIT: f64 = 1e14;
/// `Auto` stays in double precision up to this condition number of `D_imp`.
pub const AUTO_DOUBLE_LIMIT: f64 = 1e4;
/// Bits kept beyond `log2(cond)` when `Auto` picks an extended precision.
pub const GUARD_BITS: u32 = 96;
/// Upper bound for `Auto`.
pub const MAX_BITS: u32 = 4096;

const VANDERMONDE_BITS: u32 = 128;
const RESIDUAL_BITS: u32 = 256;

/// Working precision for the impulsive-basis computations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Precision {
    /// Double precision when `D_imp` is well conditioned, otherwise enough bits for its condition number.
    #[default]
    Auto,
    Double,
    /// Extended precision with the given number of mantissa bits.
    Bits(u32),
}

/// Source of the characteristic polynomial coefficients.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum CharpolySource {
    /// Product of linear factors over the computed eigenvalues. In extended precision the
    /// coefficients are instead taken from the Krylov relation `D_imp c = -A^N delta_0`.
    #[default]
    Spectral,
    /// Exact big-integer coefficients; integer adjacencies only.
    Exact,
}

/// Where the model's coefficients actually came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CharpolyOrigin {
    Eigenvalues,
    Exact,
    Krylov,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ModelOptions {
    pub ordering: EigenOrdering,
    pub charpoly: CharpolySource,
    pub precision: Precision,
    /// Tikhonov parameter for the graph z-transform; off by default.
    pub ridge: Option<f64>,
}

/// `[1, l, l^2, ..., l^{N-1}]` per row, powers accumulated in extended precision.
pub fn vandermonde(lambda: &[Complex64]) -> Array2<Complex64> {
    let n = lambda.len();
    let mut v = Array2::zeros((n, n));
    for (i, &l) in lambda.iter().enumerate() {
        let lb = Complex::new(BigFloat::from_f64(l.re, VANDERMONDE_BITS), BigFloat::from_f64(l.im, VANDERMONDE_BITS));
        let mut p = Complex::new(BigFloat::from_f64(1.0, VANDERMONDE_BITS), BigFloat::from_f64(0.0, VANDERMONDE_BITS));
        for k in 0..n {
            v[[i, k]] = crate::numeric::to_c64(&p);
            if k + 1 < n {
                p = &p * &lb;
            }
        }
    }
    v
}

fn monic_coeffs(delta: &Polynomial) -> Result<Vec<Complex64>> {
    let d = delta.top();
    if d == 0 {
        return Err(GspError::InvalidSize { n: 0, reason: "companion matrix needs degree >= 1" });
    }
    if !delta.is_monic() {
        return Err(GspError::NonMonic(crate::io::format_complex(delta.leading())));
    }
    Ok(delta.coeffs()[..d].to_vec())
}

/// Companion matrix of a monic polynomial: ones on the subdiagonal, `-c_k` down the last column.
pub fn build_companion(delta: &Polynomial) -> Result<Array2<Complex64>> {
    Ok(companion_from_tail(&monic_coeffs(delta)?))
}

fn companion_from_tail(c: &[Complex64]) -> Array2<Complex64> {
    let n = c.len();
    let mut m = Array2::zeros((n, n));
    for i in 1..n {
        m[[i, i - 1]] = Complex64::new(1.0, 0.0);
    }
    for (i, ci) in c.iter().enumerate() {
        m[[i, n - 1]] = -ci;
    }
    m
}

/// Splits a companion matrix into the line shift (subdiagonal ones) and the boundary column.
pub fn companion_split(c: &Array2<Complex64>) -> Result<(Array2<Complex64>, Array2<Complex64>)> {
    let (rows, cols) = c.dim();
    if rows != cols || rows == 0 {
        return Err(GspError::MalformedCompanion(format!("shape {rows}x{cols}")));
    }
    let n = rows;
    let one = Complex64::new(1.0, 0.0);
    for j in 0..n - 1 {
        for i in 0..n {
            let expect = if i == j + 1 { one } else { Complex64::new(0.0, 0.0) };
            if c[[i, j]] != expect {
                return Err(GspError::MalformedCompanion(format!("entry ({i}, {j})")));
            }
        }
    }
    let mut line = Array2::zeros((n, n));
    for i in 1..n {
        line[[i, i - 1]] = one;
    }
    let mut boundary = Array2::zeros((n, n));
    boundary.column_mut(n - 1).assign(&c.column(n - 1));
    Ok((line, boundary))
}

/// Companion graph: forward path `k -> k+1` of weight 1 and an edge `N-1 -> k` of weight `-c_k`
/// for every nonzero `c_k`.
pub fn companion_graph(delta: &Polynomial) -> Result<Graph> {
    Ok(Graph::from_adjacency(build_companion(delta)?)?.with_kind(GraphKind::Companion))
}

/// `sigma_max / sigma_min`, infinite for singular input.
pub fn condition_number(a: &Array2<Complex64>) -> f64 {
    match a.svd(false, false) {
        Ok((_, s, _)) => {
            let max = s.iter().copied().fold(0.0, f64::max);
            let min = s.iter().copied().fold(f64::INFINITY, f64::min);
            if min > 0.0 {
                max / min
            } else {
                f64::INFINITY
            }
        }
        Err(_) => f64::INFINITY,
    }
}

/// Everything the z-transform and the convolutions need for one graph.
pub struct CompanionModel {
    graph: Graph,
    decomposition: SpectralDecomposition,
    charpoly: Polynomial,
    charpoly_origin: CharpolyOrigin,
    c_comp: Array2<Complex64>,
    vandermonde: Array2<Complex64>,
    d_imp: Array2<Complex64>,
    cond_v: f64,
    cond_dimp: f64,
    engine: Engine,
    ridge: Option<f64>,
    warnings: Vec<String>,
    spectral_lu: OnceLock<Option<(Lu<f64>, f64)>>,
    v_lu: OnceLock<Option<(Lu<f64>, f64)>>,
    v_conj_lu: OnceLock<Option<(Lu<f64>, f64)>>,
}

impl std::fmt::Debug for CompanionModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CompanionModel")
            .field("n", &self.n())
            .field("charpoly_origin", &self.charpoly_origin)
            .field("precision_bits", &self.precision_bits())
            .field("cond_v", &self.cond_v)
            .field("cond_dimp", &self.cond_dimp)
            .finish_non_exhaustive()
    }
}

/// Serializable summary of a model.
#[derive(Debug, Serialize)]
pub struct ModelExport {
    pub n: usize,
    pub charpoly_coeffs: Vec<[f64; 2]>,
    pub lambda: Vec<[f64; 2]>,
    #[serde(rename = "cond_V")]
    pub cond_v: f64,
    #[serde(rename = "cond_Dimp")]
    pub cond_dimp: f64,
    pub charpoly_origin: CharpolyOrigin,
    pub precision_bits: u32,
    pub warnings: Vec<String>,
}

fn round_up_64(bits: f64) -> u32 {
    let b = bits.ceil().max(64.0) as u32;
    b.div_ceil(64) * 64
}

/// `amplification` is the `log2` growth that the FFT route's reduction and inverse transform
/// impose on rounding errors, independent of the impulse matrix's condition number.
fn needed_bits(cond: f64, amplification: f64) -> u32 {
    round_up_64(cond.max(1.0).log2().max(amplification) + GUARD_BITS as f64)
}

fn build_engine(precision: Precision, cond_dimp: f64, amplification: f64, g: &Graph, delta0: &[Complex64]) -> Engine {
    let nz = g.nonzeros();
    let extended = |bits: u32| ZEngine::build(BigFloat::from_f64(1.0, bits), &nz, delta0);
    let double_ok = cond_dimp <= AUTO_DOUBLE_LIMIT && amplification <= AUTO_DOUBLE_LIMIT.log2();
    match precision {
        Precision::Double => Engine::Double(ZEngine::build(1.0, &nz, delta0)),
        Precision::Bits(b) => Engine::Extended(extended(b.max(1))),
        Precision::Auto if double_ok => Engine::Double(ZEngine::build(1.0, &nz, delta0)),
        Precision::Auto => {
            let mut bits = needed_bits(cond_dimp, amplification).min(MAX_BITS);
            loop {
                let e = extended(bits);
                if !e.cond().is_finite() {
                    return Engine::Extended(e);
                }
                let need = needed_bits(e.cond(), amplification).min(MAX_BITS);
                if need <= bits {
                    return Engine::Extended(e);
                }
                bits = need;
            }
        }
    }
}

impl CompanionModel {
    /// Builds the model with default options.
    pub fn build(g: &Graph) -> Result<CompanionModel> {
        Self::build_with(g, &ModelOptions::default())
    }

    pub fn build_with(g: &Graph, opts: &ModelOptions) -> Result<CompanionModel> {
        let decomposition = decompose_with(g, &opts.ordering)?;
        let n = g.n();
        let lambda = decomposition.lambda().to_vec();
        let vandermonde = vandermonde(&lambda);
        let d_imp = decomposition.impulse_matrix(g)?;
        let cond_v = condition_number(&vandermonde);
        let cond_dimp = condition_number(&d_imp);
        let mut warnings = Vec::new();
        if !g.is_strongly_connected() {
            warnings.push("graph is not strongly connected".to_string());
        }
        if cond_v > COND_WARN {
            warnings.push(format!("Vandermonde matrix is ill-conditioned (cond {cond_v:.3e})"));
        }
        if cond_dimp > COND_WARN {
            warnings.push(format!("impulse matrix is ill-conditioned (cond {cond_dimp:.3e})"));
        }

        let spectral = || {
            let p = charpoly_from_eigenvalues(&lambda);
            if g.is_real() {
                p.realified()
            } else {
                p
            }
        };
        let tail = |p: &Polynomial| p.coeffs()[..n].to_vec();

        let d_max = d_imp.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let amplification = reduction_growth_log2(&tail(&spectral())) + d_max.max(1.0).log2();
        let delta0 = decomposition.vertex_impulse();
        let mut engine = build_engine(opts.precision, cond_dimp, amplification, g, delta0.values());

        let krylov = match (&opts.charpoly, &mut engine) {
            (CharpolySource::Spectral, Engine::Extended(e)) => e.use_krylov_charpoly(),
            _ => false,
        };
        let origin = match opts.charpoly {
            CharpolySource::Exact => {
                let c = tail(&charpoly_exact(g)?.to_polynomial());
                crate::engine::with_engine!(&mut engine, |e| e.set_charpoly(&c));
                CharpolyOrigin::Exact
            }
            CharpolySource::Spectral if krylov => CharpolyOrigin::Krylov,
            CharpolySource::Spectral => {
                let c = tail(&spectral());
                crate::engine::with_engine!(&mut engine, |e| e.set_charpoly(&c));
                CharpolyOrigin::Eigenvalues
            }
        };
        if let Some(mu) = opts.ridge {
            crate::engine::with_engine!(&mut engine, |e| e.set_ridge(mu));
        }
        let mut coeffs = crate::engine::with_engine!(&engine, |e| e.charpoly_f64());
        coeffs.push(Complex64::new(1.0, 0.0));
        let mut charpoly = Polynomial::new(coeffs);
        if g.is_real() {
            charpoly = charpoly.realified();
        }
        let c_comp = companion_from_tail(&charpoly.coeffs()[..n]);
        if engine.cond() > Self::solve_limit_for(engine.precision_bits()) && opts.ridge.is_none() {
            warnings.push(format!(
                "impulse matrix exceeds the solvable condition number at {} bits",
                engine.precision_bits()
            ));
        }

        Ok(CompanionModel {
            graph: g.clone(),
            decomposition,
            charpoly,
            charpoly_origin: origin,
            c_comp,
            vandermonde,
            d_imp,
            cond_v,
            cond_dimp,
            engine,
            ridge: opts.ridge,
            warnings,
            spectral_lu: OnceLock::new(),
            v_lu: OnceLock::new(),
            v_conj_lu: OnceLock::new(),
        })
    }

    fn solve_limit_for(bits: u32) -> f64 {
        DOUBLE_SOLVE_LIMIT * 2f64.powi(bits as i32 - 53)
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn decomposition(&self) -> &SpectralDecomposition {
        &self.decomposition
    }

    pub fn lambda(&self) -> &[Complex64] {
        self.decomposition.lambda()
    }

    /// Monic characteristic polynomial used by the companion shift and the fast convolution.
    pub fn charpoly(&self) -> &Polynomial {
        &self.charpoly
    }

    pub fn charpoly_origin(&self) -> CharpolyOrigin {
        self.charpoly_origin
    }

    pub fn c_comp(&self) -> &Array2<Complex64> {
        &self.c_comp
    }

    pub fn vandermonde(&self) -> &Array2<Complex64> {
        &self.vandermonde
    }

    /// Double-precision `D_imp`.
    pub fn d_imp(&self) -> &Array2<Complex64> {
        &self.d_imp
    }

    pub fn cond_v(&self) -> f64 {
        self.cond_v
    }

    pub fn cond_dimp(&self) -> f64 {
        self.cond_dimp
    }

    /// Mantissa bits of the impulsive-basis arithmetic (53 for double).
    pub fn precision_bits(&self) -> u32 {
        self.engine.precision_bits()
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub(crate) fn engine(&self) -> &Engine {
        &self.engine
    }

    /// Fails when the impulsive basis cannot be inverted reliably at the working precision.
    pub(crate) fn check_solvable(&self) -> Result<()> {
        if self.ridge.is_some() {
            return Ok(());
        }
        let bits = self.precision_bits();
        let cond = match &self.engine {
            Engine::Double(_) => self.cond_dimp,
            Engine::Extended(_) => self.engine.cond(),
        };
        let limit = Self::solve_limit_for(bits);
        if !(cond <= limit) {
            return Err(GspError::SolveFailure(format!(
                "impulse matrix condition number {cond:.3e} exceeds {limit:.3e} at {bits} bits"
            )));
        }
        Ok(())
    }

    /// Lifts double-precision coefficients into this model's working precision.
    pub fn lift(&self, p: &[Complex64]) -> ZSignal {
        crate::engine::with_engine!(&self.engine, |e| e.wrap(e.lift_vec(p)))
    }

    pub(crate) fn spectral_lu(&self) -> Option<&(Lu<f64>, f64)> {
        self.spectral_lu
            .get_or_init(|| {
                let m = self.decomposition.gft().dot(&self.decomposition.spectral_impulse_matrix());
                factor_with_cond(&m)
            })
            .as_ref()
    }

    pub(crate) fn v_lu(&self, conj: bool) -> Option<&(Lu<f64>, f64)> {
        let cell = if conj { &self.v_conj_lu } else { &self.v_lu };
        cell.get_or_init(|| {
            let v = if conj { self.vandermonde.mapv(|z| z.conj()) } else { self.vandermonde.clone() };
            factor_with_cond(&v)
        })
        .as_ref()
    }

    pub fn export(&self) -> ModelExport {
        ModelExport {
            n: self.n(),
            charpoly_coeffs: pairs(self.charpoly.coeffs().iter().copied()),
            lambda: pairs(self.lambda().iter().copied()),
            cond_v: self.cond_v,
            cond_dimp: self.cond_dimp,
            charpoly_origin: self.charpoly_origin,
            precision_bits: self.precision_bits(),
            warnings: self.warnings.clone(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.export())?)
    }
}

fn factor_with_cond(m: &Array2<Complex64>) -> Option<(Lu<f64>, f64)> {
    let n = m.nrows();
    let flat: Vec<Complex64> = m.iter().copied().collect();
    Lu::factor(flat, n).map(|lu| {
        let cond = lu.cond1_estimate(&1.0);
        (lu, cond)
    })
}

/// `max|V C - diag(lambda) V| / max|V|`, with the products and sums carried in extended precision.
pub fn verify_companion(model: &CompanionModel) -> f64 {
    let v = model.vandermonde();
    let c = model.c_comp();
    let n = model.n();
    let big = |z: Complex64| Complex::new(BigFloat::from_f64(z.re, RESIDUAL_BITS), BigFloat::from_f64(z.im, RESIDUAL_BITS));
    let nonzeros: Vec<Vec<(usize, Complex<BigFloat>)>> = (0..n)
        .map(|j| (0..n).filter(|&k| c[[k, j]] != Complex64::new(0.0, 0.0)).map(|k| (k, big(c[[k, j]]))).collect())
        .collect();
    let mut worst = 0.0f64;
    for i in 0..n {
        let li = big(model.lambda()[i]);
        for (j, col) in nonzeros.iter().enumerate() {
            let mut acc = -(&li * &big(v[[i, j]]));
            for (k, w) in col {
                acc = acc + &big(v[[i, *k]]) * w;
            }
            worst = worst.max(modulus_f64(&acc));
        }
    }
    let vmax = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    worst / vmax
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct CacheKey {
    n: usize,
    entries: Vec<(u64, u64)>,
    ordering: EigenOrdering,
    charpoly: CharpolySource,
    precision: Precision,
    ridge: Option<u64>,
}

impl CacheKey {
    fn new(g: &Graph, opts: &ModelOptions) -> Self {
        CacheKey {
            n: g.n(),
            entries: g.adjacency().iter().map(|z| (z.re.to_bits(), z.im.to_bits())).collect(),
            ordering: opts.ordering.clone(),
            charpoly: opts.charpoly,
            precision: opts.precision,
            ridge: opts.ridge.map(f64::to_bits),
        }
    }
}

/// Shared store of built models keyed by adjacency and options.
#[derive(Default)]
pub struct ModelCache {
    models: RwLock<HashMap<CacheKey, Arc<CompanionModel>>>,
}

impl ModelCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get_or_build(&self, g: &Graph, opts: &ModelOptions) -> Result<Arc<CompanionModel>> {
        let key = CacheKey::new(g, opts);
        if let Some(m) = self.models.read().expect("cache lock poisoned").get(&key) {
            return Ok(Arc::clone(m));
        }
        let model = Arc::new(CompanionModel::build_with(g, opts)?);
        let mut w = self.models.write().expect("cache lock poisoned");
        Ok(Arc::clone(w.entry(key).or_insert(model)))
    }

    pub fn len(&self) -> usize {
        self.models.read().expect("cache lock poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
