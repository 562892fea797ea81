//! Graph convolution by polynomial filtering, by the spectral product and by FFT with reduction
//! modulo the characteristic polynomial.

use std::time::{Duration, Instant};

use num_complex::Complex64;
use serde::Serialize;

use crate::companion::CompanionModel;
use crate::engine::{with_engine, ZSignal};
use crate::error::{GspError, Result};
use crate::signal::{check_len, Domain, GraphSignal};
use crate::spectral::SpectralDecomposition;
use crate::ztransform::{gzt, igzt, transform_filter_apply_z};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Filter,
    Spectral,
    Fast,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Filter => "filter",
            Method::Spectral => "spectral",
            Method::Fast => "fast",
        }
    }
}

/// Options for the FFT route.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FastOptions {
    /// Trim trailing exact zeros before the FFT, which skips the reduction whenever the true
    /// product degree is below N.
    pub pad: bool,
}

/// Pairwise agreement between two routes.
#[derive(Clone, Debug, Serialize)]
pub struct MethodDiff {
    pub a: Method,
    pub b: Method,
    pub max_abs: f64,
    pub relative: f64,
}

#[derive(Clone, Debug)]
pub struct ConvolutionReport {
    pub result: GraphSignal,
    pub method: Method,
    /// Largest relative pairwise difference, filled in by verification runs.
    pub max_crossmethod_diff: Option<f64>,
    pub diffs: Vec<MethodDiff>,
    pub outputs: Vec<(Method, GraphSignal)>,
    pub timings: Vec<(String, Duration)>,
    pub n: usize,
    pub graph_kind: String,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    n: usize,
    graph_kind: &'a str,
    method: Method,
    max_crossmethod_diff: Option<f64>,
    method_diffs: &'a [MethodDiff],
    timings_ns: std::collections::BTreeMap<&'a str, u128>,
}

impl ConvolutionReport {
    pub fn to_json(&self) -> Result<String> {
        let timings_ns = self.timings.iter().map(|(k, d)| (k.as_str(), d.as_nanos())).collect();
        let j = ReportJson {
            n: self.n,
            graph_kind: &self.graph_kind,
            method: self.method,
            max_crossmethod_diff: self.max_crossmethod_diff,
            method_diffs: &self.diffs,
            timings_ns,
        };
        Ok(serde_json::to_string_pretty(&j)?)
    }

    pub fn output(&self, m: Method) -> Option<&GraphSignal> {
        self.outputs.iter().find(|(k, _)| *k == m).map(|(_, s)| s)
    }
}

/// Linear convolution of two coefficient vectors via a power-of-two FFT.
pub fn linear_convolve_fft(a: &[Complex64], b: &[Complex64]) -> Result<Vec<Complex64>> {
    if a.is_empty() || b.is_empty() {
        return Err(GspError::EmptyInput);
    }
    Ok(crate::numeric::fft::convolve_f64(a, b))
}

/// `P_t(A) s`, with `p_t = GzT t`.
pub fn convolve_filter(model: &CompanionModel, s: &GraphSignal, t: &GraphSignal) -> Result<GraphSignal> {
    s.expect_len(model.n())?;
    let pt = gzt(model, t)?;
    transform_filter_apply_z(model, &pt, s)
}

/// `P_t(A) P_s(A) delta_0` for coefficients given directly in the impulsive basis.
pub fn convolve_filter_z(model: &CompanionModel, ps: &ZSignal, pt: &ZSignal) -> Result<GraphSignal> {
    let n = model.n();
    check_len(n, ps.len())?;
    check_len(n, pt.len())?;
    let delta0 = model.decomposition().vertex_impulse();
    with_engine!(model.engine(), |e| {
        let x = e.filter_apply(&e.take(ps), &e.lift_vec(delta0.values()));
        let y = e.filter_apply(&e.take(pt), &x);
        Ok(e.wrap(y).to_signal().with_domain(Domain::Vertex))
    })
}

/// `GFT^{-1} (sqrt N  s_hat * t_hat)`.
pub fn convolve_spectral(d: &SpectralDecomposition, s: &GraphSignal, t: &GraphSignal) -> Result<GraphSignal> {
    let (sh, th) = (d.gft_apply(s)?, d.gft_apply(t)?);
    let r = (d.n() as f64).sqrt();
    let prod: Vec<Complex64> = sh.values().iter().zip(th.values()).map(|(a, b)| a * b * r).collect();
    d.igft_apply(&GraphSignal::new(prod, Domain::Spectral))
}

/// `(p_s(x) p_t(x)) mod Delta_A(x)` at working precision.
pub fn fast_product(model: &CompanionModel, ps: &ZSignal, pt: &ZSignal, opts: FastOptions) -> Result<ZSignal> {
    let n = model.n();
    check_len(n, ps.len())?;
    check_len(n, pt.len())?;
    Ok(with_engine!(model.engine(), |e| e.wrap(e.product(&e.take(ps), &e.take(pt), opts.pad))))
}

/// FFT route for coefficients given in the impulsive basis.
pub fn convolve_fast_z(model: &CompanionModel, ps: &ZSignal, pt: &ZSignal, opts: FastOptions) -> Result<GraphSignal> {
    igzt(model, &fast_product(model, ps, pt, opts)?)
}

/// GzT both inputs, multiply by FFT, reduce modulo the characteristic polynomial, inverse GzT.
pub fn convolve_fast(model: &CompanionModel, s: &GraphSignal, t: &GraphSignal, opts: FastOptions) -> Result<GraphSignal> {
    Ok(fast_timed(model, s, t, opts)?.0)
}

type Timings = Vec<(String, Duration)>;

fn timed<T>(timings: &mut Timings, name: &str, f: impl FnOnce() -> Result<T>) -> Result<T> {
    let t0 = Instant::now();
    let out = f()?;
    timings.push((name.to_string(), t0.elapsed()));
    Ok(out)
}

fn fast_timed(model: &CompanionModel, s: &GraphSignal, t: &GraphSignal, opts: FastOptions) -> Result<(GraphSignal, Timings)> {
    let mut tm = Vec::new();
    let (ps, pt) = timed(&mut tm, "fast.gzt", || Ok((gzt(model, s)?, gzt(model, t)?)))?;
    let u = timed(&mut tm, "fast.fft_mod", || fast_product(model, &ps, &pt, opts))?;
    let out = timed(&mut tm, "fast.igzt", || igzt(model, &u))?;
    Ok((out, tm))
}

fn filter_timed(model: &CompanionModel, s: &GraphSignal, t: &GraphSignal) -> Result<(GraphSignal, Timings)> {
    let mut tm = Vec::new();
    let pt = timed(&mut tm, "filter.gzt", || gzt(model, t))?;
    let out = timed(&mut tm, "filter.apply", || transform_filter_apply_z(model, &pt, s))?;
    Ok((out, tm))
}

fn spectral_timed(d: &SpectralDecomposition, s: &GraphSignal, t: &GraphSignal) -> Result<(GraphSignal, Timings)> {
    let mut tm = Vec::new();
    let out = timed(&mut tm, "spectral.total", || convolve_spectral(d, s, t))?;
    Ok((out, tm))
}

/// Runs a single route and wraps the result in a report.
pub fn convolve(model: &CompanionModel, s: &GraphSignal, t: &GraphSignal, method: Method, opts: FastOptions) -> Result<ConvolutionReport> {
    let (result, timings) = match method {
        Method::Filter => filter_timed(model, s, t)?,
        Method::Spectral => spectral_timed(model.decomposition(), s, t)?,
        Method::Fast => fast_timed(model, s, t, opts)?,
    };
    Ok(ConvolutionReport {
        outputs: vec![(method, result.clone())],
        result,
        method,
        max_crossmethod_diff: None,
        diffs: Vec::new(),
        timings,
        n: model.n(),
        graph_kind: model.graph().kind().as_str().to_string(),
    })
}

fn pair_diff(a: (Method, &GraphSignal), b: (Method, &GraphSignal)) -> Result<MethodDiff> {
    let max_abs = a.1.max_abs_diff(b.1)?;
    let scale = a.1.max_abs().max(b.1.max_abs());
    let relative = if scale > 0.0 { max_abs / scale } else { 0.0 };
    Ok(MethodDiff { a: a.0, b: b.0, max_abs, relative })
}

fn assemble(model: &CompanionModel, outputs: Vec<(Method, GraphSignal)>, timings: Timings) -> Result<ConvolutionReport> {
    let mut diffs = Vec::new();
    for i in 0..outputs.len() {
        for j in i + 1..outputs.len() {
            diffs.push(pair_diff((outputs[i].0, &outputs[i].1), (outputs[j].0, &outputs[j].1))?);
        }
    }
    let worst = diffs.iter().map(|d| d.relative).fold(0.0, f64::max);
    let (method, result) = outputs.iter().find(|(m, _)| *m == Method::Fast).cloned().expect("fast route always runs");
    Ok(ConvolutionReport {
        result,
        method,
        max_crossmethod_diff: Some(worst),
        diffs,
        outputs,
        timings,
        n: model.n(),
        graph_kind: model.graph().kind().as_str().to_string(),
    })
}

/// Runs all three routes on vertex-domain inputs and records their pairwise differences.
pub fn verify_convolution(model: &CompanionModel, s: &GraphSignal, t: &GraphSignal, opts: FastOptions) -> Result<ConvolutionReport> {
    let (f, mut tm) = filter_timed(model, s, t)?;
    let (sp, t2) = spectral_timed(model.decomposition(), s, t)?;
    let (fa, t3) = fast_timed(model, s, t, opts)?;
    tm.extend(t2);
    tm.extend(t3);
    assemble(model, vec![(Method::Filter, f), (Method::Spectral, sp), (Method::Fast, fa)], tm)
}

/// Same comparison for inputs given as impulsive-basis coefficients.
pub fn verify_convolution_z(model: &CompanionModel, ps: &ZSignal, pt: &ZSignal, opts: FastOptions) -> Result<ConvolutionReport> {
    let mut tm = Vec::new();
    let f = timed(&mut tm, "filter.apply", || convolve_filter_z(model, ps, pt))?;
    let (s, t) = timed(&mut tm, "spectral.igzt", || Ok((igzt(model, ps)?, igzt(model, pt)?)))?;
    let sp = timed(&mut tm, "spectral.total", || convolve_spectral(model.decomposition(), &s, &t))?;
    let u = timed(&mut tm, "fast.fft_mod", || fast_product(model, ps, pt, opts))?;
    let fa = timed(&mut tm, "fast.igzt", || igzt(model, &u))?;
    assemble(model, vec![(Method::Filter, f), (Method::Spectral, sp), (Method::Fast, fa)], tm)
}
