//! Graph z-transform (vertex and spectral), polynomial transform filters and the p/q conversions.

use ndarray::{Array1, Array2, ArrayView1};
use num_complex::Complex64;

use crate::charpoly::Polynomial;
use crate::companion::{CompanionModel, DOUBLE_SOLVE_LIMIT};
use crate::engine::{with_engine, ZSignal};
use crate::error::{GspError, Result};
use crate::numeric::lu::Lu;
use crate::signal::{check_len, Domain, GraphSignal};
use crate::spectral::SpectralDecomposition;

pub use crate::charpoly::poly_string;

fn singular() -> GspError {
    GspError::SolveFailure("impulse matrix is singular".into())
}

/// `p_imp` solving `D_imp p_imp = s`.
pub fn gzt(model: &CompanionModel, s: &GraphSignal) -> Result<ZSignal> {
    s.expect_len(model.n())?;
    model.check_solvable()?;
    with_engine!(model.engine(), |e| {
        let p = e.gzt(&e.lift_vec(s.values())).ok_or_else(singular)?;
        Ok(e.wrap(p))
    })
}

/// `s = D_imp p_imp`.
pub fn igzt(model: &CompanionModel, p: &ZSignal) -> Result<GraphSignal> {
    check_len(model.n(), p.len())?;
    with_engine!(model.engine(), |e| {
        let s = e.igzt(&e.take(p));
        Ok(e.wrap(s).to_signal().with_domain(Domain::Vertex))
    })
}

/// `C_comp p` at the model's working precision.
pub fn companion_shift(model: &CompanionModel, p: &ZSignal) -> Result<ZSignal> {
    check_len(model.n(), p.len())?;
    Ok(with_engine!(model.engine(), |e| e.wrap(e.companion_shift(&e.take(p)))))
}

fn solve_checked(f: Option<&(Lu<f64>, f64)>, what: &str, rhs: &[Complex64]) -> Result<Vec<Complex64>> {
    let (lu, cond) = f.ok_or_else(|| GspError::SolveFailure(format!("{what} is singular")))?;
    if !(*cond <= DOUBLE_SOLVE_LIMIT) {
        return Err(GspError::SolveFailure(format!("{what} condition number {cond:.3e} exceeds {DOUBLE_SOLVE_LIMIT:e}")));
    }
    Ok(lu.solve(rhs))
}

/// `q_sp,imp` solving `GFT (1/sqrt N) conj(V) q = s_hat`.
pub fn spectral_gzt(model: &CompanionModel, s_hat: &GraphSignal) -> Result<GraphSignal> {
    s_hat.expect_len(model.n())?;
    let q = solve_checked(model.spectral_lu(), "spectral impulse matrix", s_hat.values())?;
    Ok(GraphSignal::new(q, Domain::SpectralZ))
}

/// `s_hat = GFT (1/sqrt N) conj(V) q`.
pub fn inverse_spectral_gzt(model: &CompanionModel, q: &GraphSignal) -> Result<GraphSignal> {
    q.expect_len(model.n())?;
    let d = model.decomposition();
    let s = d.spectral_impulse_matrix().dot(&ArrayView1::from(q.values()));
    Ok(GraphSignal::new(d.gft().dot(&s).to_vec(), Domain::Spectral))
}

/// `q = conj(V)^{-1} GFT^{-1} V p`.
pub fn convert_p_to_q(model: &CompanionModel, p: &GraphSignal) -> Result<GraphSignal> {
    p.expect_len(model.n())?;
    let vp = model.vandermonde().dot(&ArrayView1::from(p.values()));
    let s = model.decomposition().igft().dot(&vp);
    let q = solve_checked(model.v_lu(true), "conjugate Vandermonde matrix", s.as_slice().unwrap())?;
    Ok(GraphSignal::new(q, Domain::SpectralZ))
}

/// `p = V^{-1} GFT conj(V) q`.
pub fn convert_q_to_p(model: &CompanionModel, q: &GraphSignal) -> Result<GraphSignal> {
    q.expect_len(model.n())?;
    let vq = model.vandermonde().mapv(|z| z.conj()).dot(&ArrayView1::from(q.values()));
    let s = model.decomposition().gft().dot(&vq);
    let p = solve_checked(model.v_lu(false), "Vandermonde matrix", s.as_slice().unwrap())?;
    Ok(GraphSignal::new(p, Domain::VertexZ))
}

/// `sum_k coeffs[k] A^k t`, by repeated shifts at the model's working precision.
pub fn transform_filter_apply(model: &CompanionModel, coeffs: &Polynomial, t: &GraphSignal) -> Result<GraphSignal> {
    let n = model.n();
    let degree = coeffs.degree();
    if degree > n - 1 {
        return Err(GspError::DegreeTooHigh { degree, max: n - 1 });
    }
    let p = &coeffs.coeffs()[..coeffs.len().min(n)];
    transform_filter_apply_z(model, &model.lift(p), t)
}

/// [`transform_filter_apply`] with coefficients already at working precision.
pub fn transform_filter_apply_z(model: &CompanionModel, p: &ZSignal, t: &GraphSignal) -> Result<GraphSignal> {
    let n = model.n();
    t.expect_len(n)?;
    if p.len() > n {
        return Err(GspError::DegreeTooHigh { degree: p.len() - 1, max: n - 1 });
    }
    with_engine!(model.engine(), |e| {
        let out = e.filter_apply(&e.take(p), &e.lift_vec(t.values()));
        Ok(e.wrap(out).to_signal().with_domain(Domain::Vertex))
    })
}

fn scaled_diag(d: &SpectralDecomposition, v: &[Complex64]) -> Array1<Complex64> {
    let r = (d.n() as f64).sqrt();
    v.iter().map(|z| z * r).collect()
}

/// `P_s(A) = GFT^{-1} diag(sqrt N s_hat) GFT`.
pub fn transform_filter_matrix(d: &SpectralDecomposition, s: &GraphSignal) -> Result<Array2<Complex64>> {
    let s_hat = d.gft_apply(s)?;
    let diag = scaled_diag(d, s_hat.values());
    let scaled = d.gft() * &diag.insert_axis(ndarray::Axis(1));
    Ok(d.igft().dot(&scaled))
}

/// `Q_s(M) = GFT diag(sqrt N s) GFT^{-1}`.
pub fn spectral_transform_filter_matrix(d: &SpectralDecomposition, s: &GraphSignal) -> Result<Array2<Complex64>> {
    s.expect_len(d.n())?;
    let diag = scaled_diag(d, s.values());
    let scaled = d.igft() * &diag.insert_axis(ndarray::Axis(1));
    Ok(d.gft().dot(&scaled))
}
