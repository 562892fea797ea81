mod common;

use common::*;
use gsp_core::companion::vandermonde;
use gsp_core::{decompose, decompose_with, Complex64, Domain, EigenOrdering, Graph, GraphSignal, GspError};
use ndarray::{array, Array2};

fn diag_residual(g: &Graph) -> f64 {
    let d = decompose(g).unwrap();
    let lam = Array2::from_diag(&ndarray::Array1::from(d.lambda().to_vec()));
    max_diff(&d.gft().dot(g.adjacency()).dot(d.igft()), &lam) / d.spectral_radius().max(1.0)
}

#[test]
fn cycle4_spectrum() {
    let d = decompose(&Graph::cycle(4).unwrap()).unwrap();
    let expect = [c(1.0), Complex64::new(0.0, -1.0), c(-1.0), Complex64::new(0.0, 1.0)];
    assert!(set_distance(d.lambda(), &expect) < 1e-12);
    assert!(d.lambda().iter().all(|l| (l.norm() - 1.0).abs() < 1e-12));
}

#[test]
fn diagonal_matrix_orders_descending() {
    let g = Graph::from_rows(&[vec![c(1.0), c(0.0), c(0.0)], vec![c(0.0), c(2.0), c(0.0)], vec![c(0.0), c(0.0), c(3.0)]])
        .unwrap();
    let d = decompose(&g).unwrap();
    assert!(vec_diff(d.lambda(), &[c(3.0), c(2.0), c(1.0)]) < 1e-14);
    let expect = array![[c(0.0), c(0.0), c(1.0)], [c(0.0), c(1.0), c(0.0)], [c(1.0), c(0.0), c(0.0)]];
    assert!(max_diff(d.gft(), &expect) < 1e-14);
    assert!(max_diff(d.spectral_shift(), g.adjacency()) < 1e-14);
}

#[test]
fn path8_spectrum_is_symmetric_cosines() {
    let d = decompose(&Graph::path(8).unwrap()).unwrap();
    let oracle: Vec<Complex64> = (1..=8).map(|k| c(2.0 * (k as f64 * std::f64::consts::PI / 9.0).cos())).collect();
    assert!(set_distance(d.lambda(), &oracle) < 1e-12);
    assert!(d.lambda().iter().all(|l| l.im == 0.0));
    let neg: Vec<Complex64> = d.lambda().iter().map(|l| -l).collect();
    assert!(set_distance(d.lambda(), &neg) < 1e-12);
}

#[test]
fn repeated_eigenvalues_are_rejected() {
    let g = Graph::from_rows(&[vec![c(1.0), c(0.0)], vec![c(0.0), c(1.0)]]).unwrap();
    assert!(matches!(decompose(&g), Err(GspError::DistinctnessViolation { .. })));
}

#[test]
fn gft_examples() {
    for n in [4, 8] {
        let d = decompose(&Graph::cycle(n).unwrap()).unwrap();
        let s_hat = d.gft_apply(&GraphSignal::basis(n, 0, Domain::Vertex)).unwrap();
        assert_eq!(s_hat.domain(), Domain::Spectral);
        let flat = 1.0 / (n as f64).sqrt();
        assert!(s_hat.values().iter().all(|z| (z - c(flat)).norm() < 1e-12));
        let z = d.gft_apply(&GraphSignal::zeros(n, Domain::Vertex)).unwrap();
        assert_eq!(z.max_abs(), 0.0);
    }
}

#[test]
fn gft_round_trip_all_generators() {
    let mut r = rng(11);
    for n in [4, 8, 16, 32] {
        for g in generators(n) {
            let d = decompose(&g).unwrap();
            let s = random_signal(&mut r, n);
            let back = d.igft_apply(&d.gft_apply(&s).unwrap()).unwrap();
            assert!(back.max_abs_diff(&s).unwrap() < 1e-9 * s.max_abs());
        }
    }
}

#[test]
fn igft_examples() {
    let mut r = rng(12);
    for g in generators(8) {
        let d = decompose(&g).unwrap();
        let flat = GraphSignal::new(vec![c(1.0 / 8f64.sqrt()); 8], Domain::Spectral);
        assert!(d.igft_apply(&flat).unwrap().max_abs_diff(&d.vertex_impulse()).unwrap() < 1e-12);
        for k in 0..8 {
            let mode = d.igft_apply(&GraphSignal::basis(8, k, Domain::Spectral)).unwrap();
            assert!(vec_diff(mode.values(), &d.igft().column(k).to_vec()) < 1e-15);
        }
        let s_hat = random_vec(&mut r, 8);
        let via_solve = dense_solve(d.gft(), &s_hat);
        let via_igft = d.igft_apply(&GraphSignal::new(s_hat, Domain::Spectral)).unwrap();
        assert!(vec_diff(via_igft.values(), &via_solve) < 1e-9);
    }
}

#[test]
fn gft_is_inverse_of_igft() {
    for n in [8, 32, 64] {
        for g in generators(n) {
            let d = decompose(&g).unwrap();
            assert!(max_diff(&d.gft().dot(d.igft()), &identity(n)) < 1e-8 * n as f64);
        }
    }
}

#[test]
fn diagonalization_residual_up_to_128() {
    for n in [8, 32, 64, 128] {
        for g in generators(n) {
            assert!(diag_residual(&g) < 1e-8, "{:?} {n}", g.kind());
        }
    }
}

#[test]
fn eigenvectors_are_normalized_with_fixed_phase() {
    let d = decompose(&Graph::directed_ladder(12).unwrap()).unwrap();
    for k in 0..12 {
        let v = d.igft().column(k);
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!((norm - 1.0).abs() < 1e-12);
        let big = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let first = v.iter().find(|z| z.norm() >= big * (1.0 - 1e-9)).unwrap();
        assert!(first.im.abs() < 1e-12 && first.re > 0.0);
    }
}

#[test]
fn spectral_shift_examples() {
    for n in [4, 8, 16] {
        let g = Graph::cycle(n).unwrap();
        let d = decompose_with(&g, &dft_ordering(n)).unwrap();
        assert!(max_diff(d.spectral_shift(), g.adjacency()) < 1e-12);
    }
    let mut r = rng(13);
    for g in generators(12) {
        let d = decompose(&g).unwrap();
        for _ in 0..5 {
            let s = random_signal(&mut r, 12);
            let ls: Vec<Complex64> = s.values().iter().zip(d.lambda()).map(|(x, l)| x * l.conj()).collect();
            let lhs = d.gft_apply(&GraphSignal::vertex(ls)).unwrap();
            let rhs = matvec(d.spectral_shift(), d.gft_apply(&s).unwrap().values());
            assert!(vec_diff(lhs.values(), &rhs) < 1e-8 * vec_max(&rhs).max(1.0));
        }
    }
}

#[test]
fn shift_in_frequency() {
    let mut r = rng(14);
    for g in generators(16) {
        let d = decompose(&g).unwrap();
        let s = random_signal(&mut r, 16);
        let lhs = d.gft_apply(&g.shift_apply(&s).unwrap()).unwrap();
        let rhs: Vec<Complex64> = d.gft_apply(&s).unwrap().values().iter().zip(d.lambda()).map(|(a, l)| a * l).collect();
        assert!(vec_diff(lhs.values(), &rhs) < 1e-8 * vec_max(&rhs));
    }
}

#[test]
fn vertex_impulse_examples() {
    for n in [4, 9] {
        let d = decompose(&Graph::cycle(n).unwrap()).unwrap();
        assert!(d.vertex_impulse().max_abs_diff(&GraphSignal::basis(n, 0, Domain::Vertex)).unwrap() < 1e-12);
    }
    let one = decompose(&Graph::from_rows(&[vec![c(0.0)]]).unwrap()).unwrap();
    assert!((one.vertex_impulse().values()[0].norm() - 1.0).abs() < 1e-15);
    let d = decompose(&Graph::path(8).unwrap()).unwrap();
    let flat = d.gft_apply(&d.vertex_impulse()).unwrap();
    assert!(flat.values().iter().all(|z| (z - c(1.0 / 8f64.sqrt())).norm() < 1e-10));
}

#[test]
fn impulse_matrix_examples() {
    let g = Graph::cycle(4).unwrap();
    let d = decompose(&g).unwrap();
    assert!(max_diff(&d.impulse_matrix(&g).unwrap(), &identity(4)) < 1e-12);

    let one = Graph::from_rows(&[vec![c(0.5)]]).unwrap();
    let d1 = decompose(&one).unwrap();
    assert!((d1.impulse_matrix(&one).unwrap()[[0, 0]].norm() - 1.0).abs() < 1e-15);

    for g in generators(8) {
        let d = decompose(&g).unwrap();
        let lhs = d.gft().dot(&d.impulse_matrix(&g).unwrap());
        let rhs = vandermonde(d.lambda()).mapv(|z| z / 8f64.sqrt());
        assert!(max_diff(&lhs, &rhs) < 1e-8);
    }
}

#[test]
fn impulse_columns_match_spectral_powers() {
    let g = Graph::directed_ladder(10).unwrap();
    let d = decompose(&g).unwrap();
    let dimp = d.impulse_matrix(&g).unwrap();
    let r = 10f64.sqrt();
    for k in 0..10 {
        let col = d.gft_apply(&GraphSignal::vertex(dimp.column(k).to_vec())).unwrap();
        let expect: Vec<Complex64> = d.lambda().iter().map(|l| l.powu(k as u32) / r).collect();
        assert!(vec_diff(col.values(), &expect) < 1e-8);
    }
}

#[test]
fn spectral_impulse_matrix_examples() {
    let n = 8;
    let d = decompose_with(&Graph::cycle(n).unwrap(), &EigenOrdering::Default).unwrap();
    let dsp = d.spectral_impulse_matrix();
    // columns are DFT harmonics: entries of unit modulus / sqrt N, column 0 flat
    assert!(dsp.iter().all(|z| (z.norm() - 1.0 / (n as f64).sqrt()).abs() < 1e-12));
    assert!(dsp.column(0).iter().all(|z| (z - c(1.0 / (n as f64).sqrt())).norm() < 1e-12));

    let one = decompose(&Graph::from_rows(&[vec![c(2.0)]]).unwrap()).unwrap();
    assert!((one.spectral_impulse_matrix()[[0, 0]] - c(1.0)).norm() < 1e-15);

    let lam = [Complex64::new(0.5, 0.2), c(-1.0), Complex64::new(0.1, -0.9), c(2.0), Complex64::new(-0.3, 0.4)];
    let v = vandermonde(&lam);
    for i in 0..5 {
        for k in 0..5 {
            let expect = lam[i].conj().powu(k as u32) / 5f64.sqrt();
            assert!((v[[i, k]].conj() / 5f64.sqrt() - expect).norm() < 1e-15);
        }
    }
}

#[test]
fn dft_ordering_override_reproduces_dft() {
    let n = 8;
    let g = Graph::cycle(n).unwrap();
    let roots: Vec<Complex64> =
        (0..n).map(|k| Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * k as f64 / n as f64)).collect();
    let d = decompose_with(&g, &dft_ordering(n)).unwrap();
    assert!(vec_diff(d.lambda(), &roots) < 1e-12);
    assert!(max_diff(d.gft(), &dft_matrix(n)) < 1e-12);
    assert!(decompose_with(&g, &EigenOrdering::Permutation(vec![0; n])).is_err());
}

#[test]
fn decomposition_json_has_expected_fields() {
    let d = decompose(&Graph::path(4).unwrap()).unwrap();
    let v: serde_json::Value = serde_json::from_str(&d.to_json().unwrap()).unwrap();
    for key in ["n", "lambda", "gft", "ordering", "normalization"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["gft"].as_array().unwrap().len(), 16);
}
