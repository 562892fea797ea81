mod common;

use common::*;
use gsp_core::charpoly::{
    charpoly_exact, charpoly_from_eigenvalues, chebyshev_path_charpoly, div_rem, reduce_mod, EXACT_MAX_N,
};
use gsp_core::{decompose, Complex64, Graph, GspError, Polynomial};

fn ints(p: &gsp_core::IntPolynomial) -> Vec<i128> {
    p.coeffs().iter().map(|v| v.try_into().unwrap()).collect()
}

const DELTA8: [f64; 9] = [1.0, 0.0, -10.0, 0.0, 15.0, 0.0, -7.0, 0.0, 1.0];

#[test]
fn from_eigenvalues_examples() {
    for n in [1, 4, 8, 16] {
        let roots: Vec<Complex64> =
            (0..n).map(|k| Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * k as f64 / n as f64)).collect();
        let p = charpoly_from_eigenvalues(&roots).realified();
        let mut expect = vec![c(0.0); n + 1];
        expect[0] = c(-1.0);
        expect[n] = c(1.0);
        assert!(vec_diff(p.coeffs(), &expect) < 1e-12, "{n}");
    }
    assert_eq!(charpoly_from_eigenvalues(&[c(0.0)]).coeffs(), &[c(0.0), c(1.0)]);
    let p = charpoly_from_eigenvalues(decompose(&Graph::path(8).unwrap()).unwrap().lambda());
    assert!(vec_diff(p.coeffs(), &DELTA8.map(c)) < 1e-7);
    assert_eq!(p.leading(), c(1.0));
}

#[test]
fn exact_examples() {
    assert_eq!(ints(&charpoly_exact(&Graph::cycle(5).unwrap()).unwrap()), [-1, 0, 0, 0, 0, 1]);
    assert_eq!(ints(&charpoly_exact(&Graph::path(8).unwrap()).unwrap()), DELTA8.map(|v| v as i128));
    let ladder = ints(&charpoly_exact(&Graph::directed_ladder(12).unwrap()).unwrap());
    assert!(ladder[..12].iter().all(|&v| v == 0 || v == -1));
    assert_eq!(ladder[12], 1);
}

#[test]
fn exact_agrees_with_division_free_oracle() {
    for n in [4, 6, 10, 16] {
        for g in generators(n) {
            assert_eq!(ints(&charpoly_exact(&g).unwrap()), berkowitz(&int_matrix(&g)), "{:?} {n}", g.kind());
        }
    }
}

#[test]
fn exact_errors() {
    let g = Graph::from_rows(&[vec![c(0.5), c(0.0)], vec![c(1.0), c(0.0)]]).unwrap();
    assert!(matches!(charpoly_exact(&g), Err(GspError::NonInteger { .. })));
    let big = Graph::cycle(EXACT_MAX_N + 1).unwrap();
    assert!(matches!(charpoly_exact(&big), Err(GspError::TooLarge { .. })));
    assert!(charpoly_exact(&Graph::path(EXACT_MAX_N).unwrap()).is_ok());
}

#[test]
fn chebyshev_examples() {
    assert_eq!(ints(&chebyshev_path_charpoly(0)), [1]);
    assert_eq!(ints(&chebyshev_path_charpoly(2)), [-1, 0, 1]);
    assert_eq!(ints(&chebyshev_path_charpoly(3)), [0, -2, 0, 1]);
    assert_eq!(ints(&chebyshev_path_charpoly(8)), DELTA8.map(|v| v as i128));
    for n in 2..=20 {
        assert_eq!(ints(&chebyshev_path_charpoly(n)), berkowitz(&int_matrix(&Graph::path(n).unwrap())));
    }
}

#[test]
fn oracle_equivalence_up_to_32() {
    for n in [4, 8, 16, 32] {
        for g in generators(n) {
            let spectral = charpoly_from_eigenvalues(decompose(&g).unwrap().lambda()).realified();
            let exact = charpoly_exact(&g).unwrap().to_polynomial();
            for (a, b) in spectral.coeffs().iter().zip(exact.coeffs()) {
                assert!((a - b).norm() <= 1e-6 * b.norm().max(1.0), "{:?} {n}: {a} vs {b}", g.kind());
            }
        }
    }
}

#[test]
fn reduce_mod_examples() {
    for n in [3, 8] {
        let mut delta = vec![c(0.0); n + 1];
        delta[0] = c(-1.0);
        delta[n] = c(1.0);
        let r = reduce_mod(&Polynomial::monomial(n), &Polynomial::new(delta)).unwrap();
        let mut expect = vec![c(0.0); n];
        expect[0] = c(1.0);
        assert_eq!(r.coeffs(), expect.as_slice());
    }

    let delta = Polynomial::from_real(&DELTA8);
    let p = Polynomial::from_real(&[3.0, -1.0, 0.5, 2.0]);
    let r = reduce_mod(&p, &delta).unwrap();
    assert!(vec_diff(&r.coeffs()[..4], p.coeffs()) == 0.0);
    assert!(r.coeffs()[4..].iter().all(|z| *z == c(0.0)));

    // x^8 (x^2 + 1) evaluated at the eigenvalues of path(8)
    let mut pc = vec![0.0; 11];
    pc[8] = 1.0;
    pc[10] = 1.0;
    let p = Polynomial::from_real(&pc);
    let r = reduce_mod(&p, &delta).unwrap();
    assert_eq!(r.len(), 8);
    for l in decompose(&Graph::path(8).unwrap()).unwrap().lambda() {
        let (a, b) = (p.eval(*l), r.eval(*l));
        assert!((a - b).norm() < 1e-10 * a.norm().max(1.0));
    }

    let bad = Polynomial::from_real(&[1.0, 2.0]);
    assert!(matches!(reduce_mod(&p, &bad), Err(GspError::NonMonic(_))));
}

#[test]
fn monic_with_large_coefficients_is_accepted() {
    let g = Graph::path(64).unwrap();
    let delta = charpoly_exact(&g).unwrap().to_polynomial();
    assert!(delta.max_abs() > 1e12);
    assert!(delta.is_monic());
    let r = reduce_mod(&Polynomial::monomial(64), &delta).unwrap();
    assert!(vec_diff(r.coeffs(), &delta.coeffs()[..64].iter().map(|z| -z).collect::<Vec<_>>()) == 0.0);
}

#[test]
fn division_identity() {
    let mut r = rng(21);
    for n in [2, 5, 16, 40] {
        let delta = random_disk_poly(&mut r, n);
        let p = Polynomial::new(random_vec(&mut r, 2 * n - 1));
        let (q, rem) = div_rem(&p, &delta).unwrap();
        let back = q.mul(&delta).add(&rem);
        let diff = vec_diff(&back.coeffs()[..p.len()], p.coeffs());
        assert!(diff < 1e-9 * p.max_abs(), "{n}: {diff:e}");
    }
}

#[test]
fn poly_string_forms() {
    assert_eq!(Polynomial::from_real(&[1.0]).to_poly_string(), "1");
    assert_eq!(Polynomial::from_real(&[1.0, 2.0]).to_poly_string(), "1 + 2x");
    assert_eq!(Polynomial::from_real(&DELTA8).to_poly_string(), "1 - 10x^2 + 15x^4 - 7x^6 + x^8");
    assert_eq!(Polynomial::from_real(&[0.0, 0.0]).to_poly_string(), "0");
}
