//! Shared helpers and independent oracles for the integration tests.
#![allow(dead_code)]

use gsp_core::{Complex64, Domain, Graph, GraphSignal};
use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_signal(rng: &mut ChaCha8Rng, n: usize) -> GraphSignal {
    GraphSignal::random_unit(n, rng, Domain::Vertex)
}

pub fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect()
}

pub fn generators(n: usize) -> Vec<Graph> {
    vec![Graph::cycle(n).unwrap(), Graph::path(n).unwrap(), Graph::directed_ladder(n).unwrap()]
}

pub fn max_abs(a: &Array2<Complex64>) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_diff(a: &Array2<Complex64>, b: &Array2<Complex64>) -> f64 {
    max_abs(&(a - b))
}

pub fn vec_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn vec_max(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn identity(n: usize) -> Array2<Complex64> {
    Array2::from_shape_fn((n, n), |(i, j)| c((i == j) as u8 as f64))
}

/// Division-free characteristic polynomial (Berkowitz), ascending coefficients.
pub fn berkowitz(a: &[Vec<i128>]) -> Vec<i128> {
    let n = a.len();
    let mut p: Vec<i128> = vec![1];
    for k in 0..n {
        let mut t = vec![0i128; k + 2];
        t[0] = 1;
        t[1] = -a[k][k];
        let mut v: Vec<i128> = (0..k).map(|i| a[i][k]).collect();
        for tj in t.iter_mut().skip(2) {
            *tj = -(0..k).map(|i| a[k][i] * v[i]).sum::<i128>();
            v = (0..k).map(|i| (0..k).map(|j| a[i][j] * v[j]).sum()).collect();
        }
        p = (0..k + 2).map(|i| (0..=i.min(k)).map(|j| t[i - j] * p[j]).sum()).collect();
    }
    p.reverse();
    p
}

pub fn int_matrix(g: &Graph) -> Vec<Vec<i128>> {
    let n = g.n();
    (0..n).map(|i| (0..n).map(|j| g.adjacency()[[i, j]].re as i128).collect()).collect()
}

/// Gaussian elimination with partial pivoting on a dense copy.
pub fn dense_solve(a: &Array2<Complex64>, b: &[Complex64]) -> Vec<Complex64> {
    let n = b.len();
    let mut m = a.clone();
    let mut x = b.to_vec();
    for k in 0..n {
        let piv = (k..n).max_by(|&i, &j| m[[i, k]].norm().total_cmp(&m[[j, k]].norm())).unwrap();
        for j in 0..n {
            m.swap([k, j], [piv, j]);
        }
        x.swap(k, piv);
        for i in k + 1..n {
            let f = m[[i, k]] / m[[k, k]];
            for j in k..n {
                let v = m[[k, j]];
                m[[i, j]] -= f * v;
            }
            let v = x[k];
            x[i] -= f * v;
        }
    }
    for k in (0..n).rev() {
        let acc: Complex64 = (k + 1..n).map(|j| m[[k, j]] * x[j]).sum();
        x[k] = (x[k] - acc) / m[[k, k]];
    }
    x
}

pub fn matvec(a: &Array2<Complex64>, x: &[Complex64]) -> Vec<Complex64> {
    (0..a.nrows()).map(|i| (0..a.ncols()).map(|j| a[[i, j]] * x[j]).sum()).collect()
}

/// Unitary DFT, `F[k][n] = exp(-2 pi j k n / N) / sqrt N`.
pub fn dft_matrix(n: usize) -> Array2<Complex64> {
    let r = (n as f64).sqrt();
    Array2::from_shape_fn((n, n), |(k, m)| {
        Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * ((k * m) % n) as f64 / n as f64) / r
    })
}

pub fn schoolbook(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![c(0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn circular(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let n = a.len();
    let mut out = vec![c(0.0); n];
    for i in 0..n {
        for j in 0..n {
            out[(i + j) % n] += a[i] * b[j];
        }
    }
    out
}

/// Roots matched greedily; returns the largest distance between paired elements.
pub fn set_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    for x in a {
        let (k, d) = b
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .map(|(k, y)| (k, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap();
        used[k] = true;
        worst = worst.max(d);
    }
    worst
}

/// Ordering override that lists the cycle eigenvalues as `exp(-2 pi j k / N)`, k = 0..N-1.
pub fn dft_ordering(n: usize) -> gsp_core::EigenOrdering {
    let d = gsp_core::decompose(&Graph::cycle(n).unwrap()).unwrap();
    let perm = (0..n)
        .map(|k| {
            let r = Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * k as f64 / n as f64);
            (0..n).min_by(|&a, &b| (d.lambda()[a] - r).norm().total_cmp(&(d.lambda()[b] - r).norm())).unwrap()
        })
        .collect();
    gsp_core::EigenOrdering::Permutation(perm)
}

/// Monic polynomial with `n` roots drawn uniformly from the unit disk.
pub fn random_disk_poly(rng: &mut ChaCha8Rng, n: usize) -> gsp_core::Polynomial {
    let roots: Vec<Complex64> = (0..n)
        .map(|_| Complex64::from_polar(rng.random_range(0.0f64..1.0).sqrt(), rng.random_range(0.0..std::f64::consts::TAU)))
        .collect();
    gsp_core::charpoly::charpoly_from_eigenvalues(&roots)
}
