use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{GspError, Result};

/// Which representation a signal vector holds. Metadata only.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Domain {
    Vertex,
    Spectral,
    VertexZ,
    SpectralZ,
}

/// A complex vector indexed in vertex (or frequency) order.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphSignal {
    values: Vec<Complex64>,
    domain: Domain,
}

impl GraphSignal {
    pub fn new(values: Vec<Complex64>, domain: Domain) -> Self {
        GraphSignal { values, domain }
    }

    pub fn vertex(values: Vec<Complex64>) -> Self {
        Self::new(values, Domain::Vertex)
    }

    pub fn from_real(values: &[f64], domain: Domain) -> Self {
        Self::new(values.iter().map(|&x| Complex64::new(x, 0.0)).collect(), domain)
    }

    pub fn zeros(n: usize, domain: Domain) -> Self {
        Self::new(vec![Complex64::new(0.0, 0.0); n], domain)
    }

    /// The `k`-th standard basis vector.
    pub fn basis(n: usize, k: usize, domain: Domain) -> Self {
        let mut s = Self::zeros(n, domain);
        s.values[k] = Complex64::new(1.0, 0.0);
        s
    }

    /// Complex Gaussian entries scaled to unit 2-norm.
    pub fn random_unit<R: Rng + ?Sized>(n: usize, rng: &mut R, domain: Domain) -> Self {
        let mut values: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let norm = values.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 {
            values.iter_mut().for_each(|z| *z /= norm);
        }
        Self::new(values, domain)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn with_domain(mut self, domain: Domain) -> Self {
        self.domain = domain;
        self
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &GraphSignal) -> Result<f64> {
        check_len(self.len(), other.len())?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// `alpha * self + beta * other`, keeping the domain of `self`.
    pub fn combine(&self, alpha: Complex64, other: &GraphSignal, beta: Complex64) -> Result<Self> {
        check_len(self.len(), other.len())?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| alpha * a + beta * b).collect();
        Ok(Self::new(values, self.domain))
    }

    pub(crate) fn expect_len(&self, n: usize) -> Result<()> {
        check_len(n, self.len())
    }
}

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(GspError::DimensionMismatch { expected, found });
    }
    Ok(())
}
