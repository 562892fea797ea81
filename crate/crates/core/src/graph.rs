use std::collections::VecDeque;

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{GspError, Result};
use crate::signal::GraphSignal;

/// Where a graph came from. Carried into reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphKind {
    Cycle,
    DirectedLadder,
    Path,
    Companion,
    Custom,
}

impl GraphKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            GraphKind::Cycle => "cycle",
            GraphKind::DirectedLadder => "directed-ladder",
            GraphKind::Path => "path",
            GraphKind::Companion => "companion",
            GraphKind::Custom => "custom",
        }
    }
}

/// A directed weighted graph. Entry `(i, j)` of the adjacency is the weight of the edge `j -> i`,
/// so applying the shift to a signal is the product `A s`.
#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    adjacency: Array2<Complex64>,
    labels: Option<Vec<String>>,
    kind: GraphKind,
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

impl Graph {
    /// Builds a graph from a square matrix with finite entries.
    pub fn from_adjacency(adjacency: Array2<Complex64>) -> Result<Graph> {
        let (rows, cols) = adjacency.dim();
        if rows != cols {
            return Err(GspError::NonSquare { rows, cols });
        }
        if rows == 0 {
            return Err(GspError::InvalidSize { n: 0, reason: "graph needs at least one vertex" });
        }
        if let Some(((row, col), _)) =
            adjacency.indexed_iter().find(|(_, z)| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(GspError::NonFinite { row, col });
        }
        Ok(Graph { adjacency, labels: None, kind: GraphKind::Custom })
    }

    /// Builds a graph from row vectors.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Graph> {
        let n = rows.len();
        if n == 0 {
            return Err(GspError::InvalidSize { n: 0, reason: "graph needs at least one vertex" });
        }
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(GspError::NonSquare { rows: n, cols: r.len() });
        }
        let flat: Vec<Complex64> = rows.iter().flatten().copied().collect();
        Self::from_adjacency(Array2::from_shape_vec((n, n), flat).expect("shape checked"))
    }

    pub(crate) fn with_kind(mut self, kind: GraphKind) -> Graph {
        self.kind = kind;
        self
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Graph> {
        if labels.len() != self.n() {
            return Err(GspError::DimensionMismatch { expected: self.n(), found: labels.len() });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Directed cycle: edge `i -> i+1 mod n`.
    pub fn cycle(n: usize) -> Result<Graph> {
        if n == 0 {
            return Err(GspError::InvalidSize { n, reason: "cycle needs n >= 1" });
        }
        let mut a = Array2::zeros((n, n));
        for i in 0..n {
            a[[(i + 1) % n, i]] = c(1.0);
        }
        Ok(Self::from_adjacency(a)?.with_kind(GraphKind::Cycle))
    }

    /// Undirected path `0 - 1 - ... - n-1`.
    pub fn path(n: usize) -> Result<Graph> {
        if n < 2 {
            return Err(GspError::InvalidSize { n, reason: "path needs n >= 2" });
        }
        let mut a = Array2::zeros((n, n));
        for i in 0..n - 1 {
            a[[i, i + 1]] = c(1.0);
            a[[i + 1, i]] = c(1.0);
        }
        Ok(Self::from_adjacency(a)?.with_kind(GraphKind::Path))
    }

    /// Directed ladder with `n / 2` rungs.
    ///
    /// Vertex `2i` is the `i`-th top vertex and `2i + 1` the `i`-th bottom vertex. Edges:
    /// top rail `2i -> 2i+2`, bottom rail `2i+3 -> 2i+1` (running the other way),
    /// rung `2i -> 2i+1` for `i >= 1`, and the closing rung `1 -> 0`.
    pub fn directed_ladder(n: usize) -> Result<Graph> {
        if n < 4 || n % 2 != 0 {
            return Err(GspError::InvalidSize { n, reason: "ladder needs an even n >= 4" });
        }
        let k = n / 2;
        let mut a = Array2::zeros((n, n));
        for i in 0..k - 1 {
            a[[2 * i + 2, 2 * i]] = c(1.0);
            a[[2 * i + 1, 2 * i + 3]] = c(1.0);
        }
        a[[0, 1]] = c(1.0);
        for i in 1..k {
            a[[2 * i + 1, 2 * i]] = c(1.0);
        }
        Ok(Self::from_adjacency(a)?.with_kind(GraphKind::DirectedLadder))
    }

    pub fn n(&self) -> usize {
        self.adjacency.nrows()
    }

    pub fn adjacency(&self) -> &Array2<Complex64> {
        &self.adjacency
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    /// Relabels vertices: new vertex `i` is old vertex `perm[i]`, i.e. the adjacency becomes `P^T A P`.
    pub fn permute(&self, perm: &[usize]) -> Result<Graph> {
        validate_permutation(perm, self.n())?;
        let n = self.n();
        let a = Array2::from_shape_fn((n, n), |(i, j)| self.adjacency[[perm[i], perm[j]]]);
        let labels = self.labels.as_ref().map(|l| perm.iter().map(|&p| l[p].clone()).collect());
        Ok(Graph { adjacency: a, labels, kind: self.kind })
    }

    /// One application of the shift, `A s`.
    pub fn shift_apply(&self, s: &GraphSignal) -> Result<GraphSignal> {
        s.expect_len(self.n())?;
        let v = ndarray::ArrayView1::from(s.values());
        Ok(GraphSignal::new(self.adjacency.dot(&v).to_vec(), s.domain()))
    }

    /// Nonzero entries as `(row, col, weight)`.
    pub fn nonzeros(&self) -> Vec<(usize, usize, Complex64)> {
        self.adjacency
            .indexed_iter()
            .filter(|(_, z)| **z != Complex64::new(0.0, 0.0))
            .map(|((i, j), z)| (i, j, *z))
            .collect()
    }

    pub fn is_hermitian(&self) -> bool {
        let n = self.n();
        (0..n).all(|i| (i..n).all(|j| self.adjacency[[i, j]] == self.adjacency[[j, i]].conj()))
    }

    pub fn is_real(&self) -> bool {
        self.adjacency.iter().all(|z| z.im == 0.0)
    }

    /// Integer entries in row-major order, or the first offending position.
    pub fn integer_entries(&self) -> Result<Vec<i64>> {
        self.adjacency
            .indexed_iter()
            .map(|((row, col), z)| {
                let ok = z.im == 0.0 && z.re.fract() == 0.0 && z.re.abs() < 9.0e15;
                if ok {
                    Ok(z.re as i64)
                } else {
                    Err(GspError::NonInteger { row, col })
                }
            })
            .collect()
    }

    /// Every vertex reaches every other vertex along directed edges.
    pub fn is_strongly_connected(&self) -> bool {
        let n = self.n();
        let nz = self.nonzeros();
        let mut fwd = vec![Vec::new(); n];
        let mut bwd = vec![Vec::new(); n];
        for &(i, j, _) in &nz {
            fwd[j].push(i);
            bwd[i].push(j);
        }
        reach_all(&fwd) && reach_all(&bwd)
    }
}

fn reach_all(adj: &[Vec<usize>]) -> bool {
    let mut seen = vec![false; adj.len()];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen.into_iter().all(|b| b)
}

pub(crate) fn validate_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(GspError::InvalidPermutation(format!("length {} for n = {}", perm.len(), n)));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(GspError::InvalidPermutation(format!("entry {p} out of range or repeated")));
        }
        seen[p] = true;
    }
    Ok(())
}

/// Inverse of a permutation.
pub fn invert_permutation(perm: &[usize]) -> Result<Vec<usize>> {
    validate_permutation(perm, perm.len())?;
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    Ok(inv)
}
