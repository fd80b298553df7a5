//! Weighted undirected graphs, k-way partitions and the ratio-cut objective.
//!
//! Graphs are stored as dense symmetric weight matrices with a zero diagonal.
//! The Laplacian is `L = D − W` with `D` the diagonal of weighted degrees.

use std::collections::VecDeque;

use nalgebra::DMatrix;

use crate::error::{input, Error, Result};

/// Symmetric, nonnegative weighted adjacency matrix with zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    weights: DMatrix<f64>,
}

impl WeightedGraph {
    /// Graph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 {
            return input("graph must have at least one vertex");
        }
        Ok(Self {
            weights: DMatrix::zeros(n, n),
        })
    }

    /// Builds a graph from a dense weight matrix.
    ///
    /// The matrix must be square, finite, nonnegative and symmetric (exactly).
    /// The diagonal is discarded: self-loops do not change `L = D − W`.
    pub fn from_dense(weights: DMatrix<f64>) -> Result<Self> {
        let n = weights.nrows();
        if n == 0 || weights.ncols() != n {
            return input(format!(
                "weight matrix must be square and nonempty, got {}x{}",
                weights.nrows(),
                weights.ncols()
            ));
        }
        let mut weights = weights;
        for i in 0..n {
            weights[(i, i)] = 0.0;
            for j in 0..i {
                let (a, b) = (weights[(i, j)], weights[(j, i)]);
                if !a.is_finite() || a < 0.0 {
                    return input(format!("weight ({i},{j}) = {a} is not a finite nonnegative number"));
                }
                if a != b {
                    return input(format!("weight matrix is not symmetric at ({i},{j}): {a} vs {b}"));
                }
            }
        }
        Ok(Self { weights })
    }

    /// Builds a graph from `(i, j, w)` triples. Each unordered pair may appear once.
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for &(i, j, w) in edges {
            if i >= n || j >= n {
                return input(format!("edge ({i},{j}) out of range for {n} vertices"));
            }
            if i == j {
                return input(format!("self-loop at vertex {i}"));
            }
            if !w.is_finite() || w < 0.0 {
                return input(format!("edge ({i},{j}) has invalid weight {w}"));
            }
            if g.weights[(i, j)] != 0.0 {
                return input(format!("duplicate edge ({i},{j})"));
            }
            g.weights[(i, j)] = w;
            g.weights[(j, i)] = w;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.weights.nrows()
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[(i, j)]
    }

    pub fn weights(&self) -> &DMatrix<f64> {
        &self.weights
    }

    /// Edges `(i, j, w)` with `i < j` and `w > 0`, in row-major order.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let n = self.n();
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let w = self.weights[(i, j)];
                if w > 0.0 {
                    out.push((i, j, w));
                }
            }
        }
        out
    }

    pub fn degree(&self, i: usize) -> f64 {
        self.weights.row(i).sum()
    }

    pub fn degrees(&self) -> Vec<f64> {
        (0..self.n()).map(|i| self.degree(i)).collect()
    }

    /// `L = D − W`.
    pub fn laplacian(&self) -> DMatrix<f64> {
        let n = self.n();
        let mut l = -self.weights.clone();
        for i in 0..n {
            l[(i, i)] = self.degree(i);
        }
        l
    }

    /// Total weight between `subset` and its complement.
    pub fn cut_weight(&self, subset: &[usize]) -> Result<f64> {
        let mask = self.subset_mask(subset)?;
        Ok(self.cut_weight_mask(&mask))
    }

    pub(crate) fn cut_weight_mask(&self, inside: &[bool]) -> f64 {
        let n = self.n();
        let mut cut = 0.0;
        for i in (0..n).filter(|&i| inside[i]) {
            for j in (0..n).filter(|&j| !inside[j]) {
                cut += self.weights[(i, j)];
            }
        }
        cut
    }

    pub(crate) fn subset_mask(&self, subset: &[usize]) -> Result<Vec<bool>> {
        let n = self.n();
        let mut mask = vec![false; n];
        for &v in subset {
            if v >= n {
                return input(format!("vertex {v} out of range for {n} vertices"));
            }
            mask[v] = true;
        }
        Ok(mask)
    }

    /// `Σ_i cut(V_i, V_i^c) / |V_i|`.
    pub fn ratio_cut(&self, partition: &Partition) -> Result<f64> {
        partition.check_len(self.n())?;
        Ok(ratio_cut_labels(self, partition.labels(), &partition.sizes()))
    }

    /// Subgraph induced on `subset`, vertices in ascending original order.
    pub fn induced_subgraph(&self, subset: &[usize]) -> Result<WeightedGraph> {
        let mask = self.subset_mask(subset)?;
        let keep: Vec<usize> = (0..self.n()).filter(|&i| mask[i]).collect();
        if keep.is_empty() {
            return input("induced subgraph of an empty vertex set");
        }
        let m = keep.len();
        let weights = DMatrix::from_fn(m, m, |a, b| self.weights[(keep[a], keep[b])]);
        Ok(WeightedGraph { weights })
    }

    /// Connected components (positive-weight edges), as a label per vertex
    /// numbered in order of first appearance.
    pub fn components(&self) -> Vec<usize> {
        let n = self.n();
        let mut label = vec![usize::MAX; n];
        let mut next = 0;
        let mut queue = VecDeque::new();
        for s in 0..n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = next;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for v in 0..n {
                    if self.weights[(u, v)] > 0.0 && label[v] == usize::MAX {
                        label[v] = next;
                        queue.push_back(v);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn component_count(&self) -> usize {
        self.components().into_iter().max().map_or(0, |m| m + 1)
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    /// Relabels vertices: vertex `i` of `self` becomes vertex `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<WeightedGraph> {
        let n = self.n();
        check_permutation(perm, n)?;
        let mut weights = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                weights[(perm[i], perm[j])] = self.weights[(i, j)];
            }
        }
        Ok(WeightedGraph { weights })
    }
}

fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return input(format!("permutation has length {}, expected {n}", perm.len()));
    }
    for &p in perm {
        if p >= n || seen[p] {
            return input("not a permutation");
        }
        seen[p] = true;
    }
    Ok(())
}

/// Ratio cut from raw labels; every label must be `< sizes.len()` with `sizes[l] > 0`.
pub(crate) fn ratio_cut_labels(g: &WeightedGraph, labels: &[usize], sizes: &[usize]) -> f64 {
    let n = g.n();
    let w = g.weights();
    let mut cuts = vec![0.0; sizes.len()];
    for j in 0..n {
        let lj = labels[j];
        let col = w.column(j);
        for i in 0..j {
            if labels[i] != lj {
                let wij = col[i];
                cuts[labels[i]] += wij;
                cuts[lj] += wij;
            }
        }
    }
    cuts.iter()
        .zip(sizes)
        .map(|(c, &s)| c / s as f64)
        .sum()
}

/// A k-way partition of `0..n` with every block nonempty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    labels: Vec<usize>,
    k: usize,
}

impl Partition {
    /// Uses `k = max(label) + 1`.
    pub fn new(labels: Vec<usize>) -> Result<Self> {
        let k = labels.iter().max().map_or(0, |m| m + 1);
        Self::with_k(labels, k)
    }

    pub fn with_k(labels: Vec<usize>, k: usize) -> Result<Self> {
        if labels.is_empty() {
            return input("partition of an empty vertex set");
        }
        if k == 0 {
            return input("partition needs at least one block");
        }
        let mut seen = vec![false; k];
        for (v, &l) in labels.iter().enumerate() {
            if l >= k {
                return input(format!("label {l} of vertex {v} is not in [0, {k})"));
            }
            seen[l] = true;
        }
        if let Some(empty) = seen.iter().position(|s| !s) {
            return input(format!("block {empty} of {k} is empty"));
        }
        Ok(Self { labels, k })
    }

    /// Partition from a list of disjoint blocks covering `0..n`; block `i` gets label `i`.
    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut labels = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            for &v in block {
                if v >= n {
                    return input(format!("vertex {v} out of range for {n} vertices"));
                }
                if labels[v] != usize::MAX {
                    return input(format!("vertex {v} appears in two blocks"));
                }
                labels[v] = b;
            }
        }
        if let Some(v) = labels.iter().position(|&l| l == usize::MAX) {
            return input(format!("vertex {v} is not covered by any block"));
        }
        Self::with_k(labels, blocks.len())
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> usize {
        self.labels[v]
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }

    /// Vertices of each block, ascending.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.k];
        for (v, &l) in self.labels.iter().enumerate() {
            blocks[l].push(v);
        }
        blocks
    }

    /// Relabels blocks in order of first appearance (restricted growth form).
    pub fn canonical(&self) -> Partition {
        let mut map = vec![usize::MAX; self.k];
        let mut next = 0;
        let labels = self
            .labels
            .iter()
            .map(|&l| {
                if map[l] == usize::MAX {
                    map[l] = next;
                    next += 1;
                }
                map[l]
            })
            .collect();
        Partition { labels, k: self.k }
    }

    /// Equality up to relabeling of blocks.
    pub fn same_as(&self, other: &Partition) -> bool {
        self.k == other.k && self.canonical().labels == other.canonical().labels
    }

    pub(crate) fn check_len(&self, n: usize) -> Result<()> {
        if self.n() != n {
            return Err(Error::Input(format!(
                "partition covers {} vertices but the graph has {n}",
                self.n()
            )));
        }
        Ok(())
    }
}
