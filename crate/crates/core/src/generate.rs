//! Deterministic graph families with a planted partition, plus seeded random
//! graphs used by the property suites.

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{input, Result};
use crate::graph::{Partition, WeightedGraph};

/// Four blocks `B1..B4` of `block` vertices each. `B1∪B2` and `B3∪B4` are
/// cliques of unit weight; `B1–B3` and `B2–B4` are joined completely with
/// weight `cross`. The planted split is `{B1, B2} | {B3, B4}`.
///
/// For this split every boundary degree is `cross·block` and each side has
/// algebraic connectivity `2·block`, so the certificate holds iff `cross ≤ 1`.
pub fn example_blocks(block: usize, cross: f64) -> Result<(WeightedGraph, Partition)> {
    if block == 0 {
        return input("block size must be at least 1");
    }
    if !cross.is_finite() || cross < 0.0 {
        return input(format!("cross weight must be finite and nonnegative, got {cross}"));
    }
    let n = 4 * block;
    // block-level pattern of the 4x4 layout
    const PATTERN: [[u8; 4]; 4] = [[1, 1, 2, 0], [1, 1, 0, 2], [2, 0, 1, 1], [0, 2, 1, 1]];
    let w = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            return 0.0;
        }
        match PATTERN[i / block][j / block] {
            1 => 1.0,
            2 => cross,
            _ => 0.0,
        }
    });
    let labels = (0..n).map(|i| usize::from(i >= 2 * block)).collect();
    Ok((WeightedGraph::from_dense(w)?, Partition::with_k(labels, 2)?))
}

/// Three blocks of sizes 3, 300 and 300 with intra weight `1/|V_i|` (so each
/// block Laplacian is `I − J/|V_i|`), plus two cross edges of weight 0.5:
/// first vertex of `V1` to first vertex of `V2`, and first vertex of `V3` to
/// second vertex of `V2`.
pub fn unbalanced_example() -> (WeightedGraph, Partition) {
    let sizes = [3usize, 300, 300];
    let starts = [0usize, 3, 303];
    let n: usize = sizes.iter().sum();
    let labels: Vec<usize> = sizes
        .iter()
        .enumerate()
        .flat_map(|(b, &s)| std::iter::repeat_n(b, s))
        .collect();
    let mut w = DMatrix::from_fn(n, n, |i, j| {
        if i != j && labels[i] == labels[j] {
            1.0 / sizes[labels[i]] as f64
        } else {
            0.0
        }
    });
    for (a, b) in [(starts[0], starts[1]), (starts[2], starts[1] + 1)] {
        w[(a, b)] = 0.5;
        w[(b, a)] = 0.5;
    }
    let g = WeightedGraph::from_dense(w).expect("construction is symmetric and nonnegative");
    let p = Partition::with_k(labels, 3).expect("all blocks nonempty");
    (g, p)
}

/// Complete graphs of weight `intra` on consecutive vertex ranges of the given
/// sizes, joined by a single edge of weight `cross` between each consecutive
/// pair of blocks. `seed` picks which endpoints are used; a vertex is reused
/// for a second cross edge only when its block has no unused vertex left, so
/// for blocks of size ≥ 2 every boundary degree is 0 or `cross`.
pub fn planted_blocks(
    sizes: &[usize],
    intra: f64,
    cross: f64,
    seed: u64,
) -> Result<(WeightedGraph, Partition)> {
    if sizes.is_empty() || sizes.contains(&0) {
        return input("block sizes must be nonempty and positive");
    }
    if !(intra.is_finite() && cross.is_finite()) || intra < 0.0 || cross < 0.0 {
        return input("weights must be finite and nonnegative");
    }
    let n: usize = sizes.iter().sum();
    let mut starts = Vec::with_capacity(sizes.len());
    let mut labels = Vec::with_capacity(n);
    for (b, &s) in sizes.iter().enumerate() {
        starts.push(labels.len());
        labels.extend(std::iter::repeat_n(b, s));
    }
    let mut w = DMatrix::from_fn(n, n, |i, j| {
        if i != j && labels[i] == labels[j] {
            intra
        } else {
            0.0
        }
    });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut used = vec![false; n];
    let pick = |b: usize, rng: &mut ChaCha8Rng, used: &mut Vec<bool>| {
        let range = starts[b]..starts[b] + sizes[b];
        let free: Vec<usize> = range.clone().filter(|&v| !used[v]).collect();
        let v = if free.is_empty() {
            rng.random_range(range)
        } else {
            free[rng.random_range(0..free.len())]
        };
        used[v] = true;
        v
    };
    for b in 0..sizes.len().saturating_sub(1) {
        let u = pick(b, &mut rng, &mut used);
        let v = pick(b + 1, &mut rng, &mut used);
        w[(u, v)] = cross;
        w[(v, u)] = cross;
    }
    Ok((WeightedGraph::from_dense(w)?, Partition::with_k(labels, sizes.len())?))
}

/// Erdős–Rényi style graph: each pair is an edge with probability `density`,
/// weight uniform in `(0, max_weight]`.
pub fn random_weighted(n: usize, density: f64, max_weight: f64, seed: u64) -> Result<WeightedGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random::<f64>() < density {
                let w = max_weight * (1.0 - rng.random::<f64>());
                edges.push((i, j, w));
            }
        }
    }
    WeightedGraph::from_edges(n, &edges)
}

/// Connected unweighted graph: a random spanning tree plus each remaining pair
/// with probability `extra`.
pub fn random_connected_unweighted(n: usize, extra: f64, seed: u64) -> Result<WeightedGraph> {
    if n == 0 {
        return input("graph must have at least one vertex");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut w = DMatrix::zeros(n, n);
    for t in 1..n {
        let parent = order[rng.random_range(0..t)];
        let child = order[t];
        w[(parent, child)] = 1.0;
        w[(child, parent)] = 1.0;
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if w[(i, j)] == 0.0 && rng.random::<f64>() < extra {
                w[(i, j)] = 1.0;
                w[(j, i)] = 1.0;
            }
        }
    }
    WeightedGraph::from_dense(w)
}

/// Unweighted path `0 − 1 − … − (n−1)`.
pub fn path(n: usize) -> Result<WeightedGraph> {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i, 1.0)).collect();
    WeightedGraph::from_edges(n, &edges)
}

/// Unweighted cycle on `n ≥ 3` vertices.
pub fn cycle(n: usize) -> Result<WeightedGraph> {
    if n < 3 {
        return input("a cycle needs at least 3 vertices");
    }
    let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i, 1.0)).collect();
    edges.push((0, n - 1, 1.0));
    WeightedGraph::from_edges(n, &edges)
}

/// Complete graph with unit weights.
pub fn complete(n: usize) -> Result<WeightedGraph> {
    if n == 0 {
        return input("graph must have at least one vertex");
    }
    WeightedGraph::from_dense(DMatrix::from_element(n, n, 1.0))
}
