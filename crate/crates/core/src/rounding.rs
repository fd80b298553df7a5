//! Rounding the eigenmap to a partition, and geometric conditions under which
//! rounding is known to succeed.

use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::config::TOL;
use crate::eigen;
use crate::error::{input, Error, Result};
use crate::graph::{ratio_cut_labels, Partition, WeightedGraph};
use crate::json::{float, ToJson};

#[derive(Debug, Clone, PartialEq)]
pub struct RoundingResult {
    pub partition: Partition,
    /// Ratio cut for the Fiedler bisector, k-means cost for Lloyd.
    pub objective: f64,
    pub iterations: usize,
    pub restarts_used: usize,
}

impl ToJson for RoundingResult {
    fn to_json(&self) -> Value {
        json!({
            "k": self.partition.k(),
            "sizes": self.partition.sizes(),
            "objective": float(self.objective),
            "iterations": self.iterations,
            "restarts_used": self.restarts_used,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Fiedler,
    KMeans,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fiedler" => Ok(Method::Fiedler),
            "kmeans" => Ok(Method::KMeans),
            other => input(format!("unknown rounding method '{other}' (expected fiedler or kmeans)")),
        }
    }
}

/// Laplacian eigenmap followed by the chosen rounding.
pub fn spectral_cluster(
    g: &WeightedGraph,
    k: usize,
    method: Method,
    seed: u64,
    restarts: usize,
) -> Result<RoundingResult> {
    match method {
        Method::Fiedler => {
            if k != 2 {
                return input(format!("Fiedler bisection produces 2 blocks, got k = {k}"));
            }
            fiedler_bisect(g)
        }
        Method::KMeans => {
            let em = eigen::eigenmap(g, k)?;
            kmeans_round(&em.u, k, seed, restarts)
        }
    }
}

/// Sorts vertices by their Fiedler entry (index breaks ties) and keeps the
/// prefix split with the smallest ratio cut.
pub fn fiedler_bisect(g: &WeightedGraph) -> Result<RoundingResult> {
    let n = g.n();
    if n < 2 {
        return input("bisection needs at least 2 vertices");
    }
    if !g.is_connected() {
        log::warn!("Fiedler bisection on a disconnected graph");
    }
    let f = eigen::fiedler(g)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| f[a].total_cmp(&f[b]).then(a.cmp(&b)));

    // Move vertices one at a time from the right side to the left side and
    // update the cut incrementally.
    let mut left = vec![false; n];
    let mut cut = 0.0;
    let mut best = (f64::INFINITY, 0);
    for (pos, &v) in order.iter().take(n - 1).enumerate() {
        let (mut to_left, mut to_right) = (0.0, 0.0);
        for u in 0..n {
            if u == v {
                continue;
            }
            if left[u] {
                to_left += g.weight(v, u);
            } else {
                to_right += g.weight(v, u);
            }
        }
        cut += to_right - to_left;
        left[v] = true;
        let size = pos + 1;
        let value = cut / size as f64 + cut / (n - size) as f64;
        if value < best.0 {
            best = (value, size);
        }
    }
    let mut labels = vec![1; n];
    for &v in &order[..best.1] {
        labels[v] = 0;
    }
    let partition = Partition::with_k(labels, 2)?.canonical();
    let objective = g.ratio_cut(&partition)?;
    Ok(RoundingResult {
        partition,
        objective,
        iterations: n - 1,
        restarts_used: 1,
    })
}

/// Lloyd's k-means on the rows of `points`: the first start is a
/// farthest-first traversal from the row of largest norm, the remaining
/// `restarts − 1` starts pick `k` distinct rows at random. The lowest cost
/// wins; ties go to the earlier start.
pub fn kmeans_round(points: &DMatrix<f64>, k: usize, seed: u64, restarts: usize) -> Result<RoundingResult> {
    let n = points.nrows();
    if k == 0 || k > n {
        return input(format!("k = {k} must lie in [1, {n}]"));
    }
    let restarts = restarts.max(1);
    let rows: Vec<DVector<f64>> = points.row_iter().map(|r| r.transpose()).collect();
    let mut best: Option<(Lloyd, usize)> = None;
    for restart in 0..restarts {
        let init = if restart == 0 {
            farthest_first(&rows, k)
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(restart as u64);
            sample(&mut rng, n, k).into_vec()
        };
        let centroids = init.iter().map(|&i| rows[i].clone()).collect();
        let run = lloyd(&rows, centroids, TOL.kmeans_max_iter);
        if best.as_ref().is_none_or(|(b, _)| run.cost < b.cost) {
            best = Some((run, restart));
        }
    }
    let (run, _) = best.expect("at least one restart");
    Ok(RoundingResult {
        partition: Partition::with_k(run.labels, k)?.canonical(),
        objective: run.cost,
        iterations: run.iterations,
        restarts_used: restarts,
    })
}

fn dist2(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    (a - b).norm_squared()
}

/// Indices of `k` rows chosen greedily, each maximizing the distance to the
/// rows already chosen.
fn farthest_first(rows: &[DVector<f64>], k: usize) -> Vec<usize> {
    let first = argmax(rows.iter().map(|r| r.norm_squared()));
    let mut chosen = vec![first];
    let mut nearest: Vec<f64> = rows.iter().map(|r| dist2(r, &rows[first])).collect();
    while chosen.len() < k {
        let next = argmax(nearest.iter().copied());
        chosen.push(next);
        for (d, r) in nearest.iter_mut().zip(rows) {
            *d = d.min(dist2(r, &rows[next]));
        }
    }
    chosen
}

/// First index of the maximum.
fn argmax(values: impl Iterator<Item = f64>) -> usize {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, v) in values.enumerate() {
        if v > best.1 {
            best = (i, v);
        }
    }
    best.0
}

#[derive(Debug, Clone)]
pub struct Lloyd {
    pub labels: Vec<usize>,
    pub cost: f64,
    pub iterations: usize,
    /// Cost after each iteration.
    pub history: Vec<f64>,
}

/// Lloyd iterations until the assignment is stable or `max_iter` is hit.
///
/// A cluster left empty by the assignment step takes over the point farthest
/// from its own centroid among clusters with at least two points, so every
/// cluster stays nonempty.
pub fn lloyd(rows: &[DVector<f64>], mut centroids: Vec<DVector<f64>>, max_iter: usize) -> Lloyd {
    let n = rows.len();
    let k = centroids.len();
    let mut labels = vec![usize::MAX; n];
    let mut history = Vec::new();
    let mut iterations = 0;
    for _ in 0..max_iter {
        iterations += 1;
        let mut changed = false;
        for (i, x) in rows.iter().enumerate() {
            let nearest = argmin(centroids.iter().map(|c| dist2(x, c)));
            if labels[i] != nearest {
                labels[i] = nearest;
                changed = true;
            }
        }
        let mut sizes = vec![0usize; k];
        for &l in &labels {
            sizes[l] += 1;
        }
        for empty in 0..k {
            if sizes[empty] > 0 {
                continue;
            }
            let donor = argmax(rows.iter().enumerate().map(|(i, x)| {
                if sizes[labels[i]] >= 2 {
                    dist2(x, &centroids[labels[i]])
                } else {
                    f64::NEG_INFINITY
                }
            }));
            sizes[labels[donor]] -= 1;
            labels[donor] = empty;
            sizes[empty] = 1;
            centroids[empty] = rows[donor].clone();
            changed = true;
        }
        for (c, centroid) in centroids.iter_mut().enumerate() {
            let mut sum = DVector::zeros(rows[0].len());
            for (x, _) in rows.iter().zip(&labels).filter(|(_, &l)| l == c) {
                sum += x;
            }
            *centroid = sum / sizes[c] as f64;
        }
        let cost = rows
            .iter()
            .zip(&labels)
            .map(|(x, &l)| dist2(x, &centroids[l]))
            .sum::<f64>();
        if let Some(&prev) = history.last() {
            debug_assert!(cost <= prev + 1e-12 * (1.0 + prev), "k-means cost increased: {prev} -> {cost}");
        }
        history.push(cost);
        if !changed {
            break;
        }
    }
    Lloyd {
        labels,
        cost: *history.last().unwrap_or(&0.0),
        iterations,
        history,
    }
}

fn argmin(values: impl Iterator<Item = f64>) -> usize {
    let mut best = (0, f64::INFINITY);
    for (i, v) in values.enumerate() {
        if v < best.1 {
            best = (i, v);
        }
    }
    best.0
}

/// One pair of clusters in the proximity condition.
#[derive(Debug, Clone, PartialEq)]
pub struct PairProximity {
    pub i: usize,
    pub j: usize,
    /// Every point of cluster `i` lies strictly on its own side of the
    /// bisecting hyperplane of the centroids, and likewise for `j`.
    pub separated: bool,
    /// Centroids coincide; the hyperplane is undefined.
    pub degenerate: bool,
    /// Distance from the hyperplane to the nearest point of either cluster.
    pub xi: f64,
    /// `½·√(Σ_l ‖X̄_l‖² · (1/n_i + 1/n_j))`.
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProximityReport {
    pub pairs: Vec<PairProximity>,
    /// Spectral norm of each centered cluster matrix.
    pub spectral_norms: Vec<f64>,
    pub frobenius_norms: Vec<f64>,
    pub holds: bool,
}

/// Proximity condition for a labeled point set: each pair of clusters is
/// separated by the bisecting hyperplane of their centroids with margin
/// exceeding the spread-dependent right side.
pub fn proximity_check(points: &DMatrix<f64>, p: &Partition) -> Result<ProximityReport> {
    p.check_len(points.nrows())?;
    let d = points.ncols();
    let blocks = p.blocks();
    let centroids: Vec<DVector<f64>> = blocks
        .iter()
        .map(|b| {
            let mut s = DVector::zeros(d);
            for &v in b {
                s += points.row(v).transpose();
            }
            s / b.len() as f64
        })
        .collect();

    let mut spectral_norms = Vec::with_capacity(p.k());
    let mut frobenius_norms = Vec::with_capacity(p.k());
    for (b, block) in blocks.iter().enumerate() {
        let centered = DMatrix::from_fn(block.len(), d, |r, c| points[(block[r], c)] - centroids[b][c]);
        let gram = centered.transpose() * &centered;
        let top = eigen::sym_eig(&gram)?.values.last().copied().unwrap_or(0.0);
        spectral_norms.push(top.max(0.0).sqrt());
        frobenius_norms.push(centered.norm());
    }
    let spread: f64 = spectral_norms.iter().map(|s| s * s).sum();

    let mut pairs = Vec::new();
    for i in 0..p.k() {
        for j in (i + 1)..p.k() {
            let rhs = 0.5 * (spread * (1.0 / blocks[i].len() as f64 + 1.0 / blocks[j].len() as f64)).sqrt();
            let diff = &centroids[j] - &centroids[i];
            let len = diff.norm();
            if len == 0.0 {
                pairs.push(PairProximity {
                    i,
                    j,
                    separated: false,
                    degenerate: true,
                    xi: 0.0,
                    rhs,
                });
                continue;
            }
            let normal = diff / len;
            let mid = (&centroids[i] + &centroids[j]) * 0.5;
            let side = |v: usize| (points.row(v).transpose() - &mid).dot(&normal);
            let mut separated = true;
            let mut xi = f64::INFINITY;
            for &v in &blocks[i] {
                let s = side(v);
                separated &= s < 0.0;
                xi = xi.min(s.abs());
            }
            for &v in &blocks[j] {
                let s = side(v);
                separated &= s > 0.0;
                xi = xi.min(s.abs());
            }
            pairs.push(PairProximity {
                i,
                j,
                separated,
                degenerate: false,
                xi,
                rhs,
            });
        }
    }
    let holds = pairs.iter().all(|q| q.separated && !q.degenerate && q.xi > q.rhs);
    Ok(ProximityReport {
        pairs,
        spectral_norms,
        frobenius_norms,
        holds,
    })
}

/// Distance from the bisecting hyperplane of `x` and `y` to the balls of
/// radius `radius` around `c1` and `c2`, next to the lower bound `½‖c1−c2‖ − 3r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarginBound {
    pub margin: f64,
    pub bound: f64,
}

pub fn hyperplane_margin_bound(
    c1: &[f64],
    c2: &[f64],
    radius: f64,
    x: &[f64],
    y: &[f64],
) -> Result<MarginBound> {
    let dim = c1.len();
    if [c2.len(), x.len(), y.len()].iter().any(|&l| l != dim) {
        return input("points must share one dimension");
    }
    if radius < 0.0 || !radius.is_finite() {
        return input(format!("radius must be finite and nonnegative, got {radius}"));
    }
    let (c1, c2) = (DVector::from_column_slice(c1), DVector::from_column_slice(c2));
    let (x, y) = (DVector::from_column_slice(x), DVector::from_column_slice(y));
    let slack = 1e-12 * (1.0 + radius);
    if (&x - &c1).norm() > radius + slack || (&y - &c2).norm() > radius + slack {
        return input("x must lie in the ball around c1 and y in the ball around c2");
    }
    let diff = &y - &x;
    let len = diff.norm();
    if len == 0.0 {
        return input("x and y coincide; the bisecting hyperplane is undefined");
    }
    let normal = diff / len;
    let mid = (&x + &y) * 0.5;
    let ball_distance = |c: &DVector<f64>| ((c - &mid).dot(&normal).abs() - radius).max(0.0);
    Ok(MarginBound {
        margin: ball_distance(&c1).min(ball_distance(&c2)),
        bound: 0.5 * (&c1 - &c2).norm() - 3.0 * radius,
    })
}

/// Ratio cut of every prefix split along `order`, for cross-checking the bisector.
pub fn prefix_ratio_cuts(g: &WeightedGraph, order: &[usize]) -> Vec<f64> {
    let n = g.n();
    (1..n)
        .map(|size| {
            let mut labels = vec![1; n];
            for &v in &order[..size] {
                labels[v] = 0;
            }
            ratio_cut_labels(g, &labels, &[size, n - size])
        })
        .collect()
}
