//! Two-to-infinity perturbation of the Laplacian eigenmap around a planted
//! partition.
//!
//! The graph is split into `W = W_iso + W_δ`, where `W_iso` keeps only
//! intra-block weights. The eigenmap `U` of `L` is compared with the block
//! indicator basis `U_iso` after an orthogonal Procrustes alignment `Ṽ`,
//! and the row-wise error `‖UṼ − U_iso‖₂,∞` is checked against
//!
//! ```text
//! 32·√c·(r² + r·ln n)/√n      whenever   r ≤ 1/(16·(1+c)·ln n)
//! ```
//!
//! with `c = max_i n/|V_i|` and `r = max d_δ / min λ₂(L_i)`.
//!
//! The ℓ∞ eigengap `inf_{x⊥𝟙} ‖Lx‖∞/‖x‖∞` is evaluated exactly by linear
//! programming and sandwiched between `λ₂/(2 ln n)` and, for unweighted
//! graphs, `4M/D`.

use std::collections::VecDeque;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::certify;
use crate::config::TOL;
use crate::eigen;
use crate::error::{input, Error, Result};
use crate::graph::{Partition, WeightedGraph};
use crate::json::{float, opt_float, ToJson};
use crate::lp::{LinearProgram, LpOutcome, Relation};

/// Intra-block graph and the Laplacian of the cross-block weights.
#[derive(Debug, Clone)]
pub struct IsoDelta {
    pub w_iso: WeightedGraph,
    pub l_delta: DMatrix<f64>,
}

pub fn split_iso_delta(g: &WeightedGraph, p: &Partition) -> Result<IsoDelta> {
    p.check_len(g.n())?;
    let n = g.n();
    let w = g.weights();
    let iso = DMatrix::from_fn(n, n, |i, j| if p.label(i) == p.label(j) { w[(i, j)] } else { 0.0 });
    let delta = WeightedGraph::from_dense(w - &iso)?;
    Ok(IsoDelta {
        w_iso: WeightedGraph::from_dense(iso)?,
        l_delta: delta.laplacian(),
    })
}

/// Columns `𝟙_{V_i}/√|V_i|`.
pub fn canonical_uiso(p: &Partition) -> DMatrix<f64> {
    let sizes = p.sizes();
    DMatrix::from_fn(p.n(), p.k(), |v, b| {
        if p.label(v) == b {
            1.0 / (sizes[b] as f64).sqrt()
        } else {
            0.0
        }
    })
}

/// Maximum Euclidean row norm.
pub fn two_to_inf_norm(m: &DMatrix<f64>) -> f64 {
    m.row_iter().map(|r| r.norm()).fold(0.0, f64::max)
}

/// `ℓ∞ → ℓ∞` operator norm: maximum absolute row sum.
pub fn inf_norm(m: &DMatrix<f64>) -> f64 {
    m.row_iter()
        .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Orthogonal Procrustes solution `Ṽ = argmin_{V ∈ O(k)} ‖UV − U_iso‖_F`.
#[derive(Debug, Clone)]
pub struct Procrustes {
    pub rotation: DMatrix<f64>,
    pub aligned: DMatrix<f64>,
    /// Smallest singular value of `UᵀU_iso` below tolerance: the two
    /// subspaces are nearly orthogonal in some direction and `Ṽ` is not unique.
    pub degenerate: bool,
}

pub fn procrustes_align(u: &DMatrix<f64>, u_iso: &DMatrix<f64>) -> Result<Procrustes> {
    if u.shape() != u_iso.shape() {
        return input(format!(
            "shape mismatch: {:?} vs {:?}",
            u.shape(),
            u_iso.shape()
        ));
    }
    let cross = u.transpose() * u_iso;
    let svd = cross.svd(true, true);
    let (Some(left), Some(right_t)) = (svd.u, svd.v_t) else {
        return Err(Error::Internal("SVD did not return singular vectors".into()));
    };
    let degenerate = svd
        .singular_values
        .iter()
        .any(|&s| s < TOL.procrustes_degenerate);
    let rotation = left * right_t;
    let aligned = u * &rotation;
    Ok(Procrustes {
        rotation,
        aligned,
        degenerate,
    })
}

/// `‖UṼ − U_iso‖₂,∞` with `Ṽ` the Procrustes rotation.
pub fn two_to_inf_error(u: &DMatrix<f64>, u_iso: &DMatrix<f64>) -> Result<f64> {
    let pr = procrustes_align(u, u_iso)?;
    Ok(two_to_inf_norm(&(pr.aligned - u_iso)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationReport {
    /// Unbalanceness `max_i n/|V_i|`.
    pub c: f64,
    /// `max d_δ / min λ₂(L_i)`.
    pub r: f64,
    pub precondition_ok: bool,
    /// The guaranteed bound, present only when the precondition holds.
    pub bound: Option<f64>,
    pub measured: f64,
    /// `min_i λ₂(L_i) / (2 ln n)` with the global `n`.
    pub gap_lower: f64,
    /// `min_i λ₂(L_i) / (2 ln |V_i|)`, the sharper per-block value.
    pub gap_lower_per_block: f64,
    pub mu: f64,
    /// `1/(16(1+c) ln n)`.
    pub r_threshold: f64,
    pub procrustes_degenerate: bool,
    /// `measured·√n`. Rounding is expected to succeed when this is below a
    /// method-dependent constant: 1 for the Fiedler bisector, 1/5 for the
    /// k-means proximity condition. Reported only, never enforced.
    pub scaled_error: f64,
    pub bisector_condition: bool,
    pub proximity_condition: bool,
}

pub fn theoretical_bound(g: &WeightedGraph, p: &Partition) -> Result<PerturbationReport> {
    p.check_len(g.n())?;
    let n = g.n();
    let k = p.k();
    let sizes = p.sizes();
    if n < 3 {
        return Err(Error::Hypothesis(format!("need at least 3 vertices, got {n}")));
    }
    if let Some((b, &s)) = sizes.iter().enumerate().find(|(_, &s)| s < 3) {
        return Err(Error::Hypothesis(format!(
            "block {b} has {s} vertices; every block needs at least 3"
        )));
    }

    let cert = certify::certificate(g, p)?;
    let min_block = *sizes.iter().min().expect("k ≥ 1");
    let c = n as f64 / min_block as f64;
    let ln_n = (n as f64).ln();
    let r = if cert.min_lambda2 < TOL.zero_eigenvalue {
        f64::INFINITY
    } else {
        cert.max_d_delta / cert.min_lambda2
    };
    let r_threshold = 1.0 / (16.0 * (1.0 + c) * ln_n);
    let precondition_ok = r <= r_threshold;
    let bound = precondition_ok.then(|| 32.0 * c.sqrt() * (r * r + r * ln_n) / (n as f64).sqrt());

    let eig = eigen::sym_eig(&g.laplacian())?;
    if k < n && eig.values[k] - eig.values[k - 1] < TOL.eigengap_min {
        return Err(Error::Hypothesis(format!(
            "eigengap at k = {k} is numerically zero ({} vs {})",
            eig.values[k - 1],
            eig.values[k]
        )));
    }
    let u = eig.vectors.columns(0, k).into_owned();
    let u_iso = canonical_uiso(p);
    let pr = procrustes_align(&u, &u_iso)?;
    let measured = two_to_inf_norm(&(&pr.aligned - &u_iso));

    let gap_lower = cert.min_lambda2 / (2.0 * ln_n);
    let gap_lower_per_block = cert
        .lambda2s
        .iter()
        .zip(&sizes)
        .map(|(l, &s)| l / (2.0 * (s as f64).ln()))
        .fold(f64::INFINITY, f64::min);

    Ok(PerturbationReport {
        c,
        r,
        precondition_ok,
        bound,
        measured,
        gap_lower,
        gap_lower_per_block,
        mu: c.sqrt(),
        r_threshold,
        procrustes_degenerate: pr.degenerate,
        scaled_error: measured * (n as f64).sqrt(),
        bisector_condition: measured * (n as f64).sqrt() < 1.0,
        proximity_condition: measured * (n as f64).sqrt() < 0.2,
    })
}

impl ToJson for PerturbationReport {
    fn to_json(&self) -> Value {
        json!({
            "c": float(self.c),
            "r": float(self.r),
            "precondition_ok": self.precondition_ok,
            "bound": opt_float(self.bound),
            "measured": float(self.measured),
            "gap_lower": float(self.gap_lower),
            "gap_lower_per_block": float(self.gap_lower_per_block),
            "mu": float(self.mu),
            "r_threshold": float(self.r_threshold),
            "procrustes_degenerate": self.procrustes_degenerate,
            "scaled_error": float(self.scaled_error),
            "bisector_condition": self.bisector_condition,
            "proximity_condition": self.proximity_condition,
        })
    }
}

/// `λ₂(L) / (2 ln n)`.
pub fn gap_lower_bound(g: &WeightedGraph) -> Result<f64> {
    let n = g.n();
    if n < 3 {
        return input(format!("the ℓ∞ gap lower bound needs n ≥ 3, got {n}"));
    }
    let l2 = eigen::lambda2(g)?;
    Ok(l2.max(0.0) / (2.0 * (n as f64).ln()))
}

/// `4M/D` for a connected graph with 0/1 weights: `M` the maximum degree,
/// `D` the diameter.
pub fn gap_upper_bound_unweighted(g: &WeightedGraph) -> Result<f64> {
    let n = g.n();
    if n < 2 {
        return input("need at least 2 vertices");
    }
    if g.weights().iter().any(|&w| w != 0.0 && w != 1.0) {
        return input("graph is weighted; 4M/D applies to 0/1 weights only");
    }
    let max_degree = (0..n).map(|i| g.degree(i)).fold(0.0, f64::max);
    let mut diameter = 0;
    for s in 0..n {
        let dist = bfs(g, s);
        for d in dist {
            match d {
                Some(d) => diameter = diameter.max(d),
                None => return input("graph is disconnected"),
            }
        }
    }
    Ok(4.0 * max_degree / diameter as f64)
}

fn bfs(g: &WeightedGraph, s: usize) -> Vec<Option<usize>> {
    let n = g.n();
    let mut dist = vec![None; n];
    dist[s] = Some(0);
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].expect("queued vertices have a distance");
        for v in 0..n {
            if g.weight(u, v) > 0.0 && dist[v].is_none() {
                dist[v] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Exact `inf_{x⊥𝟙} ‖Lx‖∞ / ‖x‖∞`.
///
/// Some coordinate of an optimal `x` has `|x_i| = ‖x‖∞ = 1`, and `x ↦ −x`
/// lets us take `x_i = 1`. For each pinned `i` we solve
///
/// ```text
/// min t   s.t.  −t ≤ (Lx)_j ≤ t,  Σx = 0,  x_i = 1,  −1 ≤ x ≤ 1
/// ```
///
/// in the shifted variables `y = x + 1 ≥ 0` (so `Ly = Lx`), and return the
/// smallest optimum.
pub fn gap_exact(g: &WeightedGraph) -> Result<f64> {
    let n = g.n();
    if n < 2 {
        return input("the ℓ∞ gap needs at least 2 vertices");
    }
    if n > TOL.lp_max_n {
        return Err(Error::TooLarge(format!(
            "exact ℓ∞ gap is limited to n ≤ {}, got {n}",
            TOL.lp_max_n
        )));
    }
    let l = g.laplacian();
    let values: Vec<Result<f64>> = (0..n).into_par_iter().map(|i| pinned_gap(&l, i)).collect();
    let mut best = f64::INFINITY;
    for v in values {
        best = best.min(v?);
    }
    Ok(best.max(0.0))
}

fn pinned_gap(l: &DMatrix<f64>, pinned: usize) -> Result<f64> {
    let n = l.nrows();
    // variables: y_0 … y_{n−1}, t
    let mut objective = vec![0.0; n + 1];
    objective[n] = 1.0;
    let mut lp = LinearProgram::minimize(objective);
    for j in 0..n {
        let mut upper: Vec<f64> = l.row(j).iter().copied().collect();
        let mut lower: Vec<f64> = upper.iter().map(|x| -x).collect();
        upper.push(-1.0);
        lower.push(-1.0);
        lp.constrain(upper, Relation::Le, 0.0);
        lp.constrain(lower, Relation::Le, 0.0);
    }
    for j in (0..n).filter(|&j| j != pinned) {
        let mut row = vec![0.0; j + 1];
        row[j] = 1.0;
        lp.constrain(row, Relation::Le, 2.0);
    }
    lp.constrain(vec![1.0; n], Relation::Eq, n as f64);
    let mut pin = vec![0.0; pinned + 1];
    pin[pinned] = 1.0;
    lp.constrain(pin, Relation::Eq, 2.0);
    match lp.solve()? {
        LpOutcome::Optimal { objective, .. } => Ok(objective),
        other => Err(Error::Internal(format!(
            "ℓ∞ gap program for pinned vertex {pinned} returned {other:?}"
        ))),
    }
}

/// One evaluation of `‖Lx‖∞ ≥ λ₂‖x‖∞ / (2 ln n)` for `x ⊥ 𝟙`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinfGapCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Checks the ℓ∞ eigengap inequality at `x`, which is first projected onto `𝟙⊥`.
pub fn linf_eigengap_check(g: &WeightedGraph, lambda2: f64, x: &[f64]) -> Result<LinfGapCheck> {
    let n = g.n();
    if x.len() != n {
        return input(format!("vector has length {}, expected {n}", x.len()));
    }
    if n < 3 {
        return input("the ℓ∞ eigengap inequality needs n ≥ 3");
    }
    let mean = x.iter().sum::<f64>() / n as f64;
    let x = nalgebra::DVector::from_iterator(n, x.iter().map(|v| v - mean));
    let lx = g.laplacian() * &x;
    let lhs = lx.amax();
    let rhs = lambda2 * x.amax() / (2.0 * (n as f64).ln());
    Ok(LinfGapCheck {
        lhs,
        rhs,
        holds: lhs >= rhs - 1e-9,
    })
}

/// The ℓ∞ gap sandwich for one graph.
#[derive(Debug, Clone, PartialEq)]
pub struct GapReport {
    pub lambda2: f64,
    pub lower: f64,
    /// Absent above the LP size limit.
    pub exact: Option<f64>,
    /// Present for connected graphs with 0/1 weights.
    pub upper: Option<f64>,
}

pub fn gap_report(g: &WeightedGraph) -> Result<GapReport> {
    let lower = gap_lower_bound(g)?;
    let exact = if g.n() <= TOL.lp_max_n {
        Some(gap_exact(g)?)
    } else {
        log::info!("n = {} exceeds {}; skipping the exact gap", g.n(), TOL.lp_max_n);
        None
    };
    let unweighted = g.weights().iter().all(|&w| w == 0.0 || w == 1.0);
    let upper = if unweighted && g.is_connected() {
        Some(gap_upper_bound_unweighted(g)?)
    } else {
        None
    };
    Ok(GapReport {
        lambda2: eigen::lambda2(g)?,
        lower,
        exact,
        upper,
    })
}

impl ToJson for GapReport {
    fn to_json(&self) -> Value {
        json!({
            "lambda2": float(self.lambda2),
            "lower": float(self.lower),
            "exact": opt_float(self.exact),
            "upper": opt_float(self.upper),
        })
    }
}
