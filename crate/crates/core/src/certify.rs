//! Optimality certificate for a given k-way partition.
//!
//! A partition is certified as a global ratio-cut minimizer when every
//! vertex's weight to other blocks is at most half the smallest algebraic
//! connectivity of the induced blocks:
//!
//! ```text
//! max_i d_δ(i) ≤ ½ · min_j λ₂(L_j)
//! ```
//!
//! With strict inequality the minimizer is also unique up to relabeling.

use serde_json::{json, Value};

use crate::config::TOL;
use crate::eigen;
use crate::error::Result;
use crate::graph::{Partition, WeightedGraph};
use crate::json::{float, floats, ToJson};

/// Weight from each vertex to vertices outside its own block.
pub fn boundary_degrees(g: &WeightedGraph, p: &Partition) -> Result<Vec<f64>> {
    p.check_len(g.n())?;
    let n = g.n();
    Ok((0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| p.label(j) != p.label(i))
                .map(|j| g.weight(i, j))
                .sum()
        })
        .collect())
}

/// Per-block algebraic connectivity `λ₂(L_j)` of the induced subgraphs.
#[derive(Debug, Clone, PartialEq)]
pub struct IntraConnectivity {
    /// `+∞` for singleton blocks.
    pub values: Vec<f64>,
    /// Labels of singleton blocks, whose connectivity is undefined.
    pub singleton_blocks: Vec<usize>,
}

pub fn intra_connectivities(g: &WeightedGraph, p: &Partition) -> Result<IntraConnectivity> {
    p.check_len(g.n())?;
    let mut values = Vec::with_capacity(p.k());
    let mut singleton_blocks = Vec::new();
    for (b, block) in p.blocks().iter().enumerate() {
        if block.len() == 1 {
            log::warn!("block {b} is a singleton; treating its connectivity as +inf");
            singleton_blocks.push(b);
            values.push(f64::INFINITY);
        } else {
            values.push(eigen::lambda2(&g.induced_subgraph(block)?)?);
        }
    }
    Ok(IntraConnectivity {
        values,
        singleton_blocks,
    })
}

/// Certificate quantities for a partition.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub d_delta: Vec<f64>,
    pub lambda2s: Vec<f64>,
    pub max_d_delta: f64,
    pub min_lambda2: f64,
    /// `max_d_delta / min_lambda2`; `+∞` when some block is internally disconnected.
    pub ratio_r: f64,
    pub passes: bool,
    pub strict: bool,
    /// `½·min_lambda2 − max_d_delta`.
    pub margin: f64,
    pub singleton_blocks: Vec<usize>,
}

pub fn certificate(g: &WeightedGraph, p: &Partition) -> Result<Certificate> {
    let d_delta = boundary_degrees(g, p)?;
    let intra = intra_connectivities(g, p)?;
    let max_d_delta = d_delta.iter().copied().fold(0.0, f64::max);
    let min_lambda2 = intra.values.iter().copied().fold(f64::INFINITY, f64::min);
    let disconnected_block = min_lambda2 < TOL.zero_eigenvalue;

    let (ratio_r, passes, strict) = if disconnected_block {
        (f64::INFINITY, false, false)
    } else {
        let half = 0.5 * min_lambda2;
        let ratio = if min_lambda2.is_infinite() {
            0.0
        } else {
            max_d_delta / min_lambda2
        };
        (
            ratio,
            max_d_delta <= half + TOL.certificate_cmp,
            max_d_delta < half - TOL.certificate_cmp,
        )
    };
    Ok(Certificate {
        margin: 0.5 * min_lambda2 - max_d_delta,
        d_delta,
        lambda2s: intra.values,
        max_d_delta,
        min_lambda2,
        ratio_r,
        passes,
        strict,
        singleton_blocks: intra.singleton_blocks,
    })
}

/// Result of checking `cut(S, V−S) ≥ λ₂(L)·|S|·|V−S|/|V|` on one subset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityCheck {
    pub bound: f64,
    pub actual: f64,
    pub holds: bool,
}

pub fn density_lower_bound_check(g: &WeightedGraph, subset: &[usize]) -> Result<DensityCheck> {
    let mask = g.subset_mask(subset)?;
    let n = g.n();
    let inside = mask.iter().filter(|&&b| b).count();
    let actual = g.cut_weight_mask(&mask);
    let bound = if inside == 0 || inside == n {
        0.0
    } else {
        eigen::lambda2(g)? * (inside * (n - inside)) as f64 / n as f64
    };
    Ok(DensityCheck {
        bound,
        actual,
        holds: actual >= bound - 1e-9,
    })
}

impl ToJson for Certificate {
    fn to_json(&self) -> Value {
        json!({
            "d_delta": floats(&self.d_delta),
            "lambda2s": floats(&self.lambda2s),
            "max_d_delta": float(self.max_d_delta),
            "min_lambda2": float(self.min_lambda2),
            "ratio_r": float(self.ratio_r),
            "passes": self.passes,
            "strict": self.strict,
            "margin": float(self.margin),
            "singleton_blocks": self.singleton_blocks,
        })
    }
}
