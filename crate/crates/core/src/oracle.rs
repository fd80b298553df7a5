//! Exhaustive minimum ratio cut over all k-way partitions of a small graph.

use serde_json::{json, Value};

use crate::config::TOL;
use crate::error::{input, Error, Result};
use crate::graph::{ratio_cut_labels, Partition, WeightedGraph};
use crate::json::{float, opt_float, ToJson};

/// Restricted-growth strings of length `n` with exactly `k` distinct labels,
/// in lexicographic order. Each string is one set partition.
#[derive(Debug, Clone)]
pub struct SetPartitions {
    k: usize,
    current: Option<Vec<usize>>,
}

pub fn enumerate_partitions(n: usize, k: usize) -> Result<SetPartitions> {
    if n > TOL.oracle_max_n {
        return Err(Error::TooLarge(format!(
            "enumeration is capped at n = {}, got {n}",
            TOL.oracle_max_n
        )));
    }
    if k == 0 || k > n {
        return input(format!("need 1 <= k <= n, got k = {k}, n = {n}"));
    }
    // smallest string: zeros, then 1, 2, ..., k-1 at the end
    let mut first = vec![0; n - k + 1];
    first.extend(1..k);
    Ok(SetPartitions {
        k,
        current: Some(first),
    })
}

impl SetPartitions {
    fn advance(&mut self) {
        let Some(s) = self.current.as_mut() else { return };
        let n = s.len();
        let k = self.k;
        // prefix_max[i] = max(s[0..i]), so s[i] may go up to prefix_max[i] + 1
        let mut prefix_max = vec![0; n + 1];
        for i in 0..n {
            prefix_max[i + 1] = prefix_max[i].max(s[i]);
        }
        for i in (1..n).rev() {
            let cap = (prefix_max[i] + 1).min(k - 1);
            if s[i] >= cap {
                continue;
            }
            let value = s[i] + 1;
            let used = prefix_max[i].max(value) + 1;
            let rest = n - i - 1;
            let missing = k - used;
            if missing > rest {
                continue;
            }
            s[i] = value;
            // minimal completion: zeros, then the missing labels in order
            for (offset, slot) in s[i + 1..].iter_mut().enumerate() {
                *slot = if offset < rest - missing {
                    0
                } else {
                    used + offset - (rest - missing)
                };
            }
            return;
        }
        self.current = None;
    }
}

impl Iterator for SetPartitions {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        self.advance();
        Some(out)
    }
}

/// Stirling number of the second kind, `None` on overflow.
pub fn stirling2(n: usize, k: usize) -> Option<u64> {
    let mut row = vec![0u64; k + 1];
    row[0] = 1;
    for _ in 0..n {
        for j in (1..=k).rev() {
            row[j] = (j as u64).checked_mul(row[j])?.checked_add(row[j - 1])?;
        }
        row[0] = 0;
    }
    Some(row[k])
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub best: Partition,
    pub value: f64,
    /// No other partition comes within the uniqueness tolerance of `value`.
    pub unique: bool,
    pub partitions_examined: u64,
    /// Second-smallest value, absent when there is only one partition.
    pub runner_up: Option<f64>,
}

pub fn min_ratio_cut_bruteforce(g: &WeightedGraph, k: usize) -> Result<OracleResult> {
    let n = g.n();
    let mut best: Option<(f64, Vec<usize>)> = None;
    let mut runner_up = f64::INFINITY;
    let mut examined = 0u64;
    let mut sizes = vec![0usize; k];
    for labels in enumerate_partitions(n, k)? {
        examined += 1;
        sizes.iter_mut().for_each(|s| *s = 0);
        for &l in &labels {
            sizes[l] += 1;
        }
        let value = ratio_cut_labels(g, &labels, &sizes);
        match &best {
            Some((b, _)) if value >= *b => runner_up = runner_up.min(value),
            _ => {
                if let Some((b, _)) = best.take() {
                    runner_up = runner_up.min(b);
                }
                best = Some((value, labels));
            }
        }
    }
    let (_, labels) = best.ok_or_else(|| Error::Internal("no partitions enumerated".into()))?;
    let best = Partition::with_k(labels, k)?;
    let value = g.ratio_cut(&best)?;
    let runner_up = runner_up.is_finite().then_some(runner_up);
    Ok(OracleResult {
        unique: runner_up.is_none_or(|r| r - value > TOL.oracle_unique),
        best,
        value,
        partitions_examined: examined,
        runner_up,
    })
}

impl ToJson for OracleResult {
    fn to_json(&self) -> Value {
        json!({
            "best": self.best.labels(),
            "k": self.best.k(),
            "value": float(self.value),
            "unique": self.unique,
            "partitions_examined": self.partitions_examined,
            "runner_up": opt_float(self.runner_up),
        })
    }
}
