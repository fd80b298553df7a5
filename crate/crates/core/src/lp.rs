//! Dense two-phase tableau simplex with Bland's rule.
//!
//! Solves `min cᵀx` subject to linear rows `aᵀx {≤,=,≥} b` and `x ≥ 0`.
//! Bland's smallest-index rule for both the entering and the leaving
//! variable rules out cycling on degenerate problems, at the price of more
//! pivots than a steepest-edge rule. Intended for desk-scale problems only.

use crate::config::TOL;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

#[derive(Debug, Clone)]
pub struct LinearProgram {
    objective: Vec<f64>,
    constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, objective: f64 },
    Infeasible,
    Unbounded,
}

impl LinearProgram {
    /// Minimize `objective · x` over `x ≥ 0`.
    pub fn minimize(objective: Vec<f64>) -> Self {
        Self {
            objective,
            constraints: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    /// Adds a row. Missing trailing coefficients are zero.
    pub fn constrain(&mut self, mut coeffs: Vec<f64>, relation: Relation, rhs: f64) -> &mut Self {
        assert!(coeffs.len() <= self.num_vars(), "constraint wider than the variable count");
        coeffs.resize(self.num_vars(), 0.0);
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
        self
    }

    pub fn solve(&self) -> Result<LpOutcome> {
        Tableau::build(self).run(&self.objective)
    }
}

struct Tableau {
    rows: usize,
    /// structural + slack/surplus + artificial columns; the rhs is stored separately
    cols: usize,
    n_struct: usize,
    first_artificial: usize,
    a: Vec<f64>,
    rhs: Vec<f64>,
    basis: Vec<usize>,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Tableau {
        let n_struct = lp.num_vars();
        let rows = lp.constraints.len();
        let n_slack = lp
            .constraints
            .iter()
            .filter(|c| c.relation != Relation::Eq)
            .count();
        let n_art = lp
            .constraints
            .iter()
            .filter(|c| {
                let rel = normalized(c).1;
                rel != Relation::Le
            })
            .count();
        let first_artificial = n_struct + n_slack;
        let cols = first_artificial + n_art;
        let mut a = vec![0.0; rows * cols];
        let mut rhs = vec![0.0; rows];
        let mut basis = vec![0; rows];
        let (mut slack, mut art) = (n_struct, first_artificial);
        for (i, c) in lp.constraints.iter().enumerate() {
            let (sign, rel) = normalized(c);
            let row = &mut a[i * cols..(i + 1) * cols];
            for (dst, src) in row.iter_mut().zip(&c.coeffs) {
                *dst = sign * src;
            }
            rhs[i] = sign * c.rhs;
            match rel {
                Relation::Le => {
                    row[slack] = 1.0;
                    basis[i] = slack;
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = -1.0;
                    slack += 1;
                    row[art] = 1.0;
                    basis[i] = art;
                    art += 1;
                }
                Relation::Eq => {
                    row[art] = 1.0;
                    basis[i] = art;
                    art += 1;
                }
            }
        }
        Tableau {
            rows,
            cols,
            n_struct,
            first_artificial,
            a,
            rhs,
            basis,
        }
    }

    fn run(mut self, objective: &[f64]) -> Result<LpOutcome> {
        if self.first_artificial < self.cols {
            let mut phase1 = vec![0.0; self.cols];
            for c in phase1.iter_mut().skip(self.first_artificial) {
                *c = 1.0;
            }
            match self.optimize(&phase1, self.cols)? {
                Some(value) if value > TOL.simplex_pivot * (1.0 + self.rhs_scale()) => {
                    return Ok(LpOutcome::Infeasible)
                }
                Some(_) => {}
                None => return Err(Error::Internal("phase one cannot be unbounded".into())),
            }
            self.evict_artificials();
        }
        let mut cost = vec![0.0; self.cols];
        cost[..self.n_struct].copy_from_slice(objective);
        let Some(value) = self.optimize(&cost, self.first_artificial)? else {
            return Ok(LpOutcome::Unbounded);
        };
        let mut x = vec![0.0; self.n_struct];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.n_struct {
                x[b] = self.rhs[i];
            }
        }
        Ok(LpOutcome::Optimal {
            x,
            objective: value,
        })
    }

    fn rhs_scale(&self) -> f64 {
        self.rhs.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Runs Bland pivots for `cost`, allowing only columns `< allowed` to enter.
    /// Returns the optimal value, or `None` if unbounded.
    fn optimize(&mut self, cost: &[f64], allowed: usize) -> Result<Option<f64>> {
        let cols = self.cols;
        let max_pivots = 50 * (self.rows + cols) + 1000;
        for _ in 0..max_pivots {
            let reduced = self.reduced_costs(cost);
            let Some(enter) = (0..allowed).find(|&j| reduced[j] < -TOL.simplex_pivot) else {
                let value = self
                    .basis
                    .iter()
                    .zip(&self.rhs)
                    .map(|(&b, &r)| cost[b] * r)
                    .sum();
                return Ok(Some(value));
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.rows {
                let aij = self.a[i * cols + enter];
                if aij > TOL.simplex_pivot {
                    let ratio = self.rhs[i] / aij;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((r, best)) => {
                            let tie = (ratio - best).abs() <= 1e-12 * (1.0 + best.abs());
                            if ratio < best && !tie || tie && self.basis[i] < self.basis[r] {
                                Some((i, ratio))
                            } else {
                                Some((r, best))
                            }
                        }
                    };
                }
            }
            let Some((row, _)) = leave else {
                return Ok(None);
            };
            self.pivot(row, enter);
        }
        Err(Error::Internal(format!("simplex exceeded {max_pivots} pivots")))
    }

    fn reduced_costs(&self, cost: &[f64]) -> Vec<f64> {
        let mut r = cost.to_vec();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = cost[b];
            if cb != 0.0 {
                let row = &self.a[i * self.cols..(i + 1) * self.cols];
                for (rj, aij) in r.iter_mut().zip(row) {
                    *rj -= cb * aij;
                }
            }
        }
        r
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let cols = self.cols;
        let p = self.a[row * cols + col];
        for v in &mut self.a[row * cols..(row + 1) * cols] {
            *v /= p;
        }
        self.rhs[row] /= p;
        let pivot_row = self.a[row * cols..(row + 1) * cols].to_vec();
        let pivot_rhs = self.rhs[row];
        for i in 0..self.rows {
            if i == row {
                continue;
            }
            let f = self.a[i * cols + col];
            if f == 0.0 {
                continue;
            }
            let target = &mut self.a[i * cols..(i + 1) * cols];
            for (t, pv) in target.iter_mut().zip(&pivot_row) {
                *t -= f * pv;
            }
            target[col] = 0.0;
            self.rhs[i] -= f * pivot_rhs;
            if self.rhs[i] < 0.0 && self.rhs[i] > -1e-12 {
                self.rhs[i] = 0.0;
            }
        }
        self.basis[row] = col;
    }

    /// Pivots zero-valued artificials out of the basis after phase one. Rows
    /// with no usable pivot are redundant and keep their artificial at zero.
    fn evict_artificials(&mut self) {
        for i in 0..self.rows {
            if self.basis[i] < self.first_artificial {
                continue;
            }
            let row = &self.a[i * self.cols..(i + 1) * self.cols];
            if let Some(j) = (0..self.first_artificial).find(|&j| row[j].abs() > TOL.simplex_pivot) {
                self.pivot(i, j);
            }
        }
    }
}

/// Sign making the rhs nonnegative, and the relation after flipping.
fn normalized(c: &Constraint) -> (f64, Relation) {
    if c.rhs >= 0.0 {
        (1.0, c.relation)
    } else {
        let rel = match c.relation {
            Relation::Le => Relation::Ge,
            Relation::Ge => Relation::Le,
            Relation::Eq => Relation::Eq,
        };
        (-1.0, rel)
    }
}
