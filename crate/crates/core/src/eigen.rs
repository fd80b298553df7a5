//! Dense symmetric eigendecomposition by cyclic Jacobi rotations, and the
//! Laplacian eigenmap built on it.
//!
//! Output is deterministic: eigenvalues ascending (stable with respect to the
//! sweep order on ties), and each eigenvector is signed so that its
//! largest-magnitude entry is positive, the lowest index winning among
//! entries of equal magnitude.

use nalgebra::DMatrix;

use crate::config::TOL;
use crate::error::{input, Error, Result};
use crate::graph::WeightedGraph;

/// `A = Q Λ Qᵀ` with `values` ascending and the eigenvectors as columns of `vectors`.
#[derive(Debug, Clone)]
pub struct SymEigen {
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

/// Eigendecomposition of a symmetric matrix.
pub fn sym_eig(a: &DMatrix<f64>) -> Result<SymEigen> {
    let n = a.nrows();
    if a.ncols() != n {
        return input(format!("matrix is not square: {}x{}", n, a.ncols()));
    }
    if n == 0 {
        return Ok(SymEigen {
            values: Vec::new(),
            vectors: DMatrix::zeros(0, 0),
        });
    }
    let scale = 1.0 + a.amax();
    for i in 0..n {
        for j in 0..i {
            if !a[(i, j)].is_finite() || (a[(i, j)] - a[(j, i)]).abs() > TOL.symmetry * scale {
                return input(format!(
                    "matrix is not symmetric at ({i},{j}): {} vs {}",
                    a[(i, j)],
                    a[(j, i)]
                ));
            }
        }
    }

    // Row-major working copy of the symmetrized matrix, and the rotations
    // accumulated with eigenvectors stored as rows.
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            m[i * n + j] = 0.5 * (a[(i, j)] + a[(j, i)]);
        }
    }
    let mut vt = vec![0.0; n * n];
    for i in 0..n {
        vt[i * n + i] = 1.0;
    }

    let norm = m.iter().map(|x| x * x).sum::<f64>().sqrt();
    let target = TOL.jacobi_rel_off * norm;
    let mut converged = false;
    for sweep in 0..TOL.jacobi_max_sweeps {
        let off = off_diagonal_norm(&m, n);
        if off <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                // After a few sweeps, drop entries that are negligible against both diagonals.
                let g = 100.0 * apq.abs();
                if sweep > 3 && app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
                    m[p * n + q] = 0.0;
                    m[q * n + p] = 0.0;
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (theta * theta + 1.0).sqrt())
                } else {
                    -1.0 / (-theta + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate(&mut m, n, p, q, c, s, t);
                rotate_rows(&mut vt, n, p, q, c, s);
            }
        }
    }
    if !converged && off_diagonal_norm(&m, n) > target {
        return Err(Error::Internal(format!(
            "Jacobi eigensolver did not converge in {} sweeps",
            TOL.jacobi_max_sweeps
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i * n + i].total_cmp(&m[j * n + j]));
    let values = order.iter().map(|&i| m[i * n + i]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        let row = &vt[i * n..(i + 1) * n];
        let sign = sign_convention(row);
        for r in 0..n {
            vectors[(r, col)] = sign * row[r];
        }
    }
    Ok(SymEigen { values, vectors })
}

fn off_diagonal_norm(m: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            s += m[i * n + j] * m[i * n + j];
        }
    }
    (2.0 * s).sqrt()
}

/// `A ← Pᵀ A P` for the plane rotation in `(p, q)`, using symmetry: rows `p`
/// and `q` are updated in place and mirrored into the columns.
fn rotate(m: &mut [f64], n: usize, p: usize, q: usize, c: f64, s: f64, t: f64) {
    let apq = m[p * n + q];
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = m[p * n + k];
        let akq = m[q * n + k];
        let new_p = c * akp - s * akq;
        let new_q = s * akp + c * akq;
        m[p * n + k] = new_p;
        m[q * n + k] = new_q;
        m[k * n + p] = new_p;
        m[k * n + q] = new_q;
    }
    m[p * n + p] -= t * apq;
    m[q * n + q] += t * apq;
    m[p * n + q] = 0.0;
    m[q * n + p] = 0.0;
}

fn rotate_rows(vt: &mut [f64], n: usize, p: usize, q: usize, c: f64, s: f64) {
    let (head, tail) = vt.split_at_mut(q * n);
    let rp = &mut head[p * n..(p + 1) * n];
    let rq = &mut tail[..n];
    for (x, y) in rp.iter_mut().zip(rq.iter_mut()) {
        let (a, b) = (*x, *y);
        *x = c * a - s * b;
        *y = s * a + c * b;
    }
}

/// `+1` or `-1` so that the largest-magnitude entry (lowest index among
/// near-ties) is positive.
fn sign_convention(v: &[f64]) -> f64 {
    let max = v.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    if max == 0.0 {
        return 1.0;
    }
    let lead = v
        .iter()
        .find(|x| x.abs() >= max * (1.0 - 1e-10))
        .expect("maximum is attained");
    if *lead < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// Eigenvectors of the `k` smallest Laplacian eigenvalues; row `i` of `u` is
/// the embedding of vertex `i`.
#[derive(Debug, Clone)]
pub struct Eigenmap {
    pub u: DMatrix<f64>,
    pub values: Vec<f64>,
}

pub fn eigenmap(g: &WeightedGraph, k: usize) -> Result<Eigenmap> {
    let n = g.n();
    if k == 0 || k > n {
        return input(format!("k = {k} must lie in [1, {n}]"));
    }
    let eig = sym_eig(&g.laplacian())?;
    Ok(Eigenmap {
        u: eig.vectors.columns(0, k).into_owned(),
        values: eig.values[..k].to_vec(),
    })
}

/// Second-smallest Laplacian eigenvalue.
pub fn lambda2(g: &WeightedGraph) -> Result<f64> {
    if g.n() < 2 {
        return input("algebraic connectivity needs at least 2 vertices");
    }
    Ok(sym_eig(&g.laplacian())?.values[1])
}

/// Unit eigenvector of the second-smallest Laplacian eigenvalue, taken
/// orthogonal to `𝟙`.
///
/// Computed as the bottom eigenvector of `L + s·J/n` with `s > λ_max(L)`,
/// which moves `𝟙` to the top of the spectrum and leaves `𝟙⊥` untouched. On
/// a disconnected graph this picks a vector constant on components and
/// orthogonal to `𝟙` rather than an arbitrary kernel vector.
pub fn fiedler(g: &WeightedGraph) -> Result<Vec<f64>> {
    let n = g.n();
    if n < 2 {
        return input("Fiedler vector needs at least 2 vertices");
    }
    let l = g.laplacian();
    let shift = l.trace() + 1.0;
    let shifted = l.map(|x| x + shift / n as f64);
    let eig = sym_eig(&shifted)?;
    Ok(eig.vectors.column(0).iter().copied().collect())
}
