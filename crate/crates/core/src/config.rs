//! Numerical tolerances and size guards shared by every module.

/// Tolerance and limit record. [`TOL`] holds the defaults used by the library.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Jacobi stops once the off-diagonal Frobenius mass is below this fraction of `‖A‖_F`.
    pub jacobi_rel_off: f64,
    pub jacobi_max_sweeps: usize,
    /// Absolute asymmetry accepted by the eigensolver, scaled by `1 + max|a_ij|`.
    pub symmetry: f64,
    /// Eigenvalues below this are treated as zero (connectivity, disconnected blocks).
    pub zero_eigenvalue: f64,
    /// Absolute slack on the certificate comparison `max d_δ ≤ ½ min λ₂`.
    pub certificate_cmp: f64,
    /// Two objective values closer than this are considered tied by the oracle.
    pub oracle_unique: f64,
    /// Minimum `λ_{k+1} − λ_k` for the eigenmap subspace to be well defined.
    pub eigengap_min: f64,
    /// Singular value below which the Procrustes cross product is flagged degenerate.
    pub procrustes_degenerate: f64,
    /// Pivot tolerance of the simplex solver.
    pub simplex_pivot: f64,
    /// Largest graph accepted by the exact set-partition enumeration.
    pub oracle_max_n: usize,
    /// Largest graph accepted by the exact ℓ∞ gap linear programs.
    pub lp_max_n: usize,
    pub kmeans_max_iter: usize,
    pub kmeans_restarts: usize,
}

pub const TOL: Tolerances = Tolerances {
    jacobi_rel_off: 1e-12,
    jacobi_max_sweeps: 100,
    symmetry: 1e-10,
    zero_eigenvalue: 1e-8,
    certificate_cmp: 1e-12,
    oracle_unique: 1e-9,
    eigengap_min: 1e-9,
    procrustes_degenerate: 1e-8,
    simplex_pivot: 1e-9,
    oracle_max_n: 14,
    lp_max_n: 200,
    kmeans_max_iter: 200,
    kmeans_restarts: 10,
};

impl Default for Tolerances {
    fn default() -> Self {
        TOL
    }
}
