//! Spectral clustering on weighted graphs with ratio-cut optimality
//! certificates, two-to-infinity perturbation bounds for the Laplacian
//! eigenmap, and exact oracles for checking both at small scale.

pub mod certify;
pub mod config;
pub mod eigen;
pub mod error;
pub mod generate;
pub mod graph;
pub mod io;
pub mod json;
pub mod lp;
pub mod oracle;
pub mod perturb;
pub mod rounding;

pub use certify::{certificate, Certificate};
pub use config::{Tolerances, TOL};
pub use eigen::{eigenmap, sym_eig, Eigenmap, SymEigen};
pub use error::{Error, Result};
pub use graph::{Partition, WeightedGraph};
pub use json::{render, ToJson};
pub use oracle::{min_ratio_cut_bruteforce, OracleResult};
pub use perturb::{theoretical_bound, PerturbationReport};
pub use rounding::{spectral_cluster, Method, RoundingResult};

pub use nalgebra::{DMatrix, DVector};
