//! Numerical tolerances and iteration budgets shared by every module.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Relative Hermiticity slack accepted by the eigensolver.
    pub herm_tol: f64,
    /// Eigen-decomposition residual and unitarity bound.
    pub eig_tol: f64,
    /// Absolute Frobenius bound for spin-system axioms and CAR checks.
    pub spin_tol: f64,
    /// Relative residual above which a symmetrized word leaves the span.
    pub closure_tol: f64,
    /// Eigenvalue slack for the CP / co-CP / positivity verdicts.
    pub cp_tol: f64,
    pub dist_tol: f64,
    pub ppt_tol: f64,
    pub witness_margin: f64,
    pub max_iters: usize,
    pub refine_iters: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            herm_tol: 1e-10,
            eig_tol: 1e-9,
            spin_tol: 1e-12,
            closure_tol: 1e-8,
            cp_tol: 1e-9,
            dist_tol: 1e-6,
            ppt_tol: 1e-9,
            witness_margin: 1e-6,
            max_iters: 20_000,
            refine_iters: 5_000,
        }
    }
}
