use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: ||A - A^dag||_F = {violation:.3e} exceeds {bound:.3e}")]
    NotHermitian { violation: f64, bound: f64 },

    #[error("Pauli index {0} out of range 0..=3")]
    PauliIndex(usize),

    #[error("site {site} out of range for a chain of {n_sites} sites")]
    SiteOutOfRange { site: usize, n_sites: usize },

    #[error("majorana index {index} out of range (chain has {count} majoranas)")]
    MajoranaIndex { index: usize, count: usize },

    #[error("invalid chain size {n_sites} (allowed 1..={max_sites})")]
    ChainSize { n_sites: usize, max_sites: usize },

    #[error("region {inner:?} is not contained in {outer:?}")]
    RegionNotContained { inner: Vec<usize>, outer: Vec<usize> },

    #[error("empty region")]
    EmptyRegion,

    #[error("spin system axiom `{axiom}` violated at {indices:?} (residual {magnitude:.3e})")]
    SpinSystem {
        axiom: &'static str,
        indices: Vec<usize>,
        magnitude: f64,
    },

    #[error("basis is not trace-orthonormal at ({i}, {j}): <e_i, e_j> deviates by {deviation:.3e}")]
    NotOrthonormal { i: usize, j: usize, deviation: f64 },

    #[error("Jordan product of basis elements ({i}, {j}) leaves the span (residual {residual:.3e})")]
    NotJordanClosed { i: usize, j: usize, residual: f64 },

    #[error("unknown potential kind `{0}`")]
    UnknownPotential(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("map is not linear: probe mismatch {0:.3e}")]
    NonLinear(f64),

    #[error("witness search failed: best PPT objective {best_objective:.3e} (min eig rho {min_eig:.3e}, rho^T_B {min_eig_pt:.3e})")]
    WitnessSearchFailed {
        best_objective: f64,
        min_eig: f64,
        min_eig_pt: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
