//! Spin-chain laboratory for positive, non-completely-positive maps.
//!
//! The crate builds Jordan–Wigner Majorana symmetries on a finite chain, the
//! spin factor they span, the trace-orthogonal projection `P` onto it, the
//! Heisenberg dynamics `α_t` of finite-range potentials, and the reduced maps
//! `P ∘ α_t`. The [`analysis`] module classifies such maps and emits
//! checkable certificates (Choi spectra, PPT witnesses).

pub mod analysis;
pub mod chain;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod fermion;
pub mod linalg;
pub mod projection;
pub mod reversibility;
pub mod sampling;
pub mod superop;

pub use analysis::{
    classify, decomposability_project, extract_witness, is_cocp, is_cp, positivity_probe,
    AnalysisReport, CpVerdict, DecomposabilityVerdict, Decomposition, ProbeResult, ProbeSettings,
    WitnessCertificate,
};
pub use chain::{jordan_product, pauli, region_embed, site_embed, ChainConfig, Region};
pub use config::Tolerances;
pub use dynamics::{
    evolve_map, hamiltonian, norm1, norm_exp, reduced_map, standard_potential, Couplings,
    DynamicsMap, Potential, PotentialKind,
};
pub use error::{Error, Result};
pub use fermion::{
    annihilation, build_spin_factor, majorana, sigma_pm, verify_spin_system, Sign, SpinFactor,
    SpinSystem,
};
pub use linalg::{expm_herm, herm_eig, hs_inner, kron, op_norm, CMatrix, EigResult};
pub use projection::{build_projection, ProjectionMap};
pub use reversibility::{reversibility_check, Reversibility, ReversibilityReport};
pub use superop::{choi, partial_transpose, ChoiMatrix, SuperOp};
