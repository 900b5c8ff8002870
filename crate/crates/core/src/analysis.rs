//! Classification of linear maps: CP, co-CP, positive, decomposable.
//!
//! Decomposability is decided by a primal/dual pair. The primal side
//! projects the Choi matrix onto the cone `{A + B^Γ : A, B ⪰ 0}` by exact
//! alternating block minimization of `‖C - A - B^Γ‖_F`. When the distance
//! stays positive, the dual side searches the PPT states
//! `{ρ ⪰ 0, ρ^Γ ⪰ 0, trace ρ = 1}` (the dual cone) for one with
//! `trace(ρ C) < 0`, which certifies that no decomposition exists.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{
    eig_unchecked, frob, hermitian_part, hermiticity_violation, min_eig, op_norm,
    psd_projection, trace, CMatrix,
};
use crate::sampling::{projector, random_pure_state};
use crate::superop::{partial_transpose, ChoiMatrix, SuperOp};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CpVerdict {
    pub holds: bool,
    pub min_eig: f64,
}

fn hermitian_choi(m: &CMatrix, tol: &Tolerances) -> Result<()> {
    let violation = hermiticity_violation(m);
    let bound = tol.herm_tol * frob(m).max(1.0);
    if violation > bound {
        return Err(Error::NotHermitian { violation, bound });
    }
    Ok(())
}

/// CP iff the Choi matrix is PSD within `cp_tol`.
pub fn is_cp(s: &SuperOp, tol: &Tolerances) -> Result<CpVerdict> {
    let ch = s.choi();
    hermitian_choi(&ch.mat, tol)?;
    let min_eig = min_eig(&ch.mat);
    Ok(CpVerdict {
        holds: min_eig >= -tol.cp_tol,
        min_eig,
    })
}

/// co-CP iff the partially transposed Choi matrix is PSD within `cp_tol`.
pub fn is_cocp(s: &SuperOp, tol: &Tolerances) -> Result<CpVerdict> {
    let ch = s.choi();
    hermitian_choi(&ch.mat, tol)?;
    let min_eig = min_eig(&ch.partial_transpose());
    Ok(CpVerdict {
        holds: min_eig >= -tol.cp_tol,
        min_eig,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeResult {
    /// Smallest `⟨y|Λ(|x⟩⟨x|)|y⟩` found. Negative values prove the map is
    /// not positive; non-negative values are evidence only.
    pub min_value: f64,
    pub x: DVector<Complex64>,
    pub y: DVector<Complex64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ProbeSettings {
    pub n_samples: usize,
    pub n_refine: usize,
}

impl Default for ProbeSettings {
    fn default() -> Self {
        Self {
            n_samples: 32,
            n_refine: 20,
        }
    }
}

fn bilinear(s: &SuperOp, x: &DVector<Complex64>, y: &DVector<Complex64>) -> Result<f64> {
    let img = s.apply(&projector(x))?;
    Ok((y.adjoint() * img * y)[(0, 0)].re)
}

fn lowest_eigenvector(m: &CMatrix) -> DVector<Complex64> {
    eig_unchecked(&hermitian_part(m)).eigenvector(0)
}

/// Random starts plus alternating refinement: for fixed `x` the best `y` is
/// the lowest eigenvector of `Λ(|x⟩⟨x|)`, for fixed `y` the best `x` is the
/// lowest eigenvector of `Λ^†(|y⟩⟨y|)`.
pub fn positivity_probe<R: Rng + ?Sized>(
    s: &SuperOp,
    settings: ProbeSettings,
    rng: &mut R,
) -> Result<ProbeResult> {
    let d = s.d();
    let adj = s.adjoint();
    let mut best: Option<ProbeResult> = None;
    for _ in 0..settings.n_samples.max(1) {
        let mut x = random_pure_state(d, rng);
        let mut y = lowest_eigenvector(&s.apply(&projector(&x))?);
        let mut value = bilinear(s, &x, &y)?;
        for _ in 0..settings.n_refine {
            x = lowest_eigenvector(&adj.apply(&projector(&y))?);
            y = lowest_eigenvector(&s.apply(&projector(&x))?);
            let v = bilinear(s, &x, &y)?;
            let done = (value - v).abs() < 1e-15;
            value = v;
            if done {
                break;
            }
        }
        if best.as_ref().is_none_or(|b| value < b.min_value) {
            best = Some(ProbeResult {
                min_value: value,
                x,
                y,
            });
        }
    }
    Ok(best.expect("at least one sample"))
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    pub distance: f64,
    pub a: CMatrix,
    pub b: CMatrix,
    pub iterations: usize,
    /// False when the budget ran out before the per-step improvement
    /// dropped below `1e-12`.
    pub converged: bool,
    /// Distance after every iteration.
    pub history: Vec<f64>,
}

impl Decomposition {
    /// `C - A - B^Γ`.
    pub fn residual(&self, c: &ChoiMatrix) -> CMatrix {
        &c.mat - &self.a - partial_transpose(&self.b, c.d)
    }

    pub fn is_decomposable(&self, dist_tol: f64) -> bool {
        self.distance <= dist_tol
    }
}

/// Minimizes `‖C - A - B^Γ‖_F` over PSD `A`, `B` by alternating exact block
/// updates `B ← P₊((C - A)^Γ)`, `A ← P₊(C - B^Γ)`. The partial transpose is
/// an isometry, so each update is the exact minimizer in its block and the
/// distance never increases.
pub fn decomposability_project(c: &ChoiMatrix, max_iters: usize) -> Result<Decomposition> {
    let d = c.d;
    let cm = &c.mat;
    if hermiticity_violation(cm) > 1e-10 * frob(cm).max(1.0) {
        return Err(Error::NotHermitian {
            violation: hermiticity_violation(cm),
            bound: 1e-10 * frob(cm).max(1.0),
        });
    }
    let cm = hermitian_part(cm);
    let mut a = psd_projection(&cm);
    let mut b = CMatrix::zeros(d * d, d * d);
    let mut distance = frob(&(&cm - &a));
    let mut history = Vec::new();
    let mut converged = false;
    let mut iterations = 0;

    while iterations < max_iters {
        iterations += 1;
        let b_new = psd_projection(&partial_transpose(&(&cm - &a), d));
        let b_pt = partial_transpose(&b_new, d);
        let a_new = psd_projection(&(&cm - &b_pt));
        let dist_new = frob(&(&cm - &a_new - &b_pt));
        history.push(dist_new);
        let improvement = distance - dist_new;
        a = a_new;
        b = b_new;
        distance = dist_new;
        if improvement < 1e-12 {
            converged = true;
            break;
        }
    }
    Ok(Decomposition {
        distance,
        a,
        b,
        iterations,
        converged,
        history,
    })
}

#[derive(Debug, Clone)]
pub struct WitnessCertificate {
    /// Hermitian, unit trace, `d²×d²`.
    pub rho: CMatrix,
    pub min_eig_rho: f64,
    pub min_eig_rho_pt: f64,
    /// `trace(ρ C)`.
    pub objective: f64,
}

impl WitnessCertificate {
    fn evaluate(rho: CMatrix, c: &ChoiMatrix) -> Self {
        let min_eig_rho = min_eig(&rho);
        let min_eig_rho_pt = min_eig(&partial_transpose(&rho, c.d));
        let objective = trace_product(&rho, &c.mat);
        Self {
            rho,
            min_eig_rho,
            min_eig_rho_pt,
            objective,
        }
    }

    pub fn is_valid(&self, tol: &Tolerances) -> bool {
        self.min_eig_rho >= -tol.ppt_tol
            && self.min_eig_rho_pt >= -tol.ppt_tol
            && self.objective < -tol.witness_margin
    }

    /// Recomputes every field from `rho` and `c` and checks validity plus
    /// the unit trace.
    pub fn verify(&self, c: &ChoiMatrix, tol: &Tolerances) -> bool {
        if self.rho.shape() != c.mat.shape() {
            return false;
        }
        let herm = hermiticity_violation(&self.rho) <= 1e-12;
        let unit = (trace(&self.rho).re - 1.0).abs() <= 1e-9;
        let fresh = Self::evaluate(self.rho.clone(), c);
        herm && unit && fresh.is_valid(tol)
    }
}

/// `Re trace(a b)` without forming the product.
fn trace_product(a: &CMatrix, b: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for k in 0..n {
            s += (a[(i, k)] * b[(k, i)]).re;
        }
    }
    s
}

/// Maps a Hermitian matrix into the PPT states: alternating PSD clipping on
/// both sides of the partial transpose, trace normalization, and a final
/// mixing with `I / D` just strong enough to remove residual negativity.
fn project_ppt_states(x: &CMatrix, d: usize) -> CMatrix {
    const CYCLES: usize = 8;
    let big = d * d;
    let maximally_mixed = CMatrix::identity(big, big).unscale(big as f64);
    let mut rho = hermitian_part(x);
    for _ in 0..CYCLES {
        rho = psd_projection(&rho);
        rho = partial_transpose(&psd_projection(&partial_transpose(&rho, d)), d);
    }
    let t = trace(&rho).re;
    if t.is_nan() || t <= 1e-300 {
        return maximally_mixed;
    }
    rho = hermitian_part(&rho.unscale(t));
    let lam = min_eig(&rho).min(min_eig(&partial_transpose(&rho, d)));
    if lam < 0.0 {
        let inv = 1.0 / big as f64;
        // (1-ε) λ + ε / D = 0, with a small margin.
        let eps = ((-lam) / (inv - lam) * (1.0 + 1e-9)).min(1.0);
        rho = rho.scale(1.0 - eps) + maximally_mixed.scale(eps);
    }
    rho
}

/// Projected subgradient descent of `trace(ρ C)` over PPT states, started
/// from `-residual` (the dual point produced by the cone projection). Stops
/// at the first non-improving step once the certificate is valid.
pub fn extract_witness(
    c: &ChoiMatrix,
    residual: &CMatrix,
    refine_iters: usize,
    tol: &Tolerances,
) -> Result<WitnessCertificate> {
    // Smaller gains count as non-improvement and halve the step.
    const MIN_GAIN: f64 = 1e-10;
    let d = c.d;
    let big = d * d;
    let cm = hermitian_part(&c.mat);
    let neg = -hermitian_part(residual);
    let start = if frob(&neg) > 1e-14 && trace(&neg).re > 0.0 {
        project_ppt_states(&neg, d)
    } else {
        CMatrix::identity(big, big).unscale(big as f64)
    };

    let mut best = WitnessCertificate::evaluate(start, c);
    let step0 = 0.5 / op_norm(&cm).max(f64::MIN_POSITIVE);
    let mut step = step0;
    for _ in 0..refine_iters {
        let cand = project_ppt_states(&(&best.rho - cm.scale(step)), d);
        let cand = WitnessCertificate::evaluate(cand, c);
        let ppt = cand.min_eig_rho >= -tol.ppt_tol && cand.min_eig_rho_pt >= -tol.ppt_tol;
        if ppt && cand.objective < best.objective - MIN_GAIN {
            best = cand;
        } else if best.is_valid(tol) {
            break;
        } else {
            step *= 0.5;
            if step < step0 * 1e-12 {
                break;
            }
        }
    }

    if best.is_valid(tol) {
        Ok(best)
    } else {
        Err(Error::WitnessSearchFailed {
            best_objective: best.objective,
            min_eig: best.min_eig_rho,
            min_eig_pt: best.min_eig_rho_pt,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecomposabilityVerdict {
    /// A decomposition with distance below `dist_tol` was found.
    Decomposable,
    /// A valid PPT witness certifies non-decomposability.
    NonDecomposable,
    /// Positive distance but no certificate.
    Undetermined,
}

#[derive(Debug, Clone)]
pub struct AnalysisReport {
    pub cp: Result<CpVerdict>,
    pub cocp: Result<CpVerdict>,
    pub positivity: Result<ProbeResult>,
    pub decomposition: Result<Decomposition>,
    pub witness: Option<Result<WitnessCertificate>>,
    pub decomposable: Option<DecomposabilityVerdict>,
    pub tolerances: Tolerances,
}

impl AnalysisReport {
    /// `Some(false)` when the probe refuted positivity, `Some(true)` when
    /// it found no violation (or the map is CP).
    pub fn positive(&self) -> Option<bool> {
        if let Ok(v) = &self.cp {
            if v.holds {
                return Some(true);
            }
        }
        self.positivity
            .as_ref()
            .ok()
            .map(|p| p.min_value >= -self.tolerances.cp_tol)
    }

    pub fn is_cp(&self) -> Option<bool> {
        self.cp.as_ref().ok().map(|v| v.holds)
    }

    pub fn is_cocp(&self) -> Option<bool> {
        self.cocp.as_ref().ok().map(|v| v.holds)
    }
}

/// Runs every check; failures are recorded per check rather than aborting.
pub fn classify<R: Rng + ?Sized>(
    s: &SuperOp,
    tol: &Tolerances,
    probe: ProbeSettings,
    rng: &mut R,
) -> AnalysisReport {
    let cp = is_cp(s, tol);
    let cocp = is_cocp(s, tol);
    let positivity = positivity_probe(s, probe, rng);
    let ch = s.choi();
    let decomposition = decomposability_project(&ch, tol.max_iters);
    let mut witness = None;
    let decomposable = match &decomposition {
        Ok(dec) if dec.is_decomposable(tol.dist_tol) => Some(DecomposabilityVerdict::Decomposable),
        Ok(dec) => {
            let w = extract_witness(&ch, &dec.residual(&ch), tol.refine_iters, tol);
            let verdict = if w.is_ok() {
                DecomposabilityVerdict::NonDecomposable
            } else {
                DecomposabilityVerdict::Undetermined
            };
            witness = Some(w);
            Some(verdict)
        }
        Err(_) => None,
    };
    AnalysisReport {
        cp,
        cocp,
        positivity,
        decomposition,
        witness,
        decomposable,
        tolerances: *tol,
    }
}

/// Reduction map `a ↦ trace(a) I - a`: positive, not CP for `d ≥ 2`.
pub fn reduction_map(d: usize) -> SuperOp {
    SuperOp::from_function(d, |a| {
        CMatrix::identity(d, d) * crate::linalg::trace(a) - a
    })
    .expect("linear")
}
