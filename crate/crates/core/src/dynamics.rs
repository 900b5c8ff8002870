//! Finite-range potentials, local Hamiltonians and Heisenberg dynamics.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::chain::{pauli, pauli_string, region_embed, ChainConfig, Region};
use crate::error::{Error, Result};
use crate::linalg::{expm_herm, frob, hermiticity_violation, op_norm, CMatrix};
use crate::projection::ProjectionMap;
use crate::superop::SuperOp;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialKind {
    /// `J σ1^x σ1^{x+1}` bonds and a field `h σ2^x`.
    IsingTransverse,
    /// `J (σ2σ2 + σ3σ3)` bonds and a field `h σ1^x`.
    Xy,
    /// `J (σ1σ1 + σ2σ2 + σ3σ3)` bonds and a field `h σ1^x`.
    Heisenberg,
    /// No predefined terms.
    Custom,
}

impl PotentialKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            PotentialKind::IsingTransverse => "ising_transverse",
            PotentialKind::Xy => "xy",
            PotentialKind::Heisenberg => "heisenberg",
            PotentialKind::Custom => "custom",
        }
    }
}

impl fmt::Display for PotentialKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PotentialKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ising_transverse" | "ising" => Ok(PotentialKind::IsingTransverse),
            "xy" => Ok(PotentialKind::Xy),
            "heisenberg" => Ok(PotentialKind::Heisenberg),
            "custom" => Ok(PotentialKind::Custom),
            other => Err(Error::UnknownPotential(other.to_string())),
        }
    }
}

/// Interaction terms `Φ_X`, each Hermitian on `2^{|X|}` dimensions.
#[derive(Debug, Clone)]
pub struct Potential {
    terms: BTreeMap<Region, CMatrix>,
    cfg: ChainConfig,
    range: usize,
}

impl Potential {
    pub fn empty(cfg: ChainConfig) -> Self {
        Self {
            terms: BTreeMap::new(),
            cfg,
            range: 0,
        }
    }

    /// Adds `op` to `Φ_X` (terms on the same region accumulate).
    pub fn add_term(&mut self, region: Region, op: CMatrix) -> Result<()> {
        if region.is_empty() {
            return Err(Error::EmptyRegion);
        }
        for &x in region.sites() {
            self.cfg.check_site(x)?;
        }
        if op.shape() != (region.dim(), region.dim()) {
            return Err(Error::DimensionMismatch {
                expected: region.dim(),
                got: op.nrows(),
            });
        }
        if op.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParameter("non-finite interaction term".into()));
        }
        let violation = hermiticity_violation(&op);
        let bound = 1e-12 * frob(&op).max(1.0);
        if violation > bound {
            return Err(Error::NotHermitian { violation, bound });
        }
        if frob(&op) > 0.0 {
            self.range = self.range.max(region.diam());
        }
        self.terms
            .entry(region)
            .and_modify(|t| *t += &op)
            .or_insert(op);
        Ok(())
    }

    /// Adds `coeff · σ_{p_0} ⊗ … ` on `sites` (one Pauli index per site).
    pub fn add_pauli_term(&mut self, sites: &[usize], paulis: &[usize], coeff: f64) -> Result<()> {
        if sites.len() != paulis.len() {
            return Err(Error::InvalidParameter(format!(
                "{} sites but {} Pauli indices",
                sites.len(),
                paulis.len()
            )));
        }
        let mut pairs: Vec<(usize, usize)> = sites.iter().copied().zip(paulis.iter().copied()).collect();
        pairs.sort_unstable();
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidParameter("repeated site in Pauli term".into()));
        }
        let region = Region::new(pairs.iter().map(|p| p.0));
        let op = pauli_string(&pairs.iter().map(|p| p.1).collect::<Vec<_>>())?.scale(coeff);
        self.add_term(region, op)
    }

    pub fn terms(&self) -> &BTreeMap<Region, CMatrix> {
        &self.terms
    }

    pub fn cfg(&self) -> &ChainConfig {
        &self.cfg
    }

    pub fn range(&self) -> usize {
        self.range
    }

    /// `sup_i Σ_{X ∋ i} w(X) ‖Φ_X‖`.
    fn weighted_norm<W: Fn(&Region) -> f64>(&self, weight: W) -> f64 {
        let norms: Vec<(&Region, f64)> = self
            .terms
            .iter()
            .map(|(x, op)| (x, weight(x) * op_norm(op)))
            .collect();
        (0..self.cfg.n_sites())
            .map(|i| {
                norms
                    .iter()
                    .filter(|(x, _)| x.contains(i))
                    .map(|(_, n)| n)
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    /// `H_Λ = Σ_{X ⊆ Λ} Φ_X` as an operator on the sites of `lambda`.
    pub fn hamiltonian(&self, lambda: &Region) -> Result<CMatrix> {
        for &x in lambda.sites() {
            self.cfg.check_site(x)?;
        }
        let d = lambda.dim();
        let mut h = CMatrix::zeros(d, d);
        for (x, op) in self.terms.iter().filter(|(x, _)| x.is_subset(lambda)) {
            h += region_embed(op, x, lambda)?;
        }
        Ok(h)
    }

    pub fn full_hamiltonian(&self) -> Result<CMatrix> {
        self.hamiltonian(&self.cfg.full_region())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Couplings {
    pub j: f64,
    pub h: f64,
}

pub fn standard_potential(kind: PotentialKind, params: Couplings, cfg: ChainConfig) -> Result<Potential> {
    if !params.j.is_finite() || !params.h.is_finite() {
        return Err(Error::InvalidParameter("couplings must be finite".into()));
    }
    let mut p = Potential::empty(cfg);
    let (bond, field): (&[usize], Option<usize>) = match kind {
        PotentialKind::IsingTransverse => (&[1], Some(2)),
        PotentialKind::Xy => (&[2, 3], Some(1)),
        PotentialKind::Heisenberg => (&[1, 2, 3], Some(1)),
        PotentialKind::Custom => return Ok(p),
    };
    let n = cfg.n_sites();
    if params.j != 0.0 {
        for x in 0..n.saturating_sub(1) {
            for &s in bond {
                p.add_pauli_term(&[x, x + 1], &[s, s], params.j)?;
            }
        }
    }
    if let (Some(s), true) = (field, params.h != 0.0) {
        for x in 0..n {
            p.add_term(Region::new([x]), pauli(s)?.scale(params.h))?;
        }
    }
    Ok(p)
}

/// `sup_i Σ_{X ∋ i} ‖Φ_X‖`.
pub fn norm1(p: &Potential) -> f64 {
    p.weighted_norm(|_| 1.0)
}

/// `sup_i Σ_{X ∋ i} e^{λ|X|} ‖Φ_X‖`, `λ > 0`.
pub fn norm_exp(p: &Potential, lambda: f64) -> Result<f64> {
    if lambda.is_nan() || lambda <= 0.0 || !lambda.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "decay rate must be positive and finite, got {lambda}"
        )));
    }
    Ok(p.weighted_norm(|x| (lambda * x.len() as f64).exp()))
}

pub fn hamiltonian(p: &Potential, lambda: &Region) -> Result<CMatrix> {
    p.hamiltonian(lambda)
}

/// `α_t(a) = e^{itH} a e^{-itH}` as a superoperator.
pub fn evolve_map(h: &CMatrix, t: f64) -> Result<SuperOp> {
    let u = expm_herm(h, t)?;
    SuperOp::conjugation(&u)
}

/// `P ∘ α_t`.
pub fn reduced_map(p: &ProjectionMap, h: &CMatrix, t: f64) -> Result<SuperOp> {
    if h.shape() != (p.dim(), p.dim()) {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            got: h.nrows(),
        });
    }
    if t < 0.0 {
        log::warn!("reduced map requested at negative time t = {t}");
    }
    p.to_superop().compose(&evolve_map(h, t)?)
}

/// Heisenberg dynamics at a fixed time together with its generator.
#[derive(Debug, Clone)]
pub struct DynamicsMap {
    pub hamiltonian: CMatrix,
    pub t: f64,
    pub superop: SuperOp,
}

impl DynamicsMap {
    pub fn new(hamiltonian: CMatrix, t: f64) -> Result<Self> {
        let superop = evolve_map(&hamiltonian, t)?;
        Ok(Self {
            hamiltonian,
            t,
            superop,
        })
    }
}
