//! Trace-orthogonal projection onto a spin factor.
//!
//! `P(a) = Σ_j <e_j, a> e_j` over the factor basis `{I, c_1, …, c_k}`. It is
//! unital, idempotent, trace preserving and self-adjoint for the trace
//! pairing. It is positive because for a density matrix `ρ` the Bloch-type
//! coefficients `t_j = trace(c_j ρ)` satisfy `Σ t_j² ≤ 1`, and
//! `I + Σ t_j c_j ⪰ 0` whenever that holds for anticommuting symmetries.

use crate::error::{Error, Result};
use crate::fermion::SpinFactor;
use crate::linalg::{frob, hs_inner, trace, CMatrix};
use crate::superop::SuperOp;

#[derive(Debug, Clone)]
pub struct ProjectionMap {
    factor: SpinFactor,
    d: usize,
}

impl ProjectionMap {
    pub fn new(factor: SpinFactor) -> Result<Self> {
        factor.check_orthonormal(1e-12)?;
        let d = factor.dim();
        Ok(Self { factor, d })
    }

    pub fn factor(&self) -> &SpinFactor {
        &self.factor
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn apply(&self, a: &CMatrix) -> Result<CMatrix> {
        if a.shape() != (self.d, self.d) {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                got: a.nrows(),
            });
        }
        self.factor.project(a)
    }

    /// `Σ_j |vec e_j⟩⟨vec e_j| / d`.
    pub fn to_superop(&self) -> SuperOp {
        let d = self.d;
        let mut mat = CMatrix::zeros(d * d, d * d);
        for e in self.factor.basis() {
            let v = crate::superop::vectorize(e);
            mat += &v * v.adjoint();
        }
        SuperOp::from_matrix(d, mat.unscale(d as f64)).expect("d² square")
    }

    /// `Σ_j trace(c_j ρ)²` over the generators (the identity excluded).
    pub fn bloch_norm_sqr(&self, rho: &CMatrix) -> Result<f64> {
        let mut s = 0.0;
        for cj in self.factor.generators().symmetries() {
            let t = hs_inner(cj, rho)? * self.d as f64;
            s += t.re * t.re;
        }
        Ok(s)
    }
}

pub fn build_projection(factor: SpinFactor) -> Result<ProjectionMap> {
    ProjectionMap::new(factor)
}

/// Residuals of the structural identities of a projection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionResiduals {
    pub idempotence: f64,
    pub unitality: f64,
    pub trace_preservation: f64,
    pub self_adjointness: f64,
    pub range: f64,
}

impl ProjectionResiduals {
    pub fn max(&self) -> f64 {
        [
            self.idempotence,
            self.unitality,
            self.trace_preservation,
            self.self_adjointness,
            self.range,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Checks `P² = P`, `P(I) = I`, trace preservation, self-adjointness and
/// `a - P(a) ⊥ span` on the superoperator and on the supplied probes.
pub fn projection_residuals(p: &ProjectionMap, probes: &[CMatrix]) -> Result<ProjectionResiduals> {
    let s = p.to_superop();
    let sq = s.compose(&s)?;
    let idempotence = frob(&(sq.matrix() - s.matrix()));
    let id = CMatrix::identity(p.d, p.d);
    let unitality = frob(&(p.apply(&id)? - &id));
    let mut trace_preservation: f64 = 0.0;
    let mut self_adjointness: f64 = 0.0;
    let mut range: f64 = 0.0;
    for (k, a) in probes.iter().enumerate() {
        let pa = p.apply(a)?;
        trace_preservation = trace_preservation.max((trace(&pa) - trace(a)).norm());
        let b = &probes[(k + 1) % probes.len()];
        let pb = p.apply(b)?;
        let lhs = hs_inner(&pa, b)?;
        let rhs = hs_inner(a, &pb)?;
        self_adjointness = self_adjointness.max((lhs - rhs).norm());
        let diff = a - &pa;
        for e in p.factor.basis() {
            range = range.max(hs_inner(e, &diff)?.norm());
        }
    }
    Ok(ProjectionResiduals {
        idempotence,
        unitality,
        trace_preservation,
        self_adjointness,
        range,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{pauli, ChainConfig};
    use crate::fermion::build_spin_factor;

    fn proj(n: usize) -> ProjectionMap {
        build_projection(build_spin_factor(&ChainConfig::new(n).unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn unital() {
        let p = proj(2);
        let id = CMatrix::identity(4, 4);
        assert_eq!(p.apply(&id).unwrap(), id);
    }

    #[test]
    fn one_site_examples() {
        let p = proj(1);
        let s1 = pauli(1).unwrap();
        let s3 = pauli(3).unwrap();
        assert!(frob(&p.apply(&s3).unwrap()) < 1e-15);
        let a = &s1 + s3.scale(5.0);
        assert!(frob(&(p.apply(&a).unwrap() - s1)) < 1e-15);
    }

    #[test]
    fn fixes_its_range() {
        let p = proj(3);
        for e in p.factor().basis() {
            assert!(frob(&(p.apply(e).unwrap() - e)) < 1e-14);
        }
    }

    #[test]
    fn superop_matches_apply() {
        let p = proj(2);
        let s = p.to_superop();
        let a = crate::chain::pauli_string(&[2, 3]).unwrap() + crate::fermion::majorana(1, &ChainConfig::new(2).unwrap()).unwrap();
        assert!(frob(&(s.apply(&a).unwrap() - p.apply(&a).unwrap())) < 1e-14);
    }

    #[test]
    fn dimension_mismatch() {
        assert!(proj(1).apply(&CMatrix::identity(4, 4)).is_err());
    }
}
