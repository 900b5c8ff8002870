//! Jordan–Wigner fermions, Majorana symmetries and spin factors.
//!
//! The string operator is `σ3` on every site left of `x`. Majoranas are kept
//! unnormalized, `c_{2x} = σ3^{⊗x} ⊗ σ1 ⊗ I…` and
//! `c_{2x+1} = σ3^{⊗x} ⊗ σ2 ⊗ I…`, so that `c² = I`; the field-theoretic
//! coordinate and momentum observables are `c / √2`.

use serde::{Deserialize, Serialize};

use crate::chain::{pauli, ChainConfig};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{
    anticommutator, c, ensure_square, frob, hs_inner, identity, kron_all, CMatrix,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

/// Jordan–Wigner string on sites `0..x` followed by `op` at `x`.
fn with_string(op: &CMatrix, x: usize, cfg: &ChainConfig) -> Result<CMatrix> {
    cfg.check_site(x)?;
    let s3 = pauli(3)?;
    let id = identity(2);
    let mut factors = Vec::with_capacity(cfg.n_sites());
    factors.extend(std::iter::repeat_n(&s3, x));
    factors.push(op);
    factors.extend(std::iter::repeat_n(&id, cfg.n_sites() - x - 1));
    Ok(kron_all(factors))
}

/// `σ±` on one site: `(σ1 ± i σ2) / 2`.
pub fn sigma_pm_local(sign: Sign) -> CMatrix {
    let s1 = pauli(1).unwrap();
    let s2 = pauli(2).unwrap();
    let phase = match sign {
        Sign::Plus => c(0.0, 1.0),
        Sign::Minus => c(0.0, -1.0),
    };
    (s1 + s2 * phase).scale(0.5)
}

/// `σ±` embedded at site `x`.
pub fn sigma_pm(sign: Sign, x: usize, cfg: &ChainConfig) -> Result<CMatrix> {
    crate::chain::site_embed(&sigma_pm_local(sign), x, cfg)
}

/// Annihilator `a_x = σ3^{⊗x} ⊗ σ- ⊗ I…`; the creator is its adjoint.
pub fn annihilation(x: usize, cfg: &ChainConfig) -> Result<CMatrix> {
    with_string(&sigma_pm_local(Sign::Minus), x, cfg)
}

pub fn creation(x: usize, cfg: &ChainConfig) -> Result<CMatrix> {
    Ok(annihilation(x, cfg)?.adjoint())
}

/// Majorana symmetry `c_j`, `0 <= j < 2 n_sites` (even `j`: σ1, odd: σ2).
pub fn majorana(j: usize, cfg: &ChainConfig) -> Result<CMatrix> {
    let count = 2 * cfg.n_sites();
    if j >= count {
        return Err(Error::MajoranaIndex { index: j, count });
    }
    let local = pauli(1 + j % 2)?;
    with_string(&local, j / 2, cfg)
}

pub fn majoranas(cfg: &ChainConfig) -> Vec<CMatrix> {
    (0..2 * cfg.n_sites())
        .map(|j| majorana(j, cfg).expect("index in range"))
        .collect()
}

/// A validated family of pairwise anticommuting Hermitian unitaries,
/// none equal to `±I`.
#[derive(Debug, Clone)]
pub struct SpinSystem {
    symmetries: Vec<CMatrix>,
    dim: usize,
}

impl SpinSystem {
    pub fn symmetries(&self) -> &[CMatrix] {
        &self.symmetries
    }

    pub fn len(&self) -> usize {
        self.symmetries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symmetries.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

/// Checks `s = s^dag`, `s² = I`, `s ≠ ±I` and `s∘t = 0` for all members.
pub fn verify_spin_system(ops: Vec<CMatrix>) -> Result<SpinSystem> {
    verify_spin_system_with(ops, Tolerances::default().spin_tol)
}

pub fn verify_spin_system_with(ops: Vec<CMatrix>, tol: f64) -> Result<SpinSystem> {
    let Some(first) = ops.first() else {
        return Err(Error::InvalidParameter("empty spin system".into()));
    };
    let d = ensure_square(first)?;
    let id = identity(d);
    for (k, s) in ops.iter().enumerate() {
        let dk = ensure_square(s)?;
        if dk != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: dk,
            });
        }
        let fail = |axiom, magnitude| Error::SpinSystem {
            axiom,
            indices: vec![k],
            magnitude,
        };
        let herm = frob(&(s - s.adjoint()));
        if herm > tol {
            return Err(fail("s = s*", herm));
        }
        let sq = frob(&(s * s - &id));
        if sq > tol {
            return Err(fail("s·s = I", sq));
        }
        let dist = frob(&(s - &id)).min(frob(&(s + &id)));
        if dist <= tol {
            return Err(fail("s ≠ ±I", dist));
        }
    }
    for i in 0..ops.len() {
        for j in i + 1..ops.len() {
            let r = frob(&anticommutator(&ops[i], &ops[j])) * 0.5;
            if r > tol {
                return Err(Error::SpinSystem {
                    axiom: "s∘t = 0",
                    indices: vec![i, j],
                    magnitude: r,
                });
            }
        }
    }
    Ok(SpinSystem {
        symmetries: ops,
        dim: d,
    })
}

/// Real span of `{I, s_1, …, s_k}` for a spin system, with the basis
/// trace-orthonormal under the normalized Hilbert–Schmidt pairing.
#[derive(Debug, Clone)]
pub struct SpinFactor {
    basis: Vec<CMatrix>,
    generators: SpinSystem,
}

impl SpinFactor {
    pub fn from_spin_system(generators: SpinSystem) -> Result<Self> {
        Self::from_spin_system_with(generators, &Tolerances::default())
    }

    pub fn from_spin_system_with(generators: SpinSystem, tol: &Tolerances) -> Result<Self> {
        let mut basis = Vec::with_capacity(generators.len() + 1);
        basis.push(identity(generators.dim()));
        basis.extend(generators.symmetries().iter().cloned());
        let factor = SpinFactor { basis, generators };
        factor.check_orthonormal(tol.spin_tol)?;
        factor.check_jordan_closed(tol.spin_tol)?;
        Ok(factor)
    }

    pub fn basis(&self) -> &[CMatrix] {
        &self.basis
    }

    pub fn generators(&self) -> &SpinSystem {
        &self.generators
    }

    /// Dimension of the factor as a real vector space.
    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.generators.dim()
    }

    pub fn check_orthonormal(&self, tol: f64) -> Result<()> {
        for i in 0..self.basis.len() {
            for j in i..self.basis.len() {
                let g = hs_inner(&self.basis[i], &self.basis[j])?;
                let want = if i == j { 1.0 } else { 0.0 };
                let deviation = (g - c(want, 0.0)).norm();
                if deviation > tol {
                    return Err(Error::NotOrthonormal { i, j, deviation });
                }
            }
        }
        Ok(())
    }

    /// Coefficients `<e_j, a>` in the factor basis.
    pub fn coefficients(&self, a: &CMatrix) -> Result<Vec<num_complex::Complex64>> {
        self.basis.iter().map(|e| hs_inner(e, a)).collect()
    }

    /// Orthogonal projection of `a` onto the complex span of the basis.
    pub fn project(&self, a: &CMatrix) -> Result<CMatrix> {
        let coeffs = self.coefficients(a)?;
        let mut out = CMatrix::zeros(self.dim(), self.dim());
        for (w, e) in coeffs.iter().zip(&self.basis) {
            out += e * *w;
        }
        Ok(out)
    }

    /// Frobenius norm of the component of `a` orthogonal to the span.
    pub fn residual(&self, a: &CMatrix) -> Result<f64> {
        Ok(frob(&(a - self.project(a)?)))
    }

    fn check_jordan_closed(&self, tol: f64) -> Result<()> {
        for i in 0..self.basis.len() {
            for j in i..self.basis.len() {
                let p = crate::chain::jordan_product(&self.basis[i], &self.basis[j])?;
                let residual = self.residual(&p)?;
                if residual > tol {
                    return Err(Error::NotJordanClosed { i, j, residual });
                }
            }
        }
        Ok(())
    }

    /// Element `α I + Σ a_j c_j` from real coordinates.
    pub fn element(&self, coords: &[f64]) -> CMatrix {
        assert_eq!(coords.len(), self.basis.len());
        let mut out = CMatrix::zeros(self.dim(), self.dim());
        for (w, e) in coords.iter().zip(&self.basis) {
            out += e.scale(*w);
        }
        out
    }
}

/// The spin factor generated by the `2 n` Jordan–Wigner Majoranas.
pub fn build_spin_factor(cfg: &ChainConfig) -> Result<SpinFactor> {
    let system = verify_spin_system(majoranas(cfg))?;
    SpinFactor::from_spin_system(system)
}

/// Largest residual over the canonical anticommutation relations
/// `{a_x, a_y^dag} = δ_xy I`, `{a_x, a_y} = 0`, `{a_x^dag, a_y^dag} = 0`.
pub fn car_residual(cfg: &ChainConfig) -> Result<f64> {
    let d = cfg.dim();
    let id = identity(d);
    let a: Vec<CMatrix> = (0..cfg.n_sites())
        .map(|x| annihilation(x, cfg))
        .collect::<Result<_>>()?;
    let ad: Vec<CMatrix> = a.iter().map(|m| m.adjoint()).collect();
    let mut worst: f64 = 0.0;
    for x in 0..a.len() {
        for y in 0..a.len() {
            let mut mixed = anticommutator(&a[x], &ad[y]);
            if x == y {
                mixed -= &id;
            }
            worst = worst
                .max(frob(&mixed))
                .max(frob(&anticommutator(&a[x], &a[y])))
                .max(frob(&anticommutator(&ad[x], &ad[y])));
        }
    }
    Ok(worst)
}
