//! Quasi-local structure of a one-sided spin-1/2 chain.
//!
//! Pauli matrices follow the labeling used throughout this crate, which is
//! NOT the textbook one:
//!
//! ```text
//! σ0 = I,  σ1 = [[1, 0], [0, -1]],  σ2 = [[0, 1], [1, 0]],  σ3 = [[0, i], [-i, 0]]
//! ```
//!
//! so `σ1` is diagonal and `σ3 = -Y`. Site 0 is the leftmost (most
//! significant) Kronecker factor.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ensure_same_dim, ensure_square, identity, zeros, CMatrix, I, ONE, ZERO};

pub const DEFAULT_MAX_SITES: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainConfig {
    n_sites: usize,
    max_sites: usize,
}

impl ChainConfig {
    pub fn new(n_sites: usize) -> Result<Self> {
        Self::with_max_sites(n_sites, DEFAULT_MAX_SITES)
    }

    /// Same as [`ChainConfig::new`] with a different size guard.
    pub fn with_max_sites(n_sites: usize, max_sites: usize) -> Result<Self> {
        // 2^n must fit comfortably; superoperators are 4^n square.
        if n_sites == 0 || n_sites > max_sites || n_sites > 15 {
            return Err(Error::ChainSize { n_sites, max_sites });
        }
        Ok(Self { n_sites, max_sites })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        1 << self.n_sites
    }

    pub fn full_region(&self) -> Region {
        Region(Vec::from_iter(0..self.n_sites))
    }

    pub fn check_site(&self, x: usize) -> Result<()> {
        if x >= self.n_sites {
            return Err(Error::SiteOutOfRange {
                site: x,
                n_sites: self.n_sites,
            });
        }
        Ok(())
    }
}

/// A finite set of sites, stored sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Region(Vec<usize>);

impl Region {
    pub fn new<I: IntoIterator<Item = usize>>(sites: I) -> Self {
        let mut v: Vec<usize> = sites.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Region(v)
    }

    pub fn sites(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    pub fn is_subset(&self, other: &Region) -> bool {
        self.0.iter().all(|&x| other.contains(x))
    }

    /// `max - min`; zero for singletons and the empty region.
    pub fn diam(&self) -> usize {
        match (self.0.first(), self.0.last()) {
            (Some(a), Some(b)) => b - a,
            _ => 0,
        }
    }

    pub fn dim(&self) -> usize {
        1 << self.0.len()
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

/// Pauli matrix `σ_i`, `i ∈ {0, 1, 2, 3}`, in the crate's labeling.
pub fn pauli(i: usize) -> Result<CMatrix> {
    let e = match i {
        0 => [ONE, ZERO, ZERO, ONE],
        1 => [ONE, ZERO, ZERO, -ONE],
        2 => [ZERO, ONE, ONE, ZERO],
        3 => [ZERO, I, -I, ZERO],
        _ => return Err(Error::PauliIndex(i)),
    };
    Ok(CMatrix::from_row_slice(2, 2, &e))
}

/// `I^{⊗x} ⊗ op ⊗ I^{⊗(n-x-1)}`.
pub fn site_embed(op: &CMatrix, x: usize, cfg: &ChainConfig) -> Result<CMatrix> {
    cfg.check_site(x)?;
    if ensure_square(op)? != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: op.nrows(),
        });
    }
    let left = identity(1 << x);
    let right = identity(1 << (cfg.n_sites - x - 1));
    Ok(left.kronecker(op).kronecker(&right))
}

/// Embeds an operator on `inner` into the algebra of `outer`, acting as the
/// identity on `outer \ inner`.
pub fn region_embed(a: &CMatrix, inner: &Region, outer: &Region) -> Result<CMatrix> {
    if !inner.is_subset(outer) {
        return Err(Error::RegionNotContained {
            inner: inner.0.clone(),
            outer: outer.0.clone(),
        });
    }
    let da = ensure_square(a)?;
    if da != inner.dim() {
        return Err(Error::DimensionMismatch {
            expected: inner.dim(),
            got: da,
        });
    }
    let m = outer.len();
    // Bit shift (from the least significant end) of each outer slot.
    let inner_shifts: Vec<usize> = inner
        .0
        .iter()
        .map(|x| m - 1 - outer.0.binary_search(x).unwrap())
        .collect();
    let inner_mask: usize = inner_shifts.iter().map(|s| 1 << s).sum();
    let k = inner.len();
    let compress = |idx: usize| -> usize {
        inner_shifts
            .iter()
            .enumerate()
            .map(|(slot, &s)| ((idx >> s) & 1) << (k - 1 - slot))
            .sum()
    };

    let d = outer.dim();
    let mut out = zeros(d);
    for r in 0..d {
        let rr = compress(r);
        for col in 0..d {
            if (r & !inner_mask) != (col & !inner_mask) {
                continue;
            }
            out[(r, col)] = a[(rr, compress(col))];
        }
    }
    Ok(out)
}

/// Jordan product `(ab + ba) / 2`.
pub fn jordan_product(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    ensure_same_dim(a, b)?;
    Ok((a * b + b * a).scale(0.5))
}

/// Pauli string `σ_{p_0} ⊗ … ⊗ σ_{p_{n-1}}`.
pub fn pauli_string(indices: &[usize]) -> Result<CMatrix> {
    let factors = indices.iter().map(|&i| pauli(i)).collect::<Result<Vec<_>>>()?;
    Ok(crate::linalg::kron_all(factors.iter()))
}
