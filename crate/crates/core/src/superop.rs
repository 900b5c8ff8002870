//! Linear maps on `d×d` operators.
//!
//! Operators are vectorized by stacking columns, `vec(a)[i + j d] = a_ij`,
//! so that `a ↦ X a Y` has matrix `Yᵀ ⊗ X`. The Choi matrix is the
//! unnormalized `C = Σ_ij E_ij ⊗ Λ(E_ij)` with the image in the second
//! factor; `Λ` is CP iff `C ⪰ 0`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{c, ensure_square, frob, kron, matrix_unit, CMatrix, ZERO};

pub fn vectorize(a: &CMatrix) -> nalgebra::DVector<num_complex::Complex64> {
    // nalgebra storage is column-major, which is exactly column stacking.
    nalgebra::DVector::from_column_slice(a.as_slice())
}

pub fn unvectorize(v: &[num_complex::Complex64], d: usize) -> CMatrix {
    CMatrix::from_column_slice(d, d, v)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuperOp {
    d: usize,
    mat: CMatrix,
}

impl SuperOp {
    pub fn from_matrix(d: usize, mat: CMatrix) -> Result<Self> {
        let n = ensure_square(&mat)?;
        if n != d * d {
            return Err(Error::DimensionMismatch {
                expected: d * d,
                got: n,
            });
        }
        Ok(Self { d, mat })
    }

    /// Assembles the matrix column by column from `f` on matrix units, then
    /// checks linearity on two random combinations.
    pub fn from_function<F>(d: usize, f: F) -> Result<Self>
    where
        F: Fn(&CMatrix) -> CMatrix,
    {
        let mut mat = CMatrix::zeros(d * d, d * d);
        for j in 0..d {
            for i in 0..d {
                let img = f(&matrix_unit(d, i, j));
                if img.shape() != (d, d) {
                    return Err(Error::DimensionMismatch {
                        expected: d,
                        got: img.nrows(),
                    });
                }
                mat.set_column(i + j * d, &vectorize(&img));
            }
        }
        let op = Self { d, mat };

        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..2 {
            let probe = CMatrix::from_fn(d, d, |_, _| {
                c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            });
            let direct = f(&probe);
            let via = op.apply(&probe)?;
            let err = frob(&(&direct - via)) / frob(&direct).max(1.0);
            if err > 1e-10 {
                return Err(Error::NonLinear(err));
            }
        }
        Ok(op)
    }

    pub fn identity(d: usize) -> Self {
        Self {
            d,
            mat: CMatrix::identity(d * d, d * d),
        }
    }

    /// `a ↦ aᵀ`.
    pub fn transpose_map(d: usize) -> Self {
        let mut mat = CMatrix::zeros(d * d, d * d);
        for i in 0..d {
            for j in 0..d {
                mat[(j + i * d, i + j * d)] = c(1.0, 0.0);
            }
        }
        Self { d, mat }
    }

    /// `a ↦ x a y`.
    pub fn sandwich(x: &CMatrix, y: &CMatrix) -> Result<Self> {
        let d = crate::linalg::ensure_same_dim(x, y)?;
        Ok(Self {
            d,
            mat: kron(&y.transpose(), x),
        })
    }

    /// `a ↦ u a u^dag`.
    pub fn conjugation(u: &CMatrix) -> Result<Self> {
        Self::sandwich(u, &u.adjoint())
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn apply(&self, a: &CMatrix) -> Result<CMatrix> {
        if a.shape() != (self.d, self.d) {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                got: a.nrows(),
            });
        }
        let v = &self.mat * vectorize(a);
        Ok(unvectorize(v.as_slice(), self.d))
    }

    /// `self ∘ inner` (apply `inner` first).
    pub fn compose(&self, inner: &SuperOp) -> Result<SuperOp> {
        if self.d != inner.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                got: inner.d,
            });
        }
        Ok(Self {
            d: self.d,
            mat: &self.mat * &inner.mat,
        })
    }

    /// Adjoint with respect to `trace(a^dag b)`.
    pub fn adjoint(&self) -> SuperOp {
        Self {
            d: self.d,
            mat: self.mat.adjoint(),
        }
    }

    pub fn scale(&self, s: f64) -> SuperOp {
        Self {
            d: self.d,
            mat: self.mat.scale(s),
        }
    }

    pub fn add(&self, other: &SuperOp) -> Result<SuperOp> {
        if self.d != other.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                got: other.d,
            });
        }
        Ok(Self {
            d: self.d,
            mat: &self.mat + &other.mat,
        })
    }

    pub fn choi(&self) -> ChoiMatrix {
        choi(self)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix {
    pub d: usize,
    pub mat: CMatrix,
}

impl ChoiMatrix {
    pub fn partial_transpose(&self) -> CMatrix {
        partial_transpose(&self.mat, self.d)
    }

    /// Rebuilds the superoperator; the inverse of [`choi`].
    pub fn to_superop(&self) -> SuperOp {
        let d = self.d;
        let mut mat = CMatrix::zeros(d * d, d * d);
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        mat[(k + l * d, i + j * d)] = self.mat[(i * d + k, j * d + l)];
                    }
                }
            }
        }
        SuperOp { d, mat }
    }
}

/// `C = Σ_ij E_ij ⊗ Λ(E_ij)`.
pub fn choi(s: &SuperOp) -> ChoiMatrix {
    let d = s.d;
    let mut mat = CMatrix::from_element(d * d, d * d, ZERO);
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                for l in 0..d {
                    mat[(i * d + k, j * d + l)] = s.mat[(k + l * d, i + j * d)];
                }
            }
        }
    }
    ChoiMatrix { d, mat }
}

/// Transpose on the second tensor factor of a `d²×d²` matrix.
pub fn partial_transpose(m: &CMatrix, d: usize) -> CMatrix {
    assert_eq!(m.shape(), (d * d, d * d), "partial_transpose: shape");
    CMatrix::from_fn(d * d, d * d, |r, col| {
        let (i, k) = (r / d, r % d);
        let (j, l) = (col / d, col % d);
        m[(i * d + l, j * d + k)]
    })
}
