//! Dense complex matrix kernel.
//!
//! Every observable, Hamiltonian and superoperator in the crate is a
//! [`CMatrix`]. The Hermitian eigensolver is nalgebra's symmetric eigen
//! decomposition (Householder tridiagonalization followed by implicit QR);
//! this module adds the validation, ordering and derived operations.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::config::Tolerances;
use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(d: usize) -> CMatrix {
    CMatrix::identity(d, d)
}

pub fn zeros(d: usize) -> CMatrix {
    CMatrix::zeros(d, d)
}

/// Matrix unit `E_ij` of size `d`.
pub fn matrix_unit(d: usize, i: usize, j: usize) -> CMatrix {
    let mut e = zeros(d);
    e[(i, j)] = ONE;
    e
}

/// Build a square matrix from row-major entries.
pub fn from_rows(d: usize, entries: &[Complex64]) -> CMatrix {
    assert_eq!(entries.len(), d * d, "from_rows: wrong entry count");
    CMatrix::from_row_slice(d, d, entries)
}

pub fn dagger(a: &CMatrix) -> CMatrix {
    a.adjoint()
}

pub fn frob(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn trace(a: &CMatrix) -> Complex64 {
    a.diagonal().iter().sum()
}

pub fn ensure_square(a: &CMatrix) -> Result<usize> {
    if a.nrows() != a.ncols() {
        return Err(Error::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    Ok(a.nrows())
}

pub fn ensure_same_dim(a: &CMatrix, b: &CMatrix) -> Result<usize> {
    let d = ensure_square(a)?;
    let e = ensure_square(b)?;
    if d != e {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: e,
        });
    }
    Ok(d)
}

/// Kronecker product, row index `i*p + k` for `a` of size m×n and `b` p×q.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Kronecker product of a list of factors, leftmost factor most significant.
pub fn kron_all<'a, I>(factors: I) -> CMatrix
where
    I: IntoIterator<Item = &'a CMatrix>,
{
    factors
        .into_iter()
        .fold(identity(1), |acc, f| kron(&acc, f))
}

/// Normalized Hilbert-Schmidt pairing `trace(a^dag b) / d`.
pub fn hs_inner(a: &CMatrix, b: &CMatrix) -> Result<Complex64> {
    let d = ensure_same_dim(a, b)?;
    let s: Complex64 = a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum();
    Ok(s / d as f64)
}

pub fn hermiticity_violation(a: &CMatrix) -> f64 {
    frob(&(a - a.adjoint()))
}

pub fn is_hermitian(a: &CMatrix, rel_tol: f64) -> bool {
    a.is_square() && hermiticity_violation(a) <= rel_tol * frob(a).max(f64::MIN_POSITIVE)
}

/// `(a + a^dag) / 2`.
pub fn hermitian_part(a: &CMatrix) -> CMatrix {
    (a + a.adjoint()).scale(0.5)
}

#[derive(Debug, Clone)]
pub struct EigResult {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Unitary; column `k` belongs to `eigenvalues[k]`.
    pub eigenvectors: CMatrix,
}

impl EigResult {
    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().expect("empty spectrum")
    }

    pub fn eigenvector(&self, k: usize) -> nalgebra::DVector<Complex64> {
        self.eigenvectors.column(k).into_owned()
    }

    /// `V f(Λ) V^dag` for a real spectral function.
    pub fn spectral_map<F>(&self, f: F) -> CMatrix
    where
        F: Fn(f64) -> Complex64,
    {
        let v = &self.eigenvectors;
        let mut scaled = v.clone();
        for (k, &lam) in self.eigenvalues.iter().enumerate() {
            let w = f(lam);
            for z in scaled.column_mut(k).iter_mut() {
                *z *= w;
            }
        }
        scaled * v.adjoint()
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.spectral_map(|l| c(l, 0.0))
    }
}

/// Hermitian eigendecomposition with the default Hermiticity tolerance.
pub fn herm_eig(a: &CMatrix) -> Result<EigResult> {
    herm_eig_with(a, Tolerances::default().herm_tol)
}

pub fn herm_eig_with(a: &CMatrix, herm_tol: f64) -> Result<EigResult> {
    ensure_square(a)?;
    let violation = hermiticity_violation(a);
    let bound = herm_tol * frob(a);
    if violation > bound {
        return Err(Error::NotHermitian { violation, bound });
    }
    Ok(eig_unchecked(&hermitian_part(a)))
}

/// Eigendecomposition of a matrix already known to be Hermitian.
pub(crate) fn eig_unchecked(a: &CMatrix) -> EigResult {
    let d = a.nrows();
    let se = a.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| se.eigenvalues[i].total_cmp(&se.eigenvalues[j]));
    let eigenvalues = order.iter().map(|&k| se.eigenvalues[k]).collect();
    let mut eigenvectors = zeros(d);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &se.eigenvectors.column(src));
    }
    EigResult {
        eigenvalues,
        eigenvectors,
    }
}

/// Smallest eigenvalue of the Hermitian part of `a`.
pub fn min_eig(a: &CMatrix) -> f64 {
    let h = hermitian_part(a);
    h.symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// `exp(i t h)` for Hermitian `h`.
pub fn expm_herm(h: &CMatrix, t: f64) -> Result<CMatrix> {
    let eig = herm_eig(h)?;
    Ok(eig.spectral_map(|l| Complex64::from_polar(1.0, t * l)))
}

/// Largest singular value.
pub fn op_norm(a: &CMatrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.singular_values().iter().copied().fold(0.0, f64::max)
}

/// Orthogonal projection onto the positive semidefinite cone in the
/// Frobenius norm (negative eigenvalues clipped to zero).
pub fn psd_projection(a: &CMatrix) -> CMatrix {
    let eig = eig_unchecked(&hermitian_part(a));
    eig.spectral_map(|l| c(l.max(0.0), 0.0))
}

/// Commutator `ab - ba`.
pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// Anticommutator `ab + ba`.
pub fn anticommutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b + b * a
}
