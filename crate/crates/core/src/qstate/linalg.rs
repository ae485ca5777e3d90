//! Dense complex linear algebra helpers built on nalgebra.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

const EIG_EPS: f64 = 1e-15;
const EIG_MAX_ITER: usize = 10_000;

/// Largest entrywise deviation `|m - m†|`.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// `(m + m†) / 2`.
pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

/// Eigendecomposition of a Hermitian matrix with eigenvalues in ascending order.
///
/// The input is symmetrized first, so only its Hermitian part is decomposed.
pub fn eigh(m: &CMatrix) -> Result<(DVector<f64>, CMatrix)> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::NotSquare(n, m.ncols()));
    }
    let eig = SymmetricEigen::try_new(hermitize(m), EIG_EPS, EIG_MAX_ITER).ok_or(Error::EigenFailure)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = DVector::from_iterator(n, order.iter().map(|&k| eig.eigenvalues[k]));
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok((values, vectors))
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn eigvalsh(m: &CMatrix) -> Result<DVector<f64>> {
    Ok(eigh(m)?.0)
}

/// Applies a real scalar function to the spectrum: `V f(Λ) V†`.
pub fn hermitian_map<F: Fn(f64) -> Complex64>(m: &CMatrix, f: F) -> Result<CMatrix> {
    let (values, vectors) = eigh(m)?;
    let n = values.len();
    let mut scaled = vectors.clone();
    for k in 0..n {
        let fk = f(values[k]);
        for i in 0..n {
            scaled[(i, k)] *= fk;
        }
    }
    Ok(scaled * vectors.adjoint())
}

/// `exp(i t H)` for Hermitian `H`.
pub fn exp_i_hermitian(h: &CMatrix, t: f64) -> Result<CMatrix> {
    hermitian_map(h, |x| Complex64::from_polar(1.0, t * x))
}

/// Principal square root of a positive semidefinite matrix; negative rounding noise is clamped.
pub fn psd_sqrt(m: &CMatrix) -> Result<CMatrix> {
    hermitian_map(m, |x| Complex64::new(x.max(0.0).sqrt(), 0.0))
}

/// Deviation of `u† u` from the identity.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    let n = u.nrows();
    let prod = u.adjoint() * u;
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((prod[(i, j)] - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}
