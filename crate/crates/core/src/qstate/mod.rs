//! Density matrices, pure states, and the standard metric distances between them.
//!
//! All states live in the `|j,m>` basis ordered by descending `m`, so index 0 is `|j,j>`.
//! The distances implemented here are
//!
//! - trace distance `tr|ρ₁ − ρ₂|`,
//! - Hilbert–Schmidt distance `sqrt(tr (ρ₁ − ρ₂)²)`,
//! - Bures distance `sqrt(2 (1 − tr sqrt(sqrt(ρ₁) ρ₂ sqrt(ρ₁))))`,
//! - Fubini–Study distance `2 arccos |<φ₁|φ₂>|` on pure states,
//!
//! and all of them are invariant under the kicked unitary step `ρ → e^{iH} ρ e^{−iH}`.

pub mod linalg;
mod named;
mod spin;

use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

pub use linalg::{CMatrix, CVector};
pub use named::StateSpec;
pub use spin::{parse_half_integer, rotation_unitary, spin_matrices, SpinQuantum};

use crate::error::{Error, Result};

pub const TOL_HERMITIAN: f64 = 1e-10;
pub const TOL_TRACE: f64 = 1e-10;
pub const TOL_NORM: f64 = 1e-10;
/// Relative to the spectral norm of the matrix.
pub const TOL_PSD: f64 = 1e-9;

/// A normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amps: CVector,
}

impl PureState {
    /// Wraps amplitudes that must already have unit norm.
    pub fn new(amps: CVector) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::ZeroVector);
        }
        let norm = amps.norm();
        if (norm - 1.0).abs() > TOL_NORM {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { amps })
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn normalized(amps: CVector) -> Result<Self> {
        let norm = amps.norm();
        if amps.is_empty() || norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(Self { amps: amps / Complex64::new(norm, 0.0) })
    }

    pub fn from_slice(amps: &[Complex64]) -> Result<Self> {
        Self::new(CVector::from_column_slice(amps))
    }

    /// Computational basis vector `e_k`.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::OutOfRange(format!("basis index {k} >= dimension {dim}")));
        }
        let mut amps = CVector::zeros(dim);
        amps[k] = Complex64::new(1.0, 0.0);
        Ok(Self { amps })
    }

    /// Haar-random pure state: an i.i.d. standard complex Gaussian vector, normalized.
    pub fn haar_random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Self {
        loop {
            let amps = CVector::from_fn(dim, |_, _| {
                Complex64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
            });
            if let Ok(state) = Self::normalized(amps) {
                return state;
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amps
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        check_dims(self.dim(), other.dim())?;
        Ok(self.amps.dotc(&other.amps))
    }

    /// Transition probability `|<self|other>|²`.
    pub fn overlap(&self, other: &PureState) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr().min(1.0))
    }

    /// Applies a unitary and renormalizes away rounding drift.
    pub fn evolve(&self, u: &CMatrix) -> Result<Self> {
        check_dims(self.dim(), u.nrows())?;
        Self::normalized(u * &self.amps)
    }

    pub fn density(&self) -> DensityMatrix {
        let mat = &self.amps * self.amps.adjoint();
        DensityMatrix { mat: linalg::hermitize(&mat) }
    }
}

/// Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: CMatrix,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct DensityMatrixJson {
    dim: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl DensityMatrix {
    /// Validates the density-matrix invariants and stores the exactly Hermitian part.
    pub fn new(mat: CMatrix) -> Result<Self> {
        let (r, c) = mat.shape();
        if r != c {
            return Err(Error::NotSquare(r, c));
        }
        if r == 0 {
            return Err(Error::ZeroVector);
        }
        let defect = linalg::hermiticity_defect(&mat);
        if defect > TOL_HERMITIAN {
            return Err(Error::NotHermitian(defect));
        }
        let mat = linalg::hermitize(&mat);
        let tr = linalg::trace(&mat).re;
        if (tr - 1.0).abs() > TOL_TRACE {
            return Err(Error::InvalidTrace(tr));
        }
        let vals = linalg::eigvalsh(&mat)?;
        let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
        let min = vals.min();
        if min < -TOL_PSD * scale {
            return Err(Error::NotPositive(min));
        }
        Ok(Self { mat })
    }

    /// `I / n`.
    pub fn maximally_mixed(n: usize) -> Self {
        let mat = CMatrix::identity(n, n) * Complex64::new(1.0 / n as f64, 0.0);
        Self { mat }
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        let v = DVector::from_iterator(diag.len(), diag.iter().map(|&x| Complex64::new(x, 0.0)));
        Self::new(CMatrix::from_diagonal(&v))
    }

    /// Convex combination `a ρ₁ + (1 − a) ρ₂`.
    pub fn mixture(a: f64, first: &DensityMatrix, second: &DensityMatrix) -> Result<Self> {
        if !(0.0..=1.0).contains(&a) {
            return Err(Error::OutOfRange(format!("mixing weight {a} not in [0,1]")));
        }
        check_dims(first.dim(), second.dim())?;
        Self::new(&first.mat * Complex64::new(a, 0.0) + &second.mat * Complex64::new(1.0 - a, 0.0))
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.mat[(i, j)]
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Result<DVector<f64>> {
        linalg::eigvalsh(&self.mat)
    }

    /// `tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.mat.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `U ρ U†`.
    pub fn conjugate_by(&self, u: &CMatrix) -> Result<Self> {
        check_dims(self.dim(), u.nrows())?;
        let out = u * &self.mat * u.adjoint();
        Self::new(linalg::hermitize(&out))
    }

    pub fn to_json(&self) -> String {
        let n = self.dim();
        let doc = DensityMatrixJson {
            dim: n,
            re: (0..n).map(|i| (0..n).map(|j| self.mat[(i, j)].re).collect()).collect(),
            im: (0..n).map(|i| (0..n).map(|j| self.mat[(i, j)].im).collect()).collect(),
        };
        serde_json::to_string(&doc).expect("density matrix serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: DensityMatrixJson = serde_json::from_str(text)?;
        let n = doc.dim;
        let rows_ok = doc.re.len() == n && doc.im.len() == n;
        if !rows_ok || doc.re.iter().chain(doc.im.iter()).any(|row| row.len() != n) {
            return Err(Error::Parse(format!("JSON matrix rows do not match dim = {n}")));
        }
        let mat = CMatrix::from_fn(n, n, |i, j| Complex64::new(doc.re[i][j], doc.im[i][j]));
        Self::new(mat)
    }
}

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch(a, b));
    }
    Ok(())
}

/// `tr|ρ₁ − ρ₂|`, the sum of absolute eigenvalues of the difference.
pub fn trace_distance(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    check_dims(rho1.dim(), rho2.dim())?;
    let diff = &rho1.mat - &rho2.mat;
    Ok(linalg::eigvalsh(&diff)?.iter().map(|x| x.abs()).sum())
}

/// `sqrt(tr (ρ₁ − ρ₂)²)`.
pub fn hs_distance(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    check_dims(rho1.dim(), rho2.dim())?;
    Ok((&rho1.mat - &rho2.mat).norm())
}

/// Root fidelity `tr sqrt(sqrt(ρ₁) ρ₂ sqrt(ρ₁))`.
pub fn root_fidelity(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    check_dims(rho1.dim(), rho2.dim())?;
    let s = linalg::psd_sqrt(&rho1.mat)?;
    let inner = &s * &rho2.mat * &s;
    let vals = linalg::eigvalsh(&inner)?;
    Ok(vals.iter().map(|&x| if x < TOL_PSD { 0.0 } else { x.sqrt() }).sum())
}

/// `sqrt(2 (1 − tr sqrt(sqrt(ρ₁) ρ₂ sqrt(ρ₁))))`.
pub fn bures_distance(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    let f = root_fidelity(rho1, rho2)?;
    Ok((2.0 * (1.0 - f)).max(0.0).sqrt())
}

/// Geodesic distance on the projective space, `2 arccos sqrt(p)` with `p = |<φ₁|φ₂>|²`.
pub fn fubini_study(phi1: &PureState, phi2: &PureState) -> Result<f64> {
    let p = phi1.overlap(phi2)?;
    Ok(2.0 * p.sqrt().min(1.0).acos())
}

/// One kick of period one: `e^{iH} ρ e^{−iH}`.
pub fn kicked_step(rho: &DensityMatrix, h: &CMatrix) -> Result<DensityMatrix> {
    check_dims(rho.dim(), h.nrows())?;
    if h.nrows() != h.ncols() {
        return Err(Error::NotSquare(h.nrows(), h.ncols()));
    }
    let defect = linalg::hermiticity_defect(h);
    let scale = h.norm().max(1.0);
    if defect > TOL_HERMITIAN * scale {
        return Err(Error::NotHermitian(defect));
    }
    let u = linalg::exp_i_hermitian(h, 1.0)?;
    rho.conjugate_by(&u)
}
