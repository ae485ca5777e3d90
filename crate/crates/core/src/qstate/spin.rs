//! Spin quantum numbers and angular-momentum matrices in the descending-m basis.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::linalg::{exp_i_hermitian, CMatrix};
use crate::error::{Error, Result};

/// Spin quantum number stored as `2j`, so the Hilbert space has dimension `2j + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpinQuantum {
    two_j: u32,
}

impl SpinQuantum {
    pub fn new(two_j: u32) -> Result<Self> {
        if two_j == 0 {
            return Err(Error::InvalidSpin("2j must be at least 1".into()));
        }
        Ok(Self { two_j })
    }

    /// Spin for a Hilbert space of dimension `n >= 2`.
    pub fn from_dim(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidSpin(format!("dimension {n} has no spin j >= 1/2")));
        }
        Self::new((n - 1) as u32)
    }

    pub fn two_j(self) -> u32 {
        self.two_j
    }

    pub fn j(self) -> f64 {
        self.two_j as f64 / 2.0
    }

    pub fn dim(self) -> usize {
        self.two_j as usize + 1
    }

    pub fn is_integer(self) -> bool {
        self.two_j.is_multiple_of(2)
    }

    /// Basis index of `|j,m>` given `2m`; index 0 is `|j,j>`.
    pub fn index_of(self, two_m: i32) -> Result<usize> {
        let tj = self.two_j as i32;
        if two_m.abs() > tj || (tj - two_m) % 2 != 0 {
            let m = if two_m % 2 == 0 { (two_m / 2).to_string() } else { format!("{two_m}/2") };
            return Err(Error::OutOfRange(format!("m = {m} is not a projection of j = {self}")));
        }
        Ok(((tj - two_m) / 2) as usize)
    }

    /// `2m` of the basis vector at `index`.
    pub fn two_m_at(self, index: usize) -> i32 {
        self.two_j as i32 - 2 * index as i32
    }

    /// All `2m` values in basis order (descending).
    pub fn two_ms(self) -> impl Iterator<Item = i32> {
        let tj = self.two_j as i32;
        (0..=self.two_j as i32).map(move |k| tj - 2 * k)
    }
}

impl fmt::Display for SpinQuantum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.two_j.is_multiple_of(2) {
            write!(f, "{}", self.two_j / 2)
        } else {
            write!(f, "{}/2", self.two_j)
        }
    }
}

/// Parses a half-integer written as `p/2`, an integer, or a decimal, returning twice its value.
pub fn parse_half_integer(s: &str) -> Result<i32> {
    let s = s.trim();
    let value = if let Some((num, den)) = s.split_once('/') {
        let num: f64 = num.trim().parse().map_err(|_| Error::Parse(format!("bad half-integer '{s}'")))?;
        let den: f64 = den.trim().parse().map_err(|_| Error::Parse(format!("bad half-integer '{s}'")))?;
        if den == 0.0 {
            return Err(Error::Parse(format!("bad half-integer '{s}'")));
        }
        num / den
    } else {
        s.parse::<f64>().map_err(|_| Error::Parse(format!("bad half-integer '{s}'")))?
    };
    let twice = 2.0 * value;
    let rounded = twice.round();
    if !twice.is_finite() || (twice - rounded).abs() > 1e-9 {
        return Err(Error::Parse(format!("'{s}' is not a multiple of 1/2")));
    }
    Ok(rounded as i32)
}

impl FromStr for SpinQuantum {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let two_j = parse_half_integer(s)?;
        if two_j < 1 {
            return Err(Error::InvalidSpin(format!("j = {s} must be positive")));
        }
        Self::new(two_j as u32)
    }
}

/// The three angular-momentum matrices `(Jx, Jy, Jz)`.
pub fn spin_matrices(spin: SpinQuantum) -> (CMatrix, CMatrix, CMatrix) {
    let n = spin.dim();
    let j = spin.j();
    let mut jz = CMatrix::zeros(n, n);
    let mut jp = CMatrix::zeros(n, n);
    for k in 0..n {
        let m = spin.two_m_at(k) as f64 / 2.0;
        jz[(k, k)] = Complex64::new(m, 0.0);
        if k > 0 {
            // J+ |j,m> = sqrt(j(j+1) - m(m+1)) |j,m+1>, and |j,m+1> sits at index k-1
            jp[(k - 1, k)] = Complex64::new((j * (j + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
        }
    }
    let jm = jp.adjoint();
    let jx = (&jp + &jm) * Complex64::new(0.5, 0.0);
    let jy = (&jp - &jm) * Complex64::new(0.0, -0.5);
    (jx, jy, jz)
}

/// Active rotation `exp(-i angle n·J)` about the unit axis `n`.
pub fn rotation_unitary(spin: SpinQuantum, axis: [f64; 3], angle: f64) -> Result<CMatrix> {
    let norm = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::OutOfRange("rotation axis must be a nonzero finite vector".into()));
    }
    let (jx, jy, jz) = spin_matrices(spin);
    let c = |x: f64| Complex64::new(x / norm, 0.0);
    let generator = jx * c(axis[0]) + jy * c(axis[1]) + jz * c(axis[2]);
    exp_i_hermitian(&generator, -angle)
}
