//! State descriptors: `plus`, `minus`, `star`, `mix:a`, `jm:m`, `coh:theta,phi`, `json:<path>`.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use super::{parse_half_integer, DensityMatrix, PureState, SpinQuantum};
use crate::error::{Error, Result};
use crate::husimi::coherent_amplitudes;
use crate::sphere::SpherePoint;

/// A named state, resolved against a spin `j` supplied separately.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    /// `|j,j>`
    Plus,
    /// `|j,-j>`
    Minus,
    /// `I / N`
    Star,
    /// `a ρ₊ + (1 − a) ρ₋`
    Mix(f64),
    /// `|j,m>`, stored as `2m`
    Jm(i32),
    /// Spin coherent state pointing at `(theta, phi)`.
    Coherent { theta: f64, phi: f64 },
    /// Density matrix read from a JSON file.
    Json(PathBuf),
}

impl StateSpec {
    pub fn density(&self, spin: SpinQuantum) -> Result<DensityMatrix> {
        let n = spin.dim();
        match self {
            StateSpec::Star => Ok(DensityMatrix::maximally_mixed(n)),
            StateSpec::Mix(a) => {
                let plus = PureState::basis(n, 0)?.density();
                let minus = PureState::basis(n, n - 1)?.density();
                DensityMatrix::mixture(*a, &plus, &minus)
            }
            StateSpec::Json(path) => {
                let text = std::fs::read_to_string(path)?;
                let rho = DensityMatrix::from_json(&text)?;
                if rho.dim() != n {
                    return Err(Error::DimensionMismatch(rho.dim(), n));
                }
                Ok(rho)
            }
            _ => Ok(self.pure(spin)?.expect("pure descriptor").density()),
        }
    }

    /// The state vector when the descriptor names a pure state, `None` for mixed descriptors.
    pub fn pure(&self, spin: SpinQuantum) -> Result<Option<PureState>> {
        let n = spin.dim();
        match self {
            StateSpec::Plus => Ok(Some(PureState::basis(n, 0)?)),
            StateSpec::Minus => Ok(Some(PureState::basis(n, n - 1)?)),
            StateSpec::Jm(two_m) => Ok(Some(PureState::basis(n, spin.index_of(*two_m)?)?)),
            StateSpec::Coherent { theta, phi } => {
                Ok(Some(coherent_amplitudes(spin, SpherePoint::new(*theta, *phi)?)))
            }
            StateSpec::Mix(a) if *a == 1.0 => Ok(Some(PureState::basis(n, 0)?)),
            StateSpec::Mix(a) if *a == 0.0 => Ok(Some(PureState::basis(n, n - 1)?)),
            _ => Ok(None),
        }
    }
}

impl FromStr for StateSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        let need = |what: &str| arg.ok_or_else(|| Error::UnknownState(format!("'{s}' needs {what}")));
        match head {
            "plus" => Ok(StateSpec::Plus),
            "minus" => Ok(StateSpec::Minus),
            "star" | "maximally-mixed" => Ok(StateSpec::Star),
            "mix" => {
                let a: f64 = need("a weight")?.parse().map_err(|_| Error::Parse(format!("bad weight in '{s}'")))?;
                if !(0.0..=1.0).contains(&a) {
                    return Err(Error::OutOfRange(format!("mixing weight {a} not in [0,1]")));
                }
                Ok(StateSpec::Mix(a))
            }
            "jm" => Ok(StateSpec::Jm(parse_half_integer(need("m")?)?)),
            "coh" => {
                let (t, p) = need("theta,phi")?
                    .split_once(',')
                    .ok_or_else(|| Error::Parse(format!("'{s}' needs theta,phi")))?;
                let theta: f64 = t.trim().parse().map_err(|_| Error::Parse(format!("bad theta in '{s}'")))?;
                let phi: f64 = p.trim().parse().map_err(|_| Error::Parse(format!("bad phi in '{s}'")))?;
                if !(0.0..=std::f64::consts::PI).contains(&theta) || !phi.is_finite() {
                    return Err(Error::OutOfRange(format!("theta {theta} not in [0,pi]")));
                }
                Ok(StateSpec::Coherent { theta, phi })
            }
            "json" => Ok(StateSpec::Json(PathBuf::from(need("a path")?))),
            _ => Err(Error::UnknownState(s.to_string())),
        }
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateSpec::Plus => write!(f, "plus"),
            StateSpec::Minus => write!(f, "minus"),
            StateSpec::Star => write!(f, "star"),
            StateSpec::Mix(a) => write!(f, "mix:{a}"),
            StateSpec::Jm(two_m) if two_m % 2 == 0 => write!(f, "jm:{}", two_m / 2),
            StateSpec::Jm(two_m) => write!(f, "jm:{two_m}/2"),
            StateSpec::Coherent { theta, phi } => write!(f, "coh:{theta},{phi}"),
            StateSpec::Json(p) => write!(f, "json:{}", p.display()),
        }
    }
}
