//! SU(2) spin coherent states, Husimi densities on the sphere, and Wehrl entropy.
//!
//! The coherent state pointing at `(θ, φ)` has components
//! `sin^{j−m}(θ/2) cos^{j+m}(θ/2) e^{i(j−m)φ} sqrt(C(2j, j−m))` on `|j,m>`, and the
//! Husimi density of `ρ` is `H_ρ(η) = N <η|ρ|η>`, normalized so that `∫ H_ρ dμ = 1`.

use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::qstate::{CVector, DensityMatrix, PureState, SpinQuantum};
use crate::special::ln_binomial;
use crate::sphere::{SphereGrid, SpherePoint};

/// Spin coherent state `|θ, φ>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentState {
    pub spin: SpinQuantum,
    pub direction: SpherePoint,
}

impl CoherentState {
    pub fn new(spin: SpinQuantum, direction: SpherePoint) -> Self {
        Self { spin, direction }
    }

    pub fn state(&self) -> PureState {
        coherent_amplitudes(self.spin, self.direction)
    }
}

/// `½ ln C(2j, k)` for every basis index.
fn half_log_binomials(spin: SpinQuantum) -> Vec<f64> {
    let two_j = spin.two_j() as u64;
    (0..=two_j).map(|k| 0.5 * ln_binomial(two_j, k)).collect()
}

/// Raw coherent-state components without the unit-norm wrapper.
fn coherent_vector(spin: SpinQuantum, p: SpherePoint) -> CVector {
    coherent_vector_with(&half_log_binomials(spin), p)
}

fn coherent_vector_with(half_log_binom: &[f64], p: SpherePoint) -> CVector {
    let two_j = (half_log_binom.len() - 1) as u64;
    let half = 0.5 * p.theta;
    let (s, c) = half.sin_cos();
    let (ls, lc) = (s.ln(), c.ln());
    CVector::from_fn(half_log_binom.len(), |k, _| {
        let k64 = k as u64;
        let (ps, pc) = (k64, two_j - k64);
        // 0^0 = 1 at the poles
        let sin_part = if ps == 0 { 0.0 } else { ps as f64 * ls };
        let cos_part = if pc == 0 { 0.0 } else { pc as f64 * lc };
        let log_mag = half_log_binom[k] + sin_part + cos_part;
        if log_mag == f64::NEG_INFINITY {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::from_polar(log_mag.exp(), k as f64 * p.phi)
        }
    })
}

/// Expansion of `|θ, φ>` in the descending `|j,m>` basis.
pub fn coherent_amplitudes(spin: SpinQuantum, p: SpherePoint) -> PureState {
    PureState::normalized(coherent_vector(spin, p)).expect("coherent state has unit norm")
}

/// Husimi density of a density matrix with respect to spin-`j` coherent states.
#[derive(Debug, Clone)]
pub struct HusimiField {
    source: DensityMatrix,
    spin: SpinQuantum,
    half_log_binom: Vec<f64>,
    /// The source is exactly `I/N`, whose density is identically one.
    uniform: bool,
}

/// Builds the Husimi field; the state's dimension must be `2j + 1`.
pub fn husimi(rho: &DensityMatrix, spin: SpinQuantum) -> Result<HusimiField> {
    if rho.dim() != spin.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), spin.dim()));
    }
    let m = rho.matrix();
    let n = rho.dim();
    let uniform = (0..n).all(|i| (0..n).all(|k| if i == k { m[(i, k)] == m[(0, 0)] } else { m[(i, k)] == Complex64::new(0.0, 0.0) }));
    Ok(HusimiField { source: rho.clone(), spin, half_log_binom: half_log_binomials(spin), uniform })
}

impl HusimiField {
    pub fn source(&self) -> &DensityMatrix {
        &self.source
    }

    pub fn spin(&self) -> SpinQuantum {
        self.spin
    }

    /// `N <η|ρ|η>`.
    pub fn eval(&self, p: SpherePoint) -> f64 {
        if self.uniform {
            return 1.0;
        }
        let eta = coherent_vector_with(&self.half_log_binom, p);
        let rho = self.source.matrix();
        let n = eta.len();
        let mut acc = 0.0;
        for i in 0..n {
            let mut row = Complex64::new(0.0, 0.0);
            for k in 0..n {
                row += rho[(i, k)] * eta[k];
            }
            acc += (eta[i].conj() * row).re;
        }
        n as f64 * acc
    }

    /// Values at every grid node, evaluated in parallel.
    pub fn sample(&self, grid: &SphereGrid) -> Vec<f64> {
        grid.nodes().par_iter().map(|&p| self.eval(p)).collect()
    }

    /// `∫ H dμ` on a grid.
    pub fn total_mass(&self, grid: &SphereGrid) -> f64 {
        self.sample(grid).iter().zip(grid.weights()).map(|(h, w)| h * w).sum()
    }

    /// CSV with header `theta,phi,H`.
    pub fn write_csv<W: Write>(&self, grid: &SphereGrid, mut out: W) -> Result<()> {
        writeln!(out, "theta,phi,H")?;
        for (p, h) in grid.nodes().iter().zip(self.sample(grid)) {
            writeln!(out, "{},{},{}", p.theta, p.phi, h)?;
        }
        Ok(())
    }
}

/// Grid used by [`wehrl_entropy`]; resolves the logarithmic behaviour near Husimi zeros.
pub fn default_entropy_grid() -> SphereGrid {
    SphereGrid::gauss_product(200, 200).expect("valid grid")
}

/// `−∫ H ln H dμ` with `0 ln 0 = 0`, on the default entropy grid.
pub fn wehrl_entropy(rho: &DensityMatrix, spin: SpinQuantum) -> Result<f64> {
    wehrl_entropy_on(rho, spin, &default_entropy_grid())
}

/// `−∫ H ln H dμ` on a caller-supplied grid.
pub fn wehrl_entropy_on(rho: &DensityMatrix, spin: SpinQuantum, grid: &SphereGrid) -> Result<f64> {
    let field = husimi(rho, spin)?;
    let values = field.sample(grid);
    let s: f64 = values
        .iter()
        .zip(grid.weights())
        .map(|(&h, w)| if h > 0.0 { -w * h * h.ln() } else { 0.0 })
        .sum();
    if !s.is_finite() {
        return Err(Error::Quadrature("non-finite Wehrl entropy".into()));
    }
    Ok(s + 0.0)
}

/// Entropy of any coherent state, `(N − 1)/N − ln N`.
pub fn min_wehrl(n: usize) -> f64 {
    let n = n as f64;
    (n - 1.0) / n - n.ln()
}

/// Haar average of the Wehrl entropy over pure states, `−ln N + Ψ(N+1) − Ψ(2)`.
pub fn mean_wehrl(n: usize) -> f64 {
    assert!(n >= 1, "dimension must be positive");
    let harmonic: f64 = (2..=n).map(|m| 1.0 / m as f64).sum();
    harmonic - (n as f64).ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{rotation_unitary, StateSpec};
    use crate::sphere::geodesic;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn spin(two_j: u32) -> SpinQuantum {
        SpinQuantum::new(two_j).unwrap()
    }

    #[test]
    fn poles() {
        let s = spin(4);
        let north = coherent_amplitudes(s, SpherePoint::north());
        assert_abs_diff_eq!(north.amplitudes()[0].re, 1.0, epsilon = 1e-15);
        let south = coherent_amplitudes(s, SpherePoint::south());
        assert_abs_diff_eq!(south.amplitudes()[4].norm(), 1.0, epsilon = 1e-15);
        for k in 0..4 {
            assert!(south.amplitudes()[k].norm() < 1e-15);
        }
    }

    #[test]
    fn coherent_overlap_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        use rand::Rng;
        for two_j in 1..8 {
            let s = spin(two_j);
            for _ in 0..10 {
                let a = SpherePoint::new(rng.random_range(0.0..PI), rng.random_range(0.0..2.0 * PI)).unwrap();
                let b = SpherePoint::new(rng.random_range(0.0..PI), rng.random_range(0.0..2.0 * PI)).unwrap();
                let ov = coherent_amplitudes(s, a).overlap(&coherent_amplitudes(s, b)).unwrap();
                let xi = geodesic(a, b);
                assert_abs_diff_eq!(ov, (xi / 2.0).cos().powi(2 * two_j as i32), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn large_spin_stays_finite() {
        let s = spin(400);
        let psi = coherent_amplitudes(s, SpherePoint::new(1.0, 0.3).unwrap());
        assert_abs_diff_eq!(psi.amplitudes().norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn star_is_uniform_and_coherent_profile() {
        let s = spin(3);
        let star = husimi(&DensityMatrix::maximally_mixed(4), s).unwrap();
        for p in [SpherePoint::north(), SpherePoint::new(1.2, 4.0).unwrap()] {
            assert_abs_diff_eq!(star.eval(p), 1.0, epsilon = 1e-14);
        }
        let dir = SpherePoint::new(0.8, 1.0).unwrap();
        let coh = husimi(&coherent_amplitudes(s, dir).density(), s).unwrap();
        let probe = SpherePoint::new(2.0, 3.0).unwrap();
        let xi = geodesic(dir, probe);
        assert_abs_diff_eq!(coh.eval(probe), 4.0 * (xi / 2.0).cos().powi(6), epsilon = 1e-13);
        assert!(coh.eval(dir.antipode()).abs() < 1e-14);
        assert!(husimi(&DensityMatrix::maximally_mixed(3), s).is_err());
    }

    #[test]
    fn rotation_about_z_shifts_longitude() {
        let s = spin(3);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let rho = PureState::haar_random(4, &mut rng).density();
        let alpha = 0.9;
        let u = rotation_unitary(s, [0.0, 0.0, 1.0], alpha).unwrap();
        let rotated = husimi(&rho.conjugate_by(&u).unwrap(), s).unwrap();
        let orig = husimi(&rho, s).unwrap();
        for (t, p) in [(0.3, 0.2), (1.5, 2.0), (2.9, 5.5)] {
            let a = rotated.eval(SpherePoint::new(t, p).unwrap());
            let b = orig.eval(SpherePoint::new(t, p - alpha).unwrap());
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn entropy_examples() {
        let s = spin(2);
        assert_abs_diff_eq!(wehrl_entropy(&DensityMatrix::maximally_mixed(3), s).unwrap(), 0.0, epsilon = 1e-14);
        let plus = StateSpec::Plus.density(s).unwrap();
        assert_abs_diff_eq!(wehrl_entropy(&plus, s).unwrap(), min_wehrl(3), epsilon = 1e-8);
    }

    #[test]
    fn mean_entropy_values() {
        assert_eq!(mean_wehrl(1), 0.0);
        assert_abs_diff_eq!(mean_wehrl(2), 0.5 - 2f64.ln(), epsilon = 1e-15);
        assert_abs_diff_eq!(mean_wehrl(3), 5.0 / 6.0 - 3f64.ln(), epsilon = 1e-15);
        let euler_gamma = 0.577_215_664_901_532_9;
        assert!((mean_wehrl(100_000) - (euler_gamma - 1.0)).abs() < 1e-4);
    }
}
