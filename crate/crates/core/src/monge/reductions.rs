//! Distances that reduce to integrals along meridians.

use std::f64::consts::PI;

use rayon::prelude::*;

use super::salvemini;
use crate::error::{Error, Result};
use crate::husimi::{husimi, HusimiField};
use crate::qstate::DensityMatrix;
use crate::qstate::SpinQuantum;
use crate::special::ln_binomial;
use crate::sphere::{quadrature, SphereGrid, SpherePoint};

const SYMMETRY_TOL: f64 = 1e-8;
const SYMMETRY_THETAS: usize = 32;
const SYMMETRY_PHIS: usize = 16;
const MERIDIAN_TOL: f64 = 1e-8;
const MERIDIAN_SAMPLES: usize = 64;

/// Largest spread `max_φ H − min_φ H` over a set of colatitudes.
fn azimuthal_variation(field: &HusimiField) -> f64 {
    (0..SYMMETRY_THETAS)
        .map(|i| {
            let theta = (i as f64 + 0.5) * PI / SYMMETRY_THETAS as f64;
            let (lo, hi) = (0..SYMMETRY_PHIS)
                .map(|k| field.eval(SpherePoint { theta, phi: 2.0 * PI * k as f64 / SYMMETRY_PHIS as f64 }))
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), h| (lo.min(h), hi.max(h)));
            hi - lo
        })
        .fold(0.0, f64::max)
}

/// Colatitude marginal `h(θ) = H(θ, φ) sinθ / 2` along one meridian.
fn meridian_density(field: &HusimiField, phi: f64) -> impl Fn(f64) -> f64 + '_ {
    move |theta: f64| 0.5 * field.eval(SpherePoint { theta, phi }) * theta.sin()
}

/// Monge distance for two Husimi densities that do not depend on the azimuth.
///
/// Refuses with [`Error::NotSymmetric`] when either field varies with `φ` by more than 1e−8.
pub fn monge_symmetric(rho1: &DensityMatrix, rho2: &DensityMatrix, spin: SpinQuantum) -> Result<f64> {
    let h1 = husimi(rho1, spin)?;
    let h2 = husimi(rho2, spin)?;
    let variation = azimuthal_variation(&h1).max(azimuthal_variation(&h2));
    if variation > SYMMETRY_TOL {
        return Err(Error::NotSymmetric(variation));
    }
    let (f1, f2) = (symmetric_cdf(rho1), symmetric_cdf(rho2));
    salvemini(&f1, &f2, 0.0, PI)
}

/// Colatitude distribution function of an azimuthally symmetric Husimi density.
///
/// Only the diagonal `p_k` survives the azimuthal average, and with `x = sin²(θ/2)`
/// `F(θ) = Σ_{i=1}^{N} C(N, i) x^i (1−x)^{N−i} Σ_{k<i} p_k`.
fn symmetric_cdf(rho: &DensityMatrix) -> impl Fn(f64) -> f64 {
    let n = rho.dim();
    let mut cumulative = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    cumulative.push(0.0);
    for k in 0..n {
        acc += rho.entry(k, k).re;
        cumulative.push(acc);
    }
    let log_binom: Vec<f64> = (0..=n as u64).map(|i| ln_binomial(n as u64, i)).collect();
    move |theta: f64| {
        let x = (0.5 * theta).sin().powi(2);
        let y = (0.5 * theta).cos().powi(2);
        if x == 0.0 {
            return 0.0;
        }
        if y == 0.0 {
            return cumulative[n];
        }
        let (lx, ly) = (x.ln(), y.ln());
        (1..=n)
            .map(|i| cumulative[i] * (log_binom[i] + i as f64 * lx + (n - i) as f64 * ly).exp())
            .sum()
    }
}

/// Cumulative values `F(t_k, φ)` at `t_k = π(k+1)/n` and the moment `∫(π − θ) h dθ`.
fn meridian_profile(field: &HusimiField, phi: f64) -> (Vec<f64>, f64) {
    let h = meridian_density(field, phi);
    let (nodes, weights) = quadrature::gauss_legendre(20);
    let width = PI / MERIDIAN_SAMPLES as f64;
    let mut cdf = Vec::with_capacity(MERIDIAN_SAMPLES);
    let (mut acc, mut moment) = (0.0, 0.0);
    for k in 0..MERIDIAN_SAMPLES {
        let mid = (k as f64 + 0.5) * width;
        for (x, w) in nodes.iter().zip(&weights) {
            let t = mid + 0.5 * width * x;
            let v = 0.5 * width * w * h(t);
            acc += v;
            moment += (PI - t) * v;
        }
        cdf.push(acc);
    }
    (cdf, moment)
}

/// Monge distance when the meridian distribution functions are ordered.
///
/// Requires `F₁(π, φ) = F₂(π, φ)` and `F₁ ≥ F₂` (or the reverse) on a 64×64 `(t, φ)` sample
/// within 1e−8; otherwise refuses with [`Error::AssumptionViolated`].
pub fn monge_prop6(rho1: &DensityMatrix, rho2: &DensityMatrix, spin: SpinQuantum) -> Result<f64> {
    let h1 = husimi(rho1, spin)?;
    let h2 = husimi(rho2, spin)?;
    // the moment is a trigonometric polynomial of degree 2j in φ
    let n_phi = MERIDIAN_SAMPLES.max(2 * spin.two_j() as usize + 2);
    let profiles: Vec<_> = (0..n_phi)
        .into_par_iter()
        .map(|l| {
            let phi = 2.0 * PI * l as f64 / n_phi as f64;
            (meridian_profile(&h1, phi), meridian_profile(&h2, phi))
        })
        .collect();

    let mut endpoint_gap: f64 = 0.0;
    let (mut min_diff, mut max_diff) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut moment = 0.0;
    for ((c1, m1), (c2, m2)) in &profiles {
        endpoint_gap = endpoint_gap.max((c1[MERIDIAN_SAMPLES - 1] - c2[MERIDIAN_SAMPLES - 1]).abs());
        for (a, b) in c1.iter().zip(c2) {
            min_diff = min_diff.min(a - b);
            max_diff = max_diff.max(a - b);
        }
        moment += m1 - m2;
    }
    if endpoint_gap > MERIDIAN_TOL {
        return Err(Error::AssumptionViolated(format!(
            "meridian totals differ: max |F1(pi,phi) - F2(pi,phi)| = {endpoint_gap:.3e}"
        )));
    }
    if min_diff < -MERIDIAN_TOL && max_diff > MERIDIAN_TOL {
        return Err(Error::AssumptionViolated(format!(
            "F1 - F2 changes sign: ranges over [{min_diff:.3e}, {max_diff:.3e}]"
        )));
    }
    let value = moment / n_phi as f64;
    Ok(if max_diff > MERIDIAN_TOL { value } else { -value }.max(0.0))
}

/// Bloch vector `v` with `ρ = I/2 + σ·v`.
pub fn bloch_vector(rho: &DensityMatrix) -> Result<[f64; 3]> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch(rho.dim(), 2));
    }
    let off = rho.entry(0, 1);
    Ok([off.re, -off.im, 0.5 * (rho.entry(0, 0).re - rho.entry(1, 1).re)])
}

/// Monge distance for `N = 2`: `(π/4)|v₁ − v₂|`.
pub fn monge_bloch(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    let v1 = bloch_vector(rho1)?;
    let v2 = bloch_vector(rho2)?;
    let norm = v1.iter().zip(&v2).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    Ok(0.25 * PI * norm)
}

/// Upper bound `(π/2) ∫|H₁ − H₂| dμ` by grid quadrature.
pub fn prop2_upper_bound(h1: &HusimiField, h2: &HusimiField, grid: &SphereGrid) -> Result<f64> {
    if h1.spin() != h2.spin() {
        return Err(Error::DimensionMismatch(h1.spin().dim(), h2.spin().dim()));
    }
    let a = h1.sample(grid);
    let b = h2.sample(grid);
    let l1: f64 = a.iter().zip(&b).zip(grid.weights()).map(|((x, y), w)| w * (x - y).abs()).sum();
    if !l1.is_finite() {
        return Err(Error::Quadrature("non-finite L1 distance".into()));
    }
    Ok(0.5 * PI * l1)
}
