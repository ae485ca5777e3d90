//! Closed-form Monge distances.

use std::f64::consts::{LN_2, PI};

use crate::error::{Error, Result};
use crate::qstate::SpinQuantum;
use crate::special::{central_binomial_ratio, ln_factorial};

fn factorial(n: u64) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// Distance between neighbouring eigenstates `|j,m>` and `|j,m−1>`; `two_m` is `2m`.
pub fn eigenstate_gap(spin: SpinQuantum, two_m: i32) -> Result<f64> {
    spin.index_of(two_m)?;
    let two_j = spin.two_j() as i32;
    if two_m <= -two_j {
        return Err(Error::OutOfRange(format!("m = {two_m}/2 has no lower neighbour")));
    }
    let n = ((two_j + two_m) / 2) as u64;
    let rest = spin.dim() as u64 - n;
    // C(2a,a) C(2n,n) 2^{-2N} with a + n = N
    Ok(PI * central_binomial_ratio(rest) * central_binomial_ratio(n))
}

/// Distance between `|j,m>` and `|j,m'>`, the sum of the intervening gaps.
pub fn eigenstate_distance(spin: SpinQuantum, two_m: i32, two_m_prime: i32) -> Result<f64> {
    spin.index_of(two_m)?;
    spin.index_of(two_m_prime)?;
    let (lo, hi) = (two_m.min(two_m_prime), two_m.max(two_m_prime));
    let mut total = 0.0;
    let mut m = lo + 2;
    while m <= hi {
        total += eigenstate_gap(spin, m)?;
        m += 2;
    }
    Ok(total)
}

/// Distance of every coherent state from the maximally mixed state, `(π/2)[1 − C(2N,N) 2^{1−2N}]`.
pub fn coherent_to_star(spin: SpinQuantum) -> f64 {
    0.5 * PI * (1.0 - 2.0 * central_binomial_ratio(spin.dim() as u64))
}

/// Distance of `|j,0>` from the maximally mixed state, `Σ_{k=1}^{j} (2k−1)!!/((2k+1)(2k)!!)`.
pub fn zero_state_to_star(spin: SpinQuantum) -> Result<f64> {
    if !spin.is_integer() {
        return Err(Error::InvalidSpin(format!("j = {spin} has no m = 0 state")));
    }
    let j = spin.two_j() as u64 / 2;
    Ok((1..=j).map(|k| central_binomial_ratio(k) / (2 * k + 1) as f64).sum())
}

/// `S_{j,u,v} = (2j)! / ((2j − 2(u+v) − 1)! u! v! (u+v+1)! 4^{u+v})`, defined for `u + v < j`.
pub fn s_coefficient(spin: SpinQuantum, u: u64, v: u64) -> f64 {
    let two_j = spin.two_j() as u64;
    assert!(2 * (u + v) < two_j, "S coefficient needs u + v < j");
    let k = u + v;
    // (2j)! / (2j − 2k − 1)! = (2j)(2j−1)…(2j−2k)
    let falling = two_j - 2 * k..=two_j;
    if two_j <= 60 {
        let num: f64 = falling.map(|i| i as f64).product();
        return num / (factorial(u) * factorial(v) * factorial(k + 1) * 4f64.powi(k as i32));
    }
    let log_num: f64 = falling.map(|i| (i as f64).ln()).sum();
    (log_num - ln_factorial(u) - ln_factorial(v) - ln_factorial(k + 1) - 2.0 * k as f64 * LN_2).exp()
}

/// `A_{u,v} = 2^{2u+1} / (C(2u,u)(2u+1)) − Σ_{s=0}^{v} C(2s,s) / ((u+1+s) 4^s)`.
pub fn a_coefficient(u: u64, v: u64) -> f64 {
    let head = 2.0 / ((2 * u + 1) as f64 * central_binomial_ratio(u));
    let partial: f64 = (0..=v).map(|s| central_binomial_ratio(s) / (u + 1 + s) as f64).sum();
    head - partial
}

/// The polynomial `W_j` in `C(Ξ, j) = π sin(Ξ/2) W_j(sin²(Ξ/2))`.
#[derive(Debug, Clone, PartialEq)]
pub struct WPolynomial {
    spin: SpinQuantum,
    /// `(u, v, c)` with `W_j(x) = Σ c x^u (1−x)^v`, every `c > 0`.
    terms: Vec<(u32, u32, f64)>,
    coefficients: Vec<f64>,
}

pub fn build_w_polynomial(spin: SpinQuantum) -> WPolynomial {
    let two_j = spin.two_j() as u64;
    let prefactor = spin.dim() as f64 * (-((two_j + 2) as f64) * LN_2).exp();
    let degree = ((two_j - 1) / 2) as usize;
    let mut terms = Vec::new();
    for u in 0..=degree as u64 {
        for v in 0..=(degree as u64 - u) {
            let c = prefactor * s_coefficient(spin, u, v) * a_coefficient(u, v);
            terms.push((u as u32, v as u32, c));
        }
    }
    let mut coefficients = vec![0.0; degree + 1];
    for &(u, v, c) in &terms {
        // (1−x)^v = Σ_i C(v,i) (−x)^i
        for i in 0..=v as u64 {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            coefficients[u as usize + i as usize] += sign * c * crate::special::binomial(v as u64, i);
        }
    }
    WPolynomial { spin, terms, coefficients }
}

impl WPolynomial {
    pub fn spin(&self) -> SpinQuantum {
        self.spin
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Monomial coefficients, constant term first.
    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// Evaluates from the positive `x^u (1−x)^v` expansion, which is stable on `[0, 1]`.
    pub fn eval(&self, x: f64) -> f64 {
        self.terms.iter().map(|&(u, v, c)| c * x.powi(u as i32) * (1.0 - x).powi(v as i32)).sum()
    }

    /// `C(Ξ, j)`.
    pub fn distance(&self, xi: f64) -> Result<f64> {
        if !(0.0..=PI).contains(&xi) {
            return Err(Error::OutOfRange(format!("angle {xi} not in [0, pi]")));
        }
        let s = (0.5 * xi).sin();
        Ok(PI * s * self.eval(s * s))
    }
}

/// Monge distance between two coherent states separated by the angle `Ξ`.
pub fn coherent_pair_distance(spin: SpinQuantum, xi: f64) -> Result<f64> {
    build_w_polynomial(spin).distance(xi)
}
