//! Monge distances between Husimi densities that reduce to one-dimensional problems,
//! together with the closed forms for eigenstates, coherent pairs and the maximally
//! mixed state.

mod closed_form;
mod reductions;

use std::sync::Arc;

pub use closed_form::{
    a_coefficient, build_w_polynomial, coherent_pair_distance, coherent_to_star, eigenstate_distance,
    eigenstate_gap, s_coefficient, zero_state_to_star, WPolynomial,
};
pub use reductions::{bloch_vector, monge_bloch, monge_prop6, monge_symmetric, prop2_upper_bound};

use crate::error::{Error, Result};
use crate::sphere::quadrature;

/// Values of `|F₁ − F₂|` below this are treated as zero when locating sign changes.
const SIGN_TOL: f64 = 1e-14;
const SAMPLES: usize = 256;
const PIECE_TOL: f64 = 1e-14;

/// A probability density on `[0, π]` with its cumulative distribution.
#[derive(Clone)]
pub struct LineDensity {
    density: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl std::fmt::Debug for LineDensity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LineDensity").finish_non_exhaustive()
    }
}

impl LineDensity {
    /// Wraps a density; fails unless it integrates to one over `[0, π]` within 1e−10.
    pub fn new<F: Fn(f64) -> f64 + Send + Sync + 'static>(density: F) -> Result<Self> {
        let line = Self { density: Arc::new(density) };
        let total = line.cdf(std::f64::consts::PI)?;
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidTrace(total));
        }
        Ok(line)
    }

    pub fn density(&self, theta: f64) -> f64 {
        (self.density)(theta)
    }

    pub fn cdf(&self, theta: f64) -> Result<f64> {
        quadrature::adaptive(&|t| (self.density)(t), 0.0, theta, 1e-15)
    }
}

/// `∫_a^b |F₁(x) − F₂(x)| dx` for two distribution functions on a common interval.
///
/// The interval is split wherever the difference changes sign or jumps, so step functions
/// and smooth distributions are both integrated to near machine precision.
pub fn salvemini<F1, F2>(f1: F1, f2: F2, a: f64, b: f64) -> Result<f64>
where
    F1: Fn(f64) -> f64,
    F2: Fn(f64) -> f64,
{
    if !(a.is_finite() && b.is_finite()) || b < a {
        return Err(Error::OutOfRange(format!("interval [{a}, {b}]")));
    }
    if a == b {
        return Ok(0.0);
    }
    let diff = |x: f64| f1(x) - f2(x);
    let class = |d: f64| {
        if d > SIGN_TOL {
            1
        } else if d < -SIGN_TOL {
            -1
        } else {
            0
        }
    };
    let step = (b - a) / SAMPLES as f64;
    let mut cuts = vec![a];
    let mut prev_x = a;
    let mut prev_c = class(diff(a));
    for i in 1..=SAMPLES {
        let x = if i == SAMPLES { b } else { a + step * i as f64 };
        let c = class(diff(x));
        if c != prev_c {
            // bisect to the class boundary
            let (mut lo, mut hi) = (prev_x, x);
            while hi - lo > 1e-15 * (1.0 + hi.abs()) {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if class(diff(mid)) == prev_c {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            cuts.push(lo);
            cuts.push(hi);
        }
        cuts.push(x);
        prev_x = x;
        prev_c = c;
    }
    cuts.dedup();
    let mut total = 0.0;
    for w in cuts.windows(2) {
        if w[1] > w[0] {
            total += quadrature::adaptive(&|x| diff(x).abs(), w[0], w[1], PIECE_TOL)?;
        }
    }
    Ok(total)
}
