//! One-dimensional Gauss–Legendre rules and an adaptive driver.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Gauss–Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess, refined by Newton on P_n
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d.is_finite() {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

struct Rule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

fn rule(n: usize) -> &'static Rule {
    static R20: OnceLock<Rule> = OnceLock::new();
    static R40: OnceLock<Rule> = OnceLock::new();
    let cell = match n {
        20 => &R20,
        40 => &R40,
        _ => unreachable!("only the 20/40 pair is cached"),
    };
    cell.get_or_init(|| {
        let (nodes, weights) = gauss_legendre(n);
        Rule { nodes, weights }
    })
}

/// Fixed-order Gauss–Legendre on `[a, b]`.
pub fn fixed<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, n: usize) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let apply = |x: &[f64], w: &[f64]| x.iter().zip(w).map(|(xi, wi)| wi * f(mid + half * xi)).sum::<f64>() * half;
    if n == 20 || n == 40 {
        let r = rule(n);
        apply(&r.nodes, &r.weights)
    } else {
        let (x, w) = gauss_legendre(n);
        apply(&x, &w)
    }
}

const MAX_DEPTH: u32 = 40;

/// Adaptive bisection comparing 20- and 40-point rules until the absolute tolerance is met.
pub fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    adaptive_rec(f, a, b, tol, 0)
}

fn adaptive_rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> Result<f64> {
    let coarse = fixed(f, a, b, 20);
    let fine = fixed(f, a, b, 40);
    if !fine.is_finite() {
        return Err(Error::Quadrature(format!("non-finite integrand on [{a}, {b}]")));
    }
    if (fine - coarse).abs() <= tol {
        return Ok(fine);
    }
    if depth >= MAX_DEPTH {
        return Err(Error::Quadrature(format!("no convergence on [{a}, {b}] after {MAX_DEPTH} bisections")));
    }
    let mid = 0.5 * (a + b);
    Ok(adaptive_rec(f, a, mid, 0.5 * tol, depth + 1)? + adaptive_rec(f, mid, b, 0.5 * tol, depth + 1)?)
}
