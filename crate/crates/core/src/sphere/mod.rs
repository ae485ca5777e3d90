//! Geometry of the unit sphere: points, geodesic distance, and weighted quadrature grids.
//!
//! The sphere carries the rotation-invariant probability measure
//! `dμ = sinθ dθ dφ / 4π`, so every grid's weights sum to one and a density `H`
//! is normalized when `∫ H dμ = 1`.

pub mod quadrature;

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Below this `sin θ` a point is treated as a pole and its longitude is set to zero.
pub const POLE_EPS: f64 = 1e-12;

/// A point on the unit sphere in colatitude/longitude coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpherePoint {
    pub theta: f64,
    pub phi: f64,
}

impl SpherePoint {
    /// Canonicalizes arbitrary finite angles: `θ ∈ [0, π]`, `φ ∈ [0, 2π)`, poles at `φ = 0`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !phi.is_finite() {
            return Err(Error::OutOfRange(format!("non-finite sphere coordinates ({theta}, {phi})")));
        }
        if (0.0..=PI).contains(&theta) {
            Ok(Self::canonical(theta, phi))
        } else {
            let v = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
            Ok(Self::from_vector(v))
        }
    }

    fn canonical(theta: f64, phi: f64) -> Self {
        let phi = if theta.sin() < POLE_EPS {
            0.0
        } else {
            let p = phi.rem_euclid(TAU);
            if p >= TAU {
                0.0
            } else {
                p
            }
        };
        Self { theta, phi }
    }

    pub fn north() -> Self {
        Self { theta: 0.0, phi: 0.0 }
    }

    pub fn south() -> Self {
        Self { theta: PI, phi: 0.0 }
    }

    /// Point from a (not necessarily normalized) nonzero Cartesian vector.
    pub fn from_vector(v: [f64; 3]) -> Self {
        let rho = (v[0] * v[0] + v[1] * v[1]).sqrt();
        let theta = rho.atan2(v[2]);
        Self::canonical(theta, v[1].atan2(v[0]))
    }

    pub fn to_vector(self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    pub fn antipode(self) -> Self {
        let v = self.to_vector();
        Self::from_vector([-v[0], -v[1], -v[2]])
    }
}

impl fmt::Display for SpherePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.theta, self.phi)
    }
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross_norm(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    let c = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
    dot(&c, &c).sqrt()
}

/// Great-circle angle between two unit vectors.
pub fn vector_angle(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    // atan2 keeps full precision near 0 and π where arccos of the dot product does not
    cross_norm(a, b).atan2(dot(a, b))
}

/// Great-circle distance in `[0, π]`.
pub fn geodesic(a: SpherePoint, b: SpherePoint) -> f64 {
    vector_angle(&a.to_vector(), &b.to_vector())
}

/// Rotates a point about a unit axis by `angle` (right-handed).
pub fn rotate_point(p: SpherePoint, axis: [f64; 3], angle: f64) -> SpherePoint {
    let n = dot(&axis, &axis).sqrt();
    let k = [axis[0] / n, axis[1] / n, axis[2] / n];
    let v = p.to_vector();
    let (s, c) = angle.sin_cos();
    let kv = dot(&k, &v);
    let kxv = [k[1] * v[2] - k[2] * v[1], k[2] * v[0] - k[0] * v[2], k[0] * v[1] - k[1] * v[0]];
    let r = [
        v[0] * c + kxv[0] * s + k[0] * kv * (1.0 - c),
        v[1] * c + kxv[1] * s + k[1] * kv * (1.0 - c),
        v[2] * c + kxv[2] * s + k[2] * kv * (1.0 - c),
    ];
    SpherePoint::from_vector(r)
}

/// Grid families understood by [`build_grid`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GridFamily {
    GaussProduct,
    Fibonacci,
}

impl FromStr for GridFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gauss-product" | "gauss" => Ok(GridFamily::GaussProduct),
            "fibonacci" => Ok(GridFamily::Fibonacci),
            other => Err(Error::InvalidGrid(format!("unsupported grid kind '{other}'"))),
        }
    }
}

/// How a grid was built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GridKind {
    /// Gauss–Legendre nodes in `cos θ` times equispaced longitudes `φ_k = 2πk / n_phi`.
    GaussProduct { n_theta: usize, n_phi: usize },
    /// Equal-weight Fibonacci lattice.
    Fibonacci { n: usize },
    /// Caller-supplied nodes with equal weights.
    Custom { n: usize },
}

impl fmt::Display for GridKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GridKind::GaussProduct { n_theta, n_phi } => write!(f, "{n_theta}x{n_phi}"),
            GridKind::Fibonacci { n } => write!(f, "fibonacci:{n}"),
            GridKind::Custom { n } => write!(f, "custom:{n}"),
        }
    }
}

/// Weighted node set discretizing `dμ`; weights sum to one.
#[derive(Debug, Clone)]
pub struct SphereGrid {
    kind: GridKind,
    nodes: Vec<SpherePoint>,
    vectors: Vec<[f64; 3]>,
    weights: Vec<f64>,
}

/// `gauss-product` of order `q` gives `q × 2q` nodes; `fibonacci` gives `resolution` nodes.
pub fn build_grid(family: GridFamily, resolution: usize) -> Result<SphereGrid> {
    match family {
        GridFamily::GaussProduct => SphereGrid::gauss_product(resolution, 2 * resolution),
        GridFamily::Fibonacci => SphereGrid::fibonacci(resolution),
    }
}

impl SphereGrid {
    pub fn gauss_product(n_theta: usize, n_phi: usize) -> Result<Self> {
        if n_theta < 2 || n_phi < 1 {
            return Err(Error::InvalidGrid(format!("gauss-product grid {n_theta}x{n_phi} is too small")));
        }
        let (x, w) = quadrature::gauss_legendre(n_theta);
        let mut nodes = Vec::with_capacity(n_theta * n_phi);
        let mut weights = Vec::with_capacity(n_theta * n_phi);
        // north to south: x = cos θ descending
        for i in (0..n_theta).rev() {
            let theta = x[i].clamp(-1.0, 1.0).acos();
            for k in 0..n_phi {
                nodes.push(SpherePoint::canonical(theta, TAU * k as f64 / n_phi as f64));
                weights.push(0.5 * w[i] / n_phi as f64);
            }
        }
        Ok(Self::assemble(GridKind::GaussProduct { n_theta, n_phi }, nodes, weights))
    }

    pub fn fibonacci(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGrid(format!("fibonacci grid needs at least 2 nodes, got {n}")));
        }
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        let nodes = (0..n)
            .map(|i| {
                let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
                SpherePoint::canonical(z.acos(), TAU * i as f64 / golden)
            })
            .collect();
        Ok(Self::assemble(GridKind::Fibonacci { n }, nodes, vec![1.0 / n as f64; n]))
    }

    /// Equal-weight grid on arbitrary points.
    pub fn from_points(points: Vec<SpherePoint>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidGrid("no points".into()));
        }
        let n = points.len();
        Ok(Self::assemble(GridKind::Custom { n }, points, vec![1.0; n]))
    }

    fn assemble(kind: GridKind, nodes: Vec<SpherePoint>, mut weights: Vec<f64>) -> Self {
        let total: f64 = weights.iter().sum();
        for w in &mut weights {
            *w /= total;
        }
        let vectors = nodes.iter().map(|p| p.to_vector()).collect();
        Self { kind, nodes, vectors, weights }
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[SpherePoint] {
        &self.nodes
    }

    pub fn vectors(&self) -> &[[f64; 3]] {
        &self.vectors
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `Σ w_i f(p_i)`.
    pub fn integrate<F: Fn(SpherePoint) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&p, w)| w * f(p)).sum()
    }

    /// Smallest geodesic separation between distinct nodes (quadratic; meant for checks).
    pub fn min_separation(&self) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..self.vectors.len() {
            for k in (i + 1)..self.vectors.len() {
                best = best.min(vector_angle(&self.vectors[i], &self.vectors[k]));
            }
        }
        best
    }

    /// CSV with header `theta,phi,weight`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "theta,phi,weight")?;
        for (p, w) in self.nodes.iter().zip(&self.weights) {
            writeln!(out, "{},{},{}", p.theta, p.phi, w)?;
        }
        Ok(())
    }
}

/// Meridian mass `½ ∫₀ᵗ f(θ, φ) sin θ dθ` at fixed longitude.
pub fn meridian_cdf<F: Fn(SpherePoint) -> f64>(f: &F, phi: f64, t: f64) -> Result<f64> {
    let t = t.clamp(0.0, PI);
    let integrand = |theta: f64| 0.5 * f(SpherePoint { theta, phi }) * theta.sin();
    quadrature::adaptive(&integrand, 0.0, t, 1e-14)
}
