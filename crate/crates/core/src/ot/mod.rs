//! Discrete Monge–Kantorovich transport between measures on sphere grids.

mod simplex;

use std::io::Write;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::husimi::{husimi, HusimiField};
use crate::qstate::{rotation_unitary, DensityMatrix, SpinQuantum};
use crate::sphere::{vector_angle, SphereGrid};
use simplex::{network_simplex, CostTable};

/// Nodes lighter than this are dropped before solving.
pub const MASS_FLOOR: f64 = 1e-14;
pub const MASS_TOL: f64 = 1e-10;
pub const MAX_PIVOTS: usize = 10_000_000;

/// Nonnegative masses on the nodes of a grid, summing to one.
#[derive(Debug, Clone)]
pub struct DiscreteMeasure {
    grid: Arc<SphereGrid>,
    masses: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn new(grid: Arc<SphereGrid>, masses: Vec<f64>) -> Result<Self> {
        if masses.len() != grid.len() {
            return Err(Error::DimensionMismatch(masses.len(), grid.len()));
        }
        if let Some(&bad) = masses.iter().find(|m| !(m.is_finite() && **m >= 0.0)) {
            return Err(Error::OutOfRange(format!("mass {bad}")));
        }
        let total: f64 = masses.iter().sum();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidTrace(total));
        }
        Ok(Self { grid, masses })
    }

    pub fn grid(&self) -> &Arc<SphereGrid> {
        &self.grid
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }
}

/// Samples `H · weight` on the grid and renormalizes to unit mass.
pub fn discretize(field: &HusimiField, grid: &Arc<SphereGrid>) -> Result<DiscreteMeasure> {
    let mut masses: Vec<f64> = field.sample(grid).iter().zip(grid.weights()).map(|(h, w)| (h * w).max(0.0)).collect();
    let total: f64 = masses.iter().sum();
    if !(total > 0.0 && total.is_finite()) {
        return Err(Error::ZeroVector);
    }
    masses.iter_mut().for_each(|m| *m /= total);
    DiscreteMeasure::new(grid.clone(), masses)
}

/// An optimal coupling with its Kantorovich potentials.
#[derive(Debug, Clone)]
pub struct TransportPlan {
    source: Arc<SphereGrid>,
    target: Arc<SphereGrid>,
    /// `(source index, target index, mass)`.
    pub pairs: Vec<(usize, usize, f64)>,
    pub objective: f64,
    /// `u_i + v_j ≤ d(x_i, y_j)` for all pairs.
    pub dual_source: Vec<f64>,
    pub dual_target: Vec<f64>,
    pub dual_objective: f64,
    pub pivots: usize,
}

impl TransportPlan {
    pub fn source_grid(&self) -> &Arc<SphereGrid> {
        &self.source
    }

    pub fn target_grid(&self) -> &Arc<SphereGrid> {
        &self.target
    }

    /// Row and column sums of the coupling.
    pub fn marginals(&self) -> (Vec<f64>, Vec<f64>) {
        let mut rows = vec![0.0; self.source.len()];
        let mut cols = vec![0.0; self.target.len()];
        for &(i, j, x) in &self.pairs {
            rows[i] += x;
            cols[j] += x;
        }
        (rows, cols)
    }

    pub fn cost(&self, i: usize, j: usize) -> f64 {
        vector_angle(&self.source.vectors()[i], &self.target.vectors()[j])
    }

    /// CSV with header `src_theta,src_phi,dst_theta,dst_phi,mass`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "src_theta,src_phi,dst_theta,dst_phi,mass")?;
        for &(i, j, x) in &self.pairs {
            let (a, b) = (self.source.nodes()[i], self.target.nodes()[j]);
            writeln!(out, "{},{},{},{},{}", a.theta, a.phi, b.theta, b.phi, x)?;
        }
        Ok(())
    }
}

fn same_grid(a: &Arc<SphereGrid>, b: &Arc<SphereGrid>) -> bool {
    Arc::ptr_eq(a, b) || a.vectors() == b.vectors()
}

/// Keeps nodes at or above [`MASS_FLOOR`] and rescales them back to `total`.
fn sparsify(masses: &[f64], total: f64) -> (Vec<usize>, Vec<f64>) {
    let kept: Vec<usize> = (0..masses.len()).filter(|&i| masses[i] >= MASS_FLOOR).collect();
    let sum: f64 = kept.iter().map(|&i| masses[i]).sum();
    let scale = if sum > 0.0 { total / sum } else { 0.0 };
    let values = kept.iter().map(|&i| masses[i] * scale).collect();
    (kept, values)
}

/// Optimal transport between two measures with geodesic ground cost.
///
/// On a shared grid the common mass `min(μ, ν)` stays in place and only the excess of `μ`
/// over `ν` is moved, which is exact because the cost is a metric.
pub fn solve_transport(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<TransportPlan> {
    let (sa, sb): (f64, f64) = (mu.masses.iter().sum(), nu.masses.iter().sum());
    if (sa - sb).abs() > MASS_TOL {
        return Err(Error::Infeasible(format!("total masses differ: {sa} vs {sb}")));
    }
    if same_grid(&mu.grid, &nu.grid) {
        solve_same_grid(mu, nu)
    } else {
        solve_general(mu, nu)
    }
}

fn solve_general(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<TransportPlan> {
    let (xs, ys) = (mu.grid.vectors(), nu.grid.vectors());
    let (src, supply) = sparsify(&mu.masses, 1.0);
    let (dst, demand) = sparsify(&nu.masses, 1.0);
    let table = CostTable::new(src.len(), dst.len(), |i, j| vector_angle(&xs[src[i]], &ys[dst[j]]));
    let sol = network_simplex(&supply, &demand, &table, MAX_PIVOTS)?;
    let pairs: Vec<_> = sol.flows.iter().map(|&(i, j, x)| (src[i], dst[j], x)).collect();

    // extend the potentials to every node by a double c-transform
    let v_kept = &sol.v;
    let u_all: Vec<f64> = xs
        .par_iter()
        .map(|x| dst.iter().zip(v_kept).map(|(&j, vj)| vector_angle(x, &ys[j]) - vj).fold(f64::INFINITY, f64::min))
        .collect();
    let v_all: Vec<f64> = ys
        .par_iter()
        .map(|y| xs.iter().zip(&u_all).map(|(x, ui)| vector_angle(x, y) - ui).fold(f64::INFINITY, f64::min))
        .collect();
    finish(mu, nu, pairs, u_all, v_all, sol.pivots)
}

fn solve_same_grid(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<TransportPlan> {
    let xs = mu.grid.vectors();
    let diff: Vec<f64> = mu.masses.iter().zip(&nu.masses).map(|(a, b)| a - b).collect();
    let excess: Vec<f64> = diff.iter().map(|d| d.max(0.0)).collect();
    let deficit: Vec<f64> = diff.iter().map(|d| (-d).max(0.0)).collect();
    let moved = 0.5 * (excess.iter().sum::<f64>() + deficit.iter().sum::<f64>());
    let mut pairs: Vec<(usize, usize, f64)> = mu
        .masses
        .iter()
        .zip(&nu.masses)
        .enumerate()
        .filter_map(|(i, (a, b))| {
            let m = a.min(*b);
            (m > 0.0).then_some((i, i, m))
        })
        .collect();
    let (src, supply) = sparsify(&excess, moved);
    let (dst, demand) = sparsify(&deficit, moved);
    let mut pivots = 0;
    let phi: Vec<f64> = if src.is_empty() || dst.is_empty() {
        vec![0.0; xs.len()]
    } else {
        let table = CostTable::new(src.len(), dst.len(), |i, j| vector_angle(&xs[src[i]], &xs[dst[j]]));
        let sol = network_simplex(&supply, &demand, &table, MAX_PIVOTS)?;
        pivots = sol.pivots;
        pairs.extend(sol.flows.iter().map(|&(i, j, x)| (src[i], dst[j], x)));
        // 1-Lipschitz potential φ(z) = min_j d(z, y_j) − v_j
        let v = &sol.v;
        xs.par_iter()
            .map(|z| dst.iter().zip(v).map(|(&j, vj)| vector_angle(z, &xs[j]) - vj).fold(f64::INFINITY, f64::min))
            .collect()
    };
    let v_all = phi.iter().map(|p| -p).collect();
    finish(mu, nu, pairs, phi, v_all, pivots)
}

fn finish(
    mu: &DiscreteMeasure,
    nu: &DiscreteMeasure,
    pairs: Vec<(usize, usize, f64)>,
    dual_source: Vec<f64>,
    dual_target: Vec<f64>,
    pivots: usize,
) -> Result<TransportPlan> {
    let (xs, ys) = (mu.grid.vectors(), nu.grid.vectors());
    let objective = pairs.iter().map(|&(i, j, x)| x * vector_angle(&xs[i], &ys[j])).sum();
    let dual_objective = mu.masses.iter().zip(&dual_source).map(|(a, u)| a * u).sum::<f64>()
        + nu.masses.iter().zip(&dual_target).map(|(b, v)| b * v).sum::<f64>();
    Ok(TransportPlan {
        source: mu.grid.clone(),
        target: nu.grid.clone(),
        pairs,
        objective,
        dual_source,
        dual_target,
        dual_objective,
        pivots,
    })
}

/// Numeric Monge distance with its certificate: `lower ≤ estimate ≤ upper`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Bracket {
    pub estimate: f64,
    pub lower: f64,
    pub upper: f64,
    pub resolution: String,
    /// `(π/2) Σ|μ_i − ν_i|` on the same grid.
    #[serde(skip)]
    pub prop2_bound: f64,
}

impl Bracket {
    pub fn contains(&self, value: f64, slack: f64) -> bool {
        self.lower - slack <= value && value <= self.upper + slack
    }
}

/// Transport between the discretized Husimi densities of two states.
pub fn monge_numeric_plan(
    rho1: &DensityMatrix,
    rho2: &DensityMatrix,
    spin: SpinQuantum,
    grid: &Arc<SphereGrid>,
) -> Result<(Bracket, TransportPlan)> {
    let mu = discretize(&husimi(rho1, spin)?, grid)?;
    let nu = discretize(&husimi(rho2, spin)?, grid)?;
    let plan = solve_transport(&mu, &nu)?;
    let l1: f64 = mu.masses.iter().zip(&nu.masses).map(|(a, b)| (a - b).abs()).sum();
    let prop2_bound = 0.5 * std::f64::consts::PI * l1;
    let estimate = plan.objective;
    let bracket = Bracket {
        estimate,
        lower: plan.dual_objective,
        upper: estimate.min(prop2_bound),
        resolution: grid.kind().to_string(),
        prop2_bound,
    };
    Ok((bracket, plan))
}

/// Bracketed numeric Monge distance on the given grid.
pub fn monge_numeric(rho1: &DensityMatrix, rho2: &DensityMatrix, spin: SpinQuantum, grid: &Arc<SphereGrid>) -> Result<Bracket> {
    monge_numeric_plan(rho1, rho2, spin, grid).map(|(b, _)| b)
}

/// Numeric distances before and after rotating both states by `angle` about `axis`.
pub fn rotation_invariance_check(
    rho1: &DensityMatrix,
    rho2: &DensityMatrix,
    spin: SpinQuantum,
    axis: [f64; 3],
    angle: f64,
    grid: &Arc<SphereGrid>,
) -> Result<(f64, f64)> {
    let before = monge_numeric(rho1, rho2, spin, grid)?.estimate;
    let u = rotation_unitary(spin, axis, angle)?;
    let after = monge_numeric(&rho1.conjugate_by(&u)?, &rho2.conjugate_by(&u)?, spin, grid)?.estimate;
    Ok((before, after))
}
