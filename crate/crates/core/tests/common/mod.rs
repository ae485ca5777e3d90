//! Reference solvers shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use qmonge::ot::{DiscreteMeasure, TransportPlan};
use qmonge::sphere::{vector_angle, SphereGrid, SpherePoint};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn random_points(n: usize, rng: &mut ChaCha8Rng) -> Vec<SpherePoint> {
    (0..n)
        .map(|_| {
            let z: f64 = rng.random_range(-1.0..1.0);
            SpherePoint::new(z.acos(), rng.random_range(0.0..2.0 * PI)).unwrap()
        })
        .collect()
}

pub fn random_masses(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.01..1.0)).collect();
    let total: f64 = raw.iter().sum();
    raw.iter().map(|x| x / total).collect()
}

pub fn cost_matrix(a: &SphereGrid, b: &SphereGrid) -> Vec<Vec<f64>> {
    a.vectors().iter().map(|x| b.vectors().iter().map(|y| vector_angle(x, y)).collect()).collect()
}

/// Minimum over all vertices of the transportation polytope: every basis is a spanning
/// tree of `m + n − 1` cells, solved by peeling leaves.
pub fn vertex_enumeration(a: &[f64], b: &[f64], c: &[Vec<f64>]) -> f64 {
    let (m, n) = (a.len(), b.len());
    let cells: Vec<(usize, usize)> = (0..m).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let k = m + n - 1;
    let mut best = f64::INFINITY;
    let mut pick: Vec<usize> = (0..k).collect();
    loop {
        if let Some(value) = basis_value(&pick, &cells, a, b, c) {
            best = best.min(value);
        }
        // next k-combination
        let mut i = k;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if pick[i] != i + cells.len() - k {
                break;
            }
        }
        pick[i] += 1;
        for t in i + 1..k {
            pick[t] = pick[t - 1] + 1;
        }
    }
}

fn basis_value(pick: &[usize], cells: &[(usize, usize)], a: &[f64], b: &[f64], c: &[Vec<f64>]) -> Option<f64> {
    let (m, n) = (a.len(), b.len());
    let mut row = a.to_vec();
    let mut col = b.to_vec();
    let mut open: Vec<(usize, usize)> = pick.iter().map(|&p| cells[p]).collect();
    let mut value = 0.0;
    while !open.is_empty() {
        let mut progressed = false;
        for r in 0..m + n {
            let touching: Vec<usize> = (0..open.len())
                .filter(|&t| if r < m { open[t].0 == r } else { open[t].1 == r - m })
                .collect();
            if touching.len() != 1 {
                continue;
            }
            let t = touching[0];
            let (i, j) = open[t];
            let x = if r < m { row[i] } else { col[j] };
            if x < -1e-12 {
                return None;
            }
            row[i] -= x;
            col[j] -= x;
            value += x * c[i][j];
            open.swap_remove(t);
            progressed = true;
            break;
        }
        if !progressed {
            return None; // contains a cycle
        }
    }
    let residual = row.iter().chain(&col).map(|x| x.abs()).fold(0.0, f64::max);
    (residual < 1e-12).then_some(value)
}

/// Successive shortest paths with Bellman–Ford on the residual graph.
pub fn min_cost_flow(a: &[f64], b: &[f64], c: &[Vec<f64>]) -> f64 {
    let (m, n) = (a.len(), b.len());
    let mut flow = vec![vec![0.0; n]; m];
    let mut supply = a.to_vec();
    let mut demand = b.to_vec();
    loop {
        let remaining: f64 = supply.iter().sum();
        if remaining < 1e-15 {
            break;
        }
        // nodes: sources 0..m, sinks m..m+n; start from every source with supply
        let mut dist = vec![f64::INFINITY; m + n];
        let mut prev = vec![usize::MAX; m + n];
        for i in 0..m {
            if supply[i] > 1e-15 {
                dist[i] = 0.0;
            }
        }
        for _ in 0..m + n {
            let mut changed = false;
            for i in 0..m {
                for j in 0..n {
                    if dist[i] + c[i][j] < dist[m + j] - 1e-15 {
                        dist[m + j] = dist[i] + c[i][j];
                        prev[m + j] = i;
                        changed = true;
                    }
                    if flow[i][j] > 1e-15 && dist[m + j] - c[i][j] < dist[i] - 1e-15 {
                        dist[i] = dist[m + j] - c[i][j];
                        prev[i] = m + j;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let sink = (0..n).filter(|&j| demand[j] > 1e-15).min_by(|&x, &y| dist[m + x].total_cmp(&dist[m + y])).unwrap();
        let mut path = vec![m + sink];
        while prev[*path.last().unwrap()] != usize::MAX {
            path.push(prev[*path.last().unwrap()]);
        }
        let start = *path.last().unwrap();
        let mut delta = supply[start].min(demand[sink]);
        for w in path.windows(2) {
            let (to, from) = (w[0], w[1]);
            if from >= m {
                delta = delta.min(flow[to][from - m]);
            }
        }
        for w in path.windows(2) {
            let (to, from) = (w[0], w[1]);
            if from < m {
                flow[from][to - m] += delta;
            } else {
                flow[to][from - m] -= delta;
            }
        }
        supply[start] -= delta;
        demand[sink] -= delta;
    }
    (0..m).map(|i| (0..n).map(|j| flow[i][j] * c[i][j]).sum::<f64>()).sum()
}

pub fn check_certificate(plan: &TransportPlan, mu: &DiscreteMeasure, nu: &DiscreteMeasure) {
    let (rows, cols) = plan.marginals();
    for (r, a) in rows.iter().zip(mu.masses()) {
        assert!((r - a).abs() < 1e-9);
    }
    for (c, b) in cols.iter().zip(nu.masses()) {
        assert!((c - b).abs() < 1e-9);
    }
    assert!(plan.pairs.iter().all(|p| p.2 >= 0.0));
    assert!((plan.objective - plan.dual_objective).abs() <= 1e-8 * (1.0 + plan.objective));
    for &(i, j, _) in &plan.pairs {
        assert!((plan.dual_source[i] + plan.dual_target[j] - plan.cost(i, j)).abs() < 1e-9);
    }
    for i in 0..mu.masses().len() {
        for j in 0..nu.masses().len() {
            assert!(plan.dual_source[i] + plan.dual_target[j] <= plan.cost(i, j) + 1e-9);
        }
    }
}
