//! Primal network simplex for the uncapacitated bipartite transportation problem.
//!
//! Sources `0..m` and sinks `m..m+n` hang off an artificial root through big-M arcs. The
//! spanning tree is kept strongly feasible (leaving arc chosen by Cunningham's rule), which
//! rules out cycling on degenerate pivots. Entering arcs come from block-search pricing.

use crate::error::{Error, Result};

const NONE: usize = usize::MAX;
/// Reduced costs above `-PRICE_EPS` count as nonnegative.
const PRICE_EPS: f64 = 1e-12;
/// Dense cost tables are used up to this many entries (~320 MB).
const DENSE_LIMIT: usize = 40_000_000;

/// Cost of arc `(i, j)`, either tabulated or computed on demand.
pub(crate) enum CostTable<F: Fn(usize, usize) -> f64> {
    Dense { values: Vec<f64>, cols: usize },
    Lazy(F),
}

impl<F: Fn(usize, usize) -> f64 + Sync> CostTable<F> {
    pub(crate) fn new(rows: usize, cols: usize, f: F) -> Self {
        if rows.saturating_mul(cols) > DENSE_LIMIT {
            return CostTable::Lazy(f);
        }
        use rayon::prelude::*;
        let mut values = vec![0.0; rows * cols];
        values.par_chunks_mut(cols.max(1)).enumerate().for_each(|(i, row)| {
            for (j, c) in row.iter_mut().enumerate() {
                *c = f(i, j);
            }
        });
        CostTable::Dense { values, cols }
    }

    #[inline]
    pub(crate) fn get(&self, i: usize, j: usize) -> f64 {
        match self {
            CostTable::Dense { values, cols } => values[i * cols + j],
            CostTable::Lazy(f) => f(i, j),
        }
    }
}

/// Optimal flows on source/sink pairs with node potentials.
pub(crate) struct SimplexSolution {
    pub flows: Vec<(usize, usize, f64)>,
    /// `u_i` with `u_i + v_j ≤ c_ij`.
    #[allow(dead_code)]
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub pivots: usize,
}

struct Tree<'c, F: Fn(usize, usize) -> f64> {
    m: usize,
    n: usize,
    cost: &'c CostTable<F>,
    art_cost: f64,
    parent: Vec<usize>,
    pred: Vec<usize>,
    /// `true` when the tree arc above a node points from the node to its parent.
    up: Vec<bool>,
    flow: Vec<f64>,
    pot: Vec<f64>,
    depth: Vec<usize>,
    first_child: Vec<usize>,
    next_sib: Vec<usize>,
    prev_sib: Vec<usize>,
    stack: Vec<usize>,
    path: Vec<usize>,
}

impl<'c, F: Fn(usize, usize) -> f64 + Sync> Tree<'c, F> {
    fn real_arcs(&self) -> usize {
        self.m * self.n
    }

    #[inline]
    fn endpoints(&self, e: usize) -> (usize, usize) {
        let real = self.real_arcs();
        if e < real {
            (e / self.n, self.m + e % self.n)
        } else {
            let v = e - real;
            let root = self.m + self.n;
            if v < self.m {
                (v, root)
            } else {
                (root, v)
            }
        }
    }

    #[inline]
    fn arc_cost(&self, e: usize) -> f64 {
        if e < self.real_arcs() {
            self.cost.get(e / self.n, e % self.n)
        } else {
            self.art_cost
        }
    }

    fn remove_child(&mut self, p: usize, c: usize) {
        let (prev, next) = (self.prev_sib[c], self.next_sib[c]);
        if prev == NONE {
            self.first_child[p] = next;
        } else {
            self.next_sib[prev] = next;
        }
        if next != NONE {
            self.prev_sib[next] = prev;
        }
        self.prev_sib[c] = NONE;
        self.next_sib[c] = NONE;
    }

    fn add_child(&mut self, p: usize, c: usize) {
        let head = self.first_child[p];
        self.next_sib[c] = head;
        self.prev_sib[c] = NONE;
        if head != NONE {
            self.prev_sib[head] = c;
        }
        self.first_child[p] = c;
        self.parent[c] = p;
    }

    fn new(supply: &[f64], demand: &[f64], cost: &'c CostTable<F>) -> Self {
        let (m, n) = (supply.len(), demand.len());
        let nodes = m + n + 1;
        let root = m + n;
        let art_cost = (std::f64::consts::PI + 1.0) * nodes as f64;
        let mut t = Tree {
            m,
            n,
            cost,
            art_cost,
            parent: vec![NONE; nodes],
            pred: vec![NONE; nodes],
            up: vec![false; nodes],
            flow: vec![0.0; nodes],
            pot: vec![0.0; nodes],
            depth: vec![0; nodes],
            first_child: vec![NONE; nodes],
            next_sib: vec![NONE; nodes],
            prev_sib: vec![NONE; nodes],
            stack: Vec::new(),
            path: Vec::new(),
        };
        for v in 0..m + n {
            t.add_child(root, v);
            t.pred[v] = m * n + v;
            t.depth[v] = 1;
            if v < m {
                t.up[v] = true;
                t.flow[v] = supply[v];
                t.pot[v] = -art_cost;
            } else {
                t.flow[v] = demand[v - m];
                t.pot[v] = art_cost;
            }
        }
        t
    }

    fn reduced_cost(&self, i: usize, j: usize) -> f64 {
        self.cost.get(i, j) + self.pot[i] - self.pot[self.m + j]
    }

    fn pivot(&mut self, e_in: usize) -> Result<()> {
        let (first, second) = self.endpoints(e_in);
        let (mut a, mut b) = (first, second);
        while a != b {
            if self.depth[a] >= self.depth[b] {
                a = self.parent[a];
            } else {
                b = self.parent[b];
            }
        }
        let join = a;

        let mut delta = f64::INFINITY;
        let mut u_out = NONE;
        let mut from_first = true;
        let mut w = first;
        while w != join {
            if self.up[w] && self.flow[w] < delta {
                delta = self.flow[w];
                u_out = w;
            }
            w = self.parent[w];
        }
        w = second;
        while w != join {
            if !self.up[w] && self.flow[w] <= delta {
                delta = self.flow[w];
                u_out = w;
                from_first = false;
            }
            w = self.parent[w];
        }
        if u_out == NONE {
            return Err(Error::Infeasible("unbounded pivot cycle".into()));
        }

        if delta > 0.0 {
            let mut w = first;
            while w != join {
                self.flow[w] += if self.up[w] { -delta } else { delta };
                w = self.parent[w];
            }
            w = second;
            while w != join {
                self.flow[w] += if self.up[w] { delta } else { -delta };
                w = self.parent[w];
            }
        }

        let (u_in, v_in) = if from_first { (first, second) } else { (second, first) };
        let rc = self.arc_cost(e_in) + self.pot[first] - self.pot[second];
        let shift = if from_first { -rc } else { rc };

        // re-hang the path u_in → … → u_out below v_in
        let mut path = std::mem::take(&mut self.path);
        path.clear();
        let mut w = u_in;
        loop {
            path.push(w);
            if w == u_out {
                break;
            }
            w = self.parent[w];
        }
        let out_parent = self.parent[u_out];
        self.remove_child(out_parent, u_out);
        for k in 1..path.len() {
            self.remove_child(path[k], path[k - 1]);
        }
        let mut carried = (self.pred[path[0]], self.up[path[0]], self.flow[path[0]]);
        for k in 1..path.len() {
            let node = path[k];
            let next = (self.pred[node], self.up[node], self.flow[node]);
            self.pred[node] = carried.0;
            self.up[node] = !carried.1;
            self.flow[node] = carried.2;
            self.add_child(path[k - 1], node);
            carried = next;
        }
        self.pred[u_in] = e_in;
        self.up[u_in] = u_in == first;
        self.flow[u_in] = delta;
        self.add_child(v_in, u_in);
        self.path = path;

        // potentials and depths of the moved subtree
        let mut stack = std::mem::take(&mut self.stack);
        stack.clear();
        stack.push(u_in);
        while let Some(x) = stack.pop() {
            self.pot[x] += shift;
            self.depth[x] = self.depth[self.parent[x]] + 1;
            let mut c = self.first_child[x];
            while c != NONE {
                stack.push(c);
                c = self.next_sib[c];
            }
        }
        self.stack = stack;
        Ok(())
    }

    /// Recomputes potentials from the tree so that every tree arc has zero reduced cost.
    fn refresh_potentials(&mut self) {
        let root = self.m + self.n;
        self.pot[root] = 0.0;
        let mut stack = vec![root];
        while let Some(x) = stack.pop() {
            let mut c = self.first_child[x];
            while c != NONE {
                let cost = self.arc_cost(self.pred[c]);
                self.pot[c] = if self.up[c] { self.pot[x] - cost } else { self.pot[x] + cost };
                stack.push(c);
                c = self.next_sib[c];
            }
        }
    }
}

/// Solves `min Σ c_ij x_ij` subject to row sums `supply` and column sums `demand`.
///
/// Masses must be positive and balanced; the caller handles sparsification.
pub(crate) fn network_simplex<F: Fn(usize, usize) -> f64 + Sync>(
    supply: &[f64],
    demand: &[f64],
    cost: &CostTable<F>,
    max_pivots: usize,
) -> Result<SimplexSolution> {
    let (m, n) = (supply.len(), demand.len());
    let mut tree = Tree::new(supply, demand, cost);
    let arcs = m * n;
    let block = ((arcs as f64).sqrt().ceil() as usize).max(10).min(arcs.max(1));
    let mut next_arc = 0usize;
    let mut pivots = 0usize;

    loop {
        // block search: best candidate in the first block holding a violating arc
        let mut best = -PRICE_EPS;
        let mut entering = NONE;
        let mut scanned = 0usize;
        let mut in_block = 0usize;
        let mut e = next_arc;
        while scanned < arcs {
            let (i, j) = (e / n, e % n);
            let rc = tree.reduced_cost(i, j);
            if rc < best {
                best = rc;
                entering = e;
            }
            scanned += 1;
            in_block += 1;
            e += 1;
            if e == arcs {
                e = 0;
            }
            if in_block == block {
                if entering != NONE {
                    break;
                }
                in_block = 0;
            }
        }
        next_arc = e;
        if entering == NONE {
            break;
        }
        if pivots >= max_pivots {
            return Err(Error::IterationCap(max_pivots));
        }
        tree.pivot(entering)?;
        pivots += 1;
    }

    let root = m + n;
    let mut flows = Vec::new();
    for v in 0..m + n {
        let e = tree.pred[v];
        if e >= arcs {
            if tree.flow[v] > 1e-9 {
                return Err(Error::Infeasible(format!("artificial flow {} remains at node {v}", tree.flow[v])));
            }
            continue;
        }
        if tree.flow[v] > 0.0 {
            flows.push((e / n, e % n, tree.flow[v]));
        }
    }
    debug_assert!(tree.parent[root] == NONE);
    tree.refresh_potentials();
    let u = (0..m).map(|i| -tree.pot[i]).collect();
    let v = (0..n).map(|j| tree.pot[m + j]).collect();
    Ok(SimplexSolution { flows, u, v, pivots })
}
