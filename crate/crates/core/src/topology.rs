//! Degeneracy classes of density-matrix spectra and their dimensions.
//!
//! A spectrum with distinct eigenvalues `E_1 > … > E_n` of multiplicities `k_1, …, k_n`
//! belongs to the stratum `[U(N)/(U(k_1)×…×U(k_n))] × G_n` of real dimension
//! `(N² − Σk_i²) + (n − 1)`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::qstate::DensityMatrix;

/// Default tolerance below which adjacent eigenvalues count as equal.
pub const DEFAULT_EPS: f64 = 1e-8;

/// Largest `N` for which the census fits in `u128`.
pub const MAX_CENSUS_N: usize = 128;

/// Multiplicities of the distinct eigenvalues, largest eigenvalue first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SpectrumType {
    pub n: usize,
    pub partition: Vec<usize>,
}

impl SpectrumType {
    pub fn new(partition: Vec<usize>) -> Result<Self> {
        if partition.is_empty() || partition.contains(&0) {
            return Err(Error::OutOfRange(format!("multiplicities must be positive, got {partition:?}")));
        }
        Ok(Self { n: partition.iter().sum(), partition })
    }

    /// Number of distinct eigenvalues.
    pub fn levels(&self) -> usize {
        self.partition.len()
    }

    /// Label such as `M_{112}`; multiplicities above 9 are comma separated.
    pub fn label(&self) -> String {
        let sep = if self.partition.iter().any(|&k| k > 9) { "," } else { "" };
        let body: Vec<String> = self.partition.iter().map(|k| k.to_string()).collect();
        format!("M_{{{}}}", body.join(sep))
    }
}

impl fmt::Display for SpectrumType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.partition.iter().map(|k| k.to_string()).collect();
        write!(f, "({})", body.join(","))
    }
}

/// Sorts the spectrum in descending order and merges neighbours closer than `eps`.
pub fn classify_spectrum(rho: &DensityMatrix, eps: f64) -> Result<SpectrumType> {
    let mut ev: Vec<f64> = rho.eigenvalues()?.iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    Ok(classify_sorted(&ev, eps))
}

/// Same as [`classify_spectrum`] for an eigenvalue list already sorted in descending order.
pub fn classify_sorted(eigenvalues: &[f64], eps: f64) -> SpectrumType {
    let mut partition = Vec::new();
    let mut run = 0;
    for (i, e) in eigenvalues.iter().enumerate() {
        if i > 0 && eigenvalues[i - 1] - e > eps {
            partition.push(run);
            run = 0;
        }
        run += 1;
    }
    if run > 0 {
        partition.push(run);
    }
    SpectrumType { n: eigenvalues.len(), partition }
}

/// Dimensions of a stratum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StratumDimension {
    pub d: usize,
    /// Flag manifold `U(N)/(U(k_1)×…×U(k_n))`.
    pub d1: usize,
    /// Part of the eigenvalue simplex.
    pub d2: usize,
}

pub fn stratum_dimension(t: &SpectrumType) -> StratumDimension {
    let d1 = t.n * t.n - t.partition.iter().map(|k| k * k).sum::<usize>();
    let d2 = t.levels() - 1;
    StratumDimension { d: d1 + d2, d1, d2 }
}

/// Number of integer partitions of every `k ≤ n`.
pub fn partition_numbers(n: usize) -> Vec<u128> {
    let mut p = vec![0u128; n + 1];
    p[0] = 1;
    for part in 1..=n {
        for total in part..=n {
            p[total] += p[total - part];
        }
    }
    p
}

/// All partitions of `n`, parts in non-increasing order, in reverse lexicographic order.
pub fn enumerate_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            cur.push(part);
            go(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        go(n, n, &mut Vec::new(), &mut out);
    }
    out
}

/// All compositions of `n` (ordered multiplicity lists), with fewer parts first.
pub fn enumerate_compositions(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in 1..=rest {
            cur.push(part);
            go(rest - part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        go(n, &mut Vec::new(), &mut out);
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// `C(n, k)` in exact integer arithmetic.
fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartitionCensus {
    pub n: usize,
    /// `P(N)`, the number of non-homeomorphic strata.
    pub partitions: u128,
    /// `part_counts[m − 1]` parts of the asymmetric simplex are homeomorphic to `G_m`.
    pub part_counts: Vec<u128>,
    /// `2^{N−1}`.
    pub total_parts: u128,
}

pub fn partition_census(n: usize) -> Result<PartitionCensus> {
    if n == 0 || n > MAX_CENSUS_N {
        return Err(Error::OutOfRange(format!("census needs 1 <= N <= {MAX_CENSUS_N}, got {n}")));
    }
    let part_counts: Vec<u128> = (1..=n).map(|m| binomial(n - 1, m - 1)).collect();
    Ok(PartitionCensus {
        n,
        partitions: partition_numbers(n)[n],
        total_parts: part_counts.iter().sum(),
        part_counts,
    })
}

/// `P(N) · 4√3 N / exp(π √(2N/3))`, which tends to one.
pub fn hardy_ramanujan_ratio(n: usize) -> f64 {
    let p = partition_numbers(n)[n] as f64;
    let nf = n as f64;
    p * 4.0 * 3f64.sqrt() * nf / (std::f64::consts::PI * (2.0 * nf / 3.0).sqrt()).exp()
}

/// One line of the stratum table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StratumRow {
    pub label: String,
    pub partition: Vec<usize>,
    pub d: usize,
    pub d1: usize,
    pub d2: usize,
}

/// Every composition of `n` with its dimensions.
pub fn stratum_table(n: usize) -> Result<Vec<StratumRow>> {
    if n == 0 || n > 20 {
        return Err(Error::OutOfRange(format!("stratum table needs 1 <= N <= 20, got {n}")));
    }
    Ok(enumerate_compositions(n)
        .into_iter()
        .map(|partition| {
            let t = SpectrumType { n, partition };
            let dim = stratum_dimension(&t);
            StratumRow { label: t.label(), partition: t.partition, d: dim.d, d1: dim.d1, d2: dim.d2 }
        })
        .collect())
}
