//! Majorana stellar representation of pure spin states and the simplified Monge distance.
//!
//! `<θ,φ|ψ> = cos^{2j}(θ/2) P(w)` with `P(w) = Σ_k sqrt(C(2j,k)) ψ_k w^k` and
//! `w = tan(θ/2) e^{−iφ}`, so the zeros of the Husimi function are the roots of `P`. Roots at
//! `w = 0` sit on the north pole and roots at infinity on the south pole.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::linalg::Schur;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qstate::linalg::eigh;
use crate::qstate::{rotation_unitary, spin_matrices, CMatrix, CVector, PureState, SpinQuantum};
use crate::special::ln_binomial;
use crate::sphere::{geodesic, rotate_point, SpherePoint};

/// Amplitudes below this fraction of the largest one count as zero when deflating.
const DEFLATION_TOL: f64 = 1e-14;
/// Single-linkage radii (geodesic) at which groups of eigenvalues are tested as one root.
const CLUSTER_RADII: [f64; 4] = [0.8, 0.4, 0.2, 0.1];
/// A `k`-fold root at the north pole leaves the `k` leading amplitudes below this fraction
/// of the next one.
const MULTIPLICITY_TOL: f64 = 1e-10;
const NEWTON_STEPS: usize = 30;

/// The `2j` zeros of the Husimi function of a pure state, with multiplicity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StellarRoots {
    #[serde(skip)]
    pub spin: SpinQuantum,
    pub points: Vec<SpherePoint>,
}

fn sqrt_binomials(spin: SpinQuantum) -> Vec<f64> {
    let two_j = spin.two_j() as u64;
    (0..=two_j).map(|k| (0.5 * ln_binomial(two_j, k)).exp()).collect()
}

/// `(p(w), p'(w))` by Horner's rule, coefficients in ascending order.
fn horner(coeffs: &[Complex64], w: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        dp = dp * w + p;
        p = p * w + c;
    }
    (p, dp)
}

/// One Newton step, taken in `1/w` for large roots, kept only if it lowers the residual.
fn polish(coeffs: &[Complex64], w: Complex64) -> Complex64 {
    let try_step = |c: &[Complex64], z: Complex64| {
        let (p, dp) = horner(c, z);
        if dp.norm() == 0.0 {
            return z;
        }
        let z2 = z - p / dp;
        if horner(c, z2).0.norm() < p.norm() {
            z2
        } else {
            z
        }
    };
    if w.norm() <= 1.0 {
        try_step(coeffs, w)
    } else {
        let reversed: Vec<Complex64> = coeffs.iter().rev().copied().collect();
        1.0 / try_step(&reversed, 1.0 / w)
    }
}

/// Companion-matrix eigenvalues of `Σ c_k w^k` with nonzero constant and leading coefficients.
fn companion_eigenvalues(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let d = coeffs.len() - 1;
    if d == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[d];
    let companion = DMatrix::from_fn(d, d, |r, c| {
        if c == d - 1 {
            -coeffs[r] / lead
        } else if r == c + 1 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let schur = Schur::try_new(companion, 1e-15, 100_000).ok_or(Error::EigenFailure)?;
    let (_, t) = schur.unpack();
    Ok((0..d).map(|k| t[(k, k)]).collect())
}

fn root_to_point(w: Complex64) -> SpherePoint {
    let theta = 2.0 * w.norm().atan();
    SpherePoint::new(theta, -w.arg()).expect("finite root")
}

/// Stellar roots of a pure spin-`j` state.
pub fn stellar_roots(psi: &PureState, spin: SpinQuantum) -> Result<StellarRoots> {
    if psi.dim() != spin.dim() {
        return Err(Error::DimensionMismatch(psi.dim(), spin.dim()));
    }
    let amps = psi.amplitudes();
    let scale = sqrt_binomials(spin);
    let coeffs: Vec<Complex64> = amps.iter().zip(&scale).map(|(a, s)| a * s).collect();
    let biggest = amps.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if biggest == 0.0 {
        return Err(Error::ZeroVector);
    }
    // binomial weights span many decades for large j, so amplitudes decide what is zero
    let small = |c: &Complex64| c.norm() <= DEFLATION_TOL * biggest;
    let low = amps.iter().take_while(|c| small(c)).count();
    let high = amps.iter().rev().take_while(|c| small(c)).count();
    let points = clustered_roots(psi, spin, &coeffs, low, high)?;
    Ok(StellarRoots { spin, points })
}

/// A root candidate: a companion eigenvalue or a deflated pole root.
#[derive(Debug, Clone, Copy)]
enum Candidate {
    Finite(Complex64),
    North,
    South,
}

impl Candidate {
    fn point(self) -> SpherePoint {
        match self {
            Candidate::Finite(w) => root_to_point(w),
            Candidate::North => SpherePoint::north(),
            Candidate::South => SpherePoint::south(),
        }
    }
}

/// Roots of the full polynomial, with multiple roots resolved as clusters.
///
/// A `k`-fold root splits into `k` eigenvalues spread by about `ε^{1/k}`, which for large
/// `k` is wide. Groups are therefore tried coarse to fine: the whole root set first, then
/// single-linkage groups at shrinking radii. A group is accepted as one multiple root when
/// its center, refined in a frame where it sits on the north pole, annihilates the `k`
/// lowest coefficients there. Deflated pole roots take part: dropping a tiny end
/// coefficient leaves the root sum unchanged, so the group mean still lands on the root.
fn clustered_roots(
    psi: &PureState,
    spin: SpinQuantum,
    coeffs: &[Complex64],
    low: usize,
    high: usize,
) -> Result<Vec<SpherePoint>> {
    let core = &coeffs[low..coeffs.len() - high];
    let mut cands = vec![Candidate::North; low];
    cands.extend(companion_eigenvalues(core)?.into_iter().map(Candidate::Finite));
    cands.extend(std::iter::repeat_n(Candidate::South, high));
    let ctx = Roots { psi, spin, core, pts: cands.iter().map(|c| c.point()).collect(), cands };
    let mut out = Vec::with_capacity(ctx.cands.len());
    ctx.resolve((0..ctx.cands.len()).collect(), 0, &mut out)?;
    Ok(out)
}

struct Roots<'a> {
    psi: &'a PureState,
    spin: SpinQuantum,
    core: &'a [Complex64],
    cands: Vec<Candidate>,
    pts: Vec<SpherePoint>,
}

impl Roots<'_> {
    fn resolve(&self, group: Vec<usize>, level: usize, out: &mut Vec<SpherePoint>) -> Result<()> {
        let members: Vec<Candidate> = group.iter().map(|&i| self.cands[i]).collect();
        let any_finite = members.iter().any(|c| matches!(c, Candidate::Finite(_)));
        if members.len() > 1 && any_finite {
            if let Some(center) = multiple_root(self.psi, self.spin, &members)? {
                out.extend(std::iter::repeat_n(center, members.len()));
                return Ok(());
            }
            for radius in &CLUSTER_RADII[level..] {
                let parts = self.split(&group, *radius);
                if parts.len() > 1 {
                    let next = CLUSTER_RADII.iter().position(|r| r == radius).expect("listed radius") + 1;
                    for part in parts {
                        self.resolve(part, next, out)?;
                    }
                    return Ok(());
                }
            }
        }
        out.extend(members.iter().map(|&c| match c {
            Candidate::Finite(w) => root_to_point(polish(self.core, w)),
            pole => pole.point(),
        }));
        Ok(())
    }

    /// Single-linkage components of `group` at geodesic `radius`.
    fn split(&self, group: &[usize], radius: f64) -> Vec<Vec<usize>> {
        let d = group.len();
        let mut label: Vec<usize> = (0..d).collect();
        fn find(label: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while label[r] != r {
                r = label[r];
            }
            label[x] = r;
            r
        }
        for a in 0..d {
            for b in a + 1..d {
                if geodesic(self.pts[group[a]], self.pts[group[b]]) < radius {
                    let (ra, rb) = (find(&mut label, a), find(&mut label, b));
                    label[ra] = rb;
                }
            }
        }
        let mut parts: Vec<Vec<usize>> = Vec::new();
        let mut slot = vec![usize::MAX; d];
        for (i, &member) in group.iter().enumerate() {
            let r = find(&mut label, i);
            if slot[r] == usize::MAX {
                slot[r] = parts.len();
                parts.push(Vec::new());
            }
            parts[slot[r]].push(member);
        }
        parts
    }
}

/// Center of a group of candidates, if it is a root of full multiplicity.
fn multiple_root(psi: &PureState, spin: SpinQuantum, members: &[Candidate]) -> Result<Option<SpherePoint>> {
    let k = members.len();
    if k == spin.two_j() as usize {
        // all roots coincide only for a coherent state, whose roots face away from <J>
        let v = spin_expectation(psi, spin);
        if v.iter().all(|x| *x == 0.0) {
            return Ok(None);
        }
        return confirm(psi, spin, k, SpherePoint::from_vector([-v[0], -v[1], -v[2]]));
    }
    let has_north = members.iter().any(|c| matches!(c, Candidate::North));
    let has_south = members.iter().any(|c| matches!(c, Candidate::South));
    let mean_of = |f: &dyn Fn(Complex64) -> Complex64| -> Complex64 {
        members
            .iter()
            .map(|c| match c {
                Candidate::Finite(w) => f(*w),
                _ => Complex64::new(0.0, 0.0),
            })
            .sum::<Complex64>()
            / k as f64
    };
    let (direct, inverse) = (mean_of(&|w| w), mean_of(&|w| 1.0 / w));
    let w_mean = match (has_north, has_south) {
        (true, true) => return Ok(None),
        (true, false) => direct,
        (false, true) => 1.0 / inverse,
        (false, false) if direct.norm() <= 1.0 => direct,
        (false, false) => 1.0 / inverse,
    };
    let first = if w_mean.is_finite() { root_to_point(w_mean) } else { SpherePoint::south() };
    confirm(psi, spin, k, first)
}

fn spin_expectation(psi: &PureState, spin: SpinQuantum) -> [f64; 3] {
    let (jx, jy, jz) = spin_matrices(spin);
    let a = psi.amplitudes();
    [&jx, &jy, &jz].map(|m| a.dotc(&(m * a)).re)
}

/// Refines `first` to a `k`-fold root and checks that it is one.
fn confirm(psi: &PureState, spin: SpinQuantum, k: usize, first: SpherePoint) -> Result<Option<SpherePoint>> {
    // in the turned frame the k-fold root is a simple root of the (k−1)-th derivative near 0,
    // here divided by (k−1)! to stay in range
    let scale = sqrt_binomials(spin);
    let turner = Turner::for_spin(spin)?;
    let (angle, phi) = north_turn(first);
    let t: Vec<Complex64> = turner.turn(psi.amplitudes(), angle, phi).iter().zip(&scale).map(|(a, s)| a * s).collect();
    let derived: Vec<Complex64> = (k - 1..t.len())
        .map(|i| t[i] * ln_binomial(i as u64, (k - 1) as u64).exp())
        .collect();
    let mut w = Complex64::new(0.0, 0.0);
    for _ in 0..NEWTON_STEPS {
        let (p, dp) = horner(&derived, w);
        if dp.norm() == 0.0 {
            break;
        }
        let step = p / dp;
        w -= step;
        if step.norm() <= 1e-15 * (1.0 + w.norm()) {
            break;
        }
    }
    if !w.is_finite() || w.norm() > 1.0 {
        return Ok(None);
    }
    let center = rotate_point(root_to_point(w), turn_axis(phi), -angle);

    // amplitudes rather than P coefficients: the binomial weights would amplify rounding
    let (angle, phi) = north_turn(center);
    let turned = turner.turn(psi.amplitudes(), angle, phi);
    let next = turned[k].norm();
    let vanishing = turned.iter().take(k).all(|a| a.norm() <= MULTIPLICITY_TOL * next);
    Ok(vanishing.then_some(center))
}

/// Rotations carrying a point to the north pole, applied in `O(N²)` from a cached
/// eigendecomposition of `J_y`.
struct Turner {
    vecs: CMatrix,
    vals: Vec<f64>,
    ms: Vec<f64>,
}

/// Polar angle and the azimuth of the rotation axis `(sin φ, −cos φ, 0)` for `p`.
fn north_turn(p: SpherePoint) -> (f64, f64) {
    if p.theta <= 0.0 || p.theta >= PI {
        (p.theta, 0.5 * PI)
    } else {
        (p.theta, p.phi)
    }
}

fn turn_axis(phi: f64) -> [f64; 3] {
    [phi.sin(), -phi.cos(), 0.0]
}

impl Turner {
    fn for_spin(spin: SpinQuantum) -> Result<Arc<Turner>> {
        static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Turner>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(t) = cache.lock().expect("turner cache").get(&spin.two_j()) {
            return Ok(t.clone());
        }
        let (_, jy, _) = spin_matrices(spin);
        let (vals, vecs) = eigh(&jy)?;
        let ms = spin.two_ms().map(|m| 0.5 * m as f64).collect();
        let t = Arc::new(Turner { vecs, vals: vals.iter().copied().collect(), ms });
        cache.lock().expect("turner cache").insert(spin.two_j(), t.clone());
        Ok(t)
    }

    /// `exp(−iθ n·J) ψ` with `n = (sin φ, −cos φ, 0)`, i.e. `R_z(φ) e^{iθJ_y} R_z(φ)†`.
    fn turn(&self, psi: &CVector, theta: f64, phi: f64) -> CVector {
        let a = CVector::from_iterator(psi.len(), psi.iter().zip(&self.ms).map(|(c, m)| c * Complex64::from_polar(1.0, phi * m)));
        let mut b = self.vecs.ad_mul(&a);
        for (x, l) in b.iter_mut().zip(&self.vals) {
            *x *= Complex64::from_polar(1.0, theta * l);
        }
        let c = &self.vecs * b;
        CVector::from_iterator(c.len(), c.iter().zip(&self.ms).map(|(x, m)| x * Complex64::from_polar(1.0, -phi * m)))
    }
}

impl StellarRoots {
    /// Rebuilds the normalized state, fixed up to a global phase.
    pub fn reconstruct(&self) -> Result<PureState> {
        // P(w) ∝ Π (cos(θ_i/2) w − sin(θ_i/2) e^{−iφ_i})
        let mut poly = vec![Complex64::new(1.0, 0.0)];
        for p in &self.points {
            let a = Complex64::new((0.5 * p.theta).cos(), 0.0);
            let b = Complex64::from_polar((0.5 * p.theta).sin(), -p.phi);
            let mut next = vec![Complex64::new(0.0, 0.0); poly.len() + 1];
            for (k, c) in poly.iter().enumerate() {
                next[k + 1] += a * c;
                next[k] -= b * c;
            }
            poly = next;
        }
        let scale = sqrt_binomials(self.spin);
        let amps = CVector::from_iterator(poly.len(), poly.iter().zip(&scale).map(|(c, s)| c / s));
        PureState::normalized(amps)
    }

    /// JSON list of `{theta, phi}` objects.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.points).expect("points serialize")
    }
}

/// Minimum-cost perfect matching on a square cost matrix (Hungarian method with potentials).
///
/// Returns `assignment[row] = column` and the total cost.
pub fn hungarian(cost: &[Vec<f64>]) -> (Vec<usize>, f64) {
    let n = cost.len();
    if n == 0 {
        return (Vec::new(), 0.0);
    }
    // 1-based arrays with a virtual column 0
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for row in 1..=n {
        owner[0] = row;
        let mut col0 = 0usize;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[col0] = true;
            let r = owner[col0];
            let mut delta = f64::INFINITY;
            let mut col1 = 0usize;
            for c in 1..=n {
                if used[c] {
                    continue;
                }
                let cur = cost[r - 1][c - 1] - u[r] - v[c];
                if cur < minv[c] {
                    minv[c] = cur;
                    way[c] = col0;
                }
                if minv[c] < delta {
                    delta = minv[c];
                    col1 = c;
                }
            }
            for c in 0..=n {
                if used[c] {
                    u[owner[c]] += delta;
                    v[c] -= delta;
                } else {
                    minv[c] -= delta;
                }
            }
            col0 = col1;
            if owner[col0] == 0 {
                break;
            }
        }
        loop {
            let prev = way[col0];
            owner[col0] = owner[prev];
            col0 = prev;
            if col0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0usize; n];
    for c in 1..=n {
        assignment[owner[c] - 1] = c - 1;
    }
    let total = assignment.iter().enumerate().map(|(r, &c)| cost[r][c]).sum();
    (assignment, total)
}

/// Optimal assignment cost between two equal-size root multisets, per root.
pub fn roots_distance(a: &StellarRoots, b: &StellarRoots) -> Result<f64> {
    if a.points.len() != b.points.len() {
        return Err(Error::DimensionMismatch(a.points.len(), b.points.len()));
    }
    let cost: Vec<Vec<f64>> = a.points.iter().map(|&p| b.points.iter().map(|&q| geodesic(p, q)).collect()).collect();
    Ok(hungarian(&cost).1 / a.points.len() as f64)
}

/// Simplified Monge distance: transport between the uniform measures on the stellar roots.
pub fn simplified_monge(psi1: &PureState, psi2: &PureState, spin: SpinQuantum) -> Result<f64> {
    roots_distance(&stellar_roots(psi1, spin)?, &stellar_roots(psi2, spin)?)
}

/// Monte-Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleStats {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
}

impl SampleStats {
    fn from_values(values: &[f64]) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
        Self { mean, stderr: (var / n).sqrt(), samples: values.len() }
    }
}

/// Independent generator for sample `index` under a master seed.
fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Mean simplified Monge distance from Haar-random states to a reference state.
pub fn random_state_distance_stats(
    spin: SpinQuantum,
    reference: &PureState,
    samples: usize,
    seed: u64,
) -> Result<SampleStats> {
    if samples < 100 {
        return Err(Error::OutOfRange(format!("need at least 100 samples, got {samples}")));
    }
    let target = stellar_roots(reference, spin)?;
    let values = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let psi = PureState::haar_random(spin.dim(), &mut sample_rng(seed, i));
            roots_distance(&stellar_roots(&psi, spin)?, &target)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(SampleStats::from_values(&values))
}

/// Mean distance between independent random pairs, per dimension, with a log-log fit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingTable {
    /// `(N, stats)` rows.
    pub rows: Vec<(usize, SampleStats)>,
    /// Least-squares slope of `ln mean` against `ln N`.
    pub slope: f64,
}

impl ScalingTable {
    /// CSV with header `N,mean,stderr`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "N,mean,stderr")?;
        for (n, s) in &self.rows {
            writeln!(out, "{},{},{}", n, s.mean, s.stderr)?;
        }
        Ok(())
    }
}

pub fn random_pair_scaling(spins: &[SpinQuantum], samples: usize, seed: u64) -> Result<ScalingTable> {
    if spins.len() < 2 {
        return Err(Error::OutOfRange("need at least two spins for a fit".into()));
    }
    if samples < 2 {
        return Err(Error::OutOfRange(format!("need at least two samples, got {samples}")));
    }
    let mut rows = Vec::with_capacity(spins.len());
    for (k, &spin) in spins.iter().enumerate() {
        let stream_base = (k as u64) << 40;
        let values = (0..samples as u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = sample_rng(seed, stream_base + i);
                let a = PureState::haar_random(spin.dim(), &mut rng);
                let b = PureState::haar_random(spin.dim(), &mut rng);
                simplified_monge(&a, &b, spin)
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push((spin.dim(), SampleStats::from_values(&values)));
    }
    let xs: Vec<f64> = rows.iter().map(|(n, _)| (*n as f64).ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|(_, s)| s.mean.ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / xs.len() as f64, ys.iter().sum::<f64>() / ys.len() as f64);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    Ok(ScalingTable { rows, slope: sxy / sxx })
}

/// Which quantization axes the two eigenstates refer to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisPair {
    ZZ,
    ZY,
    ZX,
}

impl FromStr for AxisPair {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "z-z" => Ok(AxisPair::ZZ),
            "z-y" => Ok(AxisPair::ZY),
            "z-x" => Ok(AxisPair::ZX),
            other => Err(Error::Parse(format!("unknown axes '{other}', expected z-y, z-x or z-z"))),
        }
    }
}

impl fmt::Display for AxisPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AxisPair::ZZ => "z-z",
            AxisPair::ZY => "z-y",
            AxisPair::ZX => "z-x",
        })
    }
}

/// `D_sM(|j,m>_z, |j,m'>_a)` for the second axis `a`.
pub fn cross_basis_distance(spin: SpinQuantum, two_m: i32, two_m_prime: i32, axes: AxisPair) -> Result<f64> {
    let n = spin.dim();
    let first = PureState::basis(n, spin.index_of(two_m)?)?;
    let second = PureState::basis(n, spin.index_of(two_m_prime)?)?;
    let second = match axes {
        AxisPair::ZZ => second,
        // z → y is a rotation by −π/2 about x; z → x is +π/2 about y
        AxisPair::ZY => second.evolve(&rotation_unitary(spin, [1.0, 0.0, 0.0], -0.5 * PI)?)?,
        AxisPair::ZX => second.evolve(&rotation_unitary(spin, [0.0, 1.0, 0.0], 0.5 * PI)?)?,
    };
    simplified_monge(&first, &second, spin)
}

/// Rotates every root; used to check that roots move rigidly with the state.
pub fn rotate_roots(roots: &StellarRoots, axis: [f64; 3], angle: f64) -> StellarRoots {
    StellarRoots { spin: roots.spin, points: roots.points.iter().map(|&p| rotate_point(p, axis, angle)).collect() }
}
