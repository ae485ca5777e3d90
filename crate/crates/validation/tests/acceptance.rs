//! End-to-end acceptance run: one PASS/FAIL line per criterion, detail lines indented.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::f64::consts::PI;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::{cost_matrix, min_cost_flow, random_masses, random_points, vertex_enumeration};
use num_complex::Complex64;
use qmonge::error::Error;
use qmonge::husimi::{coherent_amplitudes, mean_wehrl, min_wehrl, wehrl_entropy, wehrl_entropy_on};
use qmonge::monge::{
    build_w_polynomial, coherent_pair_distance, coherent_to_star, eigenstate_distance, monge_prop6, monge_symmetric,
    zero_state_to_star,
};
use qmonge::ot::{monge_numeric, rotation_invariance_check, solve_transport, DiscreteMeasure};
use qmonge::qstate::linalg::exp_i_hermitian;
use qmonge::qstate::{
    bures_distance, fubini_study, hs_distance, kicked_step, rotation_unitary, trace_distance, CMatrix, DensityMatrix,
    PureState, SpinQuantum, StateSpec,
};
use qmonge::sphere::{SphereGrid, SpherePoint};
use qmonge::stellar::{cross_basis_distance, random_pair_scaling, random_state_distance_stats, simplified_monge, AxisPair};
use qmonge::topology::{
    classify_spectrum, partition_census, partition_numbers, stratum_dimension, SpectrumType, DEFAULT_EPS,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn spin(two_j: u32) -> SpinQuantum {
    SpinQuantum::new(two_j).unwrap()
}

fn state(spec: &str, s: SpinQuantum) -> DensityMatrix {
    spec.parse::<StateSpec>().unwrap().density(s).unwrap()
}

fn random_direction(rng: &mut ChaCha8Rng) -> SpherePoint {
    let z: f64 = rng.random_range(-1.0..1.0);
    SpherePoint::new(z.acos(), rng.random_range(0.0..2.0 * PI)).unwrap()
}

fn random_density(n: usize, rng: &mut ChaCha8Rng) -> DensityMatrix {
    let mut mat = CMatrix::zeros(n, n);
    let weights: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..1.0)).collect();
    let total: f64 = weights.iter().sum();
    for w in weights {
        let psi = PureState::haar_random(n, rng);
        mat += psi.density().matrix() * Complex64::new(w / total, 0.0);
    }
    DensityMatrix::new(mat).unwrap()
}

fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let g = CMatrix::from_fn(n, n, |_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    (&g + g.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Sub-checks of one criterion.
struct Checks {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Checks {
    fn check(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn close(&mut self, got: f64, want: f64, tol: f64, what: &str) {
        let ok = (got - want).abs() <= tol;
        self.check(ok, format!("{what}: got {got:.15}, want {want:.15}, tol {tol:e}"));
    }

    fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }
}

fn criterion(id: usize, title: &str, budget: Option<Duration>, body: impl FnOnce(&mut Checks)) -> bool {
    let mut c = Checks { failures: Vec::new(), notes: Vec::new() };
    let start = Instant::now();
    body(&mut c);
    let elapsed = start.elapsed();
    if let Some(limit) = budget {
        c.check(elapsed <= limit, format!("runtime {elapsed:.2?} exceeds {limit:?}"));
    }
    let pass = c.failures.is_empty();
    println!("{} criterion {id}: {title} ({elapsed:.2?})", if pass { "PASS" } else { "FAIL" });
    for n in &c.notes {
        println!("    {n}");
    }
    for f in &c.failures {
        println!("    failed: {f}");
    }
    pass
}

struct Pair {
    two_j: u32,
    a: &'static str,
    b: &'static str,
    exact: f64,
}

fn closed_form_pairs() -> Vec<Pair> {
    let p = |two_j, a, b, exact| Pair { two_j, a, b, exact };
    vec![
        p(1, "plus", "minus", PI / 4.0),
        p(1, "plus", "star", PI / 8.0),
        p(1, "minus", "star", PI / 8.0),
        p(2, "plus", "minus", 3.0 * PI / 8.0),
        p(2, "plus", "star", 3.0 * PI / 16.0),
        p(2, "minus", "star", 3.0 * PI / 16.0),
        p(2, "jm:0", "star", 1.0 / 6.0),
        p(3, "jm:3/2", "jm:1/2", 5.0 * PI / 32.0),
        p(3, "jm:-1/2", "jm:-3/2", 5.0 * PI / 32.0),
        p(3, "jm:1/2", "jm:-1/2", 9.0 * PI / 64.0),
        p(3, "plus", "star", 29.0 * PI / 128.0),
        p(3, "minus", "star", 29.0 * PI / 128.0),
        p(4, "jm:2", "jm:1", 35.0 * PI / 256.0),
        p(4, "jm:-1", "jm:-2", 35.0 * PI / 256.0),
        p(4, "jm:1", "jm:0", 15.0 * PI / 128.0),
        p(4, "jm:0", "jm:-1", 15.0 * PI / 128.0),
        p(4, "plus", "star", 65.0 * PI / 256.0),
        p(4, "minus", "star", 65.0 * PI / 256.0),
        p(4, "jm:0", "star", 29.0 / 120.0),
    ]
}

fn closed_forms(c: &mut Checks) {
    let tol = 1e-10;
    let eig = [
        (1, 1, -1, PI / 4.0),
        (2, 2, -2, 3.0 * PI / 8.0),
        (3, 3, 1, 5.0 * PI / 32.0),
        (3, -1, -3, 5.0 * PI / 32.0),
        (3, 1, -1, 9.0 * PI / 64.0),
        (4, 4, 2, 35.0 * PI / 256.0),
        (4, -2, -4, 35.0 * PI / 256.0),
        (4, 2, 0, 15.0 * PI / 128.0),
    ];
    for (two_j, m, mp, want) in eig {
        c.close(eigenstate_distance(spin(two_j), m, mp).unwrap(), want, tol, &format!("D(2m={m}, 2m'={mp}) at 2j={two_j}"));
    }
    for (two_j, want) in [(1, PI / 8.0), (2, 3.0 * PI / 16.0), (3, 29.0 * PI / 128.0), (4, 65.0 * PI / 256.0)] {
        c.close(coherent_to_star(spin(two_j)), want, tol, &format!("D(rho+, rho*) at 2j={two_j}"));
    }
    for (two_j, want) in [(2, 1.0 / 6.0), (4, 29.0 / 120.0)] {
        c.close(zero_state_to_star(spin(two_j)).unwrap(), want, tol, &format!("D(|0>, rho*) at 2j={two_j}"));
    }
    let w: [(u32, &[f64]); 4] = [
        (1, &[0.25]),
        (2, &[0.375]),
        (3, &[57.0 / 128.0, 1.0 / 128.0]),
        (4, &[125.0 / 256.0, 5.0 / 256.0]),
    ];
    for (two_j, want) in w {
        let got = build_w_polynomial(spin(two_j));
        let got = got.coefficients();
        c.check(got.len() == want.len(), format!("W at 2j={two_j} has {} coefficients", got.len()));
        for (k, (g, w)) in got.iter().zip(want).enumerate() {
            c.close(*g, *w, tol, &format!("W coefficient x^{k} at 2j={two_j}"));
        }
    }
}

fn quadrature_paths(c: &mut Checks) {
    let tol = 1e-7;
    let mut uncovered = Vec::new();
    let mut covered = 0;
    let mut run_prop6 = |c: &mut Checks, a: &DensityMatrix, b: &DensityMatrix, s: SpinQuantum, want: f64, what: String| {
        match monge_prop6(a, b, s) {
            Ok(v) => {
                covered += 1;
                c.close(v, want, tol, &format!("prop6 {what}"));
            }
            Err(Error::AssumptionViolated(_)) => uncovered.push(what),
            Err(e) => c.check(false, format!("prop6 {what}: {e}")),
        }
    };
    for p in closed_form_pairs() {
        let s = spin(p.two_j);
        let (a, b) = (state(p.a, s), state(p.b, s));
        let what = format!("{} vs {} at 2j={}", p.a, p.b, p.two_j);
        c.close(monge_symmetric(&a, &b, s).unwrap(), p.exact, tol, &format!("prop5 {what}"));
        run_prop6(c, &a, &b, s, p.exact, what);
    }
    for two_j in 1..=4 {
        let s = spin(two_j);
        for xi in [0.5, PI / 2.0, 2.5] {
            let a = state(&format!("coh:{},0", (PI - xi) / 2.0), s);
            let b = state(&format!("coh:{},0", (PI + xi) / 2.0), s);
            let want = coherent_pair_distance(s, xi).unwrap();
            run_prop6(c, &a, &b, s, want, format!("coherent pair xi={xi:.4} at 2j={two_j}"));
        }
    }
    for (two_j, specs, printed) in [(3, ["jm:1/2", "jm:-1/2"], "0.2737"), (4, ["jm:1", "jm:-1"], "0.3909")] {
        let s = spin(two_j);
        for spec in specs {
            let v = monge_symmetric(&state(spec, s), &state("star", s), s).unwrap();
            c.check(format!("{v:.4}") == printed, format!("{spec} vs star at 2j={two_j}: {v:.6}, printed {printed}"));
            c.note(format!("{spec} vs star at 2j={two_j}: {v:.10}"));
        }
    }
    c.note(format!("prop6 covered {covered} cases; hypothesis fails for: {}", uncovered.join(", ")));
}

fn numeric_transport(c: &mut Checks) {
    let grid = Arc::new(SphereGrid::gauss_product(64, 128).unwrap());
    let cases = [
        (1, "plus", "minus", PI / 4.0),
        (2, "plus", "star", 3.0 * PI / 16.0),
        (3, "coh:0.7853981633974483,0", "coh:2.356194490192345,0", coherent_pair_distance(spin(3), PI / 2.0).unwrap()),
    ];
    for (two_j, a, b, exact) in cases {
        let s = spin(two_j);
        let br = monge_numeric(&state(a, s), &state(b, s), s, &grid).unwrap();
        let what = format!("{a} vs {b} at 2j={two_j}");
        c.note(format!(
            "{what}: estimate {:.7} exact {exact:.7} dual {:.7} L1 bound {:.7}",
            br.estimate, br.lower, br.prop2_bound
        ));
        c.check((br.estimate - exact).abs() <= 0.01 * exact, format!("{what}: estimate off by more than 1%"));
        c.check(br.contains(exact, 0.01 * exact), format!("{what}: bracket misses exact value"));
        c.check(br.lower <= br.estimate + 1e-12, format!("{what}: dual above primal"));
        c.check(br.estimate <= br.prop2_bound + 1e-12, format!("{what}: primal above the L1 bound"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut worst: f64 = 0.0;
    for (m, n) in [(2, 2), (2, 3), (3, 3), (3, 4), (4, 4)] {
        for _ in 0..5 {
            let a = Arc::new(SphereGrid::from_points(random_points(m, &mut rng)).unwrap());
            let b = Arc::new(SphereGrid::from_points(random_points(n, &mut rng)).unwrap());
            let mu = DiscreteMeasure::new(a.clone(), random_masses(m, &mut rng)).unwrap();
            let nu = DiscreteMeasure::new(b.clone(), random_masses(n, &mut rng)).unwrap();
            let plan = solve_transport(&mu, &nu).unwrap();
            let exact = vertex_enumeration(mu.masses(), nu.masses(), &cost_matrix(&a, &b));
            worst = worst.max((plan.objective - exact).abs()).max((plan.dual_objective - exact).abs());
        }
    }
    for shared in [false, true] {
        for _ in 0..10 {
            let (a, b) = if shared {
                let g = Arc::new(SphereGrid::from_points(random_points(12, &mut rng)).unwrap());
                (g.clone(), g)
            } else {
                let a = Arc::new(SphereGrid::from_points(random_points(6, &mut rng)).unwrap());
                (a, Arc::new(SphereGrid::from_points(random_points(6, &mut rng)).unwrap()))
            };
            let mu = DiscreteMeasure::new(a.clone(), random_masses(a.len(), &mut rng)).unwrap();
            let nu = DiscreteMeasure::new(b.clone(), random_masses(b.len(), &mut rng)).unwrap();
            let plan = solve_transport(&mu, &nu).unwrap();
            let exact = min_cost_flow(mu.masses(), nu.masses(), &cost_matrix(&a, &b));
            worst = worst.max((plan.objective - exact).abs()).max((plan.dual_objective - exact).abs());
        }
    }
    c.note(format!("LP equivalence: worst deviation {worst:.2e} over 45 instances"));
    c.check(worst <= 1e-10, format!("LP deviation {worst:e}"));
}

fn standard_metrics(c: &mut Checks) {
    let tol = 1e-10;
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for n in 2..=8 {
        for _ in 0..25 {
            let (a, b) = (PureState::haar_random(n, &mut rng), PureState::haar_random(n, &mut rng));
            let p = a.overlap(&b).unwrap();
            let (ra, rb) = (a.density(), b.density());
            let what = format!("N={n}, p={p:.6}");
            c.close(trace_distance(&ra, &rb).unwrap(), 2.0 * (1.0 - p).sqrt(), tol, &format!("trace {what}"));
            c.close(hs_distance(&ra, &rb).unwrap(), (2.0 * (1.0 - p)).sqrt(), tol, &format!("HS {what}"));
            c.close(bures_distance(&ra, &rb).unwrap(), (2.0 * (1.0 - p.sqrt())).sqrt(), tol, &format!("Bures {what}"));
            c.close(fubini_study(&a, &b).unwrap(), (2.0 * p - 1.0).acos(), tol, &format!("FS {what}"));
        }
    }
    for n in 2..=6 {
        let star = DensityMatrix::maximally_mixed(n);
        let nf = n as f64;
        for psi in [PureState::basis(n, 0).unwrap(), PureState::haar_random(n, &mut rng)] {
            let r = psi.density();
            c.close(trace_distance(&r, &star).unwrap(), 2.0 - 2.0 / nf, tol, &format!("trace to rho* N={n}"));
            c.close(hs_distance(&r, &star).unwrap(), (1.0 - 1.0 / nf).sqrt(), tol, &format!("HS to rho* N={n}"));
            c.close(bures_distance(&r, &star).unwrap(), (2.0 - 2.0 / nf.sqrt()).sqrt(), tol, &format!("Bures to rho* N={n}"));
        }
    }
    let mut worst: f64 = 0.0;
    for n in 2..=6 {
        for _ in 0..10 {
            let h = random_hermitian(n, &mut rng);
            let (a, b) = (random_density(n, &mut rng), random_density(n, &mut rng));
            let (ka, kb) = (kicked_step(&a, &h).unwrap(), kicked_step(&b, &h).unwrap());
            worst = worst
                .max((trace_distance(&a, &b).unwrap() - trace_distance(&ka, &kb).unwrap()).abs())
                .max((hs_distance(&a, &b).unwrap() - hs_distance(&ka, &kb).unwrap()).abs())
                .max((bures_distance(&a, &b).unwrap() - bures_distance(&ka, &kb).unwrap()).abs());
            let u = exp_i_hermitian(&h, 1.0).unwrap();
            let (x, y) = (PureState::haar_random(n, &mut rng), PureState::haar_random(n, &mut rng));
            let moved = fubini_study(&x.evolve(&u).unwrap(), &y.evolve(&u).unwrap()).unwrap();
            worst = worst.max((fubini_study(&x, &y).unwrap() - moved).abs());
        }
    }
    c.note(format!("kicked_step conservation: worst change {worst:.2e}"));
    c.check(worst <= tol, format!("distance changed by {worst:e} under a kick"));

    let s = spin(2);
    let (plus, star) = (state("plus", s), state("star", s));
    let mut h = CMatrix::zeros(3, 3);
    h[(0, 1)] = Complex64::new(PI / 2.0, 0.0);
    h[(1, 0)] = Complex64::new(PI / 2.0, 0.0);
    let (kp, ks) = (kicked_step(&plus, &h).unwrap(), kicked_step(&star, &h).unwrap());
    let before = monge_symmetric(&plus, &star, s).unwrap();
    let after = monge_symmetric(&kp, &ks, s).unwrap();
    c.note(format!("j=1 kick swapping |1,1> and |1,0>: D_M {before:.10} -> {after:.10}"));
    c.close(before, 3.0 * PI / 16.0, 1e-7, "D_M before kick");
    c.close(after, 1.0 / 6.0, 1e-7, "D_M after kick");
    c.close(trace_distance(&kp, &ks).unwrap(), trace_distance(&plus, &star).unwrap(), tol, "trace across kick");
}

fn simplified_suite(c: &mut Checks) {
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    for two_j in 1..=10 {
        let s = spin(two_j);
        for _ in 0..20 {
            let (p, q) = (random_direction(&mut rng), random_direction(&mut rng));
            let d = simplified_monge(&coherent_amplitudes(s, p), &coherent_amplitudes(s, q), s).unwrap();
            c.close(d, qmonge::sphere::geodesic(p, q), 1e-9, &format!("coherent pair at 2j={two_j}"));
        }
    }
    for two_j in 1..=8 {
        let s = spin(two_j);
        for m in s.two_ms() {
            for mp in s.two_ms() {
                let a = PureState::basis(s.dim(), s.index_of(m).unwrap()).unwrap();
                let b = PureState::basis(s.dim(), s.index_of(mp).unwrap()).unwrap();
                let want = PI / two_j as f64 * 0.5 * (m - mp).abs() as f64;
                c.close(simplified_monge(&a, &b, s).unwrap(), want, 1e-9, &format!("eigenstates 2m={m}, 2m'={mp}, 2j={two_j}"));
            }
        }
    }
    for two_j in 1..=6 {
        let s = spin(two_j);
        for m in s.two_ms() {
            for mp in s.two_ms() {
                for axes in [AxisPair::ZY, AxisPair::ZX] {
                    let d = cross_basis_distance(s, m, mp, axes).unwrap();
                    c.close(d, PI / 2.0, 1e-6, &format!("{axes} 2m={m}, 2m'={mp}, 2j={two_j}"));
                }
            }
        }
    }

    let s = spin(40);
    let j = s.j();
    for two_m in [40, 0, 20] {
        let chi = two_m as f64 * 0.5 * PI / (2.0 * j);
        let predicted = chi * chi.sin() + chi.cos();
        let reference = PureState::basis(s.dim(), s.index_of(two_m).unwrap()).unwrap();
        let stats = random_state_distance_stats(s, &reference, 10_000, 52).unwrap();
        let dev = stats.mean - predicted;
        c.note(format!(
            "j=20, m={}: mean {:.5} +- {:.5}, predicted {predicted:.5}, deviation {:.1} sigma, {:.2}%",
            two_m / 2,
            stats.mean,
            stats.stderr,
            dev / stats.stderr,
            100.0 * dev.abs() / predicted
        ));
        c.check(dev.abs() <= 3.0 * stats.stderr, format!("m={}: outside 3 sigma", two_m / 2));
        c.check(dev.abs() <= 0.05 * predicted, format!("m={}: outside 5%", two_m / 2));
    }

    let spins: Vec<SpinQuantum> = [11, 21, 31, 41, 61, 81].iter().map(|&n| SpinQuantum::from_dim(n).unwrap()).collect();
    let table = random_pair_scaling(&spins, 400, 53).unwrap();
    c.note(format!("random-pair log-log slope {:.4} over N = 11..81", table.slope));
    c.check((-0.7..=-0.3).contains(&table.slope), format!("slope {}", table.slope));
}

fn wehrl_suite(c: &mut Checks) {
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    for n in 2..=8 {
        let s = SpinQuantum::from_dim(n).unwrap();
        for dir in [SpherePoint::north(), SpherePoint::new(1.1, 0.7).unwrap(), random_direction(&mut rng)] {
            let rho = coherent_amplitudes(s, dir).density();
            c.close(wehrl_entropy(&rho, s).unwrap(), min_wehrl(n), 1e-8, &format!("coherent entropy N={n}"));
        }
        let star = wehrl_entropy(&DensityMatrix::maximally_mixed(n), s).unwrap();
        c.check(star == 0.0, format!("rho* entropy at N={n} is {star:e}"));
    }
    let grid = SphereGrid::gauss_product(40, 80).unwrap();
    for n in [3, 4, 6] {
        let s = SpinQuantum::from_dim(n).unwrap();
        let samples = 1500;
        let values: Vec<f64> = (0..samples)
            .map(|_| wehrl_entropy_on(&PureState::haar_random(n, &mut rng).density(), s, &grid).unwrap())
            .collect();
        let mean = values.iter().sum::<f64>() / samples as f64;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (samples - 1) as f64;
        let stderr = (var / samples as f64).sqrt();
        let want = mean_wehrl(n);
        c.note(format!("N={n}: Monte-Carlo mean {mean:.5} +- {stderr:.5}, formula {want:.5}"));
        c.check((mean - want).abs() <= 3.0 * stderr, format!("N={n}: mean Wehrl outside 3 sigma"));
    }
}

fn topology_suite(c: &mut Checks) {
    let table: &[(&[usize], usize, usize, usize)] = &[
        (&[1], 0, 0, 0),
        (&[1, 1], 3, 2, 1),
        (&[2], 0, 0, 0),
        (&[1, 1, 1], 8, 6, 2),
        (&[1, 2], 5, 4, 1),
        (&[2, 1], 5, 4, 1),
        (&[3], 0, 0, 0),
        (&[1, 1, 1, 1], 15, 12, 3),
        (&[1, 1, 2], 12, 10, 2),
        (&[1, 2, 1], 12, 10, 2),
        (&[2, 1, 1], 12, 10, 2),
        (&[1, 3], 7, 6, 1),
        (&[3, 1], 7, 6, 1),
        (&[2, 2], 9, 8, 1),
        (&[4], 0, 0, 0),
    ];
    for &(p, d, d1, d2) in table {
        let dim = stratum_dimension(&SpectrumType::new(p.to_vec()).unwrap());
        c.check((dim.d, dim.d1, dim.d2) == (d, d1, d2), format!("{p:?}: got {dim:?}"));
    }
    let p = partition_numbers(10);
    c.check(p[1..] == [1, 2, 3, 5, 7, 11, 15, 22, 30, 42], format!("P(1..10) = {:?}", &p[1..]));
    for n in 1..=20usize {
        let census = partition_census(n).unwrap();
        let mut binom = vec![1u128];
        for _ in 1..n {
            binom = std::iter::once(1).chain(binom.windows(2).map(|w| w[0] + w[1])).chain(std::iter::once(1)).collect();
        }
        c.check(census.part_counts == binom, format!("part counts at N={n}"));
        c.check(census.total_parts == 1u128 << (n - 1), format!("total parts at N={n}"));
        c.check(census.part_counts.iter().sum::<u128>() == census.total_parts, format!("sum at N={n}"));
    }
    let mixed = classify_spectrum(&DensityMatrix::maximally_mixed(4), DEFAULT_EPS).unwrap();
    c.check(mixed.partition == [4], "rho* at N=4");
    let pure = classify_spectrum(&PureState::basis(4, 1).unwrap().density(), DEFAULT_EPS).unwrap();
    c.check(pure.partition == [1, 3], "pure state at N=4");
}

fn property_suite(c: &mut Checks) {
    let mut violations = 0;
    for k in 1..=32 {
        let xi = (k as f64 * 0.1).min(PI);
        let mut prev = 0.0;
        for two_j in 1..=40 {
            let v = coherent_pair_distance(spin(two_j), xi).unwrap();
            if v > xi || v < prev - 1e-15 {
                violations += 1;
            }
            prev = v;
        }
    }
    c.check(violations == 0, format!("Property A violated {violations} times"));

    for two_j in 1..=6 {
        let s = spin(two_j);
        let (plus, minus) = (state("plus", s), state("minus", s));
        let full = monge_symmetric(&plus, &minus, s).unwrap();
        for a in [0.1, 0.25, 0.5, 0.8] {
            for b in [0.0, 0.3, 0.6, 1.0] {
                let ra = DensityMatrix::mixture(a, &plus, &minus).unwrap();
                let rb = DensityMatrix::mixture(b, &plus, &minus).unwrap();
                let d = monge_symmetric(&ra, &rb, s).unwrap();
                c.close(d, (a - b).abs() * full, 1e-7, &format!("metric line a={a}, b={b}, 2j={two_j}"));
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(71);
    for n in 2..=8 {
        let s = SpinQuantum::from_dim(n).unwrap();
        for _ in 0..10 {
            let (a, b) = (PureState::haar_random(n, &mut rng), PureState::haar_random(n, &mut rng));
            let u = rotation_unitary(s, random_direction(&mut rng).to_vector(), rng.random_range(0.0..2.0 * PI)).unwrap();
            let before = simplified_monge(&a, &b, s).unwrap();
            let after = simplified_monge(&a.evolve(&u).unwrap(), &b.evolve(&u).unwrap(), s).unwrap();
            c.close(after, before, 1e-9, &format!("D_sM rotation at N={n}"));
        }
    }
    let grid32 = Arc::new(SphereGrid::gauss_product(32, 64).unwrap());
    let s = spin(2);
    for (a, b, axis, angle) in [
        ("coh:1.0,0.5", "coh:2.0,1.5", [0.0, 0.0, 1.0], PI / 3.0),
        ("plus", "star", [0.0, 1.0, 0.0], PI / 2.0),
        ("coh:0.4,0", "jm:0", [0.6, 0.0, 0.8], 1.3),
    ] {
        let (before, after) = rotation_invariance_check(&state(a, s), &state(b, s), s, axis, angle, &grid32).unwrap();
        c.note(format!("D_M rotation {a} vs {b}: {before:.6} -> {after:.6}"));
        c.check((before - after).abs() <= 0.01 * before, format!("D_M rotation {a} vs {b}"));
    }

    let grid16 = Arc::new(SphereGrid::gauss_product(16, 32).unwrap());
    for two_j in 1..=4 {
        let s = spin(two_j);
        let star = DensityMatrix::maximally_mixed(s.dim());
        let upper = coherent_to_star(s);
        let lower = (two_j == 2).then_some(1.0 / 6.0);
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for _ in 0..200 {
            let psi = PureState::haar_random(s.dim(), &mut rng).density();
            let d = monge_numeric(&psi, &star, s, &grid16).unwrap().estimate;
            lo = lo.min(d);
            hi = hi.max(d);
        }
        let slack = 0.01 * upper;
        c.note(format!(
            "j={}: 200 random states, D_M to rho* in [{lo:.5}, {hi:.5}], coherent {upper:.5}{}",
            s.j(),
            lower.map(|r| format!(", R2 {r:.5}")).unwrap_or_default()
        ));
        c.check(hi <= upper + slack, format!("j={}: conjecture 1 upper bound exceeded", s.j()));
        if let Some(r) = lower {
            c.check(lo >= r - slack, format!("j={}: fell below R2", s.j()));
        }
    }
}

fn main() -> ExitCode {
    let results = [
        criterion(1, "closed-form suite", Some(Duration::from_secs(1)), closed_forms),
        criterion(2, "quadrature-path cross-check", Some(Duration::from_secs(10)), quadrature_paths),
        criterion(3, "numeric transport at 64x128", None, numeric_transport),
        criterion(4, "standard metrics", None, standard_metrics),
        criterion(5, "simplified Monge distance", None, simplified_suite),
        criterion(6, "Wehrl entropy", None, wehrl_suite),
        criterion(7, "topology", None, topology_suite),
        criterion(8, "properties and conjectures", None, property_suite),
    ];
    let passed = results.iter().filter(|&&p| p).count();
    println!("{passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
