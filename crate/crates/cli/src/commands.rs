use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use qmonge::husimi::{coherent_amplitudes, husimi, mean_wehrl, min_wehrl, wehrl_entropy_on};
use qmonge::monge::coherent_to_star;
use qmonge::ot::{monge_numeric, monge_numeric_plan, Bracket};
use qmonge::qstate::linalg::{eigh, exp_i_hermitian, hermiticity_defect};
use qmonge::qstate::{
    bures_distance, fubini_study, hs_distance, spin_matrices, trace_distance, CMatrix, DensityMatrix, PureState,
    SpinQuantum, StateSpec,
};
use qmonge::sphere::{rotate_point, SphereGrid, SpherePoint};
use qmonge::stellar::{random_pair_scaling, random_state_distance_stats, simplified_monge, stellar_roots};
use qmonge::topology::{classify_spectrum, partition_census, stratum_dimension, stratum_table};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::exact::{exact_monge, Path};
use crate::report::{Cell, Report};
use crate::{Experiment, Failure, Global, Metric, Outcome};

fn invalid<T>(msg: impl Into<String>) -> Outcome<T> {
    Err(Failure::Invalid(msg.into()))
}

struct State {
    spec: StateSpec,
    rho: DensityMatrix,
    pure: Option<PureState>,
}

fn load(text: &str, spin: SpinQuantum) -> Outcome<State> {
    let spec: StateSpec = text.parse()?;
    let rho = spec.density(spin)?;
    let pure = spec.pure(spin)?;
    Ok(State { spec, rho, pure })
}

impl State {
    fn from_pure(psi: PureState) -> Self {
        let rho = psi.density();
        Self { spec: StateSpec::Json("<computed>".into()), rho, pure: Some(psi) }
    }

    fn named(&self) -> Option<&StateSpec> {
        (!matches!(self.spec, StateSpec::Json(_))).then_some(&self.spec)
    }
}

/// A distance with the route that produced it.
struct Measured {
    value: f64,
    path: Option<Path>,
    bracket: Option<Bracket>,
}

fn exact(v: f64) -> Measured {
    Measured { value: v, path: None, bracket: None }
}

fn numeric(a: &State, b: &State, spin: SpinQuantum, grid: &Arc<SphereGrid>) -> Outcome<Measured> {
    let br = monge_numeric(&a.rho, &b.rho, spin, grid)?;
    Ok(Measured { value: br.estimate, path: Some(Path::Numeric), bracket: Some(br) })
}

fn pure_pair<'a>(a: &'a State, b: &'a State, metric: &str) -> Outcome<(&'a PureState, &'a PureState)> {
    match (&a.pure, &b.pure) {
        (Some(x), Some(y)) => Ok((x, y)),
        _ => invalid(format!("{metric} is defined for pure states only")),
    }
}

/// `fallback` lets the Monge metric drop to the numeric solver when no exact route applies.
fn measure(
    metric: Metric,
    a: &State,
    b: &State,
    spin: SpinQuantum,
    g: &Global,
    fallback: bool,
) -> Outcome<Measured> {
    match metric {
        Metric::Trace => Ok(exact(trace_distance(&a.rho, &b.rho)?)),
        Metric::Hs => Ok(exact(hs_distance(&a.rho, &b.rho)?)),
        Metric::Bures => Ok(exact(bures_distance(&a.rho, &b.rho)?)),
        Metric::Fs => {
            let (x, y) = pure_pair(a, b, "fs")?;
            Ok(exact(fubini_study(x, y)?))
        }
        Metric::Smonge => {
            let (x, y) = pure_pair(a, b, "smonge")?;
            Ok(exact(simplified_monge(x, y, spin)?))
        }
        Metric::MongeNumeric => numeric(a, b, spin, &g.transport_grid()?),
        Metric::Monge => {
            let specs = a.named().zip(b.named());
            match exact_monge(specs, &a.rho, &b.rho, spin)? {
                Some((value, path)) => Ok(Measured { value, path: Some(path), bracket: None }),
                None if fallback => numeric(a, b, spin, &g.transport_grid()?),
                None => invalid(
                    "no exact route applies (closed form, axial symmetry and ordered meridians all fail); \
                     use --metric monge-numeric",
                ),
            }
        }
    }
}

fn metric_name(m: Metric) -> &'static str {
    match m {
        Metric::Trace => "trace",
        Metric::Hs => "hs",
        Metric::Bures => "bures",
        Metric::Fs => "fs",
        Metric::Monge => "monge",
        Metric::MongeNumeric => "monge-numeric",
        Metric::Smonge => "smonge",
    }
}

pub fn dist(g: &Global, metric: Metric, first: &str, second: &str) -> Outcome<String> {
    let spin = g.spin()?;
    let (a, b) = (load(first, spin)?, load(second, spin)?);
    let m = measure(metric, &a, &b, spin, g, false)?;
    let mut r = match &m.bracket {
        Some(_) => Report::new(&["metric", "value", "lower", "upper", "grid"]),
        None if m.path.is_some() => Report::new(&["metric", "value", "path"]),
        None => Report::new(&["metric", "value"]),
    };
    let mut row: Vec<Cell> = vec![metric_name(metric).into(), m.value.into()];
    if let Some(br) = &m.bracket {
        row.extend([br.lower.into(), br.upper.into(), br.resolution.clone().into()]);
    } else if let Some(p) = m.path {
        row.push(p.to_string().into());
    }
    r.row(row);
    Ok(r.render(g.format))
}

pub fn table2(g: &Global, xis: &[f64], weights: &[f64]) -> Outcome<String> {
    let spin = g.spin()?;
    let n = spin.dim() as f64;
    let two_j = spin.two_j() as i32;
    let line = PI - 2.0 * (PI / n).sqrt();
    let mut pairs: Vec<(&str, String, String, Option<f64>)> = vec![
        ("(rho+,rho-)", "plus".into(), "minus".into(), Some(line)),
        ("(rho+,rho*)", "plus".into(), "star".into(), Some(0.5 * PI - (PI / n).sqrt())),
        ("(rho-,rho*)", "minus".into(), "star".into(), Some(0.5 * PI - (PI / n).sqrt())),
    ];
    if spin.is_integer() {
        pairs.push(("(|0>,rho*)", "jm:0".into(), "star".into(), Some(0.5 * PI - 1.0)));
    }
    let mut two_m = two_j;
    while two_m > -two_j {
        let k = ((two_j + two_m) / 2) as f64;
        let upper = StateSpec::Jm(two_m).to_string();
        let lower = StateSpec::Jm(two_m - 2).to_string();
        pairs.push(("(|m>,|m-1>)", upper, lower, Some(1.0 / ((n - k) * k).sqrt())));
        two_m -= 2;
    }
    for &a in weights {
        if !(0.0..=1.0).contains(&a) {
            return invalid(format!("weight {a} not in [0,1]"));
        }
        pairs.push(("(rho+,rho_a)", "plus".into(), format!("mix:{a}"), Some(line * (1.0 - a))));
        pairs.push(("(rho-,rho_a)", "minus".into(), format!("mix:{a}"), Some(line * a)));
    }
    for &xi in xis {
        if !(0.0..=PI).contains(&xi) {
            return invalid(format!("angle {xi} not in [0,pi]"));
        }
        pairs.push(("(rho+,rho_xi)", "plus".into(), format!("coh:{xi},0"), Some(xi)));
        pairs.push(("(rho-,rho_xi)", "minus".into(), format!("coh:{xi},0"), Some(PI - xi)));
    }

    let mut r = Report::new(&["row", "first", "second", "trace", "hs", "bures", "monge", "path", "semiclassical"]);
    for (label, x, y, asym) in pairs {
        let (a, b) = (load(&x, spin)?, load(&y, spin)?);
        let m = measure(Metric::Monge, &a, &b, spin, g, true)?;
        r.row(vec![
            label.into(),
            x.into(),
            y.into(),
            trace_distance(&a.rho, &b.rho)?.into(),
            hs_distance(&a.rho, &b.rho)?.into(),
            bures_distance(&a.rho, &b.rho)?.into(),
            m.value.into(),
            m.path.map(|p| p.to_string()).into(),
            asym.into(),
        ]);
    }
    r.note("j", spin.to_string());
    Ok(r.render(g.format))
}

pub fn husimi_export(g: &Global, state: &str, transport_to: Option<&str>) -> Outcome<String> {
    let spin = g.spin()?;
    let grid = g.transport_grid()?;
    let a = load(state, spin)?;
    let Some(other) = transport_to else {
        let field = husimi(&a.rho, spin)?;
        let mut r = Report::new(&["theta", "phi", "weight", "H"]);
        for ((p, w), h) in grid.nodes().iter().zip(grid.weights()).zip(field.sample(&grid)) {
            r.row(vec![p.theta.into(), p.phi.into(), (*w).into(), h.into()]);
        }
        return Ok(r.render(g.format));
    };
    let b = load(other, spin)?;
    let (br, plan) = monge_numeric_plan(&a.rho, &b.rho, spin, &grid)?;
    let mut r = Report::new(&["src_theta", "src_phi", "dst_theta", "dst_phi", "mass"]);
    let (src, dst) = (plan.source_grid().nodes(), plan.target_grid().nodes());
    for &(i, k, mass) in &plan.pairs {
        r.row(vec![src[i].theta.into(), src[i].phi.into(), dst[k].theta.into(), dst[k].phi.into(), mass.into()]);
    }
    r.note("estimate", br.estimate);
    r.note("lower", br.lower);
    r.note("upper", br.upper);
    r.note("grid", br.resolution);
    Ok(r.render(g.format))
}

pub fn stellar(g: &Global, state: &str) -> Outcome<String> {
    let spin = g.spin()?;
    let a = load(state, spin)?;
    let psi = a.pure.ok_or_else(|| Failure::Invalid(format!("'{state}' is not a pure state")))?;
    let roots = stellar_roots(&psi, spin)?;
    let mut r = Report::new(&["index", "theta", "phi"]);
    for (i, p) in roots.points.iter().enumerate() {
        r.row(vec![i.into(), p.theta.into(), p.phi.into()]);
    }
    Ok(r.render(g.format))
}

#[derive(Debug, Clone, Copy)]
pub struct KickedMap {
    pub p: f64,
    pub k: f64,
}

impl KickedMap {
    /// `exp(−i k J_z² / 2j) exp(−i p J_y)`.
    fn floquet(self, spin: SpinQuantum) -> Outcome<CMatrix> {
        if !self.p.is_finite() || !self.k.is_finite() {
            return invalid("map parameters p and k must be finite");
        }
        let (_, jy, jz) = spin_matrices(spin);
        let torsion = &jz * &jz * Complex64::new(1.0 / spin.two_j() as f64, 0.0);
        Ok(exp_i_hermitian(&torsion, -self.k)? * exp_i_hermitian(&jy, -self.p)?)
    }
}

pub fn lyapunov(
    g: &Global,
    map: KickedMap,
    xi0: f64,
    steps: usize,
    (theta0, phi0): (f64, f64),
    metric: Metric,
) -> Outcome<String> {
    let spin = g.spin()?;
    if steps == 0 {
        return invalid("steps must be at least 1");
    }
    if !(0.0..=PI).contains(&xi0) {
        return invalid(format!("xi0 = {xi0} not in [0,pi]"));
    }
    let u = map.floquet(spin)?;
    let start = SpherePoint::new(theta0, phi0)?;
    let v = start.to_vector();
    let cross = [-v[1], v[0], 0.0];
    let axis = if cross[0].hypot(cross[1]) > 1e-12 { cross } else { [1.0, 0.0, 0.0] };
    let mut a = coherent_amplitudes(spin, start);
    let mut b = coherent_amplitudes(spin, rotate_point(start, axis, xi0));

    let mut r = Report::new(&["t", "distance", "lambda", "path"]);
    let mut d0 = 0.0;
    for t in 0..=steps {
        let m = measure(metric, &State::from_pure(a.clone()), &State::from_pure(b.clone()), spin, g, true)?;
        if t == 0 {
            d0 = m.value;
        }
        let lambda = (t > 0 && d0 > 0.0 && m.value > 0.0).then(|| (m.value / d0).ln() / t as f64);
        r.row(vec![t.into(), m.value.into(), lambda.into(), m.path.map(|p| p.to_string()).into()]);
        a = a.evolve(&u)?;
        b = b.evolve(&u)?;
    }
    r.note("metric", metric_name(metric));
    Ok(r.render(g.format))
}

fn read_operator(path: &str, n: usize) -> Outcome<CMatrix> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("{path}: {e}")))?;
    let doc: serde_json::Value = serde_json::from_str(&text).map_err(|e| Failure::Invalid(format!("{path}: {e}")))?;
    let part = |key: &str| -> Outcome<Vec<Vec<f64>>> {
        match doc.get(key) {
            None => Ok(vec![vec![0.0; n]; n]),
            Some(v) => serde_json::from_value(v.clone()).map_err(|e| Failure::Invalid(format!("{path}: '{key}': {e}"))),
        }
    };
    let (re, im) = (part("re")?, part("im")?);
    if re.len() != n || im.len() != n || re.iter().chain(&im).any(|row| row.len() != n) {
        return invalid(format!("{path}: operator must be {n}x{n}"));
    }
    Ok(CMatrix::from_fn(n, n, |i, k| Complex64::new(re[i][k], im[i][k])))
}

pub fn localization(g: &Global, operator: &str, map: KickedMap, metric: Metric) -> Outcome<String> {
    let spin = g.spin()?;
    if !matches!(metric, Metric::Monge | Metric::MongeNumeric) {
        return invalid("localization supports --metric monge or monge-numeric");
    }
    let n = spin.dim();
    let (jx, jy, jz) = spin_matrices(spin);
    let op = match operator {
        "jx" => jx,
        "jy" => jy,
        "jz" => jz,
        "identity" => CMatrix::identity(n, n),
        "kicked" => map.floquet(spin)?,
        other => match other.strip_prefix("json:") {
            Some(path) => read_operator(path, n)?,
            None => return invalid(format!("unknown operator '{other}'")),
        },
    };
    let scale = op.norm().max(1.0);
    let commutator = (&op * op.adjoint() - op.adjoint() * &op).norm();
    if commutator > 1e-9 * scale * scale {
        return invalid(format!("operator is not normal (|[A, A*]| = {commutator:.3e})"));
    }

    let (values, vectors): (Vec<Complex64>, CMatrix) = if hermiticity_defect(&op) <= 1e-10 * scale {
        let (vals, vecs) = eigh(&op)?;
        (vals.iter().map(|&x| Complex64::new(x, 0.0)).collect(), vecs)
    } else {
        let (q, t) = op
            .clone()
            .try_schur(1e-14, 100_000)
            .ok_or_else(|| Failure::Solver("Schur decomposition did not converge".into()))?
            .unpack();
        ((0..n).map(|i| t[(i, i)]).collect(), q)
    };
    let degenerate = (0..n).any(|i| (i + 1..n).any(|k| (values[i] - values[k]).norm() < 1e-8 * scale));
    let offdiag: f64 = (0..n).flat_map(|i| (0..n).filter(move |&k| k != i).map(move |k| (i, k))).map(|ik| op[ik].norm()).sum();
    let (values, vectors) = if degenerate && offdiag == 0.0 {
        ((0..n).map(|i| op[(i, i)]).collect(), CMatrix::identity(n, n))
    } else {
        (values, vectors)
    };

    let star = State { spec: StateSpec::Star, rho: DensityMatrix::maximally_mixed(n), pure: None };
    let mut r = Report::new(&["index", "eigenvalue_re", "eigenvalue_im", "distance", "path"]);
    let mut total = 0.0;
    for (i, lambda) in values.iter().enumerate() {
        let psi = PureState::normalized(vectors.column(i).into_owned())?;
        let m = measure(metric, &State::from_pure(psi), &star, spin, g, true)?;
        total += m.value;
        r.row(vec![i.into(), lambda.re.into(), lambda.im.into(), m.value.into(), m.path.map(|p| p.to_string()).into()]);
    }
    r.note("gamma", total / n as f64);
    r.note("coherent", coherent_to_star(spin));
    if degenerate {
        r.note("flag", "degenerate operator");
    }
    Ok(r.render(g.format))
}

pub fn topology(g: &Global, n: usize, classify: Option<&str>, eps: f64) -> Outcome<String> {
    if eps.is_nan() || eps <= 0.0 {
        return invalid("eps must be positive");
    }
    let census = partition_census(n)?;
    let mut r = Report::new(&["label", "multiplicities", "D", "D1", "D2"]);
    if n <= 20 {
        for row in stratum_table(n)? {
            let body: Vec<String> = row.partition.iter().map(|k| k.to_string()).collect();
            r.row(vec![row.label.into(), format!("({})", body.join(",")).into(), row.d.into(), row.d1.into(), row.d2.into()]);
        }
    } else {
        r.note("table", "omitted above N = 20");
    }
    r.note("N", n);
    r.note("partitions", census.partitions.to_string());
    let counts: Vec<String> = census.part_counts.iter().map(|c| c.to_string()).collect();
    r.note("part_counts", counts.join(","));
    r.note("total_parts", census.total_parts.to_string());
    if let Some(text) = classify {
        let spin = g.spin()?;
        if spin.dim() != n {
            return invalid(format!("state has N = {} but --n is {n}", spin.dim()));
        }
        let t = classify_spectrum(&load(text, spin)?.rho, eps)?;
        r.note("spectrum", format!("{} {}", t.label(), t));
        r.note("D", stratum_dimension(&t).d);
    }
    Ok(r.render(g.format))
}

pub fn stats(g: &Global, experiment: Experiment, samples: usize, reference: &str, dims: &[usize]) -> Outcome<String> {
    match experiment {
        Experiment::Reference => {
            let spin = g.spin()?;
            let psi = load(reference, spin)?
                .pure
                .ok_or_else(|| Failure::Invalid(format!("reference '{reference}' is not a pure state")))?;
            let st = random_state_distance_stats(spin, &psi, samples, g.seed)?;
            let mut r = Report::new(&["j", "reference", "samples", "mean", "stderr"]);
            r.row(vec![spin.to_string().into(), reference.into(), st.samples.into(), st.mean.into(), st.stderr.into()]);
            Ok(r.render(g.format))
        }
        Experiment::Scaling => {
            let spins = dims.iter().map(|&n| SpinQuantum::from_dim(n)).collect::<qmonge::Result<Vec<_>>>()?;
            let table = random_pair_scaling(&spins, samples, g.seed)?;
            let mut r = Report::new(&["N", "mean", "stderr"]);
            for (n, st) in &table.rows {
                r.row(vec![(*n).into(), st.mean.into(), st.stderr.into()]);
            }
            r.note("slope", table.slope);
            Ok(r.render(g.format))
        }
        Experiment::Wehrl => {
            let spin = g.spin()?;
            if samples < 2 {
                return invalid("need at least two samples");
            }
            let grid = g.transport_grid()?;
            let n = spin.dim();
            let values = (0..samples as u64)
                .into_par_iter()
                .map(|i| {
                    let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
                    rng.set_stream(i);
                    wehrl_entropy_on(&PureState::haar_random(n, &mut rng).density(), spin, &grid)
                })
                .collect::<qmonge::Result<Vec<f64>>>()?;
            let mean = values.iter().sum::<f64>() / samples as f64;
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (samples - 1) as f64;
            let mut r = Report::new(&["N", "samples", "mean", "stderr", "expected", "coherent"]);
            r.row(vec![
                n.into(),
                samples.into(),
                mean.into(),
                (var / samples as f64).sqrt().into(),
                mean_wehrl(n).into(),
                min_wehrl(n).into(),
            ]);
            Ok(r.render(g.format))
        }
    }
}
