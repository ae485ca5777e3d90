//! Picks the cheapest exact route to a Monge distance.

use std::fmt;

use qmonge::monge::{
    coherent_pair_distance, coherent_to_star, eigenstate_distance, monge_bloch, monge_prop6, monge_symmetric,
    zero_state_to_star,
};
use qmonge::qstate::{DensityMatrix, SpinQuantum, StateSpec};
use qmonge::sphere::{geodesic, SpherePoint};
use qmonge::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Path {
    ClosedForm,
    Axial,
    Meridian,
    Numeric,
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Path::ClosedForm => "closed-form",
            Path::Axial => "axial",
            Path::Meridian => "meridian",
            Path::Numeric => "numeric",
        })
    }
}

fn pole(two_m: i32, spin: SpinQuantum) -> Option<SpherePoint> {
    let two_j = spin.two_j() as i32;
    match two_m {
        m if m == two_j => Some(SpherePoint::north()),
        m if m == -two_j => Some(SpherePoint::south()),
        _ => None,
    }
}

/// `2m` of a `J_z` eigenstate descriptor.
fn eigen_two_m(spec: &StateSpec, spin: SpinQuantum) -> Option<i32> {
    let two_j = spin.two_j() as i32;
    match *spec {
        StateSpec::Plus => Some(two_j),
        StateSpec::Minus => Some(-two_j),
        StateSpec::Jm(m) => Some(m),
        StateSpec::Mix(1.0) => Some(two_j),
        StateSpec::Mix(0.0) => Some(-two_j),
        StateSpec::Coherent { theta: 0.0, .. } => Some(two_j),
        StateSpec::Coherent { theta, .. } if theta == std::f64::consts::PI => Some(-two_j),
        _ => None,
    }
}

fn direction(spec: &StateSpec, spin: SpinQuantum) -> Option<SpherePoint> {
    match *spec {
        StateSpec::Coherent { theta, phi } => SpherePoint::new(theta, phi).ok(),
        _ => eigen_two_m(spec, spin).and_then(|m| pole(m, spin)),
    }
}

/// Weight `a` of `a ρ₊ + (1 − a) ρ₋`.
fn line_weight(spec: &StateSpec, spin: SpinQuantum) -> Option<f64> {
    match *spec {
        StateSpec::Mix(a) => Some(a),
        _ => match direction(spec, spin) {
            Some(p) if p.theta == 0.0 => Some(1.0),
            Some(p) if p.theta == std::f64::consts::PI => Some(0.0),
            _ => None,
        },
    }
}

/// Closed forms keyed on the descriptors alone.
pub fn closed_form(a: &StateSpec, b: &StateSpec, spin: SpinQuantum) -> Result<Option<f64>> {
    if a == b && !matches!(a, StateSpec::Json(_)) {
        return Ok(Some(0.0));
    }
    if let (Some(m), Some(mp)) = (eigen_two_m(a, spin), eigen_two_m(b, spin)) {
        return eigenstate_distance(spin, m, mp).map(Some);
    }
    if let (Some(p), Some(q)) = (direction(a, spin), direction(b, spin)) {
        return coherent_pair_distance(spin, geodesic(p, q)).map(Some);
    }
    if let (Some(wa), Some(wb)) = (line_weight(a, spin), line_weight(b, spin)) {
        let two_j = spin.two_j() as i32;
        return Ok(Some((wa - wb).abs() * eigenstate_distance(spin, two_j, -two_j)?));
    }
    let other = match (a, b) {
        (StateSpec::Star, x) | (x, StateSpec::Star) => x,
        _ => return Ok(None),
    };
    if direction(other, spin).is_some() {
        return Ok(Some(coherent_to_star(spin)));
    }
    if eigen_two_m(other, spin) == Some(0) {
        return zero_state_to_star(spin).map(Some);
    }
    Ok(None)
}

/// Closed form, then the axially symmetric reduction, then the ordered-meridian reduction.
///
/// `None` means no exact route applies.
pub fn exact_monge(
    specs: Option<(&StateSpec, &StateSpec)>,
    rho1: &DensityMatrix,
    rho2: &DensityMatrix,
    spin: SpinQuantum,
) -> Result<Option<(f64, Path)>> {
    if let Some((a, b)) = specs {
        if let Some(v) = closed_form(a, b, spin)? {
            return Ok(Some((v, Path::ClosedForm)));
        }
    }
    if spin.two_j() == 1 {
        return Ok(Some((monge_bloch(rho1, rho2)?, Path::ClosedForm)));
    }
    match monge_symmetric(rho1, rho2, spin) {
        Ok(v) => return Ok(Some((v, Path::Axial))),
        Err(Error::NotSymmetric(_)) => {}
        Err(e) => return Err(e),
    }
    match monge_prop6(rho1, rho2, spin) {
        Ok(v) => Ok(Some((v, Path::Meridian))),
        Err(Error::AssumptionViolated(_)) => Ok(None),
        Err(e) => Err(e),
    }
}
