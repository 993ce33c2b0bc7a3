use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::sweep::linear_path;
use super::{model_family, rank_check, sweep, AffineFamily, SmoothnessReport, SweepResult};
use crate::error::{Error, Result};
use crate::mixed_poly::{MixedPolynomial, WeightSystem};
use crate::orbit::{
    oriented_factor, orbit_point, sample_orbit, validate_config, LinkConfiguration, OrbitId, OrientedOrbit, Sign,
    MIN_SEPARATION,
};
use crate::planar::SolverOptions;
use crate::slice::{chart_to_orbit, solve_link, LinkReport};

/// Outside parameter where the model has three components.
pub const DEFAULT_T_OUT: f64 = -3.5;
/// Inside parameter where the model has one component.
pub const DEFAULT_T_IN: f64 = -2.5;
/// Radius of the semicircular detour around an obstacle.
pub const DETOUR_RADIUS: f64 = 2e-3;

const SWEEP_STEPS: usize = 40;

/// Piecewise-linear motion of one orbit id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsotopyStep {
    pub orbit: usize,
    pub waypoints: Vec<Complex64>,
    pub detours: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EliminationFamily {
    pub weights: WeightSystem,
    /// Indices `[positive, positive, negative]` into the input configuration.
    pub triple: [usize; 3],
    /// Model orbits at `t_out`, in triple order.
    pub targets: [OrientedOrbit; 3],
    pub schedule: Vec<IsotopyStep>,
    /// Configuration after the isotopy.
    pub moved: LinkConfiguration,
    /// Orbits outside the triple, unchanged by the isotopy.
    pub rest: Vec<OrientedOrbit>,
    pub t_out: f64,
    pub t_in: f64,
    #[serde(skip)]
    pub rest_factor: MixedPolynomial,
    #[serde(skip)]
    pub family: AffineFamily,
}

impl EliminationFamily {
    pub fn at(&self, t: f64) -> MixedPolynomial {
        self.family.at(Complex64::new(t, 0.0))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EliminationOutcome {
    pub family: EliminationFamily,
    /// Link of `F_{t_out}`; matches `family.moved`.
    pub initial_report: LinkReport,
    pub sweep: SweepResult,
    /// Rank certificate of the full family at the collision.
    pub certificate: SmoothnessReport,
    /// Smallest `|∏ rest factors|` near the collision orbit.
    pub rest_min_modulus: f64,
    pub final_report: LinkReport,
}

/// Oriented model orbits at real `t`, read from the slice solver.
fn model_orbits(w: WeightSystem, t: f64, opts: &SolverOptions) -> Result<Vec<OrientedOrbit>> {
    let report = solve_link(&model_family(w).at(Complex64::new(t, 0.0)), w, opts)?;
    Ok(report.to_configuration()?.orbits)
}

/// First negative orbit and the two positive orbits closest to the model's
/// positive targets.
pub fn choose_triple(config: &LinkConfiguration, targets: &[OrientedOrbit]) -> Result<[usize; 3]> {
    let neg = config
        .orbits
        .iter()
        .position(|o| o.sign == Sign::Negative)
        .ok_or(Error::NoNegativeOrbit)?;
    let pos: Vec<usize> = (0..config.orbits.len()).filter(|&i| config.orbits[i].sign == Sign::Positive).collect();
    let tpos: Vec<Complex64> = targets.iter().filter(|o| o.sign == Sign::Positive).map(|o| o.id.0).collect();
    if pos.len() < 2 || tpos.len() != 2 {
        return Err(Error::InvalidConfiguration("need two positive orbits to eliminate a pair".into()));
    }
    let mut best = (f64::INFINITY, [0, 0]);
    for &a in &pos {
        for &b in &pos {
            if a == b {
                continue;
            }
            let cost = (config.orbits[a].id.0 - tpos[0]).norm() + (config.orbits[b].id.0 - tpos[1]).norm();
            if cost < best.0 {
                best = (cost, [a, b]);
            }
        }
    }
    Ok([best.1[0], best.1[1], neg])
}

fn segment_foot(x: Complex64, a: Complex64, b: Complex64) -> (Complex64, f64) {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    let s = if len2 == 0.0 { 0.0 } else { (((x - a) * ab.conj()).re / len2).clamp(0.0, 1.0) };
    let foot = a + ab * s;
    (foot, (x - foot).norm())
}

fn polyline_clearance(path: &[Complex64], x: Complex64) -> f64 {
    path.windows(2).map(|w| segment_foot(x, w[0], w[1]).1).fold(f64::INFINITY, f64::min)
}

/// Straight segment from `a` to `b` with semicircular detours around
/// obstacles closer than `MIN_SEPARATION`. Returns the waypoints and the
/// number of detours, or the index of an obstacle that still blocks.
fn plan_segment(a: Complex64, b: Complex64, obstacles: &[(usize, Complex64)]) -> std::result::Result<(Vec<Complex64>, usize), usize> {
    let dir = if (b - a).norm() > 0.0 { (b - a) / (b - a).norm() } else { Complex64::new(1.0, 0.0) };
    let mut hits: Vec<(f64, Complex64, Complex64)> = Vec::new();
    for &(j, o) in obstacles {
        if (b - o).norm() < MIN_SEPARATION {
            return Err(j);
        }
        let (foot, dist) = segment_foot(o, a, b);
        if dist < MIN_SEPARATION {
            let s = ((foot - a) * dir.conj()).re;
            hits.push((s, foot, o));
        }
    }
    hits.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut path = vec![a];
    for &(_, foot, o) in &hits {
        let normal = dir * Complex64::new(0.0, 1.0);
        let side = if ((o - foot) * normal.conj()).re > 0.0 { -1.0 } else { 1.0 };
        let n = 16;
        for k in 0..=n {
            let phi = PI * k as f64 / n as f64;
            let offset = -dir * phi.cos() + normal * (side * phi.sin());
            path.push(foot + offset * DETOUR_RADIUS);
        }
    }
    path.push(b);
    for &(j, o) in obstacles {
        if polyline_clearance(&path, o) < MIN_SEPARATION {
            return Err(j);
        }
    }
    if path.iter().any(|p| p.norm() >= 1.0) {
        return Err(usize::MAX);
    }
    Ok((path, hits.len()))
}

/// Tries every order of moving the triple onto its targets.
fn plan_isotopy(
    config: &LinkConfiguration,
    triple: [usize; 3],
    targets: &[OrientedOrbit; 3],
) -> Result<(Vec<IsotopyStep>, LinkConfiguration)> {
    const ORDERS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let origin = config.orbits.len();
    let mut first_block = None;
    'orders: for order in ORDERS {
        let mut ids: Vec<Complex64> = config.orbits.iter().map(|o| o.id.0).collect();
        let mut schedule = Vec::new();
        for &k in &order {
            let i = triple[k];
            let mut obstacles: Vec<(usize, Complex64)> =
                ids.iter().enumerate().filter(|&(j, _)| j != i).map(|(j, &u)| (j, u)).collect();
            obstacles.push((origin, Complex64::new(0.0, 0.0)));
            match plan_segment(ids[i], targets[k].id.0, &obstacles) {
                Ok((waypoints, detours)) => {
                    ids[i] = targets[k].id.0;
                    schedule.push(IsotopyStep { orbit: i, waypoints, detours });
                }
                Err(j) => {
                    first_block.get_or_insert((i, j.min(origin)));
                    continue 'orders;
                }
            }
        }
        let mut moved = config.clone();
        for (k, &i) in triple.iter().enumerate() {
            moved.orbits[i] = targets[k];
        }
        return Ok((schedule, moved));
    }
    let (i, j) = first_block.unwrap_or((triple[0], triple[1]));
    Err(Error::IsotopyBlocked(i, j))
}

/// The elimination family `F_t = f_t · ∏ rest factors` for the chosen
/// triple, with its isotopy schedule.
pub fn elimination_family(
    config: &LinkConfiguration,
    triple: [usize; 3],
    opts: &SolverOptions,
) -> Result<EliminationFamily> {
    validate_config(config, MIN_SEPARATION).into_result()?;
    let w = config.weights;
    if config.n_neg() == 0 {
        return Err(Error::NoNegativeOrbit);
    }
    let n = config.orbits.len();
    let distinct = triple[0] != triple[1] && triple[0] != triple[2] && triple[1] != triple[2];
    if !distinct || triple.iter().any(|&i| i >= n) {
        return Err(Error::InvalidConfiguration(format!("bad triple {triple:?}")));
    }
    let signs = [Sign::Positive, Sign::Positive, Sign::Negative];
    if triple.iter().zip(signs).any(|(&i, s)| config.orbits[i].sign != s) {
        return Err(Error::InvalidConfiguration("triple must be (+, +, −)".into()));
    }

    let model = model_orbits(w, DEFAULT_T_OUT, opts)?;
    let neg = model.iter().find(|o| o.sign == Sign::Negative).copied();
    let pos: Vec<OrientedOrbit> = model.iter().filter(|o| o.sign == Sign::Positive).copied().collect();
    let neg = match (neg, pos.len()) {
        (Some(neg), 2) => neg,
        _ => return Err(Error::BudgetExceeded("model link at t_out is not (+, +, −)".into())),
    };
    let [a, b] = [config.orbits[triple[0]].id.0, config.orbits[triple[1]].id.0];
    let straight = (a - pos[0].id.0).norm() + (b - pos[1].id.0).norm();
    let swapped = (a - pos[1].id.0).norm() + (b - pos[0].id.0).norm();
    let targets = if straight <= swapped { [pos[0], pos[1], neg] } else { [pos[1], pos[0], neg] };

    let (schedule, moved) = plan_isotopy(config, triple, &targets)?;
    let rest: Vec<OrientedOrbit> =
        (0..n).filter(|i| !triple.contains(i)).map(|i| config.orbits[i]).collect();
    let rest_factor = rest
        .iter()
        .fold(MixedPolynomial::constant(Complex64::new(1.0, 0.0)), |acc, o| &acc * &oriented_factor(w, o, 0));
    let family = model_family(w).times(&rest_factor);
    Ok(EliminationFamily {
        weights: w,
        triple,
        targets,
        schedule,
        moved,
        rest,
        t_out: DEFAULT_T_OUT,
        t_in: DEFAULT_T_IN,
        rest_factor,
        family,
    })
}

fn rest_clearance(fam: &EliminationFamily, sweep: &SweepResult) -> Result<()> {
    let w = fam.weights;
    for roots in &sweep.roots {
        for r in roots {
            let id = chart_to_orbit(w, r.w).0;
            for (k, o) in fam.rest.iter().enumerate() {
                if (o.id.0 - id).norm() < MIN_SEPARATION {
                    let idx = (0..fam.moved.orbits.len()).filter(|i| !fam.triple.contains(i)).nth(k).unwrap_or(0);
                    return Err(Error::IsotopyBlocked(idx, fam.triple[2]));
                }
            }
        }
    }
    Ok(())
}

/// Minimum of `|∏ rest factors|` over the collision orbit and a ring of
/// nearby orbits.
fn rest_modulus_near(fam: &EliminationFamily, center: OrbitId) -> Result<f64> {
    let mut min = f64::INFINITY;
    let mut ids = vec![center.0];
    for k in 0..8 {
        ids.push(center.0 + Complex64::from_polar(1e-2, PI * k as f64 / 4.0));
    }
    for u in ids.into_iter().filter(|u| u.norm() > 0.0 && u.norm() < 1.0) {
        for z in sample_orbit(fam.weights, OrbitId(u), 64)? {
            min = min.min(fam.rest_factor.evaluate(z).norm());
        }
    }
    Ok(min)
}

/// Runs one pair elimination: isotopy onto the model, sweep from `t_out`
/// to `t_in`, certificate at the crossing, and the final link.
pub fn run_elimination(config: &LinkConfiguration, opts: &SolverOptions) -> Result<EliminationOutcome> {
    let w = config.weights;
    let model = model_orbits(w, DEFAULT_T_OUT, opts)?;
    let triple = choose_triple(config, &model)?;
    let family = elimination_family(config, triple, opts)?;

    let initial_report = solve_link(&family.at(family.t_out), w, opts)?;
    let path = linear_path(Complex64::new(family.t_out, 0.0), Complex64::new(family.t_in, 0.0), SWEEP_STEPS);
    let sweep = sweep(w, &path, opts)?;
    rest_clearance(&family, &sweep)?;
    let event = match sweep.events.as_slice() {
        [ev] => ev.clone(),
        evs => {
            return Err(Error::TangentialCrossing(format!("expected one crossing, found {}", evs.len())));
        }
    };
    let id = chart_to_orbit(w, event.collision_point);
    let z = orbit_point(w, id, Complex64::new(1.0, 0.0))?;
    let certificate = rank_check(&family.family, z, event.t_star, 1.0)?;
    let rest_min_modulus = rest_modulus_near(&family, id)?;
    let final_report = solve_link(&family.at(family.t_in), w, opts)?;
    Ok(EliminationOutcome { family, initial_report, sweep, certificate, rest_min_modulus, final_report })
}

/// Eliminates pairs until no negative orbit remains.
pub fn positivize(config: &LinkConfiguration, opts: &SolverOptions) -> Result<Vec<EliminationOutcome>> {
    if config.n_neg() == 0 {
        return Err(Error::NoNegativeOrbit);
    }
    let mut current = config.clone();
    let mut steps = Vec::new();
    while current.n_neg() > 0 {
        let outcome = run_elimination(&current, opts)?;
        current = outcome.final_report.to_configuration()?;
        steps.push(outcome);
    }
    Ok(steps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn same_orbits(a: &[OrientedOrbit], b: &[OrientedOrbit], tol: f64) -> bool {
        a.len() == b.len()
            && a.iter().all(|x| b.iter().any(|y| y.sign == x.sign && (y.id.0 - x.id.0).norm() < tol))
    }

    #[test]
    fn single_pair_elimination() {
        let w = WeightSystem::new(2, 3).unwrap();
        let config = LinkConfiguration::new(
            w,
            vec![
                OrientedOrbit::positive(c(0.3, 0.2)),
                OrientedOrbit::positive(c(-0.4, 0.1)),
                OrientedOrbit::negative(c(0.1, -0.5)),
            ],
        );
        let out = run_elimination(&config, &SolverOptions::default()).unwrap();
        assert!(same_orbits(&out.initial_report.to_configuration().unwrap().orbits, &out.family.moved.orbits, 1e-6));
        assert_eq!(out.certificate.rank, 3);
        assert_eq!(out.final_report.components(), 1);
        assert_eq!((out.final_report.n_pos, out.final_report.n_neg), (1, 0));
        assert!(out.family.schedule.len() == 3);
    }

    #[test]
    fn rest_orbits_survive() {
        let w = WeightSystem::new(1, 2).unwrap();
        let config = LinkConfiguration::new(
            w,
            vec![
                OrientedOrbit::positive(c(0.2, 0.5)),
                OrientedOrbit::negative(c(-0.3, -0.3)),
                OrientedOrbit::positive(c(0.5, -0.2)),
                OrientedOrbit::positive(c(0.1, 0.7)),
            ],
        );
        let out = run_elimination(&config, &SolverOptions::default()).unwrap();
        assert_eq!((out.final_report.n_pos, out.final_report.n_neg), (2, 0));
        assert!(out.rest_min_modulus > 1e-3);
        let rest = out.family.rest[0];
        assert!(out.final_report.solutions.iter().any(|s| (s.u - rest.id.0).norm() < 1e-6));
    }

    #[test]
    fn no_negative_orbit() {
        let w = WeightSystem::new(2, 3).unwrap();
        let config = LinkConfiguration::new(w, vec![OrientedOrbit::positive(c(0.3, 0.2))]);
        assert_eq!(run_elimination(&config, &SolverOptions::default()).unwrap_err(), Error::NoNegativeOrbit);
        assert_eq!(positivize(&config, &SolverOptions::default()).unwrap_err(), Error::NoNegativeOrbit);
    }

    #[test]
    fn detour_avoids_obstacle() {
        let obstacles = [(7, c(0.0, 0.0005))];
        let (path, detours) = plan_segment(c(-0.5, 0.0), c(0.5, 0.0), &obstacles).unwrap();
        assert_eq!(detours, 1);
        assert!(polyline_clearance(&path, obstacles[0].1) >= MIN_SEPARATION);
        assert_eq!(plan_segment(c(-0.5, 0.0), c(0.0, 0.0008), &obstacles), Err(7));
    }
}
