use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{chart_eval, chart_jacobian, model_family, rank_check, solve_chart, SmoothnessReport};
use crate::error::{Error, Result};
use crate::mixed_poly::WeightSystem;
use crate::orbit::orbit_point;
use crate::planar::{PlanarRoot, SolverOptions};
use crate::slice::chart_to_orbit;

/// Bisection stops once the bracket is shorter than this in `t`.
pub const EVENT_TOL: f64 = 1e-6;
/// Crossings this close to the cusp `t = 1` are refused.
pub const CUSP_EXCLUSION: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    PairElimination,
    PairCreation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepEvent {
    /// Index of the path segment containing the crossing.
    pub segment: usize,
    pub t_star: Complex64,
    pub kind: EventKind,
    /// The two chart roots that collide, with their degrees.
    pub merging_roots: [(Complex64, i64); 2],
    pub collision_point: Complex64,
    pub counts: (usize, usize),
    pub certificate: SmoothnessReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub path: Vec<Complex64>,
    /// Distinct chart roots at each path point.
    pub counts: Vec<usize>,
    pub signed_totals: Vec<i64>,
    pub events: Vec<SweepEvent>,
    /// Chart roots at each path point.
    pub roots: Vec<Vec<PlanarRoot>>,
}

/// Solves the model chart along `t_path` and locates every change in the
/// number of link components.
pub fn sweep(w: WeightSystem, t_path: &[Complex64], opts: &SolverOptions) -> Result<SweepResult> {
    if t_path.len() < 2 {
        return Err(Error::TooFewSamples { min: 2, got: t_path.len() });
    }
    let roots: Vec<Vec<PlanarRoot>> = t_path
        .par_iter()
        .map(|&t| solve_chart(t, opts))
        .collect::<Result<_>>()?;
    for (end, rs) in [(t_path[0], &roots[0]), (*t_path.last().unwrap(), roots.last().unwrap())] {
        if rs.iter().any(|r| !r.simple) {
            return Err(Error::TangentialCrossing(format!("path endpoint t = {end} lies on the degeneration locus")));
        }
    }
    let counts: Vec<usize> = roots.iter().map(Vec::len).collect();
    let signed_totals = roots
        .iter()
        .map(|rs| rs.iter().map(PlanarRoot::signed_contribution).sum())
        .collect();

    let mut events = Vec::new();
    let mut last_simple = 0usize;
    for k in 1..t_path.len() {
        if roots[k].iter().any(|r| !r.simple) {
            continue;
        }
        if counts[k] != counts[last_simple] {
            events.push(locate_event(w, t_path[last_simple], t_path[k], k - 1, counts[last_simple], counts[k], opts)?);
        }
        last_simple = k;
    }
    Ok(SweepResult { path: t_path.to_vec(), counts, signed_totals, events, roots })
}

fn locate_event(
    w: WeightSystem,
    a: Complex64,
    b: Complex64,
    segment: usize,
    count_a: usize,
    count_b: usize,
    opts: &SolverOptions,
) -> Result<SweepEvent> {
    let diff = count_a as i64 - count_b as i64;
    if diff.abs() != 2 {
        return Err(Error::TangentialCrossing(format!(
            "component count jumps {count_a} -> {count_b} between t = {a} and t = {b}"
        )));
    }
    let at = |lambda: f64| a + (b - a) * lambda;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let len = (b - a).norm();
    while (hi - lo) * len > EVENT_TOL {
        let mid = 0.5 * (lo + hi);
        if (at(mid) - 1.0).norm() < CUSP_EXCLUSION {
            return Err(Error::TangentialCrossing(format!("crossing near t = {} approaches the cusp", at(mid))));
        }
        if solve_chart(at(mid), opts)?.len() == count_a {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let lambda = 0.5 * (lo + hi);
    if (at(lambda) - 1.0).norm() < CUSP_EXCLUSION {
        return Err(Error::TangentialCrossing(format!("crossing at t = {} is at the cusp", at(lambda))));
    }

    // Identify the pair on the many-root side, far enough out that both
    // roots are certified simple.
    let (many_side, sign) = if count_a > count_b { (lo, -1.0) } else { (hi, 1.0) };
    let mut pair = None;
    for offset in [1e-4, 1e-3, 1e-2] {
        let probe = (many_side + sign * offset / len).clamp(0.0, 1.0);
        let rs = solve_chart(at(probe), opts)?;
        if rs.len() == count_a.max(count_b) && rs.iter().all(|r| r.simple) {
            pair = closest_opposite_pair(&rs);
            if pair.is_some() {
                break;
            }
        }
    }
    let merging_roots = pair.ok_or_else(|| Error::TangentialCrossing("no oppositely oriented pair merges".into()))?;

    let guess = 0.5 * (merging_roots[0].0 + merging_roots[1].0);
    let (collision_point, lambda) = refine_fold(a, b, guess, lambda)?;
    let t_star = at(lambda);
    if (t_star - 1.0).norm() < CUSP_EXCLUSION {
        return Err(Error::TangentialCrossing(format!("crossing at t = {t_star} is at the cusp")));
    }
    let z = orbit_point(w, chart_to_orbit(w, collision_point), Complex64::new(1.0, 0.0))?;
    let certificate = rank_check(&model_family(w), z, t_star, 1.0)?;
    let kind = if count_a > count_b { EventKind::PairElimination } else { EventKind::PairCreation };
    Ok(SweepEvent {
        segment,
        t_star,
        kind,
        merging_roots,
        collision_point,
        counts: (count_a, count_b),
        certificate,
    })
}

fn closest_opposite_pair(roots: &[PlanarRoot]) -> Option<[(Complex64, i64); 2]> {
    let mut best: Option<(f64, [(Complex64, i64); 2])> = None;
    for (i, a) in roots.iter().enumerate() {
        for b in &roots[i + 1..] {
            if a.degree * b.degree != -1 {
                continue;
            }
            let dist = (a.w - b.w).norm();
            if best.map_or(true, |(d, _)| dist < d) {
                let pair = if a.degree > 0 { [(a.w, a.degree), (b.w, b.degree)] } else { [(b.w, b.degree), (a.w, a.degree)] };
                best = Some((dist, pair));
            }
        }
    }
    best.map(|(_, p)| p)
}

/// Newton on `(Re F, Im F, det J) = 0` in `(Re u, Im u, λ)` along the
/// segment `t = a + λ(b − a)`.
fn refine_fold(a: Complex64, b: Complex64, u0: Complex64, lambda0: f64) -> Result<(Complex64, f64)> {
    let system = |x: Vector3<f64>| {
        let t = a + (b - a) * x[2];
        let u = Complex64::new(x[0], x[1]);
        let f = chart_eval(t, u);
        let j = chart_jacobian(t, u);
        Vector3::new(f.re, f.im, j[0][0] * j[1][1] - j[0][1] * j[1][0])
    };
    let mut x = Vector3::new(u0.re, u0.im, lambda0);
    for _ in 0..60 {
        let fx = system(x);
        if fx.norm() < 1e-14 {
            break;
        }
        let mut jac = Matrix3::zeros();
        for k in 0..3 {
            let h = 1e-7 * (1.0 + x[k].abs());
            let mut xp = x;
            let mut xm = x;
            xp[k] += h;
            xm[k] -= h;
            jac.set_column(k, &((system(xp) - system(xm)) / (2.0 * h)));
        }
        let step = jac
            .lu()
            .solve(&(-fx))
            .ok_or_else(|| Error::TangentialCrossing("fold system is singular".into()))?;
        x += step;
        if step.norm() < 1e-15 {
            break;
        }
    }
    let res = system(x).norm();
    if !res.is_finite() || res > 1e-9 {
        return Err(Error::TangentialCrossing(format!("fold refinement residual {res:e}")));
    }
    Ok((Complex64::new(x[0], x[1]), x[2]))
}

/// `n + 1` equally spaced points from `from` to `to`.
pub fn linear_path(from: Complex64, to: Complex64, n: usize) -> Vec<Complex64> {
    (0..=n).map(|k| from + (to - from) * (k as f64 / n as f64)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn elimination_at_minus_three() {
        let w = WeightSystem::new(2, 3).unwrap();
        let res = sweep(w, &linear_path(c(-3.5, 0.0), c(-2.5, 0.0), 40), &SolverOptions::default()).unwrap();
        assert_eq!(res.events.len(), 1);
        let ev = &res.events[0];
        assert_eq!(ev.kind, EventKind::PairElimination);
        assert!((ev.t_star + 3.0).norm() < 1e-3);
        assert!((ev.collision_point + 1.0).norm() < 1e-3);
        assert_eq!((ev.merging_roots[0].1, ev.merging_roots[1].1), (1, -1));
        assert_eq!(ev.counts, (3, 1));
        assert_eq!(ev.certificate.rank, 3);
        assert!(res.signed_totals.iter().all(|&s| s == 1));
        assert_eq!(*res.counts.first().unwrap(), 3);
        assert_eq!(*res.counts.last().unwrap(), 1);
    }

    #[test]
    fn reverse_is_creation() {
        let w = WeightSystem::new(1, 1).unwrap();
        let res = sweep(w, &linear_path(c(-2.5, 0.0), c(-3.5, 0.0), 20), &SolverOptions::default()).unwrap();
        assert_eq!(res.events.len(), 1);
        assert_eq!(res.events[0].kind, EventKind::PairCreation);
        assert!((res.events[0].t_star + 3.0).norm() < 1e-3);
    }

    #[test]
    fn inside_path_has_no_events() {
        let w = WeightSystem::new(2, 3).unwrap();
        let res = sweep(w, &linear_path(c(-1.0, 0.5), c(0.5, -0.5), 20), &SolverOptions::default()).unwrap();
        assert!(res.events.is_empty());
        assert!(res.counts.iter().all(|&n| n == 1));
    }

    #[test]
    fn endpoint_on_sigma_is_refused() {
        let w = WeightSystem::new(2, 3).unwrap();
        let err = sweep(w, &linear_path(c(-3.0, 0.0), c(-2.5, 0.0), 4), &SolverOptions::default()).unwrap_err();
        assert!(matches!(err, Error::TangentialCrossing(_)));
    }

    #[test]
    fn cusp_crossing_is_refused() {
        let w = WeightSystem::new(2, 3).unwrap();
        let err = sweep(w, &linear_path(c(1.2, 0.0), c(0.8, 0.0), 8), &SolverOptions::default()).unwrap_err();
        assert!(matches!(err, Error::TangentialCrossing(_)), "{err:?}");
    }
}
