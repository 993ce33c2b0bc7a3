//! Numerical links: solve `f = 0` on the slice `β1 = √(1−|β2|²) > 0`.
//!
//! Every regular orbit of the circle action meets the slice in exactly `p`
//! points `β2, β2 e^{2πi/p}, …`; the orbit id is `u = β2^p`. The orientation
//! of a component is the local degree of `F(β2) = f(√(1−|β2|²), β2)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mixed_poly::{MixedPolynomial, Point, WeightSystem};
use crate::orbit::{LinkConfiguration, OrbitId, OrientedOrbit, Sign};
use crate::planar::{find_roots, PlanarMap, PlanarRoot, SearchDisk};

pub use crate::planar::{local_degree, SolverOptions};

/// `β2 ↦ f(√(1−|β2|²), β2)` on the open unit disk.
pub struct SliceMap<'a> {
    f: &'a MixedPolynomial,
    scale: f64,
}

impl<'a> SliceMap<'a> {
    pub fn new(f: &'a MixedPolynomial) -> Self {
        SliceMap { f, scale: f.coeff_norm().max(f64::MIN_POSITIVE) }
    }
}

pub fn slice_point(beta2: Complex64) -> Point {
    let b1 = (1.0 - beta2.norm_sqr()).max(0.0).sqrt();
    [Complex64::new(b1, 0.0), beta2]
}

impl PlanarMap for SliceMap<'_> {
    fn eval(&self, w: Complex64) -> Complex64 {
        self.f.evaluate(slice_point(w))
    }

    fn eval_wirtinger(&self, w: Complex64) -> (Complex64, Complex64, Complex64) {
        let z = slice_point(w);
        let v = self.f.evaluate(z);
        let g = self.f.wirtinger_gradient(z);
        let s = z[0].re.max(1e-300);
        let dz1 = g[0] + g[1];
        let a = dz1 * (-w.conj() / (2.0 * s)) + g[2];
        let b = dz1 * (-w / (2.0 * s)) + g[3];
        (v, a, b)
    }

    fn scale(&self) -> f64 {
        self.scale
    }
}

/// One component of a solved link.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkSolution {
    /// Orbit id `u = β2^p`.
    pub u: Complex64,
    /// Chart coordinate `z2^p / z1^q` at the slice representative.
    pub u_chart: Complex64,
    pub degree: i64,
    pub multiplicity: u32,
    pub residual: f64,
    pub condition: f64,
    pub simple: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkReport {
    pub weights: WeightSystem,
    pub solutions: Vec<LinkSolution>,
    pub n_pos: usize,
    pub n_neg: usize,
    pub signed_total: i64,
    pub degenerate: bool,
    /// Number of slice roots before grouping into orbits.
    pub slice_roots: usize,
}

impl LinkReport {
    pub fn components(&self) -> usize {
        self.solutions.len()
    }

    /// The oriented configuration realized by a non-degenerate report.
    pub fn to_configuration(&self) -> Result<LinkConfiguration> {
        if self.degenerate {
            return Err(Error::InvalidConfiguration("degenerate link report".into()));
        }
        let orbits = self
            .solutions
            .iter()
            .map(|s| {
                let sign = Sign::from_degree(s.degree)
                    .ok_or_else(|| Error::InvalidConfiguration("non-unit degree".into()))?;
                Ok(OrientedOrbit { id: OrbitId(s.u), sign })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LinkConfiguration::new(self.weights, orbits))
    }
}

/// Solves the link `f⁻¹(0) ∩ S³`.
///
/// The grid is refined up to twice when the roots do not come in complete
/// `p`-tuples or the signed count disagrees with `d_p / pq`.
pub fn solve_link(f: &MixedPolynomial, w: WeightSystem, opts: &SolverOptions) -> Result<LinkReport> {
    let rep = f.degree_report(w)?;
    rep.require_convenient()?;
    let expected = rep.polar_degree.expect("polar homogeneous") / w.pq();
    let map = SliceMap::new(f);
    let disk = SearchDisk::new(Complex64::new(0.0, 0.0), 1.0);
    let mut opts = *opts;
    let mut last_problem = String::new();
    for _attempt in 0..3 {
        let roots = find_roots(&map, &disk, &opts)?;
        match group_orbits(&roots, w) {
            Ok(report) => {
                if report.signed_total == expected {
                    return Ok(report);
                }
                last_problem = format!(
                    "signed total {} differs from d_p/pq = {expected}",
                    report.signed_total
                );
            }
            Err(msg) => last_problem = msg,
        }
        opts.grid_resolution *= 2;
    }
    Err(Error::BudgetExceeded(last_problem))
}

fn group_orbits(roots: &[PlanarRoot], w: WeightSystem) -> std::result::Result<LinkReport, String> {
    let p = w.p as usize;
    let mut groups: Vec<(Complex64, Vec<&PlanarRoot>)> = Vec::new();
    for r in roots {
        let u = r.w.powu(w.p);
        let tol: f64 = if r.simple { 1e-7 } else { 1e-4 };
        match groups.iter_mut().find(|(g, _)| (*g - u).norm() < tol.max(1e-7 * u.norm())) {
            Some((_, members)) => members.push(r),
            None => groups.push((u, vec![r])),
        }
    }
    let mut solutions = Vec::with_capacity(groups.len());
    for (_, members) in &groups {
        if members.len() != p {
            return Err(format!("incomplete orbit tuple: {} of {p} slice roots", members.len()));
        }
        let first = members[0];
        if members
            .iter()
            .any(|m| m.degree != first.degree || m.multiplicity != first.multiplicity)
        {
            return Err("inconsistent degrees within an orbit tuple".into());
        }
        let best = members
            .iter()
            .min_by(|a, b| a.residual.total_cmp(&b.residual))
            .expect("nonempty");
        let beta2 = best.w;
        let beta1 = (1.0 - beta2.norm_sqr()).max(0.0).sqrt();
        let u = beta2.powu(w.p);
        solutions.push(LinkSolution {
            u,
            u_chart: u / beta1.powi(w.q as i32),
            degree: first.degree,
            multiplicity: first.multiplicity,
            residual: members.iter().map(|m| m.residual).fold(0.0, f64::max),
            condition: members.iter().map(|m| m.condition).fold(f64::INFINITY, f64::min),
            simple: members.iter().all(|m| m.simple),
        });
    }
    solutions.sort_by(|a, b| a.u.re.total_cmp(&b.u.re).then(a.u.im.total_cmp(&b.u.im)));
    let signed_total = solutions.iter().map(|s| s.degree * s.multiplicity as i64).sum();
    Ok(LinkReport {
        weights: w,
        n_pos: solutions.iter().filter(|s| s.degree > 0).count(),
        n_neg: solutions.iter().filter(|s| s.degree < 0).count(),
        degenerate: solutions.iter().any(|s| !s.simple),
        signed_total,
        solutions,
        slice_roots: roots.len(),
    })
}

/// Orbit id of the orbit whose chart coordinate `z2^p / z1^q` is `u_chart`.
///
/// Solves `t^p / (1−t²)^{q/2} = |u_chart|` for `t ∈ (0, 1)` by bisection.
pub fn chart_to_orbit(w: WeightSystem, u_chart: Complex64) -> OrbitId {
    let target = u_chart.norm();
    let g = |t: f64| t.powi(w.p as i32) / (1.0 - t * t).powf(w.q as f64 / 2.0);
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-17 {
            break;
        }
    }
    let t = 0.5 * (lo + hi);
    OrbitId(Complex64::from_polar(t.powi(w.p as i32), u_chart.arg()))
}

/// Chart coordinate `u / (1 − |u|^{2/p})^{q/2}` of an orbit id.
pub fn orbit_to_chart(w: WeightSystem, u: OrbitId) -> Complex64 {
    let r2 = u.0.norm().powf(2.0 / w.p as f64);
    u.0 / (1.0 - r2).powf(w.q as f64 / 2.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedCountCheck {
    pub expected: i64,
    pub observed: i64,
    pub pass: bool,
}

/// Checks `Σ degree · multiplicity = d_p / pq`.
pub fn signed_count(report: &LinkReport, w: WeightSystem, f: &MixedPolynomial) -> Result<SignedCountCheck> {
    let rep = f.degree_report(w)?;
    let dp = rep.polar_degree.ok_or(Error::NotHomogeneous)?;
    let expected = dp / w.pq();
    Ok(SignedCountCheck {
        expected,
        observed: report.signed_total,
        pass: dp % w.pq() == 0 && expected == report.signed_total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mixed_poly::MixedTerm;
    use crate::orbit::defining_polynomial;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn single_factor_round_trip() {
        let w = WeightSystem::new(2, 3).unwrap();
        let cfg = LinkConfiguration::new(w, vec![OrientedOrbit::positive(c(0.5, 0.0))]);
        let f = defining_polynomial(&cfg, 0).unwrap();
        let rep = solve_link(&f, w, &SolverOptions::default()).unwrap();
        assert_eq!(rep.components(), 1);
        assert!((rep.solutions[0].u - c(0.5, 0.0)).norm() < 1e-8);
        assert_eq!(rep.solutions[0].degree, 1);
        assert_eq!(rep.slice_roots, 2);
        assert!(signed_count(&rep, w, &f).unwrap().pass);
    }

    #[test]
    fn torus_model_d2() {
        let w = WeightSystem::new(2, 3).unwrap();
        let f = MixedPolynomial::canonicalize([
            MixedTerm::real(1.0, [6, 0], [0, 0]),
            MixedTerm::real(-1.0, [0, 4], [0, 0]),
        ]);
        let rep = solve_link(&f, w, &SolverOptions::default()).unwrap();
        assert_eq!(rep.components(), 2);
        assert!(rep.solutions.iter().all(|s| s.degree == 1 && s.simple));
        assert_eq!(rep.signed_total, 2);
    }

    #[test]
    fn mixed_signs_round_trip() {
        let w = WeightSystem::new(2, 3).unwrap();
        let cfg = LinkConfiguration::new(
            w,
            vec![
                OrientedOrbit::positive(c(0.5, 0.0)),
                OrientedOrbit::positive(c(-0.3, 0.0)),
                OrientedOrbit::negative(c(0.0, 0.3)),
            ],
        );
        let f = defining_polynomial(&cfg, 1).unwrap();
        let rep = solve_link(&f, w, &SolverOptions::default()).unwrap();
        assert_eq!(rep.components(), 3);
        assert!(!rep.degenerate);
        for o in &cfg.orbits {
            let s = rep
                .solutions
                .iter()
                .find(|s| (s.u - o.id.0).norm() < 1e-6)
                .expect("configured orbit recovered");
            assert_eq!(s.degree, o.sign.value());
        }
        assert_eq!(rep.signed_total, 1);
        assert_eq!((rep.n_pos, rep.n_neg), (2, 1));
    }

    #[test]
    fn non_convenient_rejected() {
        let w = WeightSystem::new(1, 1).unwrap();
        let f = MixedPolynomial::canonicalize([MixedTerm::real(1.0, [1, 1], [0, 0])]);
        assert_eq!(solve_link(&f, w, &SolverOptions::default()), Err(Error::NotConvenient));
    }

    #[test]
    fn chart_to_orbit_examples() {
        let w11 = WeightSystem::new(1, 1).unwrap();
        let u = chart_to_orbit(w11, c(1.0, 0.0));
        assert!((u.0 - c(0.5f64.sqrt(), 0.0)).norm() < 1e-12);

        let w = WeightSystem::new(2, 3).unwrap();
        let mut last = 0.0;
        for k in 1..40 {
            let uc = Complex64::from_polar(k as f64 * 0.1, 0.7);
            let u = chart_to_orbit(w, uc);
            assert!((u.0.arg() - 0.7).abs() < 1e-12);
            assert!(u.0.norm() > last);
            last = u.0.norm();
            assert!((orbit_to_chart(w, u) - uc).norm() < 1e-10 * (1.0 + uc.norm()));
        }
    }
}
