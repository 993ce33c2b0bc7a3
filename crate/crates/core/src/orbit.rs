//! Regular orbits of the weighted circle action and their defining factors.
//!
//! An orbit is identified by `u = β2^p ∈ Δ*`, where `(β1, β2)` is its unique
//! (up to `Z/p`) representative with `β1` real positive. Writing
//! `r = |u|^{1/p}` and `θ = arg u ∈ [0, 2π)`, the orbit is
//! `K(u) = {(ρ^p √(1−r²), ρ^q r e^{iθ/p}) : ρ ∈ S¹}`.

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mixed_poly::{check_unit, MixedPolynomial, MixedTerm, Point, WeightSystem};

/// Default minimum distance between orbit ids in a configuration.
pub const MIN_SEPARATION: f64 = 1e-3;

/// Orbit identifier `u ∈ Δ*`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OrbitId(pub Complex64);

impl OrbitId {
    pub fn new(u: Complex64) -> Result<Self> {
        let id = OrbitId(u);
        if !id.in_punctured_disk() {
            return Err(Error::InvalidConfiguration(format!(
                "orbit id {u} is outside the punctured unit disk"
            )));
        }
        Ok(id)
    }

    pub fn value(&self) -> Complex64 {
        self.0
    }

    pub fn in_punctured_disk(&self) -> bool {
        let m = self.0.norm();
        m > 0.0 && m < 1.0 && m.is_finite()
    }

    /// `(r, θ)` with `r = |u|^{1/p}` and `θ ∈ [0, 2π)`.
    pub fn polar(&self, w: WeightSystem) -> (f64, f64) {
        let r = self.0.norm().powf(1.0 / w.p as f64);
        let mut theta = self.0.arg();
        if theta < 0.0 {
            theta += TAU;
        }
        if theta >= TAU {
            theta -= TAU;
        }
        (r, theta)
    }
}

/// Orientation of an orbit in a link.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Positive,
    #[serde(rename = "-")]
    Negative,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn from_degree(deg: i64) -> Option<Sign> {
        match deg {
            1 => Some(Sign::Positive),
            -1 => Some(Sign::Negative),
            _ => None,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Positive => "+",
            Sign::Negative => "-",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrientedOrbit {
    pub id: OrbitId,
    pub sign: Sign,
}

impl OrientedOrbit {
    pub fn new(u: Complex64, sign: Sign) -> Self {
        OrientedOrbit { id: OrbitId(u), sign }
    }

    pub fn positive(u: Complex64) -> Self {
        Self::new(u, Sign::Positive)
    }

    pub fn negative(u: Complex64) -> Self {
        Self::new(u, Sign::Negative)
    }
}

/// A point of the moduli space `M_{d,r}`: oriented orbits with distinct ids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkConfiguration {
    pub weights: WeightSystem,
    pub orbits: Vec<OrientedOrbit>,
}

impl LinkConfiguration {
    pub fn new(weights: WeightSystem, orbits: Vec<OrientedOrbit>) -> Self {
        LinkConfiguration { weights, orbits }
    }

    pub fn n_pos(&self) -> usize {
        self.orbits.iter().filter(|o| o.sign == Sign::Positive).count()
    }

    pub fn n_neg(&self) -> usize {
        self.orbits.len() - self.n_pos()
    }

    /// `d = n_pos − n_neg`.
    pub fn d(&self) -> i64 {
        self.n_pos() as i64 - self.n_neg() as i64
    }

    /// `r = n_neg`.
    pub fn r(&self) -> i64 {
        self.n_neg() as i64
    }

    pub fn min_pairwise_distance(&self) -> Option<f64> {
        let mut best: Option<f64> = None;
        for (i, a) in self.orbits.iter().enumerate() {
            for b in &self.orbits[i + 1..] {
                let dist = (a.id.0 - b.id.0).norm();
                best = Some(best.map_or(dist, |m| m.min(dist)));
            }
        }
        best
    }

    pub fn validate(&self, min_separation: f64) -> ValidationReport {
        validate_config(self, min_separation)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// Two ids closer than the separation threshold (a point of Ξ when equal).
    NearDuplicate { first: usize, second: usize, distance: f64 },
    OutsideDisk { index: usize },
    NonPositiveD { d: i64 },
    Empty,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub min_distance: Option<f64>,
    pub d: i64,
    pub r: i64,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidConfiguration(format!("{:?}", self.violations)))
        }
    }
}

pub fn validate_config(config: &LinkConfiguration, min_separation: f64) -> ValidationReport {
    let mut violations = Vec::new();
    if config.orbits.is_empty() {
        violations.push(Violation::Empty);
    }
    for (i, o) in config.orbits.iter().enumerate() {
        if !o.id.in_punctured_disk() {
            violations.push(Violation::OutsideDisk { index: i });
        }
    }
    for (i, a) in config.orbits.iter().enumerate() {
        for (j, b) in config.orbits.iter().enumerate().skip(i + 1) {
            let distance = (a.id.0 - b.id.0).norm();
            if distance < min_separation {
                violations.push(Violation::NearDuplicate { first: i, second: j, distance });
            }
        }
    }
    let d = config.d();
    if d < 1 {
        violations.push(Violation::NonPositiveD { d });
    }
    ValidationReport {
        violations,
        min_distance: config.min_pairwise_distance(),
        d,
        r: config.r(),
    }
}

/// The point of `K(u)` at parameter `ρ ∈ S¹`.
pub fn orbit_point(w: WeightSystem, u: OrbitId, rho: Complex64) -> Result<Point> {
    check_unit(rho)?;
    let (r, theta) = u.polar(w);
    let z1 = rho.powu(w.p) * (1.0 - r * r).max(0.0).sqrt();
    let z2 = rho.powu(w.q) * Complex64::from_polar(r, theta / w.p as f64);
    Ok([z1, z2])
}

/// `n` points of `K(u)` at `ρ = e^{2πik/n}`, `k = 0..n`, in the positive
/// orientation.
pub fn sample_orbit(w: WeightSystem, u: OrbitId, n: usize) -> Result<Vec<Point>> {
    if n < 3 {
        return Err(Error::TooFewSamples { min: 3, got: n });
    }
    (0..n)
        .map(|k| orbit_point(w, u, Complex64::from_polar(1.0, TAU * k as f64 / n as f64)))
        .collect()
}

/// `α_{u,k} = (1−r²)^{q(1/2+k)} / (r^{p(1+2k)} e^{iθ})`.
pub fn alpha_coeff(w: WeightSystem, u: OrbitId, k: u32) -> Complex64 {
    let (r, theta) = u.polar(w);
    let (p, q) = (w.p as f64, w.q as f64);
    let k = k as f64;
    let modulus = (1.0 - r * r).powf(q * (0.5 + k)) / r.powf(p * (1.0 + 2.0 * k));
    Complex64::from_polar(modulus, -theta)
}

/// `ℓ_{u,k} = z1^{q+kq} z̄1^{kq} − α_{u,k} z2^{p+kp} z̄2^{kp}`.
pub fn ell(w: WeightSystem, u: OrbitId, k: u32) -> MixedPolynomial {
    let (p, q) = (w.p, w.q);
    MixedPolynomial::canonicalize([
        MixedTerm::real(1.0, [q + k * q, 0], [k * q, 0]),
        MixedTerm::new(-alpha_coeff(w, u, k), [0, p + k * p], [0, k * p]),
    ])
}

/// `ℓ̄_{u,k}`, defining `K(u)` with reversed orientation.
pub fn ell_bar(w: WeightSystem, u: OrbitId, k: u32) -> MixedPolynomial {
    ell(w, u, k).conjugate()
}

/// Orbit factor with the orientation given by `sign`.
pub fn oriented_factor(w: WeightSystem, orbit: &OrientedOrbit, k: u32) -> MixedPolynomial {
    match orbit.sign {
        Sign::Positive => ell(w, orbit.id, k),
        Sign::Negative => ell_bar(w, orbit.id, k),
    }
}

/// Product `ℓ_{u₁,s−r} · ∏ ℓ_{u_j} · ∏ ℓ̄_{u_j}` with the extra radial budget
/// on the first positive orbit.
pub fn defining_polynomial(config: &LinkConfiguration, s: i64) -> Result<MixedPolynomial> {
    let carrier = config
        .orbits
        .iter()
        .position(|o| o.sign == Sign::Positive)
        .ok_or_else(|| Error::InvalidConfiguration("no positive orbit".into()))?;
    defining_polynomial_with_carrier(config, s, carrier)
}

/// As [`defining_polynomial`], placing the `ℓ_{u,s−r}` factor on the
/// positive orbit at index `carrier`.
pub fn defining_polynomial_with_carrier(
    config: &LinkConfiguration,
    s: i64,
    carrier: usize,
) -> Result<MixedPolynomial> {
    config.validate(MIN_SEPARATION).into_result()?;
    let r = config.r();
    if s < r {
        return Err(Error::RadialBudgetTooSmall { s, r });
    }
    match config.orbits.get(carrier) {
        Some(o) if o.sign == Sign::Positive => {}
        _ => {
            return Err(Error::InvalidConfiguration(format!(
                "orbit {carrier} cannot carry the radial budget"
            )))
        }
    }
    let w = config.weights;
    let mut acc = MixedPolynomial::constant(Complex64::new(1.0, 0.0));
    for (i, o) in config.orbits.iter().enumerate() {
        let k = if i == carrier { (s - r) as u32 } else { 0 };
        acc = &acc * &oriented_factor(w, o, k);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn w23() -> WeightSystem {
        WeightSystem::new(2, 3).unwrap()
    }

    #[test]
    fn orbit_point_examples() {
        let z = orbit_point(w23(), OrbitId(c(0.5, 0.0)), c(1.0, 0.0)).unwrap();
        let h = 0.5f64.sqrt();
        assert!((z[0] - c(h, 0.0)).norm() < 1e-12);
        assert!((z[1] - c(h, 0.0)).norm() < 1e-12);

        let w11 = WeightSystem::new(1, 1).unwrap();
        let (r, th, ph) = (0.4, 1.1, 2.3);
        let z = orbit_point(w11, OrbitId(Complex64::from_polar(r, th)), Complex64::from_polar(1.0, ph))
            .unwrap();
        assert!((z[0] - Complex64::from_polar((1.0 - r * r).sqrt(), ph)).norm() < 1e-12);
        assert!((z[1] - Complex64::from_polar(r, ph + th)).norm() < 1e-12);

        assert!(matches!(
            orbit_point(w23(), OrbitId(c(0.5, 0.0)), c(0.5, 0.0)),
            Err(Error::NonUnitArgument(_))
        ));
    }

    #[test]
    fn sampled_points_lie_on_sphere() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for (p, q) in [(1, 1), (2, 3), (3, 5), (1, 2)] {
            let w = WeightSystem::new(p, q).unwrap();
            let u = OrbitId(Complex64::from_polar(rng.gen_range(0.05..0.95), rng.gen_range(0.0..TAU)));
            for z in sample_orbit(w, u, 37).unwrap() {
                assert!((z[0].norm_sqr() + z[1].norm_sqr() - 1.0).abs() < 1e-12);
            }
        }
        assert_eq!(
            sample_orbit(w23(), OrbitId(c(0.5, 0.0)), 2),
            Err(Error::TooFewSamples { min: 3, got: 2 })
        );
    }

    #[test]
    fn hopf_fiber_sampling_is_uniform() {
        let w = WeightSystem::new(1, 1).unwrap();
        let pts = sample_orbit(w, OrbitId(c(0.5, 0.0)), 4).unwrap();
        let dist = |a: Point, b: Point| ((a[0] - b[0]).norm_sqr() + (a[1] - b[1]).norm_sqr()).sqrt();
        let d0 = dist(pts[0], pts[1]);
        for k in 0..4 {
            assert!((dist(pts[k], pts[(k + 1) % 4]) - d0).abs() < 1e-12);
        }
    }

    #[test]
    fn alpha_examples() {
        let a = alpha_coeff(w23(), OrbitId(c(0.5, 0.0)), 0);
        assert!((a - c(0.7071067812, 0.0)).norm() < 1e-9);
        let u = OrbitId(Complex64::from_polar(0.3, 2.0));
        for k in 0..4 {
            let arg = alpha_coeff(w23(), u, k).arg();
            assert!((Complex64::from_polar(1.0, arg) - Complex64::from_polar(1.0, -2.0)).norm() < 1e-12);
        }
        let mut last = f64::INFINITY;
        for i in 1..20 {
            let m = alpha_coeff(w23(), OrbitId(c(i as f64 / 20.0, 0.0)), 1).norm();
            assert!(m < last);
            last = m;
        }
    }

    #[test]
    fn ell_shape_and_degrees() {
        let l = ell(w23(), OrbitId(c(0.5, 0.0)), 0);
        assert_eq!(l.len(), 2);
        assert_eq!(l.coeff([3, 0], [0, 0]), c(1.0, 0.0));
        assert!((l.coeff([0, 2], [0, 0]) + c(0.5f64.sqrt(), 0.0)).norm() < 1e-15);

        let lb = ell_bar(w23(), OrbitId(c(0.2, 0.3)), 0);
        assert_eq!(lb.coeff([0, 0], [3, 0]), c(1.0, 0.0));
        assert!(lb.coeff([0, 0], [0, 2]).norm() > 0.0);

        for (p, q) in [(1, 1), (2, 3), (3, 5)] {
            let w = WeightSystem::new(p, q).unwrap();
            for k in 0..=4 {
                let rep = ell(w, OrbitId(c(0.1, 0.4)), k).degree_report(w).unwrap();
                assert_eq!(rep.polar_degree, Some(w.pq()));
                assert_eq!(rep.radial_degree, Some((2 * k as i64 + 1) * w.pq()));
                let rep = ell_bar(w, OrbitId(c(0.1, 0.4)), k).degree_report(w).unwrap();
                assert_eq!(rep.polar_degree, Some(-w.pq()));
            }
        }
    }

    #[test]
    fn factors_vanish_on_their_orbit() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..40 {
            let (p, q) = [(1, 1), (1, 2), (2, 3), (3, 5), (2, 5)][rng.gen_range(0..5)];
            let w = WeightSystem::new(p, q).unwrap();
            let u = OrbitId(Complex64::from_polar(rng.gen_range(0.05..0.95), rng.gen_range(0.0..TAU)));
            let k = rng.gen_range(0..4);
            let (l, lb) = (ell(w, u, k), ell_bar(w, u, k));
            for z in sample_orbit(w, u, 64).unwrap() {
                assert!(l.evaluate(z).norm() < 1e-9);
                assert!(lb.evaluate(z).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn distinct_orbits_are_disjoint() {
        let w = w23();
        let a = sample_orbit(w, OrbitId(c(0.5, 0.0)), 400).unwrap();
        let b = sample_orbit(w, OrbitId(c(0.5, 0.2)), 400).unwrap();
        let mut best = f64::INFINITY;
        for x in &a {
            for y in &b {
                best = best.min(((x[0] - y[0]).norm_sqr() + (x[1] - y[1]).norm_sqr()).sqrt());
            }
        }
        assert!(best > 1e-3);
    }

    #[test]
    fn defining_polynomial_degrees() {
        let w = w23();
        let single = LinkConfiguration::new(w, vec![OrientedOrbit::positive(c(0.5, 0.0))]);
        let f = defining_polynomial(&single, 0).unwrap();
        assert_eq!(f, ell(w, OrbitId(c(0.5, 0.0)), 0));
        let rep = f.degree_report(w).unwrap();
        assert_eq!((rep.polar_degree, rep.radial_degree), (Some(6), Some(6)));

        let cfg = LinkConfiguration::new(
            w,
            vec![
                OrientedOrbit::positive(c(0.5, 0.0)),
                OrientedOrbit::positive(c(-0.3, 0.0)),
                OrientedOrbit::negative(c(0.0, 0.3)),
            ],
        );
        let f = defining_polynomial(&cfg, 1).unwrap();
        let rep = f.degree_report(w).unwrap();
        assert_eq!((rep.polar_degree, rep.radial_degree), (Some(6), Some(18)));
        assert_eq!((rep.d, rep.s), (Some(1), Some(1)));
        assert!(rep.is_convenient && rep.is_strongly_polar);
        assert_eq!(rep.witness_z1, Some((6, 3)));
        for o in &cfg.orbits {
            for z in sample_orbit(w, o.id, 50).unwrap() {
                assert!(f.evaluate(z).norm() < 1e-9);
            }
        }
        assert_eq!(
            defining_polynomial(&cfg, 0),
            Err(Error::RadialBudgetTooSmall { s: 0, r: 1 })
        );
        let other = defining_polynomial_with_carrier(&cfg, 1, 1).unwrap();
        assert_eq!(other.degree_report(w).unwrap().radial_degree, Some(18));
        assert!(defining_polynomial_with_carrier(&cfg, 1, 2).is_err());
    }

    #[test]
    fn product_degrees_for_larger_budgets() {
        let w = WeightSystem::new(3, 5).unwrap();
        let cfg = LinkConfiguration::new(
            w,
            vec![
                OrientedOrbit::positive(c(0.5, 0.1)),
                OrientedOrbit::positive(c(-0.3, 0.2)),
                OrientedOrbit::positive(c(0.1, -0.6)),
                OrientedOrbit::negative(c(0.0, 0.3)),
            ],
        );
        for s in 1..4 {
            let rep = defining_polynomial(&cfg, s).unwrap().degree_report(w).unwrap();
            assert_eq!(rep.polar_degree, Some(2 * 15));
            assert_eq!(rep.radial_degree, Some((2 + 2 * s) * 15));
            assert!(rep.is_convenient);
        }
    }

    #[test]
    fn validation_flags() {
        let w = w23();
        let dup = LinkConfiguration::new(
            w,
            vec![OrientedOrbit::positive(c(0.5, 0.0)), OrientedOrbit::negative(c(0.5, 0.0))],
        );
        let rep = validate_config(&dup, MIN_SEPARATION);
        assert!(rep.violations.iter().any(|v| matches!(v, Violation::NearDuplicate { .. })));

        let outside = LinkConfiguration::new(w, vec![OrientedOrbit::positive(c(1.2, 0.0))]);
        assert!(validate_config(&outside, MIN_SEPARATION)
            .violations
            .contains(&Violation::OutsideDisk { index: 0 }));

        let neg = LinkConfiguration::new(
            w,
            vec![
                OrientedOrbit::negative(c(0.5, 0.0)),
                OrientedOrbit::negative(c(0.3, 0.0)),
                OrientedOrbit::positive(c(0.4, 0.0)),
            ],
        );
        assert!(validate_config(&neg, MIN_SEPARATION)
            .violations
            .contains(&Violation::NonPositiveD { d: -1 }));
        assert!(OrbitId::new(c(0.0, 0.0)).is_err());
    }
}
