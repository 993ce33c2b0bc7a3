//! Milnor fiber `F = {z ∈ S³ : f(z) > 0}`, its monodromy and Euler
//! characteristic.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mixed_poly::{apply_action, MixedPolynomial, Point, WeightSystem};
use crate::orbit::{defining_polynomial, LinkConfiguration, OrientedOrbit};

/// Samples per orbit in [`measure_fiber_count`].
pub const FIBER_SAMPLES: usize = 8192;
/// Relative half-width of the "real positive" band.
pub const MEMBERSHIP_TOL: f64 = 1e-10;

fn check_sphere(z: Point) -> Result<()> {
    let norm = (z[0].norm_sqr() + z[1].norm_sqr()).sqrt();
    if (norm - 1.0).abs() > 1e-8 {
        return Err(Error::NotOnSphere { radius: 1.0, norm });
    }
    Ok(())
}

/// Whether `z ∈ S³` lies in the Milnor fiber over argument 0.
pub fn fiber_membership(f: &MixedPolynomial, z: Point) -> Result<bool> {
    check_sphere(z)?;
    let v = f.evaluate(z);
    let band = MEMBERSHIP_TOL * (1.0 + v.norm());
    Ok(v.im.abs() < band && v.re > band)
}

/// `h(z) = e^{2πi/dpq} ∘ z`.
pub fn monodromy_apply(w: WeightSystem, d: i64, z: Point) -> Result<Point> {
    if d < 1 {
        return Err(Error::InvalidConfiguration(format!("d = {d} must be positive")));
    }
    let eta = Complex64::from_polar(1.0, TAU / (d * w.pq()) as f64);
    apply_action(z, 1.0, eta, w)
}

/// Smallest `k ≥ 1` with `h^k = id` on three seeded sphere points.
pub fn monodromy_order(w: WeightSystem, d: i64, seed: u64) -> Result<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let starts: Vec<Point> = (0..3).map(|_| random_sphere_point(&mut rng)).collect();
    let mut current = starts.clone();
    let limit = (d * w.pq()).max(1) as u64 * 4;
    for k in 1..=limit {
        for z in current.iter_mut() {
            *z = monodromy_apply(w, d, *z)?;
        }
        let back = current
            .iter()
            .zip(&starts)
            .all(|(a, b)| (a[0] - b[0]).norm() + (a[1] - b[1]).norm() < 1e-9);
        if back {
            return Ok(k);
        }
    }
    Err(Error::BudgetExceeded(format!("monodromy order exceeds {limit}")))
}

pub(crate) fn random_sphere_point<R: Rng>(rng: &mut R) -> Point {
    let a: f64 = rng.gen_range(0.05..std::f64::consts::FRAC_PI_2 - 0.05);
    [
        Complex64::from_polar(a.cos(), rng.gen_range(0.0..TAU)),
        Complex64::from_polar(a.sin(), rng.gen_range(0.0..TAU)),
    ]
}

/// Number of distinct points of `F` on the orbit of `z0`.
///
/// Samples `f(ρ ∘ z0)` at [`FIBER_SAMPLES`] points of `S¹`, refines each
/// sign change of the imaginary part with positive real part by bisection,
/// and merges parameters giving the same point of `S³`.
pub fn measure_fiber_count(f: &MixedPolynomial, w: WeightSystem, z0: Point) -> Result<usize> {
    check_sphere(z0)?;
    let v0 = f.evaluate(z0).norm();
    if v0 < 1e-10 * (1.0 + f.coeff_norm()) {
        return Err(Error::OnLink(v0));
    }
    let at = |phi: f64| -> Result<(Point, Complex64)> {
        let z = apply_action(z0, 1.0, Complex64::from_polar(1.0, phi), w)?;
        Ok((z, f.evaluate(z)))
    };
    let n = FIBER_SAMPLES;
    let values: Vec<Complex64> = (0..=n)
        .into_par_iter()
        .map(|k| at(TAU * (k as f64 + 0.5) / n as f64).map(|(_, v)| v))
        .collect::<Result<_>>()?;
    let mut points: Vec<Point> = Vec::new();
    for k in 0..n {
        let (va, vb) = (values[k], values[k + 1]);
        if (va.im >= 0.0) == (vb.im >= 0.0) {
            continue;
        }
        let (mut lo, mut hi) = (TAU * (k as f64 + 0.5) / n as f64, TAU * (k as f64 + 1.5) / n as f64);
        let below = va.im < 0.0;
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if (at(mid)?.1.im < 0.0) == below {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let (z, v) = at(0.5 * (lo + hi))?;
        if v.re <= 0.0 {
            continue;
        }
        if !points.iter().any(|p| (p[0] - z[0]).norm() + (p[1] - z[1]).norm() < 1e-7) {
            points.push(z);
        }
    }
    Ok(points.len())
}

/// `−(d+2r)dpq + p + q`.
pub fn chi_paper(d: i64, r: i64, p: i64, q: i64) -> i64 {
    -(d + 2 * r) * d * p * q + p + q
}

/// `−(d+2r)dpq + c1 + c2` with measured branch fiber counts.
pub fn chi_covering(d: i64, r: i64, p: i64, q: i64, c1: i64, c2: i64) -> i64 {
    -(d + 2 * r) * d * p * q + c1 + c2
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MilnorReport {
    pub d: i64,
    pub r: i64,
    pub s: i64,
    pub d_p: i64,
    pub d_r: i64,
    pub monodromy_order: u64,
    pub generic_fiber_count: usize,
    pub axis1_fiber_count: usize,
    pub axis2_fiber_count: usize,
    pub chi_paper: i64,
    pub chi_covering: i64,
    pub agree: bool,
}

/// Seeded regular base point on `S³` off the zero set of `f`.
pub fn regular_base_point(f: &MixedPolynomial, seed: u64) -> Result<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = 1.0 + f.coeff_norm();
    for _ in 0..64 {
        let z = random_sphere_point(&mut rng);
        if f.evaluate(z).norm() > 1e-6 * scale {
            return Ok(z);
        }
    }
    Err(Error::BudgetExceeded("no regular base point off the link".into()))
}

/// Full invariant report for a convenient SPWH `f` whose link has `r`
/// negatively oriented components.
pub fn milnor_report(f: &MixedPolynomial, w: WeightSystem, r: i64, seed: u64) -> Result<MilnorReport> {
    let rep = f.degree_report(w)?;
    rep.require_convenient()?;
    let (d, s) = (rep.d.ok_or(Error::NotHomogeneous)?, rep.s.ok_or(Error::NotHomogeneous)?);
    let (d_p, d_r) = (rep.polar_degree.unwrap_or(0), rep.radial_degree.unwrap_or(0));
    if r < 0 || r > s {
        return Err(Error::RadialBudgetTooSmall { s, r });
    }
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let generic = measure_fiber_count(f, w, regular_base_point(f, seed)?)?;
    let c1 = measure_fiber_count(f, w, [one, zero])?;
    let c2 = measure_fiber_count(f, w, [zero, one])?;
    let (p, q) = (w.p as i64, w.q as i64);
    let chi_p = chi_paper(d, r, p, q);
    let chi_c = chi_covering(d, r, p, q, c1 as i64, c2 as i64);
    Ok(MilnorReport {
        d,
        r,
        s,
        d_p,
        d_r,
        monodromy_order: monodromy_order(w, d, seed)?,
        generic_fiber_count: generic,
        axis1_fiber_count: c1,
        axis2_fiber_count: c2,
        chi_paper: chi_p,
        chi_covering: chi_c,
        agree: chi_p == chi_c,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopologyEntry {
    pub r: i64,
    pub components: i64,
    pub chi_paper: i64,
    pub chi_covering: i64,
}

/// Configuration of `d + r` positive and `r` negative orbits spread on a
/// circle of radius 1/2.
pub fn sample_configuration(w: WeightSystem, d: i64, r: i64) -> LinkConfiguration {
    let n = (d + 2 * r).max(1) as usize;
    let orbits = (0..n)
        .map(|k| {
            let u = Complex64::from_polar(0.5, TAU * (k as f64 + 0.25) / n as f64);
            if k < (d + r) as usize {
                OrientedOrbit::positive(u)
            } else {
                OrientedOrbit::negative(u)
            }
        })
        .collect();
    LinkConfiguration::new(w, orbits)
}

/// The `s + 1` topologies with `d + 2r` components, `r = 0..=s`, with χ
/// measured on constructed polynomials.
pub fn topology_enumeration(d: i64, s: i64, w: WeightSystem) -> Result<Vec<TopologyEntry>> {
    if d < 1 || s < 0 {
        return Err(Error::InvalidConfiguration(format!("need d ≥ 1 and s ≥ 0, got d = {d}, s = {s}")));
    }
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let (p, q) = (w.p as i64, w.q as i64);
    (0..=s)
        .map(|r| {
            let f = defining_polynomial(&sample_configuration(w, d, r), s)?;
            let c1 = measure_fiber_count(&f, w, [one, zero])? as i64;
            let c2 = measure_fiber_count(&f, w, [zero, one])? as i64;
            Ok(TopologyEntry {
                r,
                components: d + 2 * r,
                chi_paper: chi_paper(d, r, p, q),
                chi_covering: chi_covering(d, r, p, q, c1, c2),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::text::parse_poly;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Counts solutions of `d_p φ + arg f(z0) ≡ 0 (mod 2π)` with distinct
    /// images, using only the equivariance law.
    fn argument_sweep_count(w: WeightSystem, d_p: i64, z0: Point) -> usize {
        let stab = if z0[1].norm() < 1e-12 {
            w.p
        } else if z0[0].norm() < 1e-12 {
            w.q
        } else {
            1
        };
        (d_p as usize) / stab as usize
    }

    #[test]
    fn membership_examples() {
        let f = parse_poly("z1^3 - z2^2").unwrap();
        assert!(fiber_membership(&f, [c(1.0, 0.0), c(0.0, 0.0)]).unwrap());
        assert!(!fiber_membership(&f, [c(0.0, 0.0), c(1.0, 0.0)]).unwrap());
        let mut x = 0.75f64;
        for _ in 0..50 {
            x -= (x * x + x.powi(3) - 1.0) / (2.0 * x + 3.0 * x * x);
        }
        let on_link = [c(x, 0.0), c(x.powf(1.5), 0.0)];
        assert!(f.evaluate(on_link).norm() < 1e-14);
        assert!(!fiber_membership(&f, on_link).unwrap());
        assert!(matches!(fiber_membership(&f, [c(2.0, 0.0), c(0.0, 0.0)]), Err(Error::NotOnSphere { .. })));
    }

    #[test]
    fn monodromy_examples() {
        let w = WeightSystem::new(2, 3).unwrap();
        let z = [c(0.6, 0.0), c(0.0, 0.8)];
        let mut y = z;
        for _ in 0..6 {
            y = monodromy_apply(w, 1, y).unwrap();
        }
        assert!((y[0] - z[0]).norm() + (y[1] - z[1]).norm() < 1e-12);
        assert_eq!(monodromy_order(w, 1, 3).unwrap(), 6);
        assert_eq!(monodromy_order(w, 2, 3).unwrap(), 12);
        let h = WeightSystem::new(1, 1).unwrap();
        assert_eq!(monodromy_order(h, 1, 3).unwrap(), 1);

        let f = parse_poly("z1^3 - z2^2").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut checked = 0;
        while checked < 100 {
            let z = random_sphere_point(&mut rng);
            let v = f.evaluate(z);
            let z = apply_action(z, 1.0, Complex64::from_polar(1.0, -v.arg() / 6.0), w).unwrap();
            assert!(fiber_membership(&f, z).unwrap());
            assert!(fiber_membership(&f, monodromy_apply(w, 1, z).unwrap()).unwrap());
            checked += 1;
        }
    }

    #[test]
    fn fiber_counts() {
        let w = WeightSystem::new(2, 3).unwrap();
        let f = defining_polynomial(&sample_configuration(w, 1, 1), 1).unwrap();
        let one = c(1.0, 0.0);
        let zero = c(0.0, 0.0);
        for seed in 0..10 {
            let z0 = regular_base_point(&f, seed).unwrap();
            assert_eq!(measure_fiber_count(&f, w, z0).unwrap(), argument_sweep_count(w, 6, z0));
        }
        assert_eq!(measure_fiber_count(&f, w, [one, zero]).unwrap(), 3);
        assert_eq!(measure_fiber_count(&f, w, [zero, one]).unwrap(), 2);

        let torus = parse_poly("z1^6 - z2^4").unwrap();
        assert_eq!(measure_fiber_count(&torus, w, [one, zero]).unwrap(), 6);
        assert_eq!(measure_fiber_count(&torus, w, [zero, one]).unwrap(), 4);

        let z = [c(0.5f64.sqrt(), 0.0), c(0.5f64.sqrt(), 0.0)];
        let on = parse_poly("z1 - z2").unwrap();
        assert!(matches!(measure_fiber_count(&on, WeightSystem::new(1, 1).unwrap(), z), Err(Error::OnLink(_))));
    }

    #[test]
    fn chi_formulas() {
        assert_eq!(chi_paper(1, 0, 2, 3), -1);
        assert_eq!(chi_paper(1, 1, 2, 3), -13);
        assert_eq!(chi_paper(2, 0, 2, 3), -19);
        assert_eq!(chi_covering(2, 0, 2, 3, 6, 4), -14);
        assert_eq!(chi_covering(1, 1, 2, 3, 3, 2), chi_paper(1, 1, 2, 3));
    }

    #[test]
    fn report_flags_discrepancy() {
        let w = WeightSystem::new(2, 3).unwrap();
        let t1 = parse_poly("z1^3 - z2^2").unwrap();
        let rep = milnor_report(&t1, w, 0, 1).unwrap();
        assert_eq!((rep.chi_paper, rep.chi_covering, rep.agree), (-1, -1, true));
        assert_eq!(rep.generic_fiber_count, 6);
        let t2 = parse_poly("z1^6 - z2^4").unwrap();
        let rep = milnor_report(&t2, w, 0, 1).unwrap();
        assert_eq!((rep.chi_paper, rep.chi_covering, rep.agree), (-19, -14, false));
        assert_eq!(rep.monodromy_order, 12);
    }

    #[test]
    fn enumeration() {
        let w = WeightSystem::new(2, 3).unwrap();
        let e = topology_enumeration(1, 1, w).unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!((e[0].components, e[0].chi_paper, e[0].chi_covering), (1, -1, -1));
        assert_eq!((e[1].components, e[1].chi_paper, e[1].chi_covering), (3, -13, -13));
        assert_eq!(topology_enumeration(1, 0, w).unwrap().len(), 1);
        let e = topology_enumeration(2, 3, w).unwrap();
        assert!(e.windows(2).all(|x| x[1].chi_paper < x[0].chi_paper));
    }
}
