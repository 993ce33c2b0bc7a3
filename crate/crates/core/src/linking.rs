//! Linking numbers of orbits via stereographic projection and the Gauss
//! double sum.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::milnor::random_sphere_point;
use crate::mixed_poly::{MixedPolynomial, MixedTerm, Point, WeightSystem};
use crate::orbit::{sample_orbit, OrientedOrbit, Sign};

/// Poles are drawn from this many seeded sphere points.
pub const POLE_CANDIDATES: usize = 64;
/// Minimum distance in `R⁴` between the pole and either curve.
pub const POLE_CLEARANCE: f64 = 0.2;
/// Maximum allowed distance from the nearest integer.
pub const SNAP_TOL: f64 = 0.05;
pub const MAX_SAMPLES: usize = 4096;

const POLE_SEED: u64 = 0x5eed_0f_9011;

pub type Vec3 = [f64; 3];

/// A polygonal curve in `R³`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polyline3 {
    pub points: Vec<Vec3>,
    pub closed: bool,
}

impl Polyline3 {
    pub fn new(points: Vec<Vec3>, closed: bool) -> Result<Self> {
        if points.len() < 8 {
            return Err(Error::TooFewSamples { min: 8, got: points.len() });
        }
        Ok(Polyline3 { points, closed })
    }

    pub fn reversed(&self) -> Self {
        let mut points = self.points.clone();
        points.reverse();
        Polyline3 { points, closed: self.closed }
    }

    /// `(midpoint, tangent)` of each edge.
    fn edges(&self) -> Vec<(Vec3, Vec3)> {
        let n = self.points.len();
        let m = if self.closed { n } else { n - 1 };
        (0..m)
            .map(|i| {
                let a = self.points[i];
                let b = self.points[(i + 1) % n];
                (
                    [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0, (a[2] + b[2]) / 2.0],
                    [b[0] - a[0], b[1] - a[1], b[2] - a[2]],
                )
            })
            .collect()
    }
}

fn to_r4(z: Point) -> [f64; 4] {
    [z[0].re, z[0].im, z[1].re, z[1].im]
}

fn dot4(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Orthonormal basis of the hyperplane orthogonal to `n`, oriented so that
/// `(e1, e2, e3, n)` is positively oriented in `R⁴`.
fn tangent_basis(n: &[f64; 4]) -> [[f64; 4]; 3] {
    let mut basis: Vec<[f64; 4]> = Vec::new();
    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by(|&i, &j| n[i].abs().total_cmp(&n[j].abs()));
    for &k in &order {
        let mut v = [0.0; 4];
        v[k] = 1.0;
        let c = dot4(&v, n);
        for i in 0..4 {
            v[i] -= c * n[i];
        }
        for b in &basis {
            let c = dot4(&v, b);
            for i in 0..4 {
                v[i] -= c * b[i];
            }
        }
        let len = dot4(&v, &v).sqrt();
        if len > 1e-6 && basis.len() < 3 {
            basis.push(v.map(|x| x / len));
        }
    }
    let mut e = [basis[0], basis[1], basis[2]];
    if det4([e[0], e[1], e[2], *n]) < 0.0 {
        e[2] = e[2].map(|x| -x);
    }
    e
}

fn det4(m: [[f64; 4]; 4]) -> f64 {
    let mat = nalgebra::Matrix4::from_fn(|r, c| m[r][c]);
    mat.determinant()
}

/// Stereographic projection of `z` from `pole`, both on the sphere of
/// radius `radius`, onto the equatorial hyperplane.
pub fn stereographic_project(z: Point, pole: Point, radius: f64) -> Result<Vec3> {
    let x = to_r4(z);
    let np = to_r4(pole);
    if ((x[0] - np[0]).powi(2) + (x[1] - np[1]).powi(2) + (x[2] - np[2]).powi(2) + (x[3] - np[3]).powi(2)).sqrt()
        <= 1e-6
    {
        return Err(Error::AtPole);
    }
    let n = np.map(|v| v / radius);
    let e = tangent_basis(&n);
    let h = dot4(&x, &n);
    let denom = radius - h;
    Ok([0, 1, 2].map(|k| radius * dot4(&x, &e[k]) / denom))
}

/// Inverse of [`stereographic_project`].
pub fn stereographic_lift(y: Vec3, pole: Point, radius: f64) -> Point {
    let n = to_r4(pole).map(|v| v / radius);
    let e = tangent_basis(&n);
    let y2 = y[0] * y[0] + y[1] * y[1] + y[2] * y[2];
    let r2 = radius * radius;
    let mut x = [0.0; 4];
    for i in 0..4 {
        let tangent = y[0] * e[0][i] + y[1] * e[1][i] + y[2] * e[2][i];
        x[i] = (2.0 * r2 * tangent + (y2 - r2) * radius * n[i]) / (y2 + r2);
    }
    [Complex64::new(x[0], x[1]), Complex64::new(x[2], x[3])]
}

/// Midpoint Gauss double sum `(1/4π) ΣΣ (m_i − m_j)·(d_i × d_j) / |m_i − m_j|³`.
pub fn gauss_linking(c1: &Polyline3, c2: &Polyline3) -> Result<f64> {
    let min = c1
        .points
        .par_iter()
        .map(|a| {
            c2.points
                .iter()
                .map(|b| ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt())
                .fold(f64::INFINITY, f64::min)
        })
        .reduce(|| f64::INFINITY, f64::min);
    if min <= 1e-3 {
        return Err(Error::CurvesTooClose(min));
    }
    let e1 = c1.edges();
    let e2 = c2.edges();
    let rows: Vec<f64> = e1
        .par_iter()
        .map(|(m1, d1)| {
            let mut acc = 0.0;
            for (m2, d2) in &e2 {
                let r = [m1[0] - m2[0], m1[1] - m2[1], m1[2] - m2[2]];
                let cross = [
                    d1[1] * d2[2] - d1[2] * d2[1],
                    d1[2] * d2[0] - d1[0] * d2[2],
                    d1[0] * d2[1] - d1[1] * d2[0],
                ];
                let dist = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
                acc += (r[0] * cross[0] + r[1] * cross[1] + r[2] * cross[2]) / (dist * dist * dist);
            }
            acc
        })
        .collect();
    Ok(rows.iter().sum::<f64>() / (4.0 * PI))
}

/// Sampled orbit in its orientation.
pub fn oriented_samples(w: WeightSystem, o: &OrientedOrbit, n: usize) -> Result<Vec<Point>> {
    let mut pts = sample_orbit(w, o.id, n)?;
    if o.sign == Sign::Negative {
        pts.reverse();
    }
    Ok(pts)
}

fn dist4(a: Point, b: Point) -> f64 {
    ((a[0] - b[0]).norm_sqr() + (a[1] - b[1]).norm_sqr()).sqrt()
}

/// First of [`POLE_CANDIDATES`] seeded sphere points farther than
/// [`POLE_CLEARANCE`] from every curve.
pub fn find_pole(curves: &[&[Point]]) -> Result<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(POLE_SEED);
    for _ in 0..POLE_CANDIDATES {
        let pole = random_sphere_point(&mut rng);
        let clear = curves.iter().all(|c| c.iter().all(|&z| dist4(z, pole) > POLE_CLEARANCE));
        if clear {
            return Ok(pole);
        }
    }
    Err(Error::PoleSearchFailed)
}

pub fn project_curve(points: &[Point], pole: Point) -> Result<Polyline3> {
    Polyline3::new(
        points.iter().map(|&z| stereographic_project(z, pole, 1.0)).collect::<Result<_>>()?,
        true,
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkingResult {
    pub numeric: f64,
    pub snapped: i64,
    pub samples: usize,
    pub pole: Point,
}

/// Linking number of two oriented orbits, doubling the sampling from
/// `samples` up to [`MAX_SAMPLES`] until the value is within [`SNAP_TOL`]
/// of an integer.
pub fn orbit_linking(w: WeightSystem, o1: &OrientedOrbit, o2: &OrientedOrbit, samples: usize) -> Result<LinkingResult> {
    if (o1.id.0 - o2.id.0).norm() < 1e-12 {
        return Err(Error::InvalidConfiguration("orbits coincide".into()));
    }
    let mut n = samples.max(8);
    loop {
        let s1 = oriented_samples(w, o1, n)?;
        let s2 = oriented_samples(w, o2, n)?;
        let pole = find_pole(&[&s1, &s2])?;
        let numeric = gauss_linking(&project_curve(&s1, pole)?, &project_curve(&s2, pole)?)?;
        let snapped = numeric.round() as i64;
        if (numeric - snapped as f64).abs() < SNAP_TOL || n >= MAX_SAMPLES {
            return Ok(LinkingResult { numeric, snapped, samples: n, pole });
        }
        n = (n * 2).min(MAX_SAMPLES);
    }
}

/// One projected link component with its orientation sign.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectedComponent {
    pub sign: Sign,
    pub curve: Polyline3,
}

/// Projects every orbit from a common pole off all of them.
pub fn project_link(w: WeightSystem, orbits: &[OrientedOrbit], samples: usize) -> Result<(Point, Vec<ProjectedComponent>)> {
    if orbits.is_empty() {
        return Err(Error::EmptyData);
    }
    let sampled: Vec<Vec<Point>> = orbits.iter().map(|o| oriented_samples(w, o, samples)).collect::<Result<_>>()?;
    let refs: Vec<&[Point]> = sampled.iter().map(Vec::as_slice).collect();
    let pole = find_pole(&refs)?;
    let comps = orbits
        .iter()
        .zip(&sampled)
        .map(|(o, s)| Ok(ProjectedComponent { sign: o.sign, curve: project_curve(s, pole)? }))
        .collect::<Result<_>>()?;
    Ok((pole, comps))
}

/// `sign₁ · sign₂ · pq`.
pub fn expected_linking(w: WeightSystem, o1: &OrientedOrbit, o2: &OrientedOrbit) -> i64 {
    o1.sign.value() * o2.sign.value() * w.pq()
}

/// `z1^{qd} − z2^{pd}`.
pub fn torus_model(w: WeightSystem, d: u32) -> Result<MixedPolynomial> {
    if d < 1 {
        return Err(Error::InvalidConfiguration("d must be positive".into()));
    }
    Ok(MixedPolynomial::canonicalize([
        MixedTerm::real(1.0, [w.q * d, 0], [0, 0]),
        MixedTerm::real(-1.0, [0, w.p * d], [0, 0]),
    ]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbit::OrbitId;
    use crate::planar::SolverOptions;
    use crate::slice::solve_link;
    use rand::Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn projection_geometry() {
        let pole = [c(0.6, 0.0), c(0.0, 0.8)];
        let antipode = [-pole[0], -pole[1]];
        let y = stereographic_project(antipode, pole, 1.0).unwrap();
        assert!(y.iter().all(|v| v.abs() < 1e-12));
        let equator = [c(0.0, 0.8), c(0.6, 0.0)];
        let y = stereographic_project(equator, pole, 1.0).unwrap();
        assert!(((y[0] * y[0] + y[1] * y[1] + y[2] * y[2]).sqrt() - 1.0).abs() < 1e-12);
        assert_eq!(stereographic_project(pole, pole, 1.0), Err(Error::AtPole));

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let z = random_sphere_point(&mut rng);
            let back = stereographic_lift(stereographic_project(z, pole, 1.0).unwrap(), pole, 1.0);
            assert!(dist4(z, back) < 1e-9);
        }
        let r2 = 2f64.sqrt();
        let pole2 = [c(1.0, 0.0), c(0.0, 1.0)];
        let z = [c(0.0, 1.0), c(1.0, 0.0)];
        let back = stereographic_lift(stereographic_project(z, pole2, r2).unwrap(), pole2, r2);
        assert!(dist4(z, back) < 1e-9);
    }

    /// Two round circles forming a positive Hopf link in `R³`.
    #[test]
    fn gauss_reference_circles() {
        let n = 400;
        let circle = |f: &dyn Fn(f64) -> Vec3| {
            Polyline3::new((0..n).map(|k| f(2.0 * PI * k as f64 / n as f64)).collect(), true).unwrap()
        };
        let a = circle(&|t| [t.cos(), t.sin(), 0.0]);
        let b = circle(&|t| [1.0 + t.cos(), 0.0, t.sin()]);
        let lk = gauss_linking(&a, &b).unwrap();
        assert!((lk.abs() - 1.0).abs() < 0.01);
        let rev = gauss_linking(&a.reversed(), &b).unwrap();
        assert!((lk + rev).abs() < 1e-12);
        let far = circle(&|t| [5.0 + t.cos(), t.sin(), 0.0]);
        assert!(gauss_linking(&a, &far).unwrap().abs() < 1e-3);
        let touching = circle(&|t| [2.0 + t.cos(), t.sin(), 0.0]);
        assert!(matches!(gauss_linking(&a, &touching), Err(Error::CurvesTooClose(_))));
    }

    #[test]
    fn hopf_and_torus_linking() {
        let h = WeightSystem::new(1, 1).unwrap();
        let lk = orbit_linking(h, &OrientedOrbit::positive(c(0.3, 0.0)), &OrientedOrbit::positive(c(0.6, 0.0)), 512).unwrap();
        assert_eq!(lk.snapped, 1);
        assert!((lk.numeric - 1.0).abs() < SNAP_TOL);

        let w = WeightSystem::new(2, 3).unwrap();
        let a = OrientedOrbit::positive(c(0.3, 0.2));
        let b = OrientedOrbit::positive(c(-0.4, 0.3));
        let lk = orbit_linking(w, &a, &b, 512).unwrap();
        assert_eq!(lk.snapped, 6);
        let bn = OrientedOrbit::negative(b.id.0);
        assert_eq!(orbit_linking(w, &a, &bn, 512).unwrap().snapped, -6);
        assert_eq!(expected_linking(w, &a, &bn), -6);

        let w = WeightSystem::new(3, 5).unwrap();
        let lk = orbit_linking(w, &OrientedOrbit::positive(c(0.2, 0.3)), &OrientedOrbit::negative(c(-0.5, 0.1)), 1024).unwrap();
        assert!((lk.numeric + 15.0).abs() < 0.1);
    }

    #[test]
    fn random_pairs_snap() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let w = WeightSystem::new(1, 2).unwrap();
        for _ in 0..6 {
            let a = OrbitId(Complex64::from_polar(rng.gen_range(0.15..0.85), rng.gen_range(0.0..6.28)));
            let b = OrbitId(Complex64::from_polar(rng.gen_range(0.15..0.85), rng.gen_range(0.0..6.28)));
            if (a.0 - b.0).norm() < 0.1 {
                continue;
            }
            let (oa, ob) = (OrientedOrbit { id: a, sign: Sign::Positive }, OrientedOrbit { id: b, sign: Sign::Negative });
            let lk = orbit_linking(w, &oa, &ob, 512).unwrap();
            assert!((lk.numeric - lk.snapped as f64).abs() < SNAP_TOL);
            assert_eq!(lk.snapped, expected_linking(w, &oa, &ob));
        }
    }

    #[test]
    fn torus_models() {
        let w = WeightSystem::new(2, 3).unwrap();
        let t1 = torus_model(w, 1).unwrap();
        assert_eq!(t1.to_string(), "z1^3 - z2^2");
        let rep = t1.degree_report(w).unwrap();
        assert_eq!((rep.polar_degree, rep.radial_degree), (Some(6), Some(6)));
        assert!(rep.is_strongly_polar);
        assert_eq!(solve_link(&t1, w, &SolverOptions::default()).unwrap().components(), 1);

        let t2 = torus_model(w, 2).unwrap();
        let report = solve_link(&t2, w, &SolverOptions::default()).unwrap();
        assert_eq!((report.n_pos, report.n_neg), (2, 0));
        let cfg = report.to_configuration().unwrap();
        let lk = orbit_linking(w, &cfg.orbits[0], &cfg.orbits[1], 512).unwrap();
        assert_eq!(lk.snapped, 6);
    }
}
