//! Root finding for real-plane maps `F: C → C` that are not holomorphic.
//!
//! Roots are found by grid seeding plus damped Newton on the real 2×2
//! system, then certified by winding numbers on small circles. A map is
//! described by its value and Wirtinger derivatives `a = ∂F/∂w`,
//! `b = ∂F/∂w̄`; the real Jacobian then has determinant `|a|² − |b|²` and
//! singular values `|a| + |b|`, `||a| − |b||`.

use std::f64::consts::{PI, TAU};

use nalgebra::{Matrix3x2, Vector3};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical budget and tolerances shared by the slice and chart solvers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Grid points per axis for seeding.
    pub grid_resolution: usize,
    /// Residual tolerance, relative to the map's coefficient scale.
    pub newton_tol: f64,
    pub max_newton_steps: usize,
    pub dedup_radius: f64,
    /// Smallest singular value, relative to `max |F| / radius` on the
    /// certification circle, below which a root is degenerate.
    pub degenerate_threshold: f64,
    pub winding_radius: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            grid_resolution: 200,
            newton_tol: 1e-12,
            max_newton_steps: 50,
            dedup_radius: 1e-6,
            degenerate_threshold: 1e-8,
            winding_radius: 1e-3,
        }
    }
}

impl SolverOptions {
    pub fn fast() -> Self {
        SolverOptions { grid_resolution: 120, ..Default::default() }
    }

    pub fn strict() -> Self {
        SolverOptions {
            grid_resolution: 320,
            newton_tol: 1e-13,
            max_newton_steps: 80,
            ..Default::default()
        }
    }

    /// Preset named by `MIXLINK_PROFILE` (`fast` or `strict`), else the default.
    pub fn from_profile(name: Option<&str>) -> Self {
        match name {
            Some("fast") => Self::fast(),
            Some("strict") => Self::strict(),
            _ => Self::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = self.grid_resolution > 2
            && self.newton_tol > 0.0
            && self.max_newton_steps > 0
            && self.dedup_radius > 0.0
            && self.degenerate_threshold > 0.0
            && self.winding_radius > 0.0;
        if positive {
            Ok(())
        } else {
            Err(Error::InvalidConfiguration("solver options must be positive".into()))
        }
    }
}

/// A map of the plane with Wirtinger derivatives.
pub trait PlanarMap: Sync {
    fn eval(&self, w: Complex64) -> Complex64;
    /// `(F, ∂F/∂w, ∂F/∂w̄)`.
    fn eval_wirtinger(&self, w: Complex64) -> (Complex64, Complex64, Complex64);
    /// Magnitude scale for residual tolerances.
    fn scale(&self) -> f64;
}

impl<M: PlanarMap + ?Sized> PlanarMap for &M {
    fn eval(&self, w: Complex64) -> Complex64 {
        (**self).eval(w)
    }
    fn eval_wirtinger(&self, w: Complex64) -> (Complex64, Complex64, Complex64) {
        (**self).eval_wirtinger(w)
    }
    fn scale(&self) -> f64 {
        (**self).scale()
    }
}

/// A map plus a constant offset; used to split degenerate clusters.
struct Shifted<'a, M: PlanarMap> {
    inner: &'a M,
    shift: Complex64,
}

impl<M: PlanarMap> PlanarMap for Shifted<'_, M> {
    fn eval(&self, w: Complex64) -> Complex64 {
        self.inner.eval(w) + self.shift
    }
    fn eval_wirtinger(&self, w: Complex64) -> (Complex64, Complex64, Complex64) {
        let (v, a, b) = self.inner.eval_wirtinger(w);
        (v + self.shift, a, b)
    }
    fn scale(&self) -> f64 {
        self.inner.scale()
    }
}

/// Disk `|w − center| < radius` searched for roots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchDisk {
    pub center: Complex64,
    pub radius: f64,
}

impl SearchDisk {
    pub fn new(center: Complex64, radius: f64) -> Self {
        SearchDisk { center, radius }
    }

    pub fn contains(&self, w: Complex64) -> bool {
        (w - self.center).norm() < self.radius
    }
}

/// The real 2×2 Jacobian `[[∂Re F/∂x, ∂Re F/∂y], [∂Im F/∂x, ∂Im F/∂y]]`.
pub fn real_jacobian(a: Complex64, b: Complex64) -> [[f64; 2]; 2] {
    let fx = a + b;
    let fy = Complex64::new(0.0, 1.0) * (a - b);
    [[fx.re, fy.re], [fx.im, fy.im]]
}

/// Smallest singular value of the real Jacobian.
pub fn smallest_singular_value(a: Complex64, b: Complex64) -> f64 {
    (a.norm() - b.norm()).abs()
}

fn sign_of(x: f64) -> i64 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

/// Winding data of `F` along a circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Winding {
    pub degree: i64,
    pub min_modulus: f64,
    pub max_modulus: f64,
}

/// Winding number of `F` around the circle `|w − center| = radius`.
///
/// Arcs whose argument increment exceeds π/4 are subdivided, so the result
/// does not depend on `samples` once the circle is resolved.
pub fn winding<F: Fn(Complex64) -> Complex64>(
    f: F,
    center: Complex64,
    radius: f64,
    samples: usize,
) -> Result<Winding> {
    let samples = samples.max(8);
    let point = |phi: f64| center + Complex64::from_polar(radius, phi);
    let values: Vec<Complex64> = (0..samples)
        .map(|k| f(point(TAU * k as f64 / samples as f64)))
        .collect();
    let max_mod = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let floor = 1e-10 * max_mod;
    let mut min_mod = f64::INFINITY;
    let mut total = 0.0;
    for k in 0..samples {
        let phi0 = TAU * k as f64 / samples as f64;
        let phi1 = TAU * (k + 1) as f64 / samples as f64;
        let v0 = values[k];
        let v1 = values[(k + 1) % samples];
        total += arc_increment(&f, &point, phi0, phi1, v0, v1, 0, floor, &mut min_mod)?;
    }
    let w = total / TAU;
    let rounded = w.round();
    if (w - rounded).abs() >= 0.1 {
        return Err(Error::ZeroOnContour(min_mod));
    }
    Ok(Winding { degree: rounded as i64, min_modulus: min_mod, max_modulus: max_mod })
}

#[allow(clippy::too_many_arguments)]
fn arc_increment<F: Fn(Complex64) -> Complex64, P: Fn(f64) -> Complex64>(
    f: &F,
    point: &P,
    phi0: f64,
    phi1: f64,
    v0: Complex64,
    v1: Complex64,
    depth: u32,
    floor: f64,
    min_mod: &mut f64,
) -> Result<f64> {
    *min_mod = min_mod.min(v0.norm()).min(v1.norm());
    if v0.norm() <= floor || v1.norm() <= floor {
        return Err(Error::ZeroOnContour(*min_mod));
    }
    let inc = (v1 / v0).arg();
    if inc.abs() <= PI / 4.0 {
        return Ok(inc);
    }
    if depth >= 24 {
        return Err(Error::ZeroOnContour(*min_mod));
    }
    let mid = 0.5 * (phi0 + phi1);
    let vm = f(point(mid));
    Ok(arc_increment(f, point, phi0, mid, v0, vm, depth + 1, floor, min_mod)?
        + arc_increment(f, point, mid, phi1, vm, v1, depth + 1, floor, min_mod)?)
}

/// Local Brouwer degree of `F` at `center`, measured on a circle.
pub fn local_degree<F: Fn(Complex64) -> Complex64>(
    f: F,
    center: Complex64,
    radius: f64,
    samples: usize,
) -> Result<i64> {
    winding(f, center, radius, samples).map(|w| w.degree)
}

/// Newton step `δ` solving `a δ + b δ̄ = −F`; `None` at a singular Jacobian.
fn newton_step(v: Complex64, a: Complex64, b: Complex64) -> Option<Complex64> {
    let det = a.norm_sqr() - b.norm_sqr();
    if det == 0.0 || !det.is_finite() {
        return None;
    }
    let g = -v;
    Some((a.conj() * g - b * g.conj()) / det)
}

struct NewtonOutcome {
    w: Complex64,
    residual: f64,
    converged: bool,
}

fn damped_newton<M: PlanarMap>(
    map: &M,
    disk: &SearchDisk,
    start: Complex64,
    opts: &SolverOptions,
) -> NewtonOutcome {
    let tol = opts.newton_tol * map.scale();
    let mut w = start;
    let (mut v, mut a, mut b) = map.eval_wirtinger(w);
    let mut res = v.norm();
    for _ in 0..opts.max_newton_steps {
        let Some(step) = newton_step(v, a, b) else { break };
        if res == 0.0 || (res <= tol && step.norm() <= 1e-14 * (1.0 + w.norm())) {
            break;
        }
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let cand = w + step * lambda;
            if disk.contains(cand) {
                let (cv, ca, cb) = map.eval_wirtinger(cand);
                if cv.norm() < res {
                    w = cand;
                    v = cv;
                    a = ca;
                    b = cb;
                    res = cv.norm();
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted || (step * lambda).norm() < 1e-16 * (1.0 + w.norm()) {
            break;
        }
    }
    // A small residual alone is not enough: flat regions of a map with tiny
    // values would pass. The next Newton step must also be short.
    let next = newton_step(v, a, b).map_or(0.0, |s| s.norm());
    NewtonOutcome { w, residual: res, converged: res <= tol && next <= opts.dedup_radius }
}

/// A certified root or degenerate root cluster.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanarRoot {
    pub w: Complex64,
    pub residual: f64,
    /// Local degree: `±1` for simple roots, sign of the winding for clusters.
    pub degree: i64,
    pub multiplicity: u32,
    /// Smallest singular value of the real Jacobian at `w`.
    pub condition: f64,
    /// Winding number on the certification circle.
    pub winding: i64,
    /// Sign of the Jacobian determinant at `w`.
    pub jacobian_sign: i64,
    pub simple: bool,
}

impl PlanarRoot {
    pub fn signed_contribution(&self) -> i64 {
        self.degree * self.multiplicity as i64
    }
}

fn seed_points<M: PlanarMap>(map: &M, disk: &SearchDisk, res: usize) -> Vec<Complex64> {
    let h = 2.0 * disk.radius / (res - 1) as f64;
    let at = |i: usize, j: usize| {
        disk.center + Complex64::new(-disk.radius + h * i as f64, -disk.radius + h * j as f64)
    };
    let data: Vec<(f64, f64)> = (0..res * res)
        .into_par_iter()
        .map(|idx| {
            let w = at(idx % res, idx / res);
            if !disk.contains(w) {
                return (f64::INFINITY, f64::INFINITY);
            }
            let (v, a, b) = map.eval_wirtinger(w);
            let step = newton_step(v, a, b).map_or(f64::INFINITY, |s| s.norm());
            (v.norm(), step)
        })
        .collect();
    let mut seeds = Vec::new();
    for j in 0..res {
        for i in 0..res {
            let (m0, s0) = data[j * res + i];
            if !m0.is_finite() {
                continue;
            }
            let mut min_mod = true;
            let mut min_step = s0.is_finite();
            for dj in -1i64..=1 {
                for di in -1i64..=1 {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let (ni, nj) = (i as i64 + di, j as i64 + dj);
                    if ni < 0 || nj < 0 || ni >= res as i64 || nj >= res as i64 {
                        continue;
                    }
                    let (m, s) = data[nj as usize * res + ni as usize];
                    if m < m0 {
                        min_mod = false;
                    }
                    if s < s0 {
                        min_step = false;
                    }
                }
            }
            if min_mod || min_step {
                seeds.push(at(i, j));
            }
        }
    }
    seeds
}

fn converge_seeds<M: PlanarMap>(
    map: &M,
    disk: &SearchDisk,
    seeds: &[Complex64],
    opts: &SolverOptions,
) -> Vec<(Complex64, f64)> {
    let mut found: Vec<(Complex64, f64)> = seeds
        .par_iter()
        .map(|&s| damped_newton(map, disk, s, opts))
        .filter(|o| o.converged)
        .map(|o| (o.w, o.residual))
        .collect();
    found.sort_by(|a, b| {
        a.0.re
            .total_cmp(&b.0.re)
            .then(a.0.im.total_cmp(&b.0.im))
    });
    let mut reps: Vec<(Complex64, f64)> = Vec::new();
    for (w, r) in found {
        match reps.iter_mut().find(|(x, _)| (*x - w).norm() < opts.dedup_radius) {
            Some(rep) => {
                if r < rep.1 {
                    *rep = (w, r);
                }
            }
            None => reps.push((w, r)),
        }
    }
    reps
}

fn find_set(parent: &mut [usize], i: usize) -> usize {
    let mut root = i;
    while parent[root] != root {
        root = parent[root];
    }
    let mut cur = i;
    while parent[cur] != root {
        let next = parent[cur];
        parent[cur] = root;
        cur = next;
    }
    root
}

const WINDING_SAMPLES: usize = 64;

/// Whether `w` is certified as a simple root on a circle of the given radius.
fn certified_simple<M: PlanarMap>(map: &M, w: Complex64, radius: f64) -> bool {
    let (_, a, b) = map.eval_wirtinger(w);
    let jac = sign_of(a.norm_sqr() - b.norm_sqr());
    match winding(|x| map.eval(x), w, radius, WINDING_SAMPLES) {
        Ok(wd) => wd.degree.abs() == 1 && wd.degree == jac,
        Err(_) => false,
    }
}

/// All roots of `map` in `disk`, sorted by `(Re w, Im w)`.
pub fn find_roots<M: PlanarMap>(
    map: &M,
    disk: &SearchDisk,
    opts: &SolverOptions,
) -> Result<Vec<PlanarRoot>> {
    opts.validate()?;
    let seeds = seed_points(map, disk, opts.grid_resolution);
    let reps = converge_seeds(map, disk, &seeds, opts);
    classify(map, disk, &reps, opts)
}

fn classify<M: PlanarMap>(
    map: &M,
    disk: &SearchDisk,
    reps: &[(Complex64, f64)],
    opts: &SolverOptions,
) -> Result<Vec<PlanarRoot>> {
    let n = reps.len();
    let mut parent: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in i + 1..n {
            let dist = (reps[i].0 - reps[j].0).norm();
            if dist >= opts.winding_radius {
                continue;
            }
            let rho = 0.45 * dist;
            let distinct = certified_simple(map, reps[i].0, rho) && certified_simple(map, reps[j].0, rho);
            if !distinct {
                let (a, b) = (find_set(&mut parent, i), find_set(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut group_of = vec![usize::MAX; n];
    for i in 0..n {
        let root = find_set(&mut parent, i);
        if group_of[root] == usize::MAX {
            group_of[root] = groups.len();
            groups.push(Vec::new());
        }
        groups[group_of[root]].push(i);
    }

    let centers: Vec<(Complex64, f64, f64)> = groups
        .iter()
        .map(|g| {
            let best = *g
                .iter()
                .min_by(|&&a, &&b| reps[a].1.total_cmp(&reps[b].1))
                .expect("nonempty group");
            let c = reps[best].0;
            let spread = g.iter().map(|&k| (reps[k].0 - c).norm()).fold(0.0, f64::max);
            (c, reps[best].1, spread)
        })
        .collect();

    let mut roots = Vec::with_capacity(groups.len());
    for (gi, members) in groups.iter().enumerate() {
        let (center, residual, spread) = centers[gi];
        let gap = centers
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != gi)
            .map(|(_, (c, _, s))| (*c - center).norm() - s)
            .fold(f64::INFINITY, f64::min);
        let edge = disk.radius - (center - disk.center).norm();
        let mut radius = opts.winding_radius.min(0.45 * gap).min(0.9 * edge);
        radius = radius.max(2.0 * spread);

        let wd = winding_with_retry(map, center, radius)?;
        let (_, a, b) = map.eval_wirtinger(center);
        let jacobian_sign = sign_of(a.norm_sqr() - b.norm_sqr());
        let condition = smallest_singular_value(a, b);
        let simple = members.len() == 1
            && wd.degree.abs() == 1
            && wd.degree == jacobian_sign
            && condition >= opts.degenerate_threshold * wd.max_modulus / wd.radius;
        let (degree, multiplicity) = if simple {
            (wd.degree, 1)
        } else if wd.degree != 0 {
            (wd.degree.signum(), wd.degree.unsigned_abs() as u32)
        } else {
            let split = split_count(map, center, wd.radius, wd.min_modulus, opts);
            (0, split.max(2))
        };
        let (center, residual) = if simple { (center, residual) } else { polish_degenerate(map, center, radius) };
        roots.push(PlanarRoot {
            w: center,
            residual,
            degree,
            multiplicity,
            condition,
            winding: wd.degree,
            jacobian_sign,
            simple,
        });
    }
    roots.sort_by(|a, b| a.w.re.total_cmp(&b.w.re).then(a.w.im.total_cmp(&b.w.im)));
    Ok(roots)
}

/// Gauss–Newton on `(Re F, Im F, det J / scale)`, which has a regular
/// solution at a fold even though Newton on `F` alone only converges
/// linearly there. The move is confined to the certification disk.
fn polish_degenerate<M: PlanarMap>(map: &M, w0: Complex64, radius: f64) -> (Complex64, f64) {
    let scale = map.scale();
    let system = |w: Complex64| {
        let (v, a, b) = map.eval_wirtinger(w);
        Vector3::new(v.re, v.im, (a.norm_sqr() - b.norm_sqr()) / scale)
    };
    let mut w = w0;
    let mut best = system(w).norm();
    for _ in 0..40 {
        let g = system(w);
        let h = 1e-7 * (1.0 + w.norm());
        let dx = (system(w + h) - system(w - h)) / (2.0 * h);
        let dy = (system(w + Complex64::new(0.0, h)) - system(w - Complex64::new(0.0, h))) / (2.0 * h);
        let jac = Matrix3x2::from_columns(&[dx, dy]);
        let Ok(step) = jac.svd(true, true).solve(&(-g), 1e-14) else { break };
        let next = w + Complex64::new(step[0], step[1]);
        let r = system(next).norm();
        if !(r < best) || (next - w0).norm() > radius {
            break;
        }
        best = r;
        w = next;
    }
    (w, map.eval(w).norm())
}

struct CircleWinding {
    degree: i64,
    min_modulus: f64,
    max_modulus: f64,
    radius: f64,
}

fn winding_with_retry<M: PlanarMap>(map: &M, center: Complex64, radius: f64) -> Result<CircleWinding> {
    let mut last = Error::ZeroOnContour(0.0);
    for factor in [1.0, 0.7, 1.3, 0.5] {
        let r = radius * factor;
        match winding(|x| map.eval(x), center, r, WINDING_SAMPLES) {
            Ok(w) => return Ok(CircleWinding { degree: w.degree, min_modulus: w.min_modulus, max_modulus: w.max_modulus, radius: r }),
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// Largest number of distinct roots a zero-degree cluster splits into under
/// constant perturbations smaller than `min |F|` on its circle.
fn split_count<M: PlanarMap>(
    map: &M,
    center: Complex64,
    radius: f64,
    min_modulus: f64,
    opts: &SolverOptions,
) -> u32 {
    let local = SearchDisk::new(center, radius);
    let local_opts = SolverOptions {
        grid_resolution: 31,
        dedup_radius: radius * 1e-4,
        ..*opts
    };
    let delta = 0.5 * min_modulus;
    (0..8)
        .map(|k| {
            let shifted = Shifted { inner: map, shift: Complex64::from_polar(delta, TAU * k as f64 / 8.0) };
            let seeds = seed_points(&shifted, &local, local_opts.grid_resolution);
            converge_seeds(&shifted, &local, &seeds, &local_opts).len() as u32
        })
        .max()
        .unwrap_or(0)
}
