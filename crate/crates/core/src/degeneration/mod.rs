//! The model degeneration family and its pair eliminations.
//!
//! `f_t = −2 z2^{2p} z̄2^p + z1^{2q} z̄1^q + t z2^{2p} z̄1^q` reduces, in the
//! chart `u = z2^p / z1^q`, to `−2|u|²u + t u² + 1 = 0`. The link has one
//! component for `t` inside the cardioid Σ and three outside; crossing Σ at
//! a smooth point merges two oppositely oriented components.

mod elimination;
mod rank;
mod sigma;
mod sweep;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mixed_poly::{MixedPolynomial, MixedTerm, Point, WeightSystem};
use crate::planar::{find_roots, real_jacobian, PlanarMap, PlanarRoot, SearchDisk, SolverOptions};

pub use elimination::{
    choose_triple, elimination_family, positivize, run_elimination, EliminationFamily,
    EliminationOutcome, IsotopyStep, DEFAULT_T_IN, DEFAULT_T_OUT, DETOUR_RADIUS,
};
pub use rank::{rank_check, SmoothnessReport, RANK_RELATIVE_TOL};
pub use sigma::{classify_region, sigma_point, trace_sigma, Region, SigmaCurve};
pub use sweep::{linear_path, sweep, EventKind, SweepEvent, SweepResult, CUSP_EXCLUSION, EVENT_TOL};

/// A polynomial family `f_t = base + t · slope` with `t` real in the
/// smoothness certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineFamily {
    pub weights: WeightSystem,
    pub base: MixedPolynomial,
    pub slope: MixedPolynomial,
}

impl AffineFamily {
    pub fn at(&self, t: Complex64) -> MixedPolynomial {
        &self.base + &self.slope.scale(t)
    }

    pub fn evaluate(&self, z: Point, t: Complex64) -> Complex64 {
        self.base.evaluate(z) + t * self.slope.evaluate(z)
    }

    /// `∂f/∂t` at `z`.
    pub fn t_derivative(&self, z: Point) -> Complex64 {
        self.slope.evaluate(z)
    }

    pub fn wirtinger_gradient(&self, z: Point, t: Complex64) -> [Complex64; 4] {
        let a = self.base.wirtinger_gradient(z);
        let b = self.slope.wirtinger_gradient(z);
        std::array::from_fn(|k| a[k] + t * b[k])
    }

    /// The family multiplied by a fixed polynomial.
    pub fn times(&self, g: &MixedPolynomial) -> AffineFamily {
        AffineFamily {
            weights: self.weights,
            base: &self.base * g,
            slope: &self.slope * g,
        }
    }
}

/// The model family as an affine family in `t`.
pub fn model_family(w: WeightSystem) -> AffineFamily {
    let (p, q) = (w.p, w.q);
    AffineFamily {
        weights: w,
        base: MixedPolynomial::canonicalize([
            MixedTerm::real(1.0, [2 * q, 0], [q, 0]),
            MixedTerm::real(-2.0, [0, 2 * p], [0, p]),
        ]),
        slope: MixedPolynomial::canonicalize([MixedTerm::real(1.0, [0, 2 * p], [q, 0])]),
    }
}

/// `−2 z2^{2p} z̄2^p + z1^{2q} z̄1^q + t z2^{2p} z̄1^q`.
pub fn family_poly(w: WeightSystem, t: Complex64) -> MixedPolynomial {
    model_family(w).at(t)
}

/// `−2|u|²u + t u² + 1`.
pub fn chart_eval(t: Complex64, u: Complex64) -> Complex64 {
    -2.0 * u.norm_sqr() * u + t * u * u + 1.0
}

/// Wirtinger derivatives `(∂/∂u, ∂/∂ū)` of the chart equation.
pub fn chart_wirtinger(t: Complex64, u: Complex64) -> (Complex64, Complex64) {
    (-4.0 * u.norm_sqr() + 2.0 * t * u, -2.0 * u * u)
}

/// Real 2×2 Jacobian of the chart equation at `u`.
pub fn chart_jacobian(t: Complex64, u: Complex64) -> [[f64; 2]; 2] {
    let (a, b) = chart_wirtinger(t, u);
    real_jacobian(a, b)
}

/// The chart equation at fixed `t` as a planar map.
#[derive(Debug, Clone, Copy)]
pub struct ChartMap {
    pub t: Complex64,
}

impl PlanarMap for ChartMap {
    fn eval(&self, w: Complex64) -> Complex64 {
        chart_eval(self.t, w)
    }
    fn eval_wirtinger(&self, w: Complex64) -> (Complex64, Complex64, Complex64) {
        let (a, b) = chart_wirtinger(self.t, w);
        (chart_eval(self.t, w), a, b)
    }
    fn scale(&self) -> f64 {
        self.t.norm() + 3.0
    }
}

/// Every root satisfies `|u| ≤ max(1, |t|)`; the search disk adds a margin.
pub fn chart_search_radius(t: Complex64) -> f64 {
    t.norm().max(1.0) + 0.5
}

/// All chart roots at `t`, sorted by `(Re u, Im u)`.
///
/// The signed count `Σ degree · multiplicity` is always 1; a mismatch
/// triggers up to two grid refinements before `BudgetExceeded`.
pub fn solve_chart(t: Complex64, opts: &SolverOptions) -> Result<Vec<PlanarRoot>> {
    let map = ChartMap { t };
    let disk = SearchDisk::new(Complex64::new(0.0, 0.0), chart_search_radius(t));
    let mut opts = *opts;
    let mut total = 0;
    for _ in 0..3 {
        let roots = find_roots(&map, &disk, &opts)?;
        total = roots.iter().map(|r| r.signed_contribution()).sum::<i64>();
        if total == 1 {
            return Ok(roots);
        }
        opts.grid_resolution *= 2;
    }
    Err(Error::BudgetExceeded(format!("chart signed count {total} at t = {t}")))
}
