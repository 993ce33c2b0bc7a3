//! Sparse mixed polynomials in `(z1, z2, z̄1, z̄2)`.
//!
//! A [`MixedPolynomial`] is a finite sum of terms `c · z^ν · z̄^μ` with
//! complex floating-point coefficients and exact integer exponents. All
//! homogeneity and convenience checks are integer arithmetic on exponents.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of `C²`.
pub type Point = [Complex64; 2];

/// Coefficients with modulus below this are dropped at canonicalization.
pub const ZERO_COEFF: f64 = 1e-14;

/// Tolerance on `|η| = 1` for arguments of the circle action.
pub const UNIT_TOL: f64 = 1e-12;

/// Coprime positive weights `(p, q)` of the circle action
/// `ρ ∘ (z1, z2) = (ρ^p z1, ρ^q z2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightSystem {
    pub p: u32,
    pub q: u32,
}

impl WeightSystem {
    pub fn new(p: u32, q: u32) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(Error::InvalidConfiguration(format!(
                "weights must be positive, got ({p}, {q})"
            )));
        }
        if gcd(p as u64, q as u64) != 1 {
            return Err(Error::InvalidConfiguration(format!(
                "weights ({p}, {q}) are not coprime"
            )));
        }
        Ok(WeightSystem { p, q })
    }

    /// `pq`, the polar degree of a single orbit factor.
    pub fn pq(&self) -> i64 {
        self.p as i64 * self.q as i64
    }
}

impl fmt::Display for WeightSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p, self.q)
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// One monomial `coeff · z1^ν1 z2^ν2 z̄1^μ1 z̄2^μ2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixedTerm {
    pub coeff: Complex64,
    pub nu: [u32; 2],
    pub mu: [u32; 2],
}

impl MixedTerm {
    pub fn new(coeff: Complex64, nu: [u32; 2], mu: [u32; 2]) -> Self {
        MixedTerm { coeff, nu, mu }
    }

    /// Real-coefficient shorthand.
    pub fn real(coeff: f64, nu: [u32; 2], mu: [u32; 2]) -> Self {
        MixedTerm::new(Complex64::new(coeff, 0.0), nu, mu)
    }

    fn key(&self) -> [u32; 4] {
        [self.nu[0], self.nu[1], self.mu[0], self.mu[1]]
    }

    fn radial_sum(&self, w: WeightSystem) -> i64 {
        w.p as i64 * (self.nu[0] + self.mu[0]) as i64
            + w.q as i64 * (self.nu[1] + self.mu[1]) as i64
    }

    fn polar_sum(&self, w: WeightSystem) -> i64 {
        w.p as i64 * (self.nu[0] as i64 - self.mu[0] as i64)
            + w.q as i64 * (self.nu[1] as i64 - self.mu[1] as i64)
    }
}

/// A mixed polynomial in canonical form.
///
/// Terms have pairwise distinct exponent keys, nonzero coefficients, and are
/// ordered by descending lexicographic `(ν1, ν2, μ1, μ2)`, so that the
/// highest power of `z1` is printed first.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct MixedPolynomial {
    terms: Vec<MixedTerm>,
}

impl MixedPolynomial {
    pub fn zero() -> Self {
        MixedPolynomial { terms: Vec::new() }
    }

    /// Merges like terms, drops coefficients below [`ZERO_COEFF`] and sorts.
    pub fn canonicalize<I: IntoIterator<Item = MixedTerm>>(raw: I) -> Self {
        let mut terms: Vec<MixedTerm> = raw.into_iter().collect();
        terms.sort_by(|a, b| b.key().cmp(&a.key()));
        let mut merged: Vec<MixedTerm> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.last_mut() {
                Some(last) if last.key() == t.key() => last.coeff += t.coeff,
                _ => merged.push(t),
            }
        }
        merged.retain(|t| t.coeff.norm() >= ZERO_COEFF);
        MixedPolynomial { terms: merged }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::canonicalize([MixedTerm::new(c, [0, 0], [0, 0])])
    }

    pub fn terms(&self) -> &[MixedTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the monomial `z^ν z̄^μ`, zero if absent.
    pub fn coeff(&self, nu: [u32; 2], mu: [u32; 2]) -> Complex64 {
        self.terms
            .iter()
            .find(|t| t.nu == nu && t.mu == mu)
            .map(|t| t.coeff)
            .unwrap_or_default()
    }

    /// Sum of coefficient moduli; bounds `|f|` on the closed unit polydisk.
    pub fn coeff_norm(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.norm()).sum()
    }

    fn max_exponents(&self) -> [u32; 4] {
        let mut m = [0u32; 4];
        for t in &self.terms {
            for (slot, e) in m.iter_mut().zip(t.key()) {
                *slot = (*slot).max(e);
            }
        }
        m
    }

    pub fn evaluate(&self, z: Point) -> Complex64 {
        if self.terms.is_empty() {
            return Complex64::new(0.0, 0.0);
        }
        let pw = PowerTable::new(z, self.max_exponents());
        self.terms
            .iter()
            .map(|t| t.coeff * pw.monomial(t.nu, t.mu))
            .sum()
    }

    /// Term-wise conjugation: `(c, ν, μ) ↦ (c̄, μ, ν)`.
    pub fn conjugate(&self) -> Self {
        Self::canonicalize(
            self.terms
                .iter()
                .map(|t| MixedTerm::new(t.coeff.conj(), t.mu, t.nu)),
        )
    }

    /// Formal Wirtinger derivatives `(∂/∂z1, ∂/∂z̄1, ∂/∂z2, ∂/∂z̄2)` at `z`.
    pub fn wirtinger_gradient(&self, z: Point) -> [Complex64; 4] {
        let mut out = [Complex64::new(0.0, 0.0); 4];
        if self.terms.is_empty() {
            return out;
        }
        let pw = PowerTable::new(z, self.max_exponents());
        for t in &self.terms {
            let [a1, a2] = t.nu;
            let [b1, b2] = t.mu;
            if a1 > 0 {
                out[0] += t.coeff * a1 as f64 * pw.monomial([a1 - 1, a2], t.mu);
            }
            if b1 > 0 {
                out[1] += t.coeff * b1 as f64 * pw.monomial(t.nu, [b1 - 1, b2]);
            }
            if a2 > 0 {
                out[2] += t.coeff * a2 as f64 * pw.monomial([a1, a2 - 1], t.mu);
            }
            if b2 > 0 {
                out[3] += t.coeff * b2 as f64 * pw.monomial(t.nu, [b1, b2 - 1]);
            }
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::canonicalize(self.terms.iter().map(|t| MixedTerm::new(t.coeff * c, t.nu, t.mu)))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::constant(Complex64::new(1.0, 0.0));
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Weighted-degree analysis for the strongly polar weights `(p, q)`.
    pub fn degree_report(&self, w: WeightSystem) -> Result<DegreeReport> {
        let first = self.terms.first().ok_or(Error::EmptyPolynomial)?;
        let radial0 = first.radial_sum(w);
        let polar0 = first.polar_sum(w);
        let is_radial = self.terms.iter().all(|t| t.radial_sum(w) == radial0);
        let is_polar = self.terms.iter().all(|t| t.polar_sum(w) == polar0);

        let witness = |axis: usize| {
            self.terms
                .iter()
                .filter(|t| t.nu[1 - axis] == 0 && t.mu[1 - axis] == 0)
                .filter(|t| t.nu[axis] + t.mu[axis] > 0)
                .map(|t| (t.nu[axis], t.mu[axis]))
                .next()
        };
        let witness_z1 = witness(0);
        let witness_z2 = witness(1);
        let is_convenient = witness_z1.is_some() && witness_z2.is_some();
        let is_strongly_polar = is_radial && is_polar;

        let pq = w.pq();
        let (mut d, mut s) = (None, None);
        if is_strongly_polar && is_convenient && radial0 % pq == 0 && polar0 % pq == 0 {
            let dd = polar0 / pq;
            let excess = radial0 / pq - dd;
            d = Some(dd);
            if excess >= 0 && excess % 2 == 0 {
                s = Some(excess / 2);
            }
        }
        Ok(DegreeReport {
            radial_degree: is_radial.then_some(radial0),
            polar_degree: is_polar.then_some(polar0),
            is_radial_homogeneous: is_radial,
            is_polar_homogeneous: is_polar,
            is_strongly_polar,
            is_convenient,
            witness_z1,
            witness_z2,
            d,
            s,
        })
    }
}

impl fmt::Display for MixedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::io::text::serialize_poly(self))
    }
}

impl Add for &MixedPolynomial {
    type Output = MixedPolynomial;
    fn add(self, rhs: &MixedPolynomial) -> MixedPolynomial {
        MixedPolynomial::canonicalize(self.terms.iter().chain(rhs.terms.iter()).copied())
    }
}

impl Sub for &MixedPolynomial {
    type Output = MixedPolynomial;
    fn sub(self, rhs: &MixedPolynomial) -> MixedPolynomial {
        self + &(-rhs)
    }
}

impl Neg for &MixedPolynomial {
    type Output = MixedPolynomial;
    fn neg(self) -> MixedPolynomial {
        MixedPolynomial {
            terms: self
                .terms
                .iter()
                .map(|t| MixedTerm::new(-t.coeff, t.nu, t.mu))
                .collect(),
        }
    }
}

impl Mul for &MixedPolynomial {
    type Output = MixedPolynomial;
    fn mul(self, rhs: &MixedPolynomial) -> MixedPolynomial {
        let mut raw = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for a in &self.terms {
            for b in &rhs.terms {
                raw.push(MixedTerm::new(
                    a.coeff * b.coeff,
                    [a.nu[0] + b.nu[0], a.nu[1] + b.nu[1]],
                    [a.mu[0] + b.mu[0], a.mu[1] + b.mu[1]],
                ));
            }
        }
        MixedPolynomial::canonicalize(raw)
    }
}

/// Cached powers of `z1, z2, z̄1, z̄2` up to the exponents a polynomial uses.
struct PowerTable {
    tables: [Vec<Complex64>; 4],
}

impl PowerTable {
    fn new(z: Point, max: [u32; 4]) -> Self {
        let bases = [z[0], z[1], z[0].conj(), z[1].conj()];
        let tables = std::array::from_fn(|i| {
            let mut v = Vec::with_capacity(max[i] as usize + 1);
            let mut acc = Complex64::new(1.0, 0.0);
            v.push(acc);
            for _ in 0..max[i] {
                acc *= bases[i];
                v.push(acc);
            }
            v
        });
        PowerTable { tables }
    }

    fn monomial(&self, nu: [u32; 2], mu: [u32; 2]) -> Complex64 {
        self.tables[0][nu[0] as usize]
            * self.tables[1][nu[1] as usize]
            * self.tables[2][mu[0] as usize]
            * self.tables[3][mu[1] as usize]
    }
}

/// Weighted degrees, homogeneity flags and convenience witnesses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeReport {
    pub radial_degree: Option<i64>,
    pub polar_degree: Option<i64>,
    pub is_radial_homogeneous: bool,
    pub is_polar_homogeneous: bool,
    pub is_strongly_polar: bool,
    pub is_convenient: bool,
    /// Exponents `(a1, b1)` of a pure `z1^a1 z̄1^b1` monomial.
    pub witness_z1: Option<(u32, u32)>,
    /// Exponents `(a2, b2)` of a pure `z2^a2 z̄2^b2` monomial.
    pub witness_z2: Option<(u32, u32)>,
    /// `d_p / pq`.
    pub d: Option<i64>,
    /// Radial excess `s` in `d_r = (d + 2s) pq`.
    pub s: Option<i64>,
}

impl DegreeReport {
    pub fn require_spwh(&self) -> Result<()> {
        if !self.is_strongly_polar {
            return Err(Error::NotHomogeneous);
        }
        Ok(())
    }

    pub fn require_convenient(&self) -> Result<()> {
        self.require_spwh()?;
        if !self.is_convenient {
            return Err(Error::NotConvenient);
        }
        Ok(())
    }
}

/// The polar action `(r, η) ∘ z = (r^p η^p z1, r^q η^q z2)`.
pub fn apply_action(z: Point, r: f64, eta: Complex64, w: WeightSystem) -> Result<Point> {
    check_unit(eta)?;
    let zeta = eta * r;
    Ok([z[0] * zeta.powu(w.p), z[1] * zeta.powu(w.q)])
}

pub(crate) fn check_unit(eta: Complex64) -> Result<()> {
    let m = eta.norm();
    if (m - 1.0).abs() > UNIT_TOL {
        return Err(Error::NonUnitArgument(m));
    }
    Ok(())
}

/// Maximum of `|f((r,η)∘z) − r^{d_r} η^{d_p} f(z)|` over seeded random samples
/// with `r ∈ [1/2, 1]`, `|η| = 1` and `z` in the unit polydisk.
pub fn verify_equivariance(
    f: &MixedPolynomial,
    w: WeightSystem,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    let report = f.degree_report(w)?;
    report.require_spwh()?;
    let dr = report.radial_degree.expect("radial homogeneous");
    let dp = report.polar_degree.expect("polar homogeneous");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let r = rng.gen_range(0.5..=1.0);
        let eta = Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
        let z = [random_in_disk(&mut rng), random_in_disk(&mut rng)];
        let lhs = f.evaluate(apply_action(z, r, eta, w)?);
        let rhs = f.evaluate(z) * r.powi(dr as i32) * eta.powi(dp as i32);
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}

pub(crate) fn random_in_disk<R: Rng>(rng: &mut R) -> Complex64 {
    let rad = rng.gen_range(0.0f64..1.0).sqrt();
    Complex64::from_polar(rad, rng.gen_range(0.0..std::f64::consts::TAU))
}
