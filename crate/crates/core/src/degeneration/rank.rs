use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::AffineFamily;
use crate::error::{Error, Result};
use crate::mixed_poly::Point;

/// Singular values below this fraction of the largest count as zero.
pub const RANK_RELATIVE_TOL: f64 = 1e-6;

/// Independence test for `dg, dh, dρ` on the variety `{f_t = 0} ⊂ S_R × R`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoothnessReport {
    /// Rows `dg, dh, dρ` in the basis `dz1, dz̄1, dz2, dz̄2, dt`.
    pub matrix: [[Complex64; 5]; 3],
    pub singular_values: [f64; 3],
    pub rank: usize,
    pub radius: f64,
}

impl SmoothnessReport {
    pub fn is_full_rank(&self) -> bool {
        self.rank == 3
    }
}

/// Builds the complexified differential matrix of `(Re f, Im f, ‖z‖²)` at
/// `(z, t)` and its numerical rank. `t` is a real parameter.
pub fn rank_check(family: &AffineFamily, z: Point, t: Complex64, radius: f64) -> Result<SmoothnessReport> {
    let norm = (z[0].norm_sqr() + z[1].norm_sqr()).sqrt();
    if (norm - radius).abs() > 1e-8 {
        return Err(Error::NotOnSphere { radius, norm });
    }
    let value = family.evaluate(z, t).norm();
    if value > 1e-8 {
        return Err(Error::NotOnVariety(value));
    }
    let g = family.wirtinger_gradient(z, t);
    let ft = family.t_derivative(z);
    let i2 = Complex64::new(0.0, 2.0);
    let mut matrix = [[Complex64::new(0.0, 0.0); 5]; 3];
    for j in 0..2 {
        let (fz, fzb) = (g[2 * j], g[2 * j + 1]);
        matrix[0][2 * j] = (fz + fzb.conj()) / 2.0;
        matrix[0][2 * j + 1] = (fzb + fz.conj()) / 2.0;
        matrix[1][2 * j] = (fz - fzb.conj()) / i2;
        matrix[1][2 * j + 1] = (fzb - fz.conj()) / i2;
        matrix[2][2 * j] = z[j].conj();
        matrix[2][2 * j + 1] = z[j];
    }
    matrix[0][4] = Complex64::new(ft.re, 0.0);
    matrix[1][4] = Complex64::new(ft.im, 0.0);

    let m = DMatrix::from_fn(3, 5, |r, c| matrix[r][c]);
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    let singular_values = [sv[0], sv[1], sv[2]];
    let rank = singular_values
        .iter()
        .filter(|&&s| s > RANK_RELATIVE_TOL * singular_values[0])
        .count();
    Ok(SmoothnessReport { matrix, singular_values, rank, radius })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degeneration::model_family;
    use crate::mixed_poly::{MixedPolynomial, WeightSystem};
    use crate::orbit::{ell, orbit_point, OrbitId};
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn fold_point_matrix() {
        let r2 = 2f64.sqrt();
        for (p, q) in [(2u32, 3u32), (1, 1), (3, 5)] {
            let w = WeightSystem::new(p, q).unwrap();
            let alpha = Complex64::from_polar(1.0, PI / p as f64);
            let rep = rank_check(&model_family(w), [c(1.0, 0.0), alpha], c(-3.0, 0.0), r2).unwrap();
            assert_eq!(rep.rank, 3, "P = ({p},{q})");
            assert!(rep.singular_values[2] > 1e-6 * rep.singular_values[0]);
            let (pf, qf) = (p as f64, q as f64);
            let expected = [
                [c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
                [c(0.0, -2.0 * qf), c(0.0, 2.0 * qf), c(0.0, 2.0 * pf) * alpha.conj(), c(0.0, -2.0 * pf) * alpha, c(0.0, 0.0)],
                [c(1.0, 0.0), c(1.0, 0.0), alpha.conj(), alpha, c(0.0, 0.0)],
            ];
            for r in 0..3 {
                for k in 0..5 {
                    assert!((rep.matrix[r][k] - expected[r][k]).norm() < 1e-12, "P=({p},{q}) A[{r}][{k}] = {}", rep.matrix[r][k]);
                }
            }
        }
    }

    #[test]
    fn squared_factor_is_degenerate() {
        let w = WeightSystem::new(2, 3).unwrap();
        let u = OrbitId(c(0.4, 0.1));
        let l = ell(w, u, 0);
        let fam = AffineFamily { weights: w, base: &l * &l, slope: MixedPolynomial::zero() };
        let z = orbit_point(w, u, Complex64::from_polar(1.0, 0.3)).unwrap();
        let rep = rank_check(&fam, z, c(0.0, 0.0), 1.0).unwrap();
        assert!(rep.rank < 3);
    }

    #[test]
    fn guards() {
        let w = WeightSystem::new(2, 3).unwrap();
        let fam = model_family(w);
        assert!(matches!(
            rank_check(&fam, [c(1.0, 0.0), c(0.0, 1.0)], c(-3.0, 0.0), 1.0),
            Err(Error::NotOnSphere { .. })
        ));
        assert!(matches!(
            rank_check(&fam, [c(1.0, 0.0), c(0.0, 1.0)], c(-2.0, 0.0), 2f64.sqrt()),
            Err(Error::NotOnVariety(_))
        ));
    }
}
