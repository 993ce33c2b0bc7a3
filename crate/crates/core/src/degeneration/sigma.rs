use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `t(θ) = (2e^{iθ} − 1) e^{−2iθ}`, the point of Σ for `s = e^{iθ}`.
pub fn sigma_point(theta: f64) -> Complex64 {
    let s = Complex64::from_polar(1.0, theta);
    (2.0 * s - 1.0) / (s * s)
}

/// Closed polyline sampling of Σ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SigmaCurve {
    /// `(θ_k, t(θ_k))` for `θ_k = 2πk/n`, `k = 0..=n`; the last sample
    /// closes the curve.
    pub samples: Vec<(f64, Complex64)>,
    pub closed: bool,
}

impl SigmaCurve {
    pub fn points(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.samples.iter().map(|(_, t)| *t)
    }

    /// Distance from `t` to the polyline.
    pub fn distance(&self, t: Complex64) -> f64 {
        self.samples
            .windows(2)
            .map(|w| segment_distance(t, w[0].1, w[1].1))
            .fold(f64::INFINITY, f64::min)
    }

    /// Winding number of the polyline around `t`.
    pub fn winding(&self, t: Complex64) -> i64 {
        let total: f64 = self
            .samples
            .windows(2)
            .map(|w| ((w[1].1 - t) / (w[0].1 - t)).arg())
            .sum();
        (total / TAU).round() as i64
    }
}

pub(crate) fn segment_distance(x: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (x - a).norm();
    }
    let s = (((x - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
    (x - (a + ab * s)).norm()
}

pub fn trace_sigma(n: usize) -> Result<SigmaCurve> {
    if n < 16 {
        return Err(Error::TooFewSamples { min: 16, got: n });
    }
    let mut samples: Vec<(f64, Complex64)> = (0..n)
        .map(|k| {
            let theta = TAU * k as f64 / n as f64;
            (theta, sigma_point(theta))
        })
        .collect();
    samples.push((TAU, samples[0].1));
    Ok(SigmaCurve { samples, closed: true })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    Inside,
    Outside,
    OnCurve,
}

/// Position of `t` relative to the bounded region enclosed by Σ.
pub fn classify_region(t: Complex64, curve: &SigmaCurve, tol: f64) -> Region {
    if curve.distance(t) < tol {
        Region::OnCurve
    } else if curve.winding(t) != 0 {
        Region::Inside
    } else {
        Region::Outside
    }
}
