use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::hankel::{hankel_quadrature, HankelContour};
use super::series::{asymptotic_series, Truncation};
use crate::error::{Error, Result};
use crate::special_fn::{hurwitz_zeta, hurwitz_zeta_estimate, EulerMaclaurinParams};

/// One route to ψ_z(x) with its own error estimate. `None` when the route
/// does not apply (Γ(1−z) pole for the contour).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RouteValue {
    pub value: Complex64,
    pub estimate: f64,
}

/// Three evaluations of Δ⁻¹x^{−z} and their pairwise differences.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BorelComparison {
    pub z: Complex64,
    pub x: f64,
    pub series: RouteValue,
    pub series_reliable: bool,
    pub contour: Option<RouteValue>,
    pub hurwitz: RouteValue,
    pub series_vs_hurwitz: f64,
    pub contour_vs_hurwitz: Option<f64>,
    pub series_vs_contour: Option<f64>,
}

impl BorelComparison {
    /// Every difference is within the sum of the two estimates involved.
    /// The series is left out when it was flagged unreliable.
    pub fn consistent(&self) -> bool {
        let ok = |d: f64, a: &RouteValue, b: &RouteValue| d <= a.estimate + b.estimate;
        let mut good = true;
        if let (Some(c), Some(d)) = (&self.contour, self.contour_vs_hurwitz) {
            good &= ok(d, c, &self.hurwitz);
        }
        if self.series_reliable {
            good &= ok(self.series_vs_hurwitz, &self.series, &self.hurwitz);
            if let (Some(c), Some(d)) = (&self.contour, self.series_vs_contour) {
                good &= ok(d, &self.series, c);
            }
        }
        good
    }

    /// Largest pairwise difference among the routes that were evaluated.
    pub fn max_delta(&self) -> f64 {
        [
            Some(self.series_vs_hurwitz),
            self.contour_vs_hurwitz,
            self.series_vs_contour,
        ]
        .into_iter()
        .flatten()
        .fold(0.0, f64::max)
    }
}

pub fn borel_compare(z: Complex64, x: f64) -> Result<BorelComparison> {
    let s = asymptotic_series(z, x, Truncation::Auto)?;
    let series = RouteValue {
        value: s.sum,
        estimate: s.error_estimate,
    };
    let h = hurwitz_zeta_estimate(z, x + 1.0, &EulerMaclaurinParams::default())?;
    let hurwitz = RouteValue {
        value: -h.value,
        estimate: h.estimate,
    };
    let contour = match hankel_quadrature(z, x, &HankelContour::adaptive(z, x)) {
        Ok(c) => Some(RouteValue {
            value: c.value,
            estimate: c.estimate,
        }),
        Err(Error::Configuration(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(BorelComparison {
        z,
        x,
        series_reliable: s.reliable(),
        series_vs_hurwitz: (series.value - hurwitz.value).norm(),
        contour_vs_hurwitz: contour.map(|c| (c.value - hurwitz.value).norm()),
        series_vs_contour: contour.map(|c| (c.value - series.value).norm()),
        series,
        contour,
        hurwitz,
    })
}

/// |ψ_z(x) − x^{1−z}/(1−z)| / |x^{−z}| at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptotePoint {
    pub x: f64,
    pub residual: f64,
    pub scaled: f64,
}

/// Check of ψ_z(x) ≈ x^{1−z}/(1−z) with the bound C = 1 on the scaled
/// residual.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoteReport {
    pub z: Complex64,
    pub points: Vec<AsymptotePoint>,
    pub bound: f64,
    pub max_scaled: f64,
    pub holds: bool,
    /// Set when the scaled residual grows faster than linearly across the
    /// points: the asymptote is then not a useful description and this is
    /// reported rather than treated as an error.
    pub expected_divergence: bool,
}

pub const MIN_ASYMPTOTE_X: f64 = 10.0;

pub fn leading_asymptote_residual(z: Complex64, xs: &[f64]) -> Result<AsymptoteReport> {
    if z == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole { at: 1 });
    }
    let mut points = Vec::with_capacity(xs.len());
    for &x in xs {
        if !(x >= MIN_ASYMPTOTE_X) {
            return Err(Error::Domain {
                x,
                min: MIN_ASYMPTOTE_X,
            });
        }
        let psi = -hurwitz_zeta(z, x + 1.0, &EulerMaclaurinParams::default())?;
        let xc = Complex64::new(x, 0.0);
        let lead = xc.powc(1.0 - z) / (1.0 - z);
        let residual = (psi - lead).norm();
        points.push(AsymptotePoint {
            x,
            residual,
            scaled: residual / xc.powc(-z).norm(),
        });
    }
    let bound = 1.0;
    let max_scaled = points.iter().map(|p| p.scaled).fold(0.0, f64::max);
    let mut sorted = points.clone();
    sorted.sort_by(|a, b| a.x.total_cmp(&b.x));
    let expected_divergence = sorted.windows(2).any(|w| {
        w[1].x > w[0].x && w[1].scaled / w[0].scaled.max(f64::MIN_POSITIVE) > w[1].x / w[0].x
    });
    Ok(AsymptoteReport {
        z,
        points,
        bound,
        max_scaled,
        holds: max_scaled <= bound,
        expected_divergence,
    })
}
