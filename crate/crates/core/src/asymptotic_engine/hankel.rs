use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{finite, Error, Result};
use crate::quad::GaussLegendre;
use crate::special_fn::{log_gamma, nonpositive_integer};

/// Keyhole contour around the negative real axis: two legs at ±iε from
/// Re t = −T to the circle |t| = r, joined by the arc through t = r.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HankelContour {
    pub radius: f64,
    pub leg_offset: f64,
    pub truncation: f64,
    /// Gauss–Legendre order on every panel (8, 16, 32 or 64).
    pub nodes_per_panel: usize,
    /// Allowed size of the discarded tails relative to max(1, |x^{1−z}/(1−z)|).
    pub tail_tol: f64,
}

/// Largest radius the adaptive rule will pick, safely inside ±2πi.
const MAX_ADAPTIVE_RADIUS: f64 = 0.85 * 2.0 * PI;
/// Allowed variation (in radians of phase or e-folds) per panel.
const PANEL_BUDGET: f64 = 8.0;

impl Default for HankelContour {
    fn default() -> Self {
        Self {
            radius: 1.0,
            leg_offset: 0.25,
            truncation: 30.0,
            nodes_per_panel: 32,
            tail_tol: 1e-15,
        }
    }
}

impl HankelContour {
    /// The fixed unit contour with T = max(40/x, 30).
    pub fn standard(x: f64) -> Self {
        Self {
            truncation: (40.0 / x).max(30.0),
            ..Self::default()
        }
    }

    /// Radius chosen from z and x so that e^{xt} damps the e^{π|Im z|}
    /// growth of t^{z−1} near the negative axis, and legs long enough for
    /// the tail bound.
    pub fn adaptive(z: Complex64, x: f64) -> Self {
        let tau = z.im.abs();
        let r = (PI * tau / (2.0 * x))
            .max((1.0 - z).norm() / x)
            .max(1.0 / x)
            .min(MAX_ADAPTIVE_RADIUS);
        let mut c = Self {
            radius: r,
            leg_offset: 0.25 * r,
            truncation: r + 1.0,
            ..Self::default()
        };
        let target = c.tail_target(z, x);
        for _ in 0..200 {
            if tail_bound(z, x, c.truncation) <= target {
                break;
            }
            c.truncation *= 1.25;
        }
        c
    }

    /// Same contour deformed inward with a finer rule, for independence checks.
    pub fn refined(&self) -> Self {
        Self {
            radius: 0.5 * self.radius,
            leg_offset: 0.5 * self.leg_offset,
            nodes_per_panel: (2 * self.nodes_per_panel).min(64),
            ..*self
        }
    }

    pub fn validate(&self) -> Result<()> {
        let r = self.radius;
        if !(r > 0.0 && r < 2.0 * PI) {
            return Err(Error::Configuration(format!(
                "contour radius {r} must lie in (0, 2 pi)"
            )));
        }
        if !(self.leg_offset > 0.0 && self.leg_offset < r) {
            return Err(Error::Configuration(format!(
                "leg offset {} must lie in (0, radius)",
                self.leg_offset
            )));
        }
        if !(self.truncation > r && self.truncation.is_finite()) {
            return Err(Error::Configuration(format!(
                "leg truncation {} must exceed the radius",
                self.truncation
            )));
        }
        if ![8, 16, 32, 64].contains(&self.nodes_per_panel) {
            return Err(Error::Configuration(format!(
                "unsupported Gauss-Legendre order {}",
                self.nodes_per_panel
            )));
        }
        Ok(())
    }

    fn tail_target(&self, z: Complex64, x: f64) -> f64 {
        let scale = (Complex64::new(x, 0.0).powc(1.0 - z) / (1.0 - z)).norm();
        self.tail_tol * scale.max(1.0)
    }
}

/// Contour value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HankelValue {
    pub value: Complex64,
    /// Panel-wise |I_n − I_{n/2}|, roundoff and the tail bound.
    pub estimate: f64,
    pub panels: usize,
}

/// ln of Γ(1−z)/(2πi) · e^{xt} t^{z−1}/(1 − e^{−t}), written with
/// 1 − e^{−t} = e^{−t}(e^t − 1) so nothing overflows on the legs.
fn log_integrand(lg: Complex64, z: Complex64, x: f64, t: Complex64) -> Complex64 {
    lg + (z - 1.0) * t.ln() + (x + 1.0) * t
        - expm1(t).ln()
        - Complex64::new((2.0 * PI).ln(), PI / 2.0)
}

fn expm1(t: Complex64) -> Complex64 {
    let (s, c) = t.im.sin_cos();
    let half = (0.5 * t.im).sin();
    Complex64::new(t.re.exp_m1() * c - 2.0 * half * half, t.re.exp() * s)
}

/// Bound on both discarded leg tails beyond Re t = −T.
fn tail_bound(z: Complex64, x: f64, t_max: f64) -> f64 {
    let lg = match log_gamma(1.0 - z) {
        Ok(v) => v.re,
        Err(_) => return f64::INFINITY,
    };
    let a = z.re - 1.0;
    let b = x + 1.0;
    let denom = if a <= 0.0 { b } else { b - a / t_max };
    if denom <= 0.0 {
        return f64::INFINITY;
    }
    let log_bound =
        lg + PI * z.im.abs() + a * t_max.ln() - b * t_max - denom.ln() - (2.0 * PI).ln();
    // 1/|e^t − 1| ≤ 1/(1 − e^{−T}) on the legs
    2.0 * log_bound.exp() / (1.0 - (-t_max).exp())
}

#[derive(Debug, Clone, Copy)]
enum Piece {
    Lower,
    Upper,
    Arc,
}

pub fn hankel_quadrature(z: Complex64, x: f64, contour: &HankelContour) -> Result<HankelValue> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain { x, min: 0.0 });
    }
    if nonpositive_integer(1.0 - z).is_some() {
        return Err(Error::Configuration(format!(
            "Gamma(1 - z) has a pole at z = {z}; the contour route is unavailable"
        )));
    }
    contour.validate()?;
    let target = contour.tail_target(z, x);
    let tail = tail_bound(z, x, contour.truncation);
    if tail > target {
        return Err(Error::ToleranceNotMet {
            achieved: tail,
            target,
        });
    }

    let lg = log_gamma(1.0 - z)?;
    let r = contour.radius;
    let eps = contour.leg_offset;
    let u0 = (r * r - eps * eps).sqrt();
    let delta = (eps / r).asin();
    let scale = (1.0 - z).norm() + 1.0;

    let mut panels: Vec<(Piece, f64, f64)> = Vec::new();
    let mut u = u0;
    while u < contour.truncation {
        let w = (PANEL_BUDGET / (x + 1.0)).min(PANEL_BUDGET * u.max(r) / scale);
        let next = (u + w).min(contour.truncation);
        panels.push((Piece::Lower, u, next));
        panels.push((Piece::Upper, u, next));
        u = next;
    }
    let phi_max = PI - delta;
    let n_arc = ((2.0 * PI * (x * r + scale) / PANEL_BUDGET).ceil() as usize).max(4);
    let step = 2.0 * phi_max / n_arc as f64;
    for k in 0..n_arc {
        let a = -phi_max + k as f64 * step;
        panels.push((Piece::Arc, a, a + step));
    }

    let fine = GaussLegendre::cached(contour.nodes_per_panel);
    let coarse = GaussLegendre::cached(contour.nodes_per_panel / 2);
    let integrand = move |piece: Piece, s: f64| -> Result<Complex64> {
        let (t, jac) = match piece {
            Piece::Lower => (Complex64::new(-s, -eps), Complex64::new(1.0, 0.0)),
            Piece::Upper => (Complex64::new(-s, eps), Complex64::new(-1.0, 0.0)),
            Piece::Arc => {
                let t = Complex64::from_polar(r, s);
                (t, Complex64::i() * t)
            }
        };
        Ok(log_integrand(lg, z, x, t).exp() * jac)
    };
    let pieces: Vec<Result<(Complex64, f64, f64)>> = panels
        .par_iter()
        .map(|&(piece, a, b)| {
            let (hi, abs_sum) = fine.integrate(a, b, |s| integrand(piece, s))?;
            let (lo, _) = coarse.integrate(a, b, |s| integrand(piece, s))?;
            Ok((hi, (hi - lo).norm(), abs_sum))
        })
        .collect();
    let mut value = Complex64::new(0.0, 0.0);
    let mut estimate = tail;
    let mut abs_total = 0.0;
    for p in pieces {
        let (v, e, a) = p?;
        value += v;
        estimate += e;
        abs_total += a;
    }
    estimate += 8.0 * f64::EPSILON * abs_total;
    finite("hankel quadrature", value)?;
    Ok(HankelValue {
        value,
        estimate,
        panels: panels.len(),
    })
}
