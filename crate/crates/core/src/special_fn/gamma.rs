//! Complex log-gamma on the principal branch (cut along the negative real
//! axis, real on the positive axis).
//!
//! Stirling's series is used once Re w >= `STIRLING_SHIFT`; smaller
//! arguments are shifted up with Γ(z) = Γ(z+N) / Π (z+k). Summing principal
//! logarithms of the shift factors reproduces the analytic continuation of
//! log Γ in the slit plane, so no branch corrections are needed.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::bernoulli::BernoulliTable;
use crate::error::{finite, Error, Result};

const STIRLING_SHIFT: f64 = 15.0;
const STIRLING_TERMS: usize = 12;
const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;

/// If `z` is a nonpositive integer, returns it.
pub fn nonpositive_integer(z: Complex64) -> Option<i64> {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        Some(z.re as i64)
    } else {
        None
    }
}

pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if let Some(at) = nonpositive_integer(z) {
        return Err(Error::Pole { at });
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::NonFinite {
            context: "log_gamma argument",
            value: z,
        });
    }
    // Σ Log(z+k): the modulus is accumulated as a product (one log at the
    // end) and the argument as a sum of principal arguments.
    if z.im == 0.0 && z.re == z.re.round() && z.re <= FACTORIAL_LOGS as f64 {
        return Ok(Complex64::new(ln_factorial(z.re as usize - 1), 0.0));
    }
    let mut w = z;
    let mut modulus = 1.0_f64;
    let mut ln_scale = 0.0_f64;
    let mut arg = 0.0_f64;
    while w.re < STIRLING_SHIFT {
        modulus *= w.norm();
        arg += w.arg();
        if !(1e-200..=1e200).contains(&modulus) {
            ln_scale += modulus.ln();
            modulus = 1.0;
        }
        w += 1.0;
    }
    let shift = Complex64::new(ln_scale + modulus.ln(), arg);
    finite("log_gamma", stirling(w) - shift)
}

/// Γ(z), via exp of the log.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    finite("gamma", log_gamma(z)?.exp())
}

const FACTORIAL_LOGS: usize = 30;

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| k as f64).product::<f64>().ln()
}

fn stirling(w: Complex64) -> Complex64 {
    let table = BernoulliTable::global();
    let mut value = (w - 0.5) * w.ln() - w + HALF_LN_TWO_PI;
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut power = inv;
    for k in 1..=STIRLING_TERMS {
        let b = table
            .value(2 * k)
            .expect("Stirling order within Bernoulli table");
        let term = power * (b / ((2 * k) as f64 * (2 * k - 1) as f64));
        value += term;
        power *= inv2;
    }
    value
}

/// Riemann–Siegel theta θ(t) = Im log Γ(1/4 + i t/2) − (t/2) ln π.
pub fn riemann_siegel_theta(t: f64) -> Result<f64> {
    let lg = log_gamma(Complex64::new(0.25, 0.5 * t))?;
    Ok(lg.im - 0.5 * t * PI.ln())
}
