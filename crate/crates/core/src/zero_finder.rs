//! Zeros of ζ on the critical line, the trivial zeros, and the spectral
//! map z ↦ E = i(2z − 1).
//!
//! Sign changes are located on the real function Z(t) = e^{iθ(t)} ζ(½ + it),
//! θ being the Riemann–Siegel theta from [`riemann_siegel_theta`].

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special_fn::{
    hurwitz_zeta, reflection_residual, riemann_siegel_theta, riemann_zeta, EulerMaclaurinParams,
};

/// Most zeros any table may request.
pub const MAX_ZEROS: usize = 100;
const MAX_ORDINATE: f64 = 1000.0;
const SCAN_WINDOW: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroFinderConfig {
    pub step: f64,
    /// Bound on |ζ(½ + it)| at an accepted ordinate.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for ZeroFinderConfig {
    fn default() -> Self {
        Self {
            step: 0.05,
            tol: 1e-9,
            max_iter: 200,
        }
    }
}

/// A located nontrivial zero z = ½ + it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalZero {
    /// 1-based position by ordinate; 0 until assigned by [`zero_table`].
    pub index: usize,
    pub t: f64,
    pub z: Complex64,
    /// |ζ(z)| at the returned ordinate.
    pub residual: f64,
    pub eigenvalue: Complex64,
}

impl CriticalZero {
    fn at(t: f64, residual: f64) -> Self {
        let z = Complex64::new(0.5, t);
        Self {
            index: 0,
            t,
            z,
            residual,
            eigenvalue: eigenvalue(z),
        }
    }
}

/// E = i(2z − 1); real and equal to −2t on the critical line.
pub fn eigenvalue(z: Complex64) -> Complex64 {
    Complex64::i() * (2.0 * z - 1.0)
}

/// Inverse of [`eigenvalue`]: z = ½(1 − iE).
pub fn zero_from_eigenvalue(e: Complex64) -> Complex64 {
    0.5 * (1.0 - Complex64::i() * e)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrivialZero {
    pub n: usize,
    pub z: Complex64,
}

impl TrivialZero {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            z: Complex64::new(-2.0 * n as f64, 0.0),
        }
    }

    /// |ζ(−2n)| checked through the reflection identity.
    pub fn residual(&self) -> Result<f64> {
        let direct = riemann_zeta(self.z)?.norm();
        Ok(direct.max(reflection_residual(self.z)?))
    }
}

pub fn trivial_zeros(count: usize) -> Vec<TrivialZero> {
    (1..=count).map(TrivialZero::new).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    pub t_lo: f64,
    pub t_hi: f64,
    pub sign_change: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub brackets: Vec<Bracket>,
    /// Zero count predicted by the smooth part of the counting function,
    /// (θ(t_hi) − θ(t_lo))/π.
    pub expected_count: f64,
    /// Step coarse relative to the mean zero spacing, or found count far
    /// from the prediction.
    pub possible_missed: bool,
}

/// The Hardy function Z(t).
pub fn hardy_z(t: f64) -> Result<f64> {
    let theta = riemann_siegel_theta(t)?;
    let zeta = riemann_zeta(Complex64::new(0.5, t))?;
    Ok((Complex64::from_polar(1.0, theta) * zeta).re)
}

pub fn scan_critical_line(t_lo: f64, t_hi: f64, step: f64) -> Result<ScanResult> {
    if !(t_lo > 0.0 && t_lo < t_hi && step > 0.0) {
        return Err(Error::Precondition(format!(
            "scan requires 0 < t_lo < t_hi and step > 0 (got {t_lo}, {t_hi}, {step})"
        )));
    }
    if t_hi > MAX_ORDINATE {
        return Err(Error::Precondition(format!(
            "ordinates above {MAX_ORDINATE} are out of range"
        )));
    }
    let intervals = ((t_hi - t_lo) / step).ceil().max(1.0) as usize;
    let width = (t_hi - t_lo) / intervals as f64;
    let samples = (0..=intervals)
        .into_par_iter()
        .map(|i| {
            let t = if i == intervals {
                t_hi
            } else {
                t_lo + i as f64 * width
            };
            hardy_z(t).map(|v| (t, v))
        })
        .collect::<Result<Vec<_>>>()?;

    let brackets: Vec<Bracket> = samples
        .windows(2)
        .filter(|w| (w[0].1 < 0.0) != (w[1].1 < 0.0))
        .map(|w| Bracket {
            t_lo: w[0].0,
            t_hi: w[1].0,
            sign_change: true,
        })
        .collect();

    let expected_count = (riemann_siegel_theta(t_hi)? - riemann_siegel_theta(t_lo)?) / PI;
    let mean_spacing = 2.0 * PI / (t_hi / (2.0 * PI)).ln().max(1.0);
    let possible_missed =
        width > 0.5 * mean_spacing || (brackets.len() as f64 - expected_count).abs() > 2.0;
    Ok(ScanResult {
        brackets,
        expected_count,
        possible_missed,
    })
}

/// Bisection on Z(t) down to the resolution of the ordinate.
pub fn refine_zero(bracket: &Bracket, tol: f64) -> Result<CriticalZero> {
    refine_with(bracket, tol, ZeroFinderConfig::default().max_iter)
}

fn refine_with(bracket: &Bracket, tol: f64, max_iter: usize) -> Result<CriticalZero> {
    if !bracket.sign_change || !(bracket.t_lo < bracket.t_hi) {
        return Err(Error::Precondition(
            "bracket without a sign change cannot be refined".into(),
        ));
    }
    let (mut lo, mut hi) = (bracket.t_lo, bracket.t_hi);
    let mut f_lo = hardy_z(lo)?;
    let f_hi = hardy_z(hi)?;
    if (f_lo < 0.0) == (f_hi < 0.0) {
        return Err(Error::Precondition(format!(
            "Z(t) has no sign change on [{lo}, {hi}]"
        )));
    }
    let resolution = 4.0 * f64::EPSILON * hi.abs();
    let mut iterations = 0;
    while hi - lo > resolution && iterations < max_iter {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = hardy_z(mid)?;
        if f_mid == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    let t = 0.5 * (lo + hi);
    let residual = riemann_zeta(Complex64::new(0.5, t))?.norm();
    if residual > tol {
        return Err(Error::Convergence {
            iterations,
            best: t,
            residual,
        });
    }
    Ok(CriticalZero::at(t, residual))
}

/// |ψ_z(0)| = |ζ(z, 1)|, the boundary condition that selects eigenvalues.
pub fn boundary_condition_residual(z: Complex64) -> Result<f64> {
    Ok(hurwitz_zeta(z, 1.0, &EulerMaclaurinParams::default())?.norm())
}

/// The first `count` zeros by ordinate.
pub fn zero_table(count: usize) -> Result<Vec<CriticalZero>> {
    zero_table_with(count, &ZeroFinderConfig::default())
}

pub fn zero_table_with(count: usize, config: &ZeroFinderConfig) -> Result<Vec<CriticalZero>> {
    if count > MAX_ZEROS {
        return Err(Error::Capacity {
            requested: count,
            capacity: MAX_ZEROS,
        });
    }
    let mut brackets = Vec::with_capacity(count);
    let mut lo = 1.0;
    while brackets.len() < count {
        if lo >= MAX_ORDINATE {
            return Err(Error::Precondition(format!(
                "fewer than {count} zeros below t = {MAX_ORDINATE}"
            )));
        }
        let hi = (lo + SCAN_WINDOW).min(MAX_ORDINATE);
        brackets.extend(scan_critical_line(lo, hi, config.step)?.brackets);
        lo = hi;
    }
    brackets.truncate(count);
    let mut zeros = brackets
        .par_iter()
        .map(|b| refine_with(b, config.tol, config.max_iter))
        .collect::<Result<Vec<_>>>()?;
    for (i, zero) in zeros.iter_mut().enumerate() {
        zero.index = i + 1;
    }
    Ok(zeros)
}
