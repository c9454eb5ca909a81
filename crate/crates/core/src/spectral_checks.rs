//! Consequences of the spectrum that can be checked directly: PT pairing,
//! the Berry–Keating quantization condition, decay of the boundary term at
//! the origin, and the renormalised expectation against π(Λ).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::biorthogonality::DualState;
use crate::error::{Error, Result};
use crate::operator_engine::AnalyticFunction;
use crate::quad::GaussLegendre;
use crate::special_fn::{hurwitz_zeta, riemann_zeta, EulerMaclaurinParams};
use crate::zero_finder::eigenvalue;

/// Defect above which a pair counts as broken.
pub const PT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PtReport {
    pub index: usize,
    pub z: Complex64,
    /// |ζ(z̄)|.
    pub conj_residual: f64,
    /// iE = 1 − 2z.
    pub ih_eigenvalue: Complex64,
    /// |Re(iE)|.
    pub pure_imag_defect: f64,
    pub broken_pair: bool,
    /// 1 − z̄, the zero paired with z when it is off the line.
    pub partner: Complex64,
}

/// One report per input, indexed from 1.
pub fn pt_pairing(zs: &[Complex64]) -> Result<Vec<PtReport>> {
    zs.iter()
        .enumerate()
        .map(|(i, &z)| {
            let ih = Complex64::i() * eigenvalue(z);
            let defect = ih.re.abs();
            Ok(PtReport {
                index: i + 1,
                z,
                conj_residual: riemann_zeta(z.conj())?.norm(),
                ih_eigenvalue: ih,
                pure_imag_defect: defect,
                broken_pair: defect > PT_TOL,
                partner: 1.0 - z.conj(),
            })
        })
        .collect()
}

/// |ζ(z, 2) + 1|, which vanishes exactly where ζ(z) does.
pub fn bk_quantization_residual(z: Complex64) -> Result<f64> {
    Ok((hurwitz_zeta(z, 2.0, &EulerMaclaurinParams::default())? + 1.0).norm())
}

/// Least-squares slope of log|b(x)| against log x near the origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeReport {
    pub slope: f64,
    pub intercept: f64,
    pub x_range: (f64, f64),
    pub samples: usize,
    /// A positive slope means the term vanishes as x → 0.
    pub vanishing: bool,
}

pub const BOUNDARY_RANGE: (f64, f64) = (1e-4, 1e-2);
const BOUNDARY_SAMPLES: usize = 41;

/// Fits log|b| over [`BOUNDARY_RANGE`].
pub fn boundary_slope(term: &AnalyticFunction) -> Result<SlopeReport> {
    let (lo, hi) = BOUNDARY_RANGE;
    let (l0, l1) = (lo.ln(), hi.ln());
    let n = BOUNDARY_SAMPLES;
    let mut pts = Vec::with_capacity(n);
    for i in 0..n {
        let lx = l0 + (l1 - l0) * i as f64 / (n - 1) as f64;
        let v = term.eval(lx.exp())?.norm();
        if v == 0.0 {
            return Err(Error::Precondition(format!(
                "boundary term vanishes identically at x = {}",
                lx.exp()
            )));
        }
        pts.push((lx, v.ln()));
    }
    let nf = n as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    Ok(SlopeReport {
        slope,
        intercept: my - slope * mx,
        x_range: BOUNDARY_RANGE,
        samples: n,
        vanishing: slope > 0.0,
    })
}

/// Slope of conj(ψ̃_m(x)) ψ(x) for an arbitrary ψ.
pub fn boundary_term_decay_with(zm: Complex64, psi: &AnalyticFunction) -> Result<SlopeReport> {
    let dual = DualState::new(zm);
    let psi = psi.clone();
    let term = AnalyticFunction::new("conj(dual) psi", move |x| {
        Ok(dual.eval(x)?.conj() * psi.eval(x)?)
    });
    boundary_slope(&term)
}

/// Slope of conj(ψ̃_m(x)) ψ_n(x); 1/2 when ψ_n(0) = 0.
pub fn boundary_term_decay(zm: Complex64, zn: Complex64) -> Result<SlopeReport> {
    boundary_term_decay_with(zm, &AnalyticFunction::hurwitz_eigenfunction(zn))
}

/// Largest cutoff the sieve accepts.
pub const PRIME_COUNT_CAPACITY: u64 = 100_000_000;

/// π(Λ) by an odd-only sieve of Eratosthenes.
pub fn prime_count(lambda: u64) -> Result<u64> {
    if lambda > PRIME_COUNT_CAPACITY {
        return Err(Error::Capacity {
            requested: lambda as usize,
            capacity: PRIME_COUNT_CAPACITY as usize,
        });
    }
    if lambda < 2 {
        return Ok(0);
    }
    // slot i stands for 2i + 1
    let slots = ((lambda - 1) / 2 + 1) as usize;
    let mut composite = vec![false; slots];
    composite[0] = true; // 1
    let mut i = 1;
    while (2 * i + 1) * (2 * i + 1) <= lambda as usize {
        if !composite[i] {
            let p = 2 * i + 1;
            let mut j = (p * p - 1) / 2;
            while j < slots {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    Ok(1 + composite.iter().filter(|c| !**c).count() as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrimeComparison {
    pub lambda: f64,
    pub pi_lambda: u64,
    /// Λ / lnΛ.
    pub pnt_term: f64,
    pub expectation: f64,
    /// (Λ − Λ^{−1}) / lnΛ.
    pub closed_form: f64,
}

impl PrimeComparison {
    /// |closed_form − π(Λ)| / π(Λ).
    pub fn relative_gap(&self) -> f64 {
        (self.closed_form - self.pi_lambda as f64).abs() / self.pi_lambda as f64
    }

    pub fn quadrature_deviation(&self) -> f64 {
        (self.expectation - self.closed_form).abs() / self.closed_form
    }
}

/// ∫_{1/Λ}^{Λ} x |x^{−z}|² dx / lnΛ in the frame where |Δψ_z|² = |x^{−z}|².
pub fn renormalized_expectation(z: Complex64, lambda: f64) -> Result<PrimeComparison> {
    if (z.re - 0.5).abs() > 1e-12 {
        return Err(Error::Precondition(format!(
            "closed form needs Re z = 1/2, got {}",
            z.re
        )));
    }
    if !(lambda > 1.0) {
        return Err(Error::Precondition(format!(
            "cutoff must exceed 1, got {lambda}"
        )));
    }
    let l = lambda.ln();
    let rule = GaussLegendre::cached(32);
    // u = ln x: x |x^{-z}|^2 dx = e^{2u} |e^{-zu}|^2 du, unit-width panels
    let panels = (2.0 * l).ceil() as usize;
    let step = 2.0 * l / panels as f64;
    let mut integral = 0.0;
    for k in 0..panels {
        let a = -l + k as f64 * step;
        integral +=
            rule.integrate_real(a, a + step, |u| (2.0 * u).exp() * (-z * u).exp().norm_sqr());
    }
    let pi_lambda = prime_count(lambda.floor() as u64)?;
    Ok(PrimeComparison {
        lambda,
        pi_lambda,
        pnt_term: lambda / l,
        expectation: integral / l,
        closed_form: (lambda - 1.0 / lambda) / l,
    })
}

/// Relative gaps over increasing cutoffs and whether they fall monotonically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PntTrend {
    pub rows: Vec<PrimeComparison>,
    pub monotone: bool,
}

pub fn pnt_trend(z: Complex64, lambdas: &[f64]) -> Result<PntTrend> {
    let rows = lambdas
        .iter()
        .map(|&l| renormalized_expectation(z, l))
        .collect::<Result<Vec<_>>>()?;
    let monotone = rows
        .windows(2)
        .all(|w| w[1].relative_gap() < w[0].relative_gap());
    Ok(PntTrend { rows, monotone })
}
