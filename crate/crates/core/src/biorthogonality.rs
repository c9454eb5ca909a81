//! Dual states ψ̃_z = Δ†x^{−z}, inner products regularised to [1/Λ, Λ], the
//! delta-function limit of the off-diagonal kernel, and degeneracy flags.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{finite, Error, Result};
use crate::operator_engine::AnalyticFunction;
use crate::quad::GaussLegendre;
use crate::zero_finder::{eigenvalue, CriticalZero};

/// Eigenfunction of Ĥ† for eigenvalue i(2z−1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DualState {
    pub z: Complex64,
}

impl DualState {
    pub fn new(z: Complex64) -> Self {
        Self { z }
    }

    pub fn eval(&self, x: f64) -> Result<Complex64> {
        if !(x > 0.0) {
            return Err(Error::Domain { x, min: 0.0 });
        }
        Ok(Complex64::new(x, 0.0).powc(-self.z) - Complex64::new(x + 1.0, 0.0).powc(-self.z))
    }

    pub fn as_function(&self) -> AnalyticFunction {
        AnalyticFunction::dual_state(self.z)
    }
}

/// ⟨ψ̃_m|ψ_n⟩ in the reduced form ∫_{1/Λ}^{Λ} conj(x^{−z_m}) x^{−z_n} dx.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegularizedInner {
    pub m: usize,
    pub n: usize,
    pub lambda: f64,
    pub value: Complex64,
    pub closed_form: Complex64,
    /// t_m − t_n.
    pub alpha: f64,
    pub estimate: f64,
}

impl RegularizedInner {
    pub fn deviation(&self) -> f64 {
        (self.value - self.closed_form).norm()
    }
}

const INNER_TOL: f64 = 1e-12;
const RAW_TOL: f64 = 1e-8;

fn require_cutoff(lambda: f64) -> Result<()> {
    if lambda > 1.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "cutoff must exceed 1, got {lambda}"
        )))
    }
}

/// Panel edges on [−L, L] in u = ln x, splitting at the zeros of sin(ωu)
/// and never wider than `max_width`.
fn log_panels(half_len: f64, omega: f64, max_width: f64) -> Vec<(f64, f64)> {
    let width = if omega > 0.0 {
        (PI / omega).min(max_width)
    } else {
        max_width
    };
    let count = ((2.0 * half_len / width).ceil() as usize).max(1);
    // Symmetric about u = 0 so the zeros of sin(ωu) are panel edges when
    // the half-period rule is active.
    let k = count.div_ceil(2);
    let mut edges = Vec::with_capacity(2 * k + 1);
    for i in (1..=k).rev() {
        edges.push(-(i as f64 * width).min(half_len));
    }
    edges.push(0.0);
    for i in 1..=k {
        edges.push((i as f64 * width).min(half_len));
    }
    edges.dedup();
    edges.windows(2).map(|w| (w[0], w[1])).collect()
}

/// Integrates g(u) over the panels with a 32/16-point pair, in parallel,
/// summing in panel order.
fn integrate_panels<F>(panels: &[(f64, f64)], g: F) -> Result<(Complex64, f64)>
where
    F: Fn(f64) -> Result<Complex64> + Sync,
{
    let fine = GaussLegendre::cached(32);
    let coarse = GaussLegendre::cached(16);
    let parts: Vec<Result<(Complex64, f64, f64)>> = panels
        .par_iter()
        .map(|&(a, b)| {
            let (hi, abs_sum) = fine.integrate(a, b, &g)?;
            let (lo, _) = coarse.integrate(a, b, &g)?;
            Ok((hi, (hi - lo).norm(), abs_sum))
        })
        .collect();
    let mut value = Complex64::new(0.0, 0.0);
    let mut estimate = 0.0;
    let mut abs_total = 0.0;
    for p in parts {
        let (v, e, a) = p?;
        value += v;
        estimate += e;
        abs_total += a;
    }
    Ok((value, estimate + 8.0 * f64::EPSILON * abs_total))
}

/// 2 sinh(βL)/β, continuous at β = 0.
fn sinh_kernel(beta: Complex64, half_len: f64) -> Complex64 {
    if beta.norm() * half_len < 1e-8 {
        return Complex64::new(2.0 * half_len, 0.0)
            * (1.0 + beta * beta * half_len * half_len / 6.0);
    }
    2.0 * (beta * half_len).sinh() / beta
}

pub fn regularized_inner(
    zm: &CriticalZero,
    zn: &CriticalZero,
    lambda: f64,
) -> Result<RegularizedInner> {
    regularized_inner_z(zm.index, zm.z, zn.index, zn.z, lambda)
}

/// [`regularized_inner`] for arbitrary exponents.
pub fn regularized_inner_z(
    m: usize,
    zm: Complex64,
    n: usize,
    zn: Complex64,
    lambda: f64,
) -> Result<RegularizedInner> {
    require_cutoff(lambda)?;
    let half_len = lambda.ln();
    // conj(x^{−z_m}) x^{−z_n} dx = e^{βu} du with β = 1 − conj(z_m) − z_n
    let beta = 1.0 - zm.conj() - zn;
    let panels = log_panels(half_len, beta.im.abs(), 1.0);
    let (value, estimate) = integrate_panels(&panels, |u| Ok((beta * u).exp()))?;
    finite("regularized inner product", value)?;
    let scale = value.norm().max(1.0);
    if estimate > INNER_TOL * scale {
        return Err(Error::ToleranceNotMet {
            achieved: estimate / scale,
            target: INNER_TOL,
        });
    }
    Ok(RegularizedInner {
        m,
        n,
        lambda,
        value,
        closed_form: sinh_kernel(beta, half_len),
        alpha: zm.im - zn.im,
        estimate,
    })
}

/// The unreduced ∫ conj(ψ̃_m) ψ_n dx next to the reduced form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RawCrosscheck {
    pub m: usize,
    pub n: usize,
    pub lambda: f64,
    pub raw: Complex64,
    pub reduced: Complex64,
    pub difference: f64,
    pub estimate: f64,
}

pub fn raw_inner_crosscheck(
    zm: &CriticalZero,
    zn: &CriticalZero,
    lambda: f64,
) -> Result<RawCrosscheck> {
    raw_inner_crosscheck_z(zm.index, zm.z, zn.index, zn.z, lambda)
}

pub fn raw_inner_crosscheck_z(
    m: usize,
    zm: Complex64,
    n: usize,
    zn: Complex64,
    lambda: f64,
) -> Result<RawCrosscheck> {
    if lambda == 1.0 {
        let zero = Complex64::new(0.0, 0.0);
        return Ok(RawCrosscheck {
            m,
            n,
            lambda,
            raw: zero,
            reduced: zero,
            difference: 0.0,
            estimate: 0.0,
        });
    }
    require_cutoff(lambda)?;
    let half_len = lambda.ln();
    let dual = DualState::new(zm);
    let psi = AnalyticFunction::hurwitz_eigenfunction(zn);
    // Both factors oscillate like x^{±i t}; keep a few radians per panel.
    let omega = zm.im.abs() + zn.im.abs() + (zm.im - zn.im).abs() + 1.0;
    let panels = log_panels(half_len, 0.0, 4.0 / omega);
    let (raw, estimate) = integrate_panels(&panels, |u| {
        let x = u.exp();
        Ok(dual.eval(x)?.conj() * psi.eval(x)? * x)
    })?;
    finite("raw inner product", raw)?;
    let scale = raw.norm().max(1.0);
    if estimate > RAW_TOL * scale {
        return Err(Error::ToleranceNotMet {
            achieved: estimate / scale,
            target: RAW_TOL,
        });
    }
    let reduced = regularized_inner_z(m, zm, n, zn, lambda)?.value;
    Ok(RawCrosscheck {
        m,
        n,
        lambda,
        raw,
        reduced,
        difference: (raw - reduced).norm(),
        estimate,
    })
}

/// Smooth bump exp(1 − 1/(1 − s²)), s = (α − center)/half_width, equal to 1
/// at its center and supported on [center − half_width, center + half_width].
pub fn bump(center: f64, half_width: f64) -> AnalyticFunction {
    AnalyticFunction::new(format!("bump({center}, {half_width})"), move |a| {
        let s = (a - center) / half_width;
        let v = if s.abs() < 1.0 {
            (1.0 - 1.0 / (1.0 - s * s)).exp()
        } else {
            0.0
        };
        Ok(Complex64::new(v, 0.0))
    })
    .with_domain_min(f64::NEG_INFINITY)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelPoint {
    pub lambda: f64,
    pub value: Complex64,
    pub error: f64,
}

/// Convergence of ∫ 2 sin(α lnΛ)/α · b(α) dα towards 2π b(0).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaKernelReport {
    pub target: Complex64,
    pub points: Vec<KernelPoint>,
    /// Last error below the first one.
    pub decreasing_trend: bool,
}

pub fn delta_kernel_test(
    bump: &AnalyticFunction,
    support: (f64, f64),
    lambdas: &[f64],
) -> Result<DeltaKernelReport> {
    let (lo, hi) = support;
    if !(lo < hi) {
        return Err(Error::Precondition(format!("empty support [{lo}, {hi}]")));
    }
    let target = 2.0
        * PI
        * if lo < 0.0 && hi > 0.0 {
            bump.eval(0.0)?
        } else {
            Complex64::new(0.0, 0.0)
        };
    let fine = GaussLegendre::cached(32);
    let mut points = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        require_cutoff(lambda)?;
        let l = lambda.ln();
        let width = (PI / l).min((hi - lo) / 64.0);
        let count = ((hi - lo) / width).ceil() as usize;
        let step = (hi - lo) / count as f64;
        let mut value = Complex64::new(0.0, 0.0);
        for k in 0..count {
            let a = lo + k as f64 * step;
            let (v, _) = fine.integrate(a, a + step, |alpha| {
                let kernel = if (alpha * l).abs() < 1e-8 {
                    2.0 * l
                } else {
                    2.0 * (alpha * l).sin() / alpha
                };
                Ok::<_, Error>(bump.eval(alpha)? * kernel)
            })?;
            value += v;
        }
        points.push(KernelPoint {
            lambda,
            value,
            error: (value - target).norm(),
        });
    }
    let decreasing_trend = match (points.first(), points.last()) {
        (Some(a), Some(b)) if points.len() > 1 => b.error < a.error,
        _ => true,
    };
    Ok(DeltaKernelReport {
        target,
        points,
        decreasing_trend,
    })
}

/// A pair of eigenvalues that coincide, or an off-line pair (z, 1 − z̄)
/// whose inner product vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegeneracyFlag {
    pub first: Complex64,
    pub second: Complex64,
    pub off_line: bool,
    pub self_orthogonal: bool,
}

pub fn degeneracy_scan(zs: &[Complex64], tol: f64) -> Vec<DegeneracyFlag> {
    let mut flags = Vec::new();
    for (i, &a) in zs.iter().enumerate() {
        for &b in &zs[i + 1..] {
            let degenerate = (eigenvalue(a) - eigenvalue(b)).norm() < tol;
            let partners = ((1.0 - a.conj()) - b).norm() < tol;
            if !(degenerate || partners) {
                continue;
            }
            let off_line = (a.re - 0.5).abs() > tol || (b.re - 0.5).abs() > tol;
            flags.push(DegeneracyFlag {
                first: a,
                second: b,
                off_line,
                self_orthogonal: off_line && partners,
            });
        }
    }
    flags
}
