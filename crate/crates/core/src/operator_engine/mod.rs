//! The operators built from x̂ and p̂ = −i∂ₓ, applied to [`AnalyticFunction`]
//! handles, and the eigenvalue identities of Ĥ, Ĥ† and the Hamiltonians
//! similar to Ĥ, checked as residuals on a grid.
//!
//! Ĥ itself is never applied: Δ⁻¹ is nonlocal. Every Ĥ identity is checked
//! through the first-order form obtained by multiplying with Δ on the left.
//!
//! Normalisation: η̂ = sin²(½p̂) as written, so Δ†Δ = 4η̂ and η̂ψ_z = ψ̃_z/4.

mod function;
mod grid;
mod residual;

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use function::AnalyticFunction;
pub use grid::{GridSpec, Spacing};
pub use residual::ResidualReport;

use crate::asymptotic_engine::{hankel_quadrature, HankelContour};
use crate::error::{Error, Result};
use crate::zero_finder::eigenvalue;

/// Whether [`apply_dilation`] may fall back to finite differences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DerivativePolicy {
    #[default]
    ExactOnly,
    AllowFiniteDifference,
}

fn shifted(
    f: &AnalyticFunction,
    label: String,
    extra_domain: f64,
    combine: impl Fn(&dyn Fn(f64) -> Result<Complex64>, f64) -> Result<Complex64>
        + Send
        + Sync
        + Clone
        + 'static,
) -> AnalyticFunction {
    let (eval, deriv) = f.parts();
    let eval = Arc::clone(eval);
    let c = combine.clone();
    let new_eval: Arc<dyn Fn(f64) -> Result<Complex64> + Send + Sync> =
        Arc::new(move |x| c(&|y| eval(y), x));
    let new_deriv = deriv.map(|d| {
        let d = Arc::clone(d);
        let c = combine.clone();
        Arc::new(move |x: f64| c(&|y| d(y), x))
            as Arc<dyn Fn(f64) -> Result<Complex64> + Send + Sync>
    });
    AnalyticFunction::from_parts(label, f.domain_min() + extra_domain, new_eval, new_deriv)
}

/// (Δf)(x) = f(x) − f(x − 1).
pub fn apply_delta(f: &AnalyticFunction) -> AnalyticFunction {
    shifted(f, format!("Delta[{}]", f.label()), 1.0, |g, x| {
        Ok(g(x)? - g(x - 1.0)?)
    })
}

/// (Δ†f)(x) = f(x) − f(x + 1).
pub fn apply_delta_adjoint(f: &AnalyticFunction) -> AnalyticFunction {
    shifted(f, format!("Delta*[{}]", f.label()), 0.0, |g, x| {
        Ok(g(x)? - g(x + 1.0)?)
    })
}

/// (η̂f)(x) = (2f(x) − f(x + 1) − f(x − 1)) / 4, the symbol sin²(k/2).
pub fn apply_eta(f: &AnalyticFunction) -> AnalyticFunction {
    shifted(f, format!("eta[{}]", f.label()), 1.0, |g, x| {
        Ok((2.0 * g(x)? - g(x + 1.0)? - g(x - 1.0)?) * 0.25)
    })
}

/// (ρ̂f)(x) = (f(x + ½) − f(x − ½)) / (2i), the symbol sin(k/2).
pub fn apply_rho_sin(f: &AnalyticFunction) -> AnalyticFunction {
    shifted(f, format!("rho[{}]", f.label()), 0.5, |g, x| {
        Ok((g(x + 0.5)? - g(x - 0.5)?) / Complex64::new(0.0, 2.0))
    })
}

fn derivative_of(
    f: &AnalyticFunction,
    policy: DerivativePolicy,
) -> Result<Arc<dyn Fn(f64) -> Result<Complex64> + Send + Sync>> {
    if f.has_derivative() {
        let g = f.clone();
        return Ok(Arc::new(move |x| {
            g.derivative(x).expect("derivative channel present")
        }));
    }
    match policy {
        DerivativePolicy::ExactOnly => Err(Error::Capability(format!(
            "{} has no exact derivative and finite differences are disabled",
            f.label()
        ))),
        DerivativePolicy::AllowFiniteDifference => {
            let g = f.clone();
            Ok(Arc::new(move |x| {
                let h = 1e-3 * x.abs().max(1e-3);
                g.finite_difference(x, h.min(0.25 * (x - g.domain_min())))
            }))
        }
    }
}

/// (x̂p̂ + p̂x̂)f = −i(2x f′ + f).
pub fn apply_dilation(f: &AnalyticFunction, policy: DerivativePolicy) -> Result<AnalyticFunction> {
    let d = derivative_of(f, policy)?;
    let g = f.clone();
    Ok(
        AnalyticFunction::new(format!("D[{}]", f.label()), move |x| {
            Ok(-Complex64::i() * (2.0 * x * d(x)? + g.eval(x)?))
        })
        .with_domain_min(f.domain_min()),
    )
}

/// p̂f = −i f′.
pub fn apply_momentum(f: &AnalyticFunction, policy: DerivativePolicy) -> Result<AnalyticFunction> {
    let d = derivative_of(f, policy)?;
    Ok(
        AnalyticFunction::new(format!("p[{}]", f.label()), move |x| {
            Ok(-Complex64::i() * d(x)?)
        })
        .with_domain_min(f.domain_min()),
    )
}

fn require_regular(z: Complex64) -> Result<()> {
    if z == Complex64::new(1.0, 0.0) {
        Err(Error::Pole { at: 1 })
    } else {
        Ok(())
    }
}

/// Ĥψ_z = Eψ_z, checked as its two first-order factors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenResidual {
    pub z: Complex64,
    pub eigenvalue: Complex64,
    /// Δψ_z = x^{−z}.
    pub delta: ResidualReport,
    /// (x̂p̂ + p̂x̂)x^{−z} = E x^{−z}.
    pub dilation: ResidualReport,
}

impl EigenResidual {
    /// Largest relative residual of the two first-order identities.
    pub fn max_rel(&self) -> f64 {
        self.delta.max_rel.max(self.dilation.max_rel)
    }
}

const INVERSE_SAMPLES: usize = 8;

pub fn eigen_residual(z: Complex64, grid: &GridSpec) -> Result<EigenResidual> {
    require_regular(z)?;
    grid.validate()?;
    grid.require_min_above(1.0, "backward shift needs x - 1 > 0")?;
    let e = eigenvalue(z);
    let psi = AnalyticFunction::hurwitz_eigenfunction(z);
    let phi = AnalyticFunction::power(z);
    let delta_psi = apply_delta(&psi);
    let delta = ResidualReport::over_grid("Delta psi_z = x^-z", *grid, |x| {
        Ok((delta_psi.eval(x)?, phi.eval(x)?))
    })?;
    let d_phi = apply_dilation(&phi, DerivativePolicy::ExactOnly)?;
    let dilation = ResidualReport::over_grid("(xp+px) x^-z = E x^-z", *grid, |x| {
        Ok((d_phi.eval(x)?, e * phi.eval(x)?))
    })?;

    Ok(EigenResidual {
        z,
        eigenvalue: e,
        delta,
        dilation,
    })
}

/// Δ⁻¹x^{−z} = ψ_z with Δ⁻¹ realised by the contour integral, on at most
/// eight points of the grid.
pub fn hankel_inverse_residual(z: Complex64, grid: &GridSpec) -> Result<ResidualReport> {
    require_regular(z)?;
    grid.validate()?;
    let psi = AnalyticFunction::hurwitz_eigenfunction(z);
    let points = grid.points();
    let stride = (points.len() / INVERSE_SAMPLES).max(1);
    let sample: Vec<f64> = points.iter().copied().step_by(stride).collect();
    ResidualReport::over_points("Delta^-1 x^-z = psi_z (contour)", *grid, &sample, |x| {
        let contour = HankelContour::adaptive(z, x);
        Ok((hankel_quadrature(z, x, &contour)?.value, psi.eval(x)?))
    })
}

/// Ĥ†ψ̃_z = Eψ̃_z, using Ĥ†ψ̃ = Δ†(x̂p̂ + p̂x̂)x^{−z}.
pub fn adjoint_eigen_residual(z: Complex64, grid: &GridSpec) -> Result<ResidualReport> {
    require_regular(z)?;
    let e = eigenvalue(z);
    let lhs = apply_delta_adjoint(&apply_dilation(
        &AnalyticFunction::power(z),
        DerivativePolicy::ExactOnly,
    )?);
    let dual = AnalyticFunction::dual_state(z);
    ResidualReport::over_grid("H* dual_z = E dual_z", *grid, |x| {
        Ok((lhs.eval(x)?, e * dual.eval(x)?))
    })
}

/// η̂ψ_z = ψ̃_z/4: with the adjoint identity this is pseudo-Hermiticity
/// η̂Ĥ = Ĥ†η̂ restricted to the eigenfunctions.
pub fn metric_residual(z: Complex64, grid: &GridSpec) -> Result<ResidualReport> {
    require_regular(z)?;
    grid.require_min_above(1.0, "eta needs x - 1 > 0")?;
    let eta_psi = apply_eta(&AnalyticFunction::hurwitz_eigenfunction(z));
    let dual = AnalyticFunction::dual_state(z);
    ResidualReport::over_grid("eta psi_z = dual_z / 4", *grid, |x| {
        Ok((eta_psi.eval(x)?, 0.25 * dual.eval(x)?))
    })
}

/// ĥ = x̂p̂ + p̂x̂ + p̂ acting on ρ̂ψ_z with ρ̂ = sin ½p̂.
pub fn anomaly_residual(z: Complex64, grid: &GridSpec) -> Result<ResidualReport> {
    require_regular(z)?;
    grid.validate()?;
    grid.require_min_above(1.5, "half shifts with derivative stencil")?;
    let e = eigenvalue(z);
    let phi = apply_rho_sin(&AnalyticFunction::hurwitz_eigenfunction(z));
    let dilation = apply_dilation(&phi, DerivativePolicy::ExactOnly)?;
    let momentum = apply_momentum(&phi, DerivativePolicy::ExactOnly)?;
    ResidualReport::over_grid("(xp+px+p) rho psi_z = E rho psi_z", *grid, |x| {
        Ok((dilation.eval(x)? + momentum.eval(x)?, e * phi.eval(x)?))
    })
}

/// Berry–Keating: (x̂p̂ + p̂x̂)x^{−z} = E x^{−z}.
pub fn bk_eigen_residual(z: Complex64, grid: &GridSpec) -> Result<ResidualReport> {
    let e = eigenvalue(z);
    let phi = AnalyticFunction::power(z);
    let d_phi = apply_dilation(&phi, DerivativePolicy::ExactOnly)?;
    ResidualReport::over_grid("h_BK x^-z = E x^-z", *grid, |x| {
        Ok((d_phi.eval(x)?, e * phi.eval(x)?))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special_fn::bernoulli_polynomial;

    const T1: f64 = 14.134725141734695;
    const T2: f64 = 21.022039638771556;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn delta_examples() {
        let z = c(0.5, T1);
        let d = apply_delta(&AnalyticFunction::hurwitz_eigenfunction(z));
        let phi = AnalyticFunction::power(z);
        for x in [1.5, 3.0, 20.0] {
            assert!((d.eval(x).unwrap() - phi.eval(x).unwrap()).norm() < 1e-12);
        }
        let periodic = AnalyticFunction::new("sin 2 pi x", |x| {
            Ok(c((2.0 * std::f64::consts::PI * x).sin(), 0.0))
        });
        let dp = apply_delta(&periodic);
        for x in [1.25, 2.7, 9.1] {
            assert!(dp.eval(x).unwrap().norm() < 1e-12);
        }
        let cubic = AnalyticFunction::new("B3(x+1)/3", |x| {
            Ok(c(bernoulli_polynomial(3, x + 1.0)? / 3.0, 0.0))
        });
        let dc = apply_delta(&cubic);
        for x in [1.5, 4.0, 10.0] {
            assert!((dc.eval(x).unwrap().re - x * x).abs() < 1e-12 * x * x);
        }
        assert!(matches!(dc.eval(1.0), Err(Error::Domain { .. })));
    }

    #[test]
    fn delta_adjoint_examples() {
        let z = c(0.5, T1);
        let lhs = apply_delta_adjoint(&AnalyticFunction::power(z));
        let dual = AnalyticFunction::dual_state(z);
        assert!((lhs.eval(0.3).unwrap() - dual.eval(0.3).unwrap()).norm() < 1e-15);
        let k = apply_delta_adjoint(&AnalyticFunction::constant(c(3.0, -1.0)));
        assert_eq!(k.eval(2.0).unwrap(), c(0.0, 0.0));
        let ident = apply_delta_adjoint(&AnalyticFunction::new("x", |x| Ok(c(x, 0.0))));
        assert_eq!(ident.eval(4.5).unwrap(), c(-1.0, 0.0));
    }

    #[test]
    fn dilation_examples() {
        let z = c(0.3, 5.0);
        let d = apply_dilation(&AnalyticFunction::power(z), DerivativePolicy::ExactOnly).unwrap();
        let phi = AnalyticFunction::power(z);
        let e = Complex64::i() * (2.0 * z - 1.0);
        assert!((d.eval(2.5).unwrap() - e * phi.eval(2.5).unwrap()).norm() < 1e-14);
        let cst = apply_dilation(
            &AnalyticFunction::constant(c(2.0, 0.0)),
            DerivativePolicy::ExactOnly,
        )
        .unwrap();
        assert_eq!(cst.eval(7.0).unwrap(), c(0.0, -2.0));
        // composition: dilation after delta on psi
        let comp = apply_dilation(
            &apply_delta(&AnalyticFunction::hurwitz_eigenfunction(z)),
            DerivativePolicy::ExactOnly,
        )
        .unwrap();
        for x in [2.0, 6.0] {
            let rhs = e * phi.eval(x).unwrap();
            assert!((comp.eval(x).unwrap() - rhs).norm() < 1e-10 * rhs.norm());
        }
    }

    #[test]
    fn dilation_without_derivative() {
        let f = AnalyticFunction::new("x^2", |x| Ok(c(x * x, 0.0)));
        assert!(matches!(
            apply_dilation(&f, DerivativePolicy::ExactOnly),
            Err(Error::Capability(_))
        ));
        let d = apply_dilation(&f, DerivativePolicy::AllowFiniteDifference).unwrap();
        // -i(2x·2x + x²) = -5i x²
        assert!((d.eval(3.0).unwrap() - c(0.0, -45.0)).norm() < 1e-8);
    }

    #[test]
    fn plane_wave_symbols() {
        for k in [0.3, 1.0, 2.5, -1.7] {
            let w = AnalyticFunction::plane_wave(k);
            for x in [1.7, 3.2, 8.0] {
                let f = w.eval(x).unwrap();
                let delta = apply_delta(&w).eval(x).unwrap();
                assert!((delta - (1.0 - Complex64::from_polar(1.0, -k)) * f).norm() < 1e-12);
                let adj = apply_delta_adjoint(&w).eval(x).unwrap();
                assert!((adj - (1.0 - Complex64::from_polar(1.0, k)) * f).norm() < 1e-12);
                let eta = apply_eta(&w).eval(x).unwrap();
                assert!((eta - (k / 2.0).sin().powi(2) * f).norm() < 1e-12);
                let rho = apply_rho_sin(&w).eval(x).unwrap();
                assert!((rho - (k / 2.0).sin() * f).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn eta_and_rho_examples() {
        let k = apply_eta(&AnalyticFunction::constant(c(1.5, 0.0)));
        assert_eq!(k.eval(3.0).unwrap(), c(0.0, 0.0));
        assert!(matches!(k.eval(0.5), Err(Error::Domain { .. })));
        let r = apply_rho_sin(&AnalyticFunction::constant(c(1.5, 0.0)));
        assert_eq!(r.eval(3.0).unwrap(), c(0.0, 0.0));
        let z = c(0.5, T1);
        let psi = AnalyticFunction::hurwitz_eigenfunction(z);
        let rho = apply_rho_sin(&psi);
        let x = 4.0;
        let expect = (psi.eval(x + 0.5).unwrap() - psi.eval(x - 0.5).unwrap()) / c(0.0, 2.0);
        assert_eq!(rho.eval(x).unwrap(), expect);
        let report = metric_residual(z, &GridSpec::default()).unwrap();
        assert!(report.max_rel < 1e-10, "{report:?}");
    }

    #[test]
    fn eigen_residual_examples() {
        let grid = GridSpec::default();
        let r = eigen_residual(c(0.5, T1), &grid).unwrap();
        assert!(r.max_rel() <= 1e-9, "{r:?}");
        let inv = hankel_inverse_residual(c(0.5, T1), &grid).unwrap();
        assert!(inv.max_rel <= 1e-8, "{inv:?}");
        let trivial = eigen_residual(c(-2.0, 0.0), &GridSpec::logarithmic(2.0, 10.0, 50)).unwrap();
        assert!(trivial.max_rel() <= 1e-10, "{trivial:?}");
        let generic = eigen_residual(c(0.3, 5.0), &grid).unwrap();
        assert!(generic.max_rel() <= 1e-9);
        assert!(matches!(
            eigen_residual(c(0.5, T1), &GridSpec::logarithmic(0.5, 10.0, 20)),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            hankel_inverse_residual(c(2.0, 0.0), &grid),
            Err(Error::Configuration(_))
        ));
    }

    #[test]
    fn adjoint_examples() {
        let grid = GridSpec::default();
        for z in [c(0.5, T1), c(0.5, T2), c(2.0, 0.0)] {
            let r = adjoint_eigen_residual(z, &grid).unwrap();
            assert!(r.max_rel <= 1e-9, "{z}: {r:?}");
        }
    }

    #[test]
    fn anomaly_examples() {
        let grid = GridSpec::default();
        assert!(anomaly_residual(c(0.5, T1), &grid).unwrap().max_rel <= 1e-7);
        assert!(anomaly_residual(c(-2.0, 0.0), &grid).unwrap().max_rel <= 1e-10);
        assert!(matches!(
            anomaly_residual(c(0.5, T1), &GridSpec::logarithmic(1.2, 10.0, 20)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn berry_keating_examples() {
        let at_one = GridSpec::logarithmic(1.0, 1.0, 1);
        for z in [c(0.5, T1), c(-2.0, 0.0), c(3.7, -2.2)] {
            assert!(bk_eigen_residual(z, &at_one).unwrap().max_abs < 1e-13);
        }
        let wide = GridSpec::logarithmic(0.1, 100.0, 200);
        assert!(bk_eigen_residual(c(0.5, T1), &wide).unwrap().max_rel <= 1e-12);
        assert!(bk_eigen_residual(c(-2.0, 0.0), &wide).unwrap().max_rel <= 1e-12);
    }
}
