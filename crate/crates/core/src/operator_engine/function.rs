use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{finite, Error, Result};
use crate::special_fn::{hurwitz_zeta, EulerMaclaurinParams};

type Eval = Arc<dyn Fn(f64) -> Result<Complex64> + Send + Sync>;

/// A complex function of x on (domain_min, ∞), optionally carrying its exact
/// derivative. The derivative channel is what p̂ = −i∂ₓ acts through.
#[derive(Clone)]
pub struct AnalyticFunction {
    label: String,
    domain_min: f64,
    eval: Eval,
    deriv: Option<Eval>,
}

impl fmt::Debug for AnalyticFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AnalyticFunction")
            .field("label", &self.label)
            .field("domain_min", &self.domain_min)
            .field("has_derivative", &self.deriv.is_some())
            .finish()
    }
}

impl AnalyticFunction {
    /// Function on the positive half line without a derivative channel.
    pub fn new<F>(label: impl Into<String>, f: F) -> Self
    where
        F: Fn(f64) -> Result<Complex64> + Send + Sync + 'static,
    {
        Self {
            label: label.into(),
            domain_min: 0.0,
            eval: Arc::new(f),
            deriv: None,
        }
    }

    pub fn with_derivative<D>(mut self, d: D) -> Self
    where
        D: Fn(f64) -> Result<Complex64> + Send + Sync + 'static,
    {
        self.deriv = Some(Arc::new(d));
        self
    }

    /// Open lower bound of the domain.
    pub fn with_domain_min(mut self, domain_min: f64) -> Self {
        self.domain_min = domain_min;
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn domain_min(&self) -> f64 {
        self.domain_min
    }

    pub fn has_derivative(&self) -> bool {
        self.deriv.is_some()
    }

    fn check(&self, x: f64) -> Result<()> {
        if x > self.domain_min && x.is_finite() {
            Ok(())
        } else {
            Err(Error::Domain {
                x,
                min: self.domain_min,
            })
        }
    }

    pub fn eval(&self, x: f64) -> Result<Complex64> {
        self.check(x)?;
        (self.eval)(x)
    }

    /// Exact derivative, if the channel exists.
    pub fn derivative(&self, x: f64) -> Option<Result<Complex64>> {
        let d = self.deriv.as_ref()?;
        Some(self.check(x).and_then(|_| d(x)))
    }

    /// Central differences with two Richardson steps, step h, 2h, 4h.
    pub fn finite_difference(&self, x: f64, h: f64) -> Result<Complex64> {
        let central = |step: f64| -> Result<Complex64> {
            Ok((self.eval(x + step)? - self.eval(x - step)?) / (2.0 * step))
        };
        let d1 = central(h)?;
        let d2 = central(2.0 * h)?;
        let d4 = central(4.0 * h)?;
        let r1 = (4.0 * d1 - d2) / 3.0;
        let r2 = (4.0 * d2 - d4) / 3.0;
        Ok((16.0 * r1 - r2) / 15.0)
    }

    pub(crate) fn parts(&self) -> (&Eval, Option<&Eval>) {
        (&self.eval, self.deriv.as_ref())
    }

    pub(crate) fn from_parts(
        label: String,
        domain_min: f64,
        eval: Eval,
        deriv: Option<Eval>,
    ) -> Self {
        Self {
            label,
            domain_min,
            eval,
            deriv,
        }
    }

    /// φ(x) = x^{−z}, eigenstates of the Berry–Keating Hamiltonian.
    pub fn power(z: Complex64) -> Self {
        Self::new(format!("x^-({z})"), move |x| {
            finite("power", (-z * x.ln()).exp())
        })
        .with_derivative(move |x| finite("power derivative", -z * (-(z + 1.0) * x.ln()).exp()))
    }

    /// ψ_z(x) = −ζ(z, x + 1) with ψ′_z(x) = z ζ(z + 1, x + 1).
    pub fn hurwitz_eigenfunction(z: Complex64) -> Self {
        let params = EulerMaclaurinParams::default();
        Self::new(format!("psi_({z})"), move |x| {
            Ok(-hurwitz_zeta(z, x + 1.0, &params)?)
        })
        .with_derivative(move |x| {
            if z == Complex64::new(0.0, 0.0) {
                // ψ_0(x) = x + 1/2
                return Ok(Complex64::new(1.0, 0.0));
            }
            Ok(z * hurwitz_zeta(z + 1.0, x + 1.0, &params)?)
        })
    }

    /// ψ̃_z(x) = x^{−z} − (x + 1)^{−z}, eigenstates of Ĥ†.
    pub fn dual_state(z: Complex64) -> Self {
        Self::new(format!("dual_({z})"), move |x| {
            finite(
                "dual state",
                (-z * x.ln()).exp() - (-z * (x + 1.0).ln()).exp(),
            )
        })
        .with_derivative(move |x| {
            finite(
                "dual state derivative",
                -z * ((-(z + 1.0) * x.ln()).exp() - (-(z + 1.0) * (x + 1.0).ln()).exp()),
            )
        })
    }

    /// e^{ikx}.
    pub fn plane_wave(k: f64) -> Self {
        Self::new(format!("exp(i{k}x)"), move |x| {
            Ok(Complex64::from_polar(1.0, k * x))
        })
        .with_derivative(move |x| Ok(Complex64::i() * k * Complex64::from_polar(1.0, k * x)))
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(format!("const {c}"), move |_| Ok(c))
            .with_derivative(|_| Ok(Complex64::new(0.0, 0.0)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domain_is_enforced() {
        let f = AnalyticFunction::power(Complex64::new(0.5, 3.0));
        assert!(matches!(f.eval(0.0), Err(Error::Domain { .. })));
        assert!(matches!(f.eval(-1.0), Err(Error::Domain { .. })));
        assert!(f.eval(1e-3).is_ok());
    }

    #[test]
    fn exact_derivatives_match_richardson() {
        let z = Complex64::new(0.5, 14.134725141734695);
        let fns = [
            AnalyticFunction::power(z),
            AnalyticFunction::hurwitz_eigenfunction(z),
            AnalyticFunction::dual_state(z),
            AnalyticFunction::hurwitz_eigenfunction(Complex64::new(-2.0, 0.0)),
            AnalyticFunction::plane_wave(0.7),
        ];
        for f in &fns {
            for x in [2.0, 5.5, 13.0, 40.0] {
                let exact = f.derivative(x).unwrap().unwrap();
                let fd = f.finite_difference(x, 1e-3 * x).unwrap();
                assert!(
                    (exact - fd).norm() <= 1e-7 * exact.norm(),
                    "{} at {x}: {exact} vs {fd}",
                    f.label()
                );
            }
        }
    }
}
