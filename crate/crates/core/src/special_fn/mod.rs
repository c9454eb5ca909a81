//! Complex special functions: Bernoulli numbers and polynomials, log-gamma,
//! Hurwitz and Riemann zeta.

mod bernoulli;
mod gamma;
mod zeta;

pub use bernoulli::{
    bernoulli_number, bernoulli_polynomial, bernoulli_polynomial_exact, Bernoulli, BernoulliTable,
    BERNOULLI_CAPACITY,
};
pub use gamma::{gamma, log_gamma, nonpositive_integer, riemann_siegel_theta};
pub use zeta::{
    dirichlet_eta, hurwitz_zeta, hurwitz_zeta_estimate, reflection_residual, riemann_zeta,
    EulerMaclaurinParams, HurwitzValue, MAX_CORRECTION_ORDER,
};

/// Double-precision complex scalar used throughout the crate.
pub type ComplexValue = num_complex::Complex64;
