use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{finite, Error, Result};
use crate::special_fn::{nonpositive_integer, BernoulliTable};

/// How many terms of the asymptotic series to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Truncation {
    /// Stop at the smallest term before the series turns around.
    #[default]
    Auto,
    /// Keep terms `0..=n`.
    Fixed(usize),
}

/// The partial terms of Δ⁻¹x^{−z} ~ Σ_n B_n(−1)^n/n! · μ(μ−1)⋯(μ−n+1)/μ · x^{μ−n},
/// μ = 1 − z, and the truncated sum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesTruncation {
    pub z: Complex64,
    pub x: f64,
    pub terms: Vec<Complex64>,
    /// Index of the last term included in `sum`.
    pub optimal_index: usize,
    pub sum: Complex64,
    /// Magnitude of the first omitted nonzero term, or a roundoff bound when
    /// the series terminates.
    pub error_estimate: f64,
    /// True when the polynomial case was hit and every omitted term is zero.
    pub terminated: bool,
}

/// Rough size of the correction relative to the sum beyond which the
/// asymptotic route is no longer trusted.
const RELIABLE_REL: f64 = 1e-6;

impl SeriesTruncation {
    pub fn reliable(&self) -> bool {
        self.error_estimate <= RELIABLE_REL * self.sum.norm().max(f64::MIN_POSITIVE)
    }
}

/// Coefficient of x^{μ−n}: B_n(−1)^n/n! times the falling factorial μ^{(n)}/μ.
///
/// The falling factorial is accumulated as a product. It vanishes exactly
/// once μ − k hits zero, which is what makes the trivial-zero series finite.
pub(crate) fn coefficients(z: Complex64, last: usize) -> Result<Vec<Complex64>> {
    let table = BernoulliTable::global();
    if last > table.capacity() {
        return Err(Error::Capacity {
            requested: last,
            capacity: table.capacity(),
        });
    }
    let mu = Complex64::new(1.0, 0.0) - z;
    let mut out = Vec::with_capacity(last + 1);
    out.push(mu.inv());
    let mut falling = Complex64::new(1.0, 0.0);
    for n in 1..=last {
        if n >= 2 {
            falling *= mu - (n - 1) as f64;
        }
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        out.push(falling * (sign * table.over_factorial(n)?));
    }
    Ok(out)
}

pub fn asymptotic_series(z: Complex64, x: f64, truncation: Truncation) -> Result<SeriesTruncation> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain { x, min: 0.0 });
    }
    if z == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole { at: 1 });
    }
    let capacity = BernoulliTable::global().capacity();
    let mu = Complex64::new(1.0, 0.0) - z;
    // μ a positive integer m: every coefficient past n = m is zero.
    let polynomial_degree = nonpositive_integer(-mu).map(|m| (-m) as usize);
    let last = match (truncation, polynomial_degree) {
        (Truncation::Fixed(n), _) if n > capacity => {
            return Err(Error::Capacity {
                requested: n,
                capacity,
            })
        }
        (Truncation::Fixed(n), _) => (n + 2).min(capacity),
        (Truncation::Auto, Some(m)) => m.min(capacity),
        (Truncation::Auto, None) => capacity,
    };
    let coeffs = coefficients(z, last)?;
    let ln_x = x.ln();
    let terms: Vec<Complex64> = coeffs
        .iter()
        .enumerate()
        .map(|(n, c)| {
            if *c == Complex64::new(0.0, 0.0) {
                *c
            } else {
                c * ((mu - n as f64) * ln_x).exp()
            }
        })
        .collect();

    let optimal_index = match truncation {
        Truncation::Fixed(n) => n.min(terms.len() - 1),
        Truncation::Auto => match polynomial_degree {
            Some(_) => terms.len() - 1,
            None => turnaround(&terms),
        },
    };
    let sum: Complex64 = terms[..=optimal_index].iter().sum();
    finite("asymptotic series", sum)?;
    let omitted = terms[optimal_index + 1..]
        .iter()
        .map(|t| t.norm())
        .find(|m| *m > 0.0);
    let terminated = polynomial_degree.is_some_and(|m| optimal_index >= m);
    // x^{μ−n} carries a phase error of about |μ| ln x ulps.
    let conditioning = 1.0 + mu.norm() * ln_x.abs();
    let roundoff = 4.0
        * f64::EPSILON
        * conditioning
        * terms[..=optimal_index]
            .iter()
            .map(|t| t.norm())
            .sum::<f64>();
    let error_estimate = if terminated {
        roundoff
    } else {
        // Running out of table before the turnaround: the smallest computed
        // term is the best available bound on what is left.
        omitted.unwrap_or_else(|| terms[optimal_index].norm()) + roundoff
    };
    Ok(SeriesTruncation {
        z,
        x,
        terms,
        optimal_index,
        sum,
        error_estimate,
        terminated,
    })
}

/// Last index to keep: the smallest nonzero term past n = 1 before the
/// magnitudes start to grow again. Odd terms beyond n = 1 vanish and are
/// skipped.
fn turnaround(terms: &[Complex64]) -> usize {
    let mut best = 1.min(terms.len() - 1);
    let mut best_mag = f64::INFINITY;
    for (n, t) in terms.iter().enumerate().skip(2) {
        let m = t.norm();
        if m == 0.0 {
            continue;
        }
        if m >= best_mag {
            break;
        }
        best = n;
        best_mag = m;
    }
    best
}
