//! Bernoulli numbers (B₁ = −1/2 convention) and Bernoulli polynomials.
//!
//! The table is built once from the recurrence
//! Σ_{k=0}^{n} C(n+1, k) B_k = 0 in exact rational arithmetic and then
//! projected to binary64.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest index held by the table.
pub const BERNOULLI_CAPACITY: usize = 64;

/// One table entry.
#[derive(Debug, Clone, PartialEq)]
pub struct Bernoulli {
    pub exact: BigRational,
    pub value: f64,
}

#[derive(Debug)]
pub struct BernoulliTable {
    exact: Vec<BigRational>,
    values: Vec<f64>,
    /// B_n / n!, rounded once from the exact quotient.
    over_factorial: Vec<f64>,
}

impl BernoulliTable {
    fn build(capacity: usize) -> Self {
        let mut exact: Vec<BigRational> = Vec::with_capacity(capacity + 1);
        exact.push(BigRational::one());
        for n in 1..=capacity {
            // B_n = -1/(n+1) Σ_{k<n} C(n+1, k) B_k
            let mut acc = BigRational::zero();
            let mut binom = BigInt::one();
            for (k, b) in exact.iter().enumerate() {
                acc += b * BigRational::from_integer(binom.clone());
                binom = binom * BigInt::from(n + 1 - k) / BigInt::from(k + 1);
            }
            exact.push(-acc / BigRational::from_integer(BigInt::from(n + 1)));
        }
        let values = exact.iter().map(rational_to_f64).collect();
        let mut factorial = BigInt::one();
        let mut over_factorial = Vec::with_capacity(capacity + 1);
        for (n, b) in exact.iter().enumerate() {
            if n > 0 {
                factorial *= BigInt::from(n);
            }
            over_factorial.push(rational_to_f64(
                &(b / BigRational::from_integer(factorial.clone())),
            ));
        }
        Self {
            exact,
            values,
            over_factorial,
        }
    }

    /// Shared table, built on first use.
    pub fn global() -> &'static BernoulliTable {
        static TABLE: OnceLock<BernoulliTable> = OnceLock::new();
        TABLE.get_or_init(|| BernoulliTable::build(BERNOULLI_CAPACITY))
    }

    pub fn capacity(&self) -> usize {
        self.exact.len() - 1
    }

    fn check(&self, n: usize) -> Result<()> {
        if n > self.capacity() {
            Err(Error::Capacity {
                requested: n,
                capacity: self.capacity(),
            })
        } else {
            Ok(())
        }
    }

    pub fn exact(&self, n: usize) -> Result<&BigRational> {
        self.check(n)?;
        Ok(&self.exact[n])
    }

    pub fn value(&self, n: usize) -> Result<f64> {
        self.check(n)?;
        Ok(self.values[n])
    }

    /// B_n / n! as a double.
    pub fn over_factorial(&self, n: usize) -> Result<f64> {
        self.check(n)?;
        Ok(self.over_factorial[n])
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    // Both parts stay below 2^1023 for n <= 64, but to_f64 on the ratio
    // rounds only once.
    r.to_f64().unwrap_or_else(|| {
        r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
    })
}

/// The n-th Bernoulli number, exact and rounded.
pub fn bernoulli_number(n: usize) -> Result<Bernoulli> {
    let table = BernoulliTable::global();
    Ok(Bernoulli {
        exact: table.exact(n)?.clone(),
        value: table.value(n)?,
    })
}

/// B_n(x) = Σ_k C(n, k) B_k x^{n−k}, evaluated by Horner in the descending
/// powers of x.
pub fn bernoulli_polynomial(n: usize, x: f64) -> Result<f64> {
    let table = BernoulliTable::global();
    table.check(n)?;
    // coefficient of x^{n-k} is C(n,k) B_k
    let mut acc = 0.0;
    let mut binom = 1.0_f64;
    let mut coeffs = Vec::with_capacity(n + 1);
    for k in 0..=n {
        coeffs.push(binom * table.values[k]);
        binom = binom * (n - k) as f64 / (k + 1) as f64;
    }
    for c in coeffs {
        acc = acc * x + c;
    }
    Ok(acc)
}

/// Exact rational evaluation of B_n(x).
pub fn bernoulli_polynomial_exact(n: usize, x: &BigRational) -> Result<BigRational> {
    let table = BernoulliTable::global();
    table.check(n)?;
    let mut acc = BigRational::zero();
    let mut binom = BigInt::one();
    for k in 0..=n {
        acc = acc * x + BigRational::from_integer(binom.clone()) * &table.exact[k];
        binom = binom * BigInt::from(n - k) / BigInt::from(k + 1);
    }
    Ok(acc)
}
