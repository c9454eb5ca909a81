use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Logarithmic,
}

/// Evaluation points on [x_min, x_max].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self::logarithmic(2.0, 50.0, 200)
    }
}

impl GridSpec {
    pub fn logarithmic(x_min: f64, x_max: f64, count: usize) -> Self {
        Self {
            x_min,
            x_max,
            count,
            spacing: Spacing::Logarithmic,
        }
    }

    pub fn linear(x_min: f64, x_max: f64, count: usize) -> Self {
        Self {
            x_min,
            x_max,
            count,
            spacing: Spacing::Linear,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x_min > 0.0 && self.x_max >= self.x_min && self.x_max.is_finite()) {
            return Err(Error::Configuration(format!(
                "grid needs 0 < x_min <= x_max (got {}..{})",
                self.x_min, self.x_max
            )));
        }
        if self.count == 0 || (self.count == 1 && self.x_max != self.x_min) {
            return Err(Error::Configuration(format!(
                "grid count {} too small",
                self.count
            )));
        }
        Ok(())
    }

    /// Fails unless every point exceeds `bound`.
    pub fn require_min_above(&self, bound: f64, why: &str) -> Result<()> {
        if self.x_min > bound {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "{why}: grid x_min = {} must exceed {bound}",
                self.x_min
            )))
        }
    }

    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.x_min];
        }
        let n = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    return self.x_max;
                }
                let s = i as f64 / n;
                match self.spacing {
                    Spacing::Linear => self.x_min + s * (self.x_max - self.x_min),
                    Spacing::Logarithmic => self.x_min * (self.x_max / self.x_min).powf(s),
                }
            })
            .collect()
    }

    /// Parses `lo:hi:n` (logarithmic spacing).
    pub fn parse(spec: &str) -> Result<Self> {
        let parts: Vec<&str> = spec.split(':').collect();
        let bad = || Error::Configuration(format!("grid '{spec}' is not lo:hi:n"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
        let grid = Self::logarithmic(lo, hi, n);
        grid.validate()?;
        Ok(grid)
    }
}
