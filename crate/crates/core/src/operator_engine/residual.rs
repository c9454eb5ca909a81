use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::GridSpec;
use crate::error::Result;

const REFERENCE_FLOOR: f64 = 1e-300;

/// Worst-case deviation of an identity over a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub identity: String,
    pub grid: GridSpec,
    pub max_abs: f64,
    pub max_rel: f64,
    /// Point where `max_rel` occurred.
    pub worst_x: f64,
}

impl ResidualReport {
    /// Evaluates `pair(x) = (computed, reference)` at every grid point.
    pub fn over_grid<F>(identity: impl Into<String>, grid: GridSpec, pair: F) -> Result<Self>
    where
        F: FnMut(f64) -> Result<(Complex64, Complex64)>,
    {
        grid.validate()?;
        Self::over_points(identity, grid, &grid.points(), pair)
    }

    pub fn over_points<F>(
        identity: impl Into<String>,
        grid: GridSpec,
        points: &[f64],
        mut pair: F,
    ) -> Result<Self>
    where
        F: FnMut(f64) -> Result<(Complex64, Complex64)>,
    {
        let mut report = Self {
            identity: identity.into(),
            grid,
            max_abs: 0.0,
            max_rel: 0.0,
            worst_x: points.first().copied().unwrap_or(grid.x_min),
        };
        for &x in points {
            let (lhs, rhs) = pair(x)?;
            let abs = (lhs - rhs).norm();
            let rel = abs / rhs.norm().max(REFERENCE_FLOOR);
            report.max_abs = report.max_abs.max(abs);
            if rel > report.max_rel {
                report.max_rel = rel;
                report.worst_x = x;
            }
        }
        Ok(report)
    }
}
