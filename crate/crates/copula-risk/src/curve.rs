//! Time-indexed probability curves.
//!
//! A curve is a labelled vector of (t, value) samples of some probability
//! function, optionally with a per-point standard error (used by the Monte
//! Carlo estimator). Curves serialize to JSON via serde and to a minimal
//! CSV format with a `t,value[,stderr]` header, `.` decimal separator and
//! `\n` line endings.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A labelled probability curve sampled on a time grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityCurve {
    /// Human-readable description of what the values are.
    pub label: String,
    /// Sample times in hours.
    pub times: Vec<f64>,
    /// Probabilities in [0, 1], one per time.
    pub values: Vec<f64>,
    /// Optional standard errors, one per time.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stderr: Option<Vec<f64>>,
}

impl ProbabilityCurve {
    pub fn new(label: impl Into<String>, times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let curve = ProbabilityCurve {
            label: label.into(),
            times,
            values,
            stderr: None,
        };
        curve.validate()?;
        Ok(curve)
    }

    pub fn with_stderr(
        label: impl Into<String>,
        times: Vec<f64>,
        values: Vec<f64>,
        stderr: Vec<f64>,
    ) -> Result<Self> {
        let curve = ProbabilityCurve {
            label: label.into(),
            times,
            values,
            stderr: Some(stderr),
        };
        curve.validate()?;
        Ok(curve)
    }

    pub fn validate(&self) -> Result<()> {
        if self.values.len() != self.times.len() {
            return Err(Error::invalid(format!(
                "curve '{}' has {} values for {} times",
                self.label,
                self.values.len(),
                self.times.len()
            )));
        }
        if let Some(se) = &self.stderr {
            if se.len() != self.times.len() {
                return Err(Error::invalid(format!(
                    "curve '{}' has {} stderr entries for {} times",
                    self.label,
                    se.len(),
                    self.times.len()
                )));
            }
            if se.iter().any(|s| !(*s >= 0.0)) {
                return Err(Error::invalid(format!(
                    "curve '{}' has a negative or non-finite stderr",
                    self.label
                )));
            }
        }
        validate_grid(&self.times)?;
        if let Some(bad) = self.values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::invalid(format!(
                "curve '{}' has a value outside [0, 1]: {bad}",
                self.label
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Render as CSV with a header row. Numbers use the shortest decimal
    /// representation that round-trips, with `.` as the decimal separator.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        match &self.stderr {
            Some(se) => {
                out.push_str("t,value,stderr\n");
                for ((t, v), s) in self.times.iter().zip(&self.values).zip(se) {
                    out.push_str(&format!("{t},{v},{s}\n"));
                }
            }
            None => {
                out.push_str("t,value\n");
                for (t, v) in self.times.iter().zip(&self.values) {
                    out.push_str(&format!("{t},{v}\n"));
                }
            }
        }
        out
    }
}

/// Check that a time grid is finite, non-negative and strictly increasing.
pub fn validate_grid(grid: &[f64]) -> Result<()> {
    for (i, &t) in grid.iter().enumerate() {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::invalid(format!(
                "grid point {i} must be non-negative and finite, got {t}"
            )));
        }
        if i > 0 && t <= grid[i - 1] {
            return Err(Error::invalid(format!(
                "grid must be strictly increasing, got {} then {t} at index {i}",
                grid[i - 1]
            )));
        }
    }
    Ok(())
}

/// `n_points` uniformly spaced times covering [0, t_max].
pub fn time_grid(t_max: f64, n_points: usize) -> Result<Vec<f64>> {
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::invalid(format!(
            "t_max must be positive and finite, got {t_max}"
        )));
    }
    if n_points < 2 {
        return Err(Error::invalid(format!(
            "a grid needs at least 2 points, got {n_points}"
        )));
    }
    let h = t_max / (n_points - 1) as f64;
    Ok((0..n_points).map(|i| i as f64 * h).collect())
}

/// The default evaluation grid: 401 uniform points on [0, 200] hours, fine
/// enough to resolve the patch-time kink at half-hour resolution.
pub fn default_grid() -> Vec<f64> {
    time_grid(200.0, 401).expect("static grid parameters are valid")
}

/// Sample a CDF-like function on a grid, in parallel, into a curve.
pub fn curve_from_cdf<F>(label: impl Into<String>, grid: &[f64], cdf: F) -> Result<ProbabilityCurve>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    validate_grid(grid)?;
    let values: Vec<f64> = grid.par_iter().map(|&t| cdf(t)).collect::<Result<_>>()?;
    ProbabilityCurve::new(label, grid.to_vec(), values)
}
