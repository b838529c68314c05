//! Hardware (safety) failure marginal.
//!
//! Failures of the physical vehicle platform follow a Weibull law
//!
//! W(t) = 1 - exp(-(t / lambda)^K),
//!
//! where the shape K selects the lifecycle phase: K < 1 gives a decreasing
//! hazard (early life), K = 1 a constant hazard (useful life, the
//! exponential case) and K > 1 an increasing hazard (wear-out). An optional
//! baseline offset F0 models the probability mass of units that are already
//! failed or non-conforming at time zero, so the marginal used in the joint
//! model is
//!
//! F_f(t) = min(1, F0 + W(t)),
//!
//! a CDF with an atom of size F0 at t = 0.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::gamma_fn;

/// Weibull lifecycle phases with the scale calibrated so the mean time to
/// failure is about 12.5 years of continuous operation (109,500 hours).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LifecyclePhase {
    /// Decreasing hazard, K = 0.5.
    #[serde(rename = "infant")]
    InfantMortality,
    /// Constant hazard, K = 1.
    #[serde(rename = "random")]
    RandomFailure,
    /// Increasing hazard, K = 3.
    #[serde(rename = "wearout")]
    WearOut,
}

impl LifecyclePhase {
    pub fn shape(self) -> f64 {
        match self {
            LifecyclePhase::InfantMortality => 0.5,
            LifecyclePhase::RandomFailure => 1.0,
            LifecyclePhase::WearOut => 3.0,
        }
    }

    /// Scale parameter in hours.
    ///
    /// The infant-mortality scale is MTTF / Gamma(1 + 1/K) = 109500 / 2
    /// rounded, and the wear-out scale is the conventional rounding of
    /// 109500 / Gamma(4/3).
    pub fn scale(self) -> f64 {
        match self {
            LifecyclePhase::InfantMortality => 54_750.0,
            LifecyclePhase::RandomFailure => 109_500.0,
            LifecyclePhase::WearOut => 122_600.0,
        }
    }

    pub fn params(self, f0_offset: f64) -> Result<SafetyParams> {
        SafetyParams::new(self.shape(), self.scale(), f0_offset)
    }

    pub const ALL: [LifecyclePhase; 3] = [
        LifecyclePhase::InfantMortality,
        LifecyclePhase::RandomFailure,
        LifecyclePhase::WearOut,
    ];
}

/// Parameters of the safety failure marginal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SafetyParams {
    /// Weibull shape K > 0.
    pub shape_k: f64,
    /// Weibull scale lambda > 0, in the same time unit as `t` (hours here).
    pub scale_lambda: f64,
    /// Baseline failure probability F0 in [0, 1), an atom at t = 0.
    #[serde(default)]
    pub f0_offset: f64,
}

impl SafetyParams {
    pub fn new(shape_k: f64, scale_lambda: f64, f0_offset: f64) -> Result<Self> {
        let p = SafetyParams {
            shape_k,
            scale_lambda,
            f0_offset,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.shape_k > 0.0 && self.shape_k.is_finite()) {
            return Err(Error::invalid(format!(
                "safety shape_k must be positive and finite, got {}",
                self.shape_k
            )));
        }
        if !(self.scale_lambda > 0.0 && self.scale_lambda.is_finite()) {
            return Err(Error::invalid(format!(
                "safety scale_lambda must be positive and finite, got {}",
                self.scale_lambda
            )));
        }
        if !(0.0..1.0).contains(&self.f0_offset) {
            return Err(Error::invalid(format!(
                "safety f0_offset must lie in [0, 1), got {}",
                self.f0_offset
            )));
        }
        Ok(())
    }

    fn check_time(t: f64) -> Result<()> {
        if !(t >= 0.0) {
            return Err(Error::domain(format!(
                "safety time must be non-negative, got {t}"
            )));
        }
        Ok(())
    }

    /// Pure Weibull component W(t) without the baseline offset.
    pub fn weibull_component(&self, t: f64) -> Result<f64> {
        Self::check_time(t)?;
        Ok(-(-(t / self.scale_lambda).powf(self.shape_k)).exp_m1())
    }

    /// Failure probability F_f(t) = min(1, F0 + W(t)).
    pub fn cdf(&self, t: f64) -> Result<f64> {
        Ok((self.f0_offset + self.weibull_component(t)?).min(1.0))
    }

    /// Density of the continuous part, zero wherever the CDF is clamped at 1.
    /// For K < 1 the density diverges as t -> 0, so t = 0 is out of domain.
    pub fn pdf(&self, t: f64) -> Result<f64> {
        Self::check_time(t)?;
        if t == 0.0 && self.shape_k < 1.0 {
            return Err(Error::domain(
                "safety density is singular at t = 0 for shape < 1",
            ));
        }
        if self.cdf(t)? >= 1.0 {
            return Ok(0.0);
        }
        let z = t / self.scale_lambda;
        Ok(self.shape_k / self.scale_lambda
            * z.powf(self.shape_k - 1.0)
            * (-z.powf(self.shape_k)).exp())
    }

    /// Hazard rate of the continuous part.
    pub fn hazard(&self, t: f64) -> Result<f64> {
        let f = self.cdf(t)?;
        if f >= 1.0 {
            return Err(Error::domain(format!(
                "safety hazard undefined at t = {t}: failure probability has reached 1"
            )));
        }
        Ok(self.pdf(t)? / (1.0 - f))
    }

    /// Quantile of F_f. Levels below the atom F0 are unreachable because no
    /// time maps to them; `p = f0_offset` maps to t = 0.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&p) {
            return Err(Error::domain(format!(
                "safety quantile level must lie in [0, 1), got {p}"
            )));
        }
        if p < self.f0_offset {
            return Err(Error::domain(format!(
                "safety quantile level {p} lies below the baseline atom {}",
                self.f0_offset
            )));
        }
        let w = p - self.f0_offset;
        Ok(self.scale_lambda * (-(-w).ln_1p()).powf(1.0 / self.shape_k))
    }

    /// Mean time to failure of the Weibull component,
    /// lambda * Gamma(1 + 1/K).
    pub fn mttf(&self) -> Result<f64> {
        Ok(self.scale_lambda * gamma_fn(1.0 + 1.0 / self.shape_k)?)
    }
}

/// Scale parameter that gives a Weibull with shape `shape_k` the target mean
/// time to failure.
pub fn scale_from_mttf(mttf: f64, shape_k: f64) -> Result<f64> {
    if !(mttf > 0.0 && mttf.is_finite()) {
        return Err(Error::invalid(format!(
            "mttf must be positive and finite, got {mttf}"
        )));
    }
    if !(shape_k > 0.0 && shape_k.is_finite()) {
        return Err(Error::invalid(format!(
            "shape_k must be positive and finite, got {shape_k}"
        )));
    }
    Ok(mttf / gamma_fn(1.0 + 1.0 / shape_k)?)
}
