//! Dynamic failure model: each marginal distorted by the other failure mode.
//!
//! The static joint model treats the two failure processes as coupled only
//! through the copula. The dynamic model additionally perturbs each marginal
//! by the conditional sensitivity of the copula:
//!
//! * SFDF, the security failure probability under functional-fault impact,
//!
//!   SFDF(t) = F_c(t) * (1 + O1 N1 (dC/du(F_f(t), F_c(t)) - F_c(t))),
//!
//! * SFDC, the safety failure probability under cyberattack impact, which
//!   before a security failure at t_cut is
//!
//!   SFDC(t) = F_f(t) * (1 + O2 N2(t) (dC/dv(F_f(t), F_c(t)) - F_f(t))),
//!
//!   with N2(t) = (min(N(t), n_threshold)/n_threshold)^omega the attack
//!   strength. From t_cut on, the attack history is frozen: in the default
//!   `delta-freeze` mode the curve continues parallel to F_f (continuous at
//!   t_cut), while `literal` mode adds the full frozen term to F_f(t),
//!   producing a jump at t_cut.
//!
//! Both distortions are perturbation constructions, not guaranteed CDFs, so
//! outputs are clamped to [0, 1] and curve builders count how many grid
//! points needed clamping.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::ProbabilityCurve;
use crate::cyber::CyberParams;
use crate::error::{Error, Result};
use crate::joint::JointScenario;

/// Behaviour of SFDC at and after the security-failure time t_cut.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CutMode {
    /// Continue parallel to the safety marginal, continuous at t_cut.
    #[default]
    DeltaFreeze,
    /// Add the full frozen distortion term to the safety marginal, which
    /// jumps at t_cut. Kept selectable for auditing the construction.
    Literal,
}

/// Intensity factors and cut behaviour of the dynamic model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DynamicParams {
    /// Security-side intensity factor O1 >= 0.
    pub o1: f64,
    /// Security-side intensity N1, conventionally fixed at 1.
    #[serde(default = "default_n1")]
    pub n1: f64,
    /// Safety-side intensity factor O2 >= 0.
    pub o2: f64,
    /// Attack scale exponent omega > 0 in N2.
    pub omega: f64,
    /// Time of the security failure; `INFINITY` (the default, omitted in
    /// JSON) means no security failure occurs in the horizon.
    #[serde(default = "default_t_cut", skip_serializing_if = "is_infinite")]
    pub t_cut: f64,
    #[serde(default)]
    pub mode: CutMode,
}

fn default_n1() -> f64 {
    1.0
}

fn default_t_cut() -> f64 {
    f64::INFINITY
}

fn is_infinite(x: &f64) -> bool {
    x.is_infinite()
}

impl DynamicParams {
    pub fn validate(&self) -> Result<()> {
        for (name, value) in [("o1", self.o1), ("o2", self.o2)] {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(Error::invalid(format!(
                    "dynamic {name} must be non-negative and finite, got {value}"
                )));
            }
        }
        if !(self.n1 > 0.0 && self.n1.is_finite()) {
            return Err(Error::invalid(format!(
                "dynamic n1 must be positive and finite, got {}",
                self.n1
            )));
        }
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            return Err(Error::invalid(format!(
                "dynamic omega must be positive and finite, got {}",
                self.omega
            )));
        }
        if !(self.t_cut > 0.0) {
            return Err(Error::invalid(format!(
                "dynamic t_cut must be positive, got {}",
                self.t_cut
            )));
        }
        Ok(())
    }
}

/// A probability curve from the dynamic model together with the number of
/// grid points whose raw value fell outside [0, 1] before clamping.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DynamicCurve {
    pub curve: ProbabilityCurve,
    pub clamp_events: usize,
}

/// Attack strength N2(t) = (min(N(t), n_threshold)/n_threshold)^omega.
/// Non-decreasing in t, 0 at t = 0 and 1 once the attempt cap is reached.
pub fn attack_intensity_n2(t: f64, cyber: &CyberParams, omega: f64) -> Result<f64> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::invalid(format!(
            "omega must be positive and finite, got {omega}"
        )));
    }
    let n_eff = cyber.effective_attempts(t)?;
    if n_eff == 0.0 {
        return Ok(0.0);
    }
    Ok((n_eff / cyber.n_threshold).powf(omega))
}

fn clamp01(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

fn sfdf_raw(t: f64, scenario: &JointScenario, params: &DynamicParams) -> Result<f64> {
    let fc = scenario.cyber.cdf(t)?;
    if params.o1 == 0.0 || fc == 0.0 {
        return Ok(fc);
    }
    let ff = scenario.safety.cdf(t)?;
    let partial = scenario.copula.partial_wrt_u(ff, fc)?;
    Ok(fc * (1.0 + params.o1 * params.n1 * (partial - fc)))
}

/// Security failure probability under functional-fault impact, clamped to
/// [0, 1]. Reduces to F_c exactly when O1 = 0 or under independence.
pub fn sfdf(t: f64, scenario: &JointScenario, params: &DynamicParams) -> Result<f64> {
    params.validate()?;
    scenario.validate()?;
    Ok(clamp01(sfdf_raw(t, scenario, params)?))
}

fn sfdc_pre_raw(t: f64, scenario: &JointScenario, params: &DynamicParams) -> Result<f64> {
    let ff = scenario.safety.cdf(t)?;
    if params.o2 == 0.0 || ff == 0.0 {
        return Ok(ff);
    }
    let n2 = attack_intensity_n2(t, &scenario.cyber, params.omega)?;
    if n2 == 0.0 {
        return Ok(ff);
    }
    let fc = scenario.cyber.cdf(t)?;
    let partial = scenario.copula.partial_wrt_v(ff, fc)?;
    Ok(ff * (1.0 + params.o2 * n2 * (partial - ff)))
}

fn sfdc_raw(t: f64, scenario: &JointScenario, params: &DynamicParams) -> Result<f64> {
    if t < params.t_cut {
        return sfdc_pre_raw(t, scenario, params);
    }
    let ff = scenario.safety.cdf(t)?;
    let frozen = sfdc_pre_raw(params.t_cut, scenario, params)?;
    match params.mode {
        CutMode::DeltaFreeze => {
            let delta = clamp01(frozen) - scenario.safety.cdf(params.t_cut)?;
            Ok(ff + delta)
        }
        CutMode::Literal => Ok(ff + frozen),
    }
}

/// Safety failure probability under cyberattack impact, clamped to [0, 1].
/// Piecewise at t_cut per the selected `CutMode`; reduces to F_f exactly
/// when O2 = 0.
pub fn sfdc(t: f64, scenario: &JointScenario, params: &DynamicParams) -> Result<f64> {
    params.validate()?;
    scenario.validate()?;
    Ok(clamp01(sfdc_raw(t, scenario, params)?))
}

fn dynamic_curve<F>(label: String, grid: &[f64], raw: F) -> Result<DynamicCurve>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let samples: Vec<(f64, bool)> = grid
        .par_iter()
        .map(|&t| {
            let r = raw(t)?;
            Ok((clamp01(r), !(0.0..=1.0).contains(&r)))
        })
        .collect::<Result<_>>()?;
    let clamp_events = samples.iter().filter(|(_, clamped)| *clamped).count();
    let values = samples.into_iter().map(|(v, _)| v).collect();
    Ok(DynamicCurve {
        curve: ProbabilityCurve::new(label, grid.to_vec(), values)?,
        clamp_events,
    })
}

/// SFDF sampled over the scenario grid, with a clamp-event count.
pub fn sfdf_curve(scenario: &JointScenario, params: &DynamicParams) -> Result<DynamicCurve> {
    params.validate()?;
    scenario.validate()?;
    dynamic_curve(
        format!("sfdf {}", scenario.copula.family_name()),
        &scenario.grid,
        |t| sfdf_raw(t, scenario, params),
    )
}

/// SFDC sampled over the scenario grid, with a clamp-event count.
pub fn sfdc_curve(scenario: &JointScenario, params: &DynamicParams) -> Result<DynamicCurve> {
    params.validate()?;
    scenario.validate()?;
    dynamic_curve(
        format!("sfdc {}", scenario.copula.family_name()),
        &scenario.grid,
        |t| sfdc_raw(t, scenario, params),
    )
}

/// One SFDC curve per patch release time. For positive dependence the
/// t = 200 values are non-decreasing in the patch time; for negative
/// dependence the ordering may reverse.
pub fn sweep_patch_time_sfdc(
    scenario: &JointScenario,
    params: &DynamicParams,
    patch_times: &[f64],
) -> Result<Vec<DynamicCurve>> {
    params.validate()?;
    scenario.validate()?;
    if patch_times.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
        return Err(Error::invalid("patch times must be positive and finite"));
    }
    if patch_times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("patch times must be strictly increasing"));
    }
    patch_times
        .iter()
        .map(|&t_patch| {
            let mut s = scenario.clone();
            s.cyber.t_patch = t_patch;
            let mut dc = sfdc_curve(&s, params)?;
            dc.curve.label = format!("sfdc t_patch={t_patch}");
            Ok(dc)
        })
        .collect()
}
