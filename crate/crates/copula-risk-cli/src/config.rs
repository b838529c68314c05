//! JSON experiment configuration.
//!
//! A configuration names the three model ingredients (copula, safety
//! marginal, cyber marginal) plus an optional coupling block and an optional
//! evaluation grid. The safety marginal accepts either a lifecycle phase
//! name with a baseline offset or explicit Weibull parameters. Unknown keys
//! are rejected everywhere so typos fail loudly instead of silently running
//! a default.

use serde::{Deserialize, Serialize};

use copula_risk::copula::CopulaSpec;
use copula_risk::curve::{default_grid, time_grid};
use copula_risk::cyber::CyberParams;
use copula_risk::dynamic::DynamicParams;
use copula_risk::joint::JointScenario;
use copula_risk::safety::{LifecyclePhase, SafetyParams};
use copula_risk::Result;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub copula: CopulaSpec,
    pub safety: SafetyConfig,
    pub cyber: CyberParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dynamic: Option<DynamicParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
}

/// Safety marginal as either a phase name or explicit parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SafetyConfig {
    Phase(PhaseSafety),
    Explicit(SafetyParams),
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseSafety {
    /// One of "infant", "random", "wearout".
    pub phase: LifecyclePhase,
    /// Baseline failure probability already present at t = 0.
    #[serde(default)]
    pub f0_offset: f64,
}

/// Uniform evaluation grid from 0 to `t_max` with `n_points` nodes.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub t_max: f64,
    pub n_points: usize,
}

impl SafetyConfig {
    pub fn params(&self) -> Result<SafetyParams> {
        match self {
            SafetyConfig::Phase(p) => p.phase.params(p.f0_offset),
            SafetyConfig::Explicit(p) => {
                p.validate()?;
                Ok(*p)
            }
        }
    }
}

impl ExperimentConfig {
    pub fn to_scenario(&self) -> Result<JointScenario> {
        let grid = match self.grid {
            Some(g) => time_grid(g.t_max, g.n_points)?,
            None => default_grid(),
        };
        JointScenario::new(self.copula.clone(), self.safety.params()?, self.cyber, grid)
    }
}
