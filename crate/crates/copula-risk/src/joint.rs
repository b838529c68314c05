//! Joint failure probability of the safety and security marginals.
//!
//! With F_f the hardware failure CDF, F_c the cyber failure CDF and C a
//! copula, the probability that both failure modes have occurred by time t
//! is
//!
//! P_j(t) = P(T_f <= t, T_c <= t) = C(F_f(t), F_c(t)).
//!
//! Two one-parameter families of experiments are built on top of this
//! evaluation: sweeping the copula's dependence parameter (stronger positive
//! dependence raises P_j pointwise) and sweeping the patch release time
//! (an earlier patch lowers the cyber marginal, hence P_j, for t past the
//! patch).

use serde::{Deserialize, Serialize};

use crate::copula::CopulaSpec;
use crate::curve::{curve_from_cdf, default_grid, validate_grid, ProbabilityCurve};
use crate::cyber::CyberParams;
use crate::error::{Error, Result};
use crate::safety::SafetyParams;

/// A complete description of one joint-failure experiment: the dependence
/// structure, both marginals and the evaluation grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JointScenario {
    pub copula: CopulaSpec,
    pub safety: SafetyParams,
    pub cyber: CyberParams,
    /// Evaluation times; strictly increasing, non-negative.
    #[serde(default = "default_grid")]
    pub grid: Vec<f64>,
}

impl JointScenario {
    pub fn new(
        copula: CopulaSpec,
        safety: SafetyParams,
        cyber: CyberParams,
        grid: Vec<f64>,
    ) -> Result<Self> {
        let s = JointScenario {
            copula,
            safety,
            cyber,
            grid,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        self.copula.validate()?;
        self.safety.validate()?;
        self.cyber.validate()?;
        validate_grid(&self.grid)
    }

    /// P_j(t) = C(F_f(t), F_c(t)).
    pub fn joint_failure_prob(&self, t: f64) -> Result<f64> {
        self.copula
            .cdf(self.safety.cdf(t)?, self.cyber.cdf(t)?)
    }

    /// The joint failure probability sampled over the scenario grid.
    pub fn joint_curve(&self) -> Result<ProbabilityCurve> {
        self.validate()?;
        curve_from_cdf(
            format!("joint {}", self.copula.family_name()),
            &self.grid,
            |t| self.joint_failure_prob(t),
        )
    }

    /// One joint curve per dependence-parameter value, labelled by value.
    /// For positive dependence the curves are pointwise ordered in the
    /// parameter wherever both marginals are strictly inside (0, 1).
    pub fn sweep_dependence(&self, values: &[f64]) -> Result<Vec<ProbabilityCurve>> {
        self.validate()?;
        values
            .iter()
            .map(|&value| {
                let mut s = self.clone();
                s.copula = self.copula.with_dependence(value)?;
                let mut curve = s.joint_curve()?;
                curve.label = format!(
                    "{} {}={value}",
                    s.copula.family_name(),
                    s.copula.dependence_parameter_name()
                );
                Ok(curve)
            })
            .collect()
    }

    /// One joint curve per patch release time, labelled by patch time. The
    /// curves coincide up to the earliest patch time and are ordered after
    /// it: an earlier patch gives a lower-or-equal joint failure
    /// probability.
    pub fn sweep_patch_time(&self, patch_times: &[f64]) -> Result<Vec<ProbabilityCurve>> {
        self.validate()?;
        if patch_times.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
            return Err(Error::invalid(
                "patch times must be positive and finite",
            ));
        }
        if patch_times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("patch times must be strictly increasing"));
        }
        patch_times
            .iter()
            .map(|&t_patch| {
                let mut s = self.clone();
                s.cyber.t_patch = t_patch;
                let mut curve = s.joint_curve()?;
                curve.label = format!("t_patch={t_patch}");
                Ok(curve)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::time_grid;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn cyber_example(t_patch: f64) -> CyberParams {
        CyberParams {
            alpha1: 1.2,
            beta1: 1.1,
            p0: 3e-5,
            gamma: 0.1,
            n_threshold: 1e4,
            t_patch,
            mu: 0.018,
            mu2: 0.018,
        }
    }

    fn scenario(copula: CopulaSpec, f0: f64, t_patch: f64) -> JointScenario {
        JointScenario::new(
            copula,
            SafetyParams::new(0.5, 54_750.0, f0).unwrap(),
            cyber_example(t_patch),
            vec![50.0, 100.0, 150.0, 200.0],
        )
        .unwrap()
    }

    #[test]
    fn independence_factorizes() {
        let s = scenario(CopulaSpec::Normal { rho: 0.0 }, 0.0, 60.0);
        let p = s.joint_failure_prob(200.0).unwrap();
        let product = s.safety.cdf(200.0).unwrap() * s.cyber.cdf(200.0).unwrap();
        assert_abs_diff_eq!(p, product, epsilon = 1e-12);
        assert_relative_eq!(p, 2.586_166_799_1e-2, max_relative = 1e-8);
        // The raw independence family gives the same number.
        let ind = scenario(CopulaSpec::Independence, 0.0, 60.0);
        assert_abs_diff_eq!(
            ind.joint_failure_prob(200.0).unwrap(),
            product,
            epsilon = 0.0
        );
    }

    #[test]
    fn frank_weak_dependence_spot() {
        let s = scenario(CopulaSpec::Frank { theta: 0.3 }, 0.2, 48.0);
        assert_relative_eq!(
            s.joint_failure_prob(100.0).unwrap(),
            7.971_291e-2,
            max_relative = 1e-6
        );
    }

    #[test]
    fn gumbel_strong_dependence_near_upper_bound() {
        let s = scenario(CopulaSpec::Gumbel { theta: 5.0 }, 0.0, 60.0);
        let p = s.joint_failure_prob(200.0).unwrap();
        assert_relative_eq!(p, 5.858_291_73e-2, max_relative = 1e-7);
        let bound = s
            .safety
            .cdf(200.0)
            .unwrap()
            .min(s.cyber.cdf(200.0).unwrap());
        assert!(p <= bound);
        assert!(bound - p < 1.2e-4);
    }

    #[test]
    fn patch_delay_doubles_joint_probability() {
        let base = scenario(CopulaSpec::Normal { rho: 0.27 }, 0.0, 48.0);
        let p48 = base.joint_failure_prob(200.0).unwrap();
        let mut early = base.clone();
        early.cyber.t_patch = 24.0;
        let p24 = early.joint_failure_prob(200.0).unwrap();
        assert_relative_eq!(p48, 3.167_067e-2, max_relative = 1e-6);
        assert_relative_eq!(p24, 1.562_756e-2, max_relative = 1e-6);
        let ratio = p48 / p24;
        assert!((1.8..=2.2).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn joint_curves_are_monotone_and_bounded() {
        let grid = time_grid(200.0, 81).unwrap();
        let specs = [
            CopulaSpec::Independence,
            CopulaSpec::Normal { rho: 0.27 },
            CopulaSpec::StudentT { rho: 0.27, nu: 4.0 },
            CopulaSpec::Gumbel { theta: 2.0 },
            CopulaSpec::Clayton { theta: 0.8 },
            CopulaSpec::Frank { theta: 1.5 },
        ];
        for copula in specs {
            let mut s = scenario(copula, 0.1, 48.0);
            s.grid = grid.clone();
            let curve = s.joint_curve().unwrap();
            for i in 0..curve.len() {
                let t = curve.times[i];
                let v = curve.values[i];
                let ff = s.safety.cdf(t).unwrap();
                let fc = s.cyber.cdf(t).unwrap();
                assert!(v <= ff.min(fc) + 1e-12, "{copula:?} above upper bound at {t}");
                assert!(
                    v >= (ff + fc - 1.0).max(0.0) - 1e-12,
                    "{copula:?} below lower bound at {t}"
                );
                if i > 0 {
                    assert!(
                        v >= curve.values[i - 1] - 1e-12,
                        "{copula:?} not monotone at {t}"
                    );
                }
            }
        }
    }

    #[test]
    fn dependence_sweep_orders_curves() {
        let s = scenario(CopulaSpec::Normal { rho: 0.27 }, 0.0, 48.0);
        let curves = s.sweep_dependence(&[-0.65, 0.0, 0.65]).unwrap();
        assert_eq!(curves.len(), 3);
        assert_eq!(curves[2].label, "normal rho=0.65");
        for i in 1..3 {
            for k in 0..curves[i].len() {
                assert!(curves[i].values[k] >= curves[i - 1].values[k] - 1e-15);
            }
            // Strict where both marginals are interior (all grid times here).
            assert!(curves[i].values[3] > curves[i - 1].values[3]);
        }

        let frank = scenario(CopulaSpec::Frank { theta: 1.0 }, 0.0, 48.0);
        let fc = frank.sweep_dependence(&[-2.5, 0.5, 2.5]).unwrap();
        for k in 0..fc[0].len() {
            assert!(fc[0].values[k] <= fc[1].values[k]);
            assert!(fc[1].values[k] <= fc[2].values[k]);
        }
    }

    #[test]
    fn patch_sweep_orders_curves_after_first_patch() {
        let mut s = scenario(CopulaSpec::Normal { rho: 0.27 }, 0.0, 48.0);
        s.grid = vec![6.0, 12.0, 24.0, 60.0, 120.0, 200.0];
        let curves = s.sweep_patch_time(&[24.0, 36.0, 48.0, 60.0]).unwrap();
        assert_eq!(curves[0].label, "t_patch=24");
        // Identical up to the earliest patch time.
        for c in &curves[1..] {
            for k in 0..3 {
                assert_abs_diff_eq!(c.values[k], curves[0].values[k], epsilon = 1e-15);
            }
        }
        // Ordered (earlier patch, lower probability) beyond it.
        for i in 1..curves.len() {
            for k in 3..6 {
                assert!(curves[i].values[k] >= curves[i - 1].values[k]);
            }
            assert!(curves[i].values[5] > curves[i - 1].values[5]);
        }
        assert!(s.sweep_patch_time(&[36.0, 24.0]).is_err());
        assert!(s.sweep_patch_time(&[0.0, 24.0]).is_err());
    }

    #[test]
    fn scenario_serde_round_trip_with_default_grid() {
        let text = r#"{
            "copula": {"family": "student-t", "rho": 0.27, "nu": 4.0},
            "safety": {"shape_k": 0.5, "scale_lambda": 54750.0, "f0_offset": 0.1},
            "cyber": {"alpha1": 1.2, "beta1": 1.1, "p0": 3e-5, "gamma": 0.1,
                      "t_patch": 48.0, "mu": 0.018, "mu2": 0.018}
        }"#;
        let s: JointScenario = serde_json::from_str(text).unwrap();
        s.validate().unwrap();
        assert_eq!(s.grid.len(), 401);
        assert_eq!(s.cyber.n_threshold, f64::INFINITY);
        let round: JointScenario =
            serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(round.copula, s.copula);
        assert!(serde_json::from_str::<JointScenario>(
            "{\"copula\": {\"family\": \"normal\", \"rho\": 0.0}, \"unknown\": 1}"
        )
        .is_err());
    }

    #[test]
    fn rejects_invalid_scenarios() {
        let mut s = scenario(CopulaSpec::Normal { rho: 0.27 }, 0.0, 48.0);
        s.grid = vec![10.0, 5.0];
        assert!(s.validate().is_err());
        assert!(s.joint_curve().is_err());
        let bad_copula = JointScenario::new(
            CopulaSpec::Gumbel { theta: 0.5 },
            SafetyParams::new(1.0, 109_500.0, 0.0).unwrap(),
            cyber_example(48.0),
            vec![0.0, 100.0],
        );
        assert!(bad_copula.is_err());
        assert!(scenario(CopulaSpec::Independence, 0.0, 48.0)
            .sweep_dependence(&[0.5])
            .is_err());
    }
}
