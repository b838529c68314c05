//! Cyberattack (security) failure marginal.
//!
//! Attack attempts arrive with intensity
//!
//! lambda(t) = alpha1 t^beta1                          for t <= T,
//! lambda(t) = alpha1 T^beta1 exp(-mu (t - T))         for t >  T,
//!
//! where T is the release time of a security patch. Each attempt succeeds
//! with probability
//!
//! p(t) = p0 (1 + min(N(t), n_th)^gamma) * D(t),
//!
//! where N(t) is the cumulative number of attempts (attackers learn from
//! history, capped at n_th), and D(t) = exp(-mu2 (t - T)) after the patch
//! and 1 before. The compromise hazard is h(t) = lambda(t) p(t) and the
//! failure probability is F_c(t) = 1 - exp(-int_0^t h).
//!
//! The cumulative hazard has a closed form whenever the attempt cap does not
//! bind on [0, t]. Before the patch it is a two-term power law; after the
//! patch the substitution z = exp(-mu (t - T)) turns the remaining integral
//! into int z^(a-1) (1 + b z)^gamma dz with a = (mu + mu2)/mu and
//! b in (-1, 0), which evaluates through the Gauss hypergeometric function:
//!
//! int_0^x z^(a-1) (1 + b z)^gamma dz = x^a / a * 2F1(-gamma, a; a + 1; -b x).
//!
//! Both routes are exposed; [`CyberParams::cdf`] picks the closed form when
//! it is valid and falls back to adaptive quadrature otherwise.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate_with_breakpoints, QuadConfig};
use crate::special::{gauss_2f1_with, Accuracy};

/// Series budget for the hypergeometric evaluations inside the closed form.
/// |b| < 1 keeps the term ratio below |b|, so 2000 terms cover even
/// slowly-decaying cases (|b| ~ 0.94 converges in about 500).
const CF_ACC: Accuracy = Accuracy {
    abs_tol: 1e-12,
    max_terms: 2000,
};

/// Which evaluation route produced a CDF value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvalPath {
    ClosedForm,
    Quadrature,
}

/// Parameters of the cyberattack failure marginal. Times are in hours.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CyberParams {
    /// Attack-rate scale alpha1 > 0 (attempts per hour at t = 1).
    pub alpha1: f64,
    /// Attack-rate growth exponent beta1 > 0.
    pub beta1: f64,
    /// Baseline success probability p0 in (0, 1).
    pub p0: f64,
    /// Learning exponent applied to the attempt count, in (0, 1).
    pub gamma: f64,
    /// Cap on the effective attempt count; `INFINITY` disables the cap and
    /// is represented in JSON by omitting the field.
    #[serde(default = "default_n_threshold", skip_serializing_if = "is_infinite")]
    pub n_threshold: f64,
    /// Patch release time T > 0.
    pub t_patch: f64,
    /// Post-patch attack-rate decay mu > 0.
    pub mu: f64,
    /// Post-patch success-probability decay mu2 > 0.
    pub mu2: f64,
}

fn default_n_threshold() -> f64 {
    f64::INFINITY
}

fn is_infinite(x: &f64) -> bool {
    x.is_infinite()
}

impl CyberParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha1 > 0.0 && self.alpha1.is_finite()) {
            return Err(Error::invalid(format!(
                "cyber alpha1 must be positive and finite, got {}",
                self.alpha1
            )));
        }
        if !(self.beta1 > 0.0 && self.beta1.is_finite()) {
            return Err(Error::invalid(format!(
                "cyber beta1 must be positive and finite, got {}",
                self.beta1
            )));
        }
        if !(self.p0 > 0.0 && self.p0 < 1.0) {
            return Err(Error::invalid(format!(
                "cyber p0 must lie in (0, 1), got {}",
                self.p0
            )));
        }
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(Error::invalid(format!(
                "cyber gamma must lie in (0, 1), got {}",
                self.gamma
            )));
        }
        if !(self.n_threshold > 0.0) {
            return Err(Error::invalid(format!(
                "cyber n_threshold must be positive (INFINITY disables the cap), got {}",
                self.n_threshold
            )));
        }
        if !(self.t_patch > 0.0 && self.t_patch.is_finite()) {
            return Err(Error::invalid(format!(
                "cyber t_patch must be positive and finite, got {}",
                self.t_patch
            )));
        }
        if !(self.mu > 0.0 && self.mu.is_finite()) {
            return Err(Error::invalid(format!(
                "cyber mu must be positive and finite, got {}",
                self.mu
            )));
        }
        if !(self.mu2 > 0.0 && self.mu2.is_finite()) {
            return Err(Error::invalid(format!(
                "cyber mu2 must be positive and finite, got {}",
                self.mu2
            )));
        }
        Ok(())
    }

    /// The same parameters with the attempt cap disabled.
    pub fn without_cap(mut self) -> Self {
        self.n_threshold = f64::INFINITY;
        self
    }

    fn check_time(t: f64) -> Result<()> {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::domain(format!(
                "cyber time must be non-negative and finite, got {t}"
            )));
        }
        Ok(())
    }

    /// Attack intensity lambda(t), attempts per hour.
    pub fn attack_rate(&self, t: f64) -> Result<f64> {
        self.validate()?;
        Self::check_time(t)?;
        Ok(self.attack_rate_raw(t))
    }

    fn attack_rate_raw(&self, t: f64) -> f64 {
        if t <= self.t_patch {
            self.alpha1 * t.powf(self.beta1)
        } else {
            self.alpha1 * self.t_patch.powf(self.beta1) * (-self.mu * (t - self.t_patch)).exp()
        }
    }

    /// Cumulative attempt count N(t); accepts `t = INFINITY` and returns the
    /// post-patch limit.
    pub fn cumulative_attempts(&self, t: f64) -> Result<f64> {
        self.validate()?;
        if t.is_nan() || t < 0.0 {
            return Err(Error::domain(format!(
                "cyber time must be non-negative, got {t}"
            )));
        }
        Ok(self.cumulative_attempts_raw(t))
    }

    fn cumulative_attempts_raw(&self, t: f64) -> f64 {
        let n_patch =
            self.alpha1 * self.t_patch.powf(self.beta1 + 1.0) / (self.beta1 + 1.0);
        if t <= self.t_patch {
            self.alpha1 * t.powf(self.beta1 + 1.0) / (self.beta1 + 1.0)
        } else {
            let peak = self.alpha1 * self.t_patch.powf(self.beta1);
            n_patch + peak / self.mu * (-(-self.mu * (t - self.t_patch)).exp_m1())
        }
    }

    /// Attempt count entering the learning term, min(N(t), n_threshold).
    pub fn effective_attempts(&self, t: f64) -> Result<f64> {
        Ok(self.cumulative_attempts(t)?.min(self.n_threshold))
    }

    /// Per-attempt success probability p(t).
    ///
    /// Parameter combinations can push p(t) past 1; the value is returned
    /// unchanged so the distortion is visible, with a warning in the log.
    pub fn success_prob(&self, t: f64) -> Result<f64> {
        self.validate()?;
        Self::check_time(t)?;
        let p = self.success_prob_raw(t);
        if p >= 1.0 {
            log::warn!(
                "cyber success probability reached {p:.6e} at t = {t}; the \
                 parameterization has left the probabilistic regime"
            );
        }
        Ok(p)
    }

    fn success_prob_raw(&self, t: f64) -> f64 {
        let n_eff = self.cumulative_attempts_raw(t).min(self.n_threshold);
        let base = self.p0 * (1.0 + n_eff.powf(self.gamma));
        if t <= self.t_patch {
            base
        } else {
            base * (-self.mu2 * (t - self.t_patch)).exp()
        }
    }

    /// Compromise hazard h(t) = lambda(t) p(t).
    pub fn hazard(&self, t: f64) -> Result<f64> {
        self.validate()?;
        Self::check_time(t)?;
        Ok(self.hazard_raw(t))
    }

    fn hazard_raw(&self, t: f64) -> f64 {
        self.attack_rate_raw(t) * self.success_prob_raw(t)
    }

    /// Time at which N(t) reaches the attempt cap, if it ever does.
    pub fn cap_crossing_time(&self) -> Result<Option<f64>> {
        self.validate()?;
        Ok(self.cap_crossing_time_raw())
    }

    fn cap_crossing_time_raw(&self) -> Option<f64> {
        if !self.n_threshold.is_finite() {
            return None;
        }
        let n_patch = self.cumulative_attempts_raw(self.t_patch);
        if self.n_threshold <= n_patch {
            let t = ((self.beta1 + 1.0) * self.n_threshold / self.alpha1)
                .powf(1.0 / (self.beta1 + 1.0));
            return Some(t);
        }
        let peak = self.alpha1 * self.t_patch.powf(self.beta1);
        let n_limit = n_patch + peak / self.mu;
        if self.n_threshold >= n_limit {
            return None;
        }
        let frac = (self.n_threshold - n_patch) * self.mu / peak;
        Some(self.t_patch - (-frac).ln_1p() / self.mu)
    }

    /// Failure probability by adaptive quadrature of the hazard. Valid for
    /// any parameterization, including a binding attempt cap.
    pub fn cdf_quadrature(&self, t: f64) -> Result<f64> {
        self.validate()?;
        Self::check_time(t)?;
        Ok(-(-self.cumulative_hazard_quadrature(t)?).exp_m1())
    }

    fn cumulative_hazard_quadrature(&self, t: f64) -> Result<f64> {
        let mut breaks = vec![self.t_patch];
        if let Some(tc) = self.cap_crossing_time_raw() {
            breaks.push(tc);
        }
        integrate_with_breakpoints(
            |s| self.hazard_raw(s),
            0.0,
            t,
            &breaks,
            &QuadConfig::default(),
        )
    }

    /// Failure probability in closed form. Fails with a domain error when
    /// the attempt cap binds before `t`, because the learning term then
    /// stops following the power law the formula integrates.
    pub fn cdf_closed_form(&self, t: f64) -> Result<f64> {
        self.validate()?;
        Self::check_time(t)?;
        if let Some(tc) = self.cap_crossing_time_raw() {
            if tc < t {
                return Err(Error::domain(format!(
                    "closed form invalid at t = {t}: attempt cap {} binds from t = {tc:.6}",
                    self.n_threshold
                )));
            }
        }
        Ok(-(-self.cumulative_hazard_closed(t)?).exp_m1())
    }

    /// Cumulative hazard before the patch,
    /// I1(t) = a1 p0 t^(b1+1) / (b1+1)
    ///       + a1^(g+1) p0 t^((b1+1)(g+1)) / ((b1+1)^g (g b1 + b1 + g + 1)).
    fn hazard_integral_pre_patch(&self, t: f64) -> f64 {
        let b1 = self.beta1;
        let g = self.gamma;
        let first = self.alpha1 * self.p0 / (b1 + 1.0) * t.powf(b1 + 1.0);
        let exponent = g * b1 + b1 + g + 1.0;
        let second = self.alpha1.powf(g + 1.0) * self.p0 / ((b1 + 1.0).powf(g) * exponent)
            * t.powf(exponent);
        first + second
    }

    fn cumulative_hazard_closed(&self, t: f64) -> Result<f64> {
        if t <= self.t_patch {
            return Ok(self.hazard_integral_pre_patch(t));
        }
        let c = ClosedFormConstants::from_params(self)?;
        let tau = t - self.t_patch;
        let a = c.lambda_s / self.mu;
        let decay = (-c.lambda_s * tau).exp();
        let f_full = gauss_2f1_with(-self.gamma, a, a + 1.0, -c.b_ratio, CF_ACC)?;
        let f_tau =
            gauss_2f1_with(-self.gamma, a, a + 1.0, -c.b_ratio * (-self.mu * tau).exp(), CF_ACC)?;
        let plain = c.k / c.lambda_s * (1.0 - decay);
        let learning =
            c.k / c.lambda_s * c.n_limit.powf(self.gamma) * (f_full - decay * f_tau);
        Ok(self.hazard_integral_pre_patch(self.t_patch) + plain + learning)
    }

    /// Failure probability; closed form when valid at `t`, quadrature
    /// otherwise.
    pub fn cdf(&self, t: f64) -> Result<f64> {
        Ok(self.cdf_with_path(t)?.0)
    }

    /// Failure probability together with the route that produced it.
    /// A numeric failure of the closed form (hypergeometric budget
    /// exhaustion) falls back to quadrature rather than erroring.
    pub fn cdf_with_path(&self, t: f64) -> Result<(f64, EvalPath)> {
        self.validate()?;
        Self::check_time(t)?;
        let closed_valid = match self.cap_crossing_time_raw() {
            Some(tc) => t <= tc,
            None => true,
        };
        if closed_valid {
            match self.cdf_closed_form(t) {
                Ok(v) => return Ok((v, EvalPath::ClosedForm)),
                Err(Error::Numeric(msg)) => {
                    log::debug!("closed form fell back to quadrature at t = {t}: {msg}");
                }
                Err(e) => return Err(e),
            }
        }
        Ok((self.cdf_quadrature(t)?, EvalPath::Quadrature))
    }

    /// Supremum of the failure probability, lim F_c(t) for t -> infinity.
    /// Strictly below 1 because the post-patch hazard decays exponentially.
    pub fn cdf_supremum(&self) -> Result<f64> {
        self.validate()?;
        if self.cap_crossing_time_raw().is_none() {
            let c = ClosedFormConstants::from_params(self)?;
            let a = c.lambda_s / self.mu;
            let f_full = gauss_2f1_with(-self.gamma, a, a + 1.0, -c.b_ratio, CF_ACC)?;
            let total = self.hazard_integral_pre_patch(self.t_patch)
                + c.k / c.lambda_s * (1.0 + c.n_limit.powf(self.gamma) * f_full);
            return Ok(-(-total).exp_m1());
        }
        // With a binding cap, integrate far enough that the remaining tail
        // mass is below f64 resolution: the post-patch hazard is bounded by
        // k (1 + M^gamma) exp(-lambda_s (t - T)).
        let lambda_s = self.mu + self.mu2;
        let k = self.alpha1 * self.t_patch.powf(self.beta1) * self.p0;
        let m = self
            .cumulative_attempts_raw(f64::INFINITY)
            .min(self.n_threshold);
        let bound = k * (1.0 + m.powf(self.gamma)) / (lambda_s * 1e-18);
        let t_big = self.t_patch + bound.max(1.0).ln() / lambda_s;
        self.cdf_quadrature(t_big)
    }

    /// Smallest time at which the failure probability reaches `p`, by
    /// bisection on the CDF. Levels at or above the supremum are
    /// unreachable.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        self.validate()?;
        if !(0.0..1.0).contains(&p) {
            return Err(Error::domain(format!(
                "cyber quantile level must lie in [0, 1), got {p}"
            )));
        }
        if p == 0.0 {
            return Ok(0.0);
        }
        let sup = self.cdf_supremum()?;
        if p >= sup {
            return Err(Error::UnreachableQuantile { level: p, sup });
        }
        let mut lo = 0.0_f64;
        let mut hi = self.t_patch.max(1.0);
        while self.cdf(hi)? < p {
            hi *= 2.0;
            if hi > 1e15 {
                return Err(Error::numeric(format!(
                    "cyber quantile: level {p} is too close to the supremum {sup}"
                )));
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.cdf(mid)? < p {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-10 * (1.0 + hi) {
                break;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

/// Constants of the post-patch closed form. With k' = alpha1 T^beta1 the
/// post-patch attempt count is N(T + tau) = P + R exp(-mu tau) where
/// P = N(T) + k'/mu is the all-time attempt limit and R = -k'/mu, so the
/// ratio b = R/P always falls in (-1, 0), which is exactly the disc on
/// which the hypergeometric series converges.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedFormConstants {
    /// Peak hazard scale k = alpha1 T^beta1 p0.
    pub k: f64,
    /// Combined decay rate mu + mu2.
    pub lambda_s: f64,
    /// All-time attempt limit P = lim N(t).
    pub n_limit: f64,
    /// Coefficient R of the decaying component of N.
    pub r_coef: f64,
    /// Ratio b = R / P, in (-1, 0).
    pub b_ratio: f64,
}

impl ClosedFormConstants {
    pub fn from_params(params: &CyberParams) -> Result<Self> {
        params.validate()?;
        let peak = params.alpha1 * params.t_patch.powf(params.beta1);
        let n_patch = params.cumulative_attempts_raw(params.t_patch);
        let n_limit = n_patch + peak / params.mu;
        let r_coef = -peak / params.mu;
        let b_ratio = r_coef / n_limit;
        let c = ClosedFormConstants {
            k: peak * params.p0,
            lambda_s: params.mu + params.mu2,
            n_limit,
            r_coef,
            b_ratio,
        };
        if !(c.b_ratio > -1.0 && c.b_ratio < 0.0) {
            return Err(Error::numeric(format!(
                "closed-form ratio b = {} fell outside (-1, 0); parameters are \
                 numerically degenerate",
                c.b_ratio
            )));
        }
        Ok(c)
    }
}
