//! Copula families coupling the safety and security marginals.
//!
//! A bivariate copula C(u, v) is a CDF on the unit square with uniform
//! margins; by Sklar's theorem the joint failure probability of the two
//! failure modes with marginals F_f and F_c is C(F_f(t), F_c(t)). Every
//! family here satisfies the Frechet-Hoeffding envelope
//!
//! max(u + v - 1, 0) <= C(u, v) <= min(u, v),
//!
//! and the computed values are clamped to it as a final rounding guard.
//!
//! Families and their CDFs (u, v interior, with x = -ln u, y = -ln v):
//!
//! * independence: C = u v
//! * normal: C = Phi2(Phi^-1(u), Phi^-1(v); rho)
//! * student-t: C = T2(t_nu^-1(u), t_nu^-1(v); rho, nu); note rho = 0 is
//!   not independence because both coordinates share the chi-square mixing
//!   variable
//! * gumbel: C = exp(-(x^theta + y^theta)^(1/theta)), theta >= 1
//! * clayton: C = (u^-theta + v^-theta - 1)^(-1/theta), theta > 0
//! * frank: C = -ln(1 + (e^(-theta u)-1)(e^(-theta v)-1)/(e^(-theta)-1))
//!   / theta
//!
//! The conditional `partial_wrt_u(u, v)` = dC/du = P(V <= v | U = u) drives
//! both the dynamic failure model and the conditional-inversion sampler.
//! All families are exchangeable, so the v-partial is the u-partial with
//! the arguments swapped.
//!
//! Numerical notes: Gumbel and Clayton are evaluated through logarithms so
//! that large theta cannot overflow (the power sums are factored by their
//! largest term), and Frank uses expm1/ln_1p throughout. Frank with
//! |theta| below 1e-8 and Clayton with theta below 1e-8 collapse to the
//! independence formula, which is their analytic limit and avoids
//! catastrophic cancellation.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{
    bivariate_t_cdf, bvn_cdf_raw, norm_cdf, norm_quantile, t_cdf_raw, t_quantile_raw,
};

/// Thetas below this collapse Frank and Clayton to independence.
const THETA_INDEPENDENT: f64 = 1e-8;

/// Student-t copula inputs are clamped to [FLOOR, 1 - CEIL_GAP] before the
/// quantile transform; the induced CDF error is below 1e-9, far under every
/// accuracy target, and it keeps the quantile bracket bounded for heavy
/// tails.
const T_INPUT_FLOOR: f64 = 1e-9;
const T_INPUT_CEIL_GAP: f64 = 1e-12;

/// A copula family with its dependence parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum CopulaSpec {
    Independence,
    Normal { rho: f64 },
    StudentT { rho: f64, nu: f64 },
    Gumbel { theta: f64 },
    Clayton { theta: f64 },
    Frank { theta: f64 },
}

fn check_unit_interval(name: &str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(format!(
            "{name} must lie in [0, 1], got {x}"
        )));
    }
    Ok(())
}

impl CopulaSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            CopulaSpec::Independence => Ok(()),
            CopulaSpec::Normal { rho } => {
                if !(-1.0..=1.0).contains(&rho) {
                    return Err(Error::invalid(format!(
                        "normal copula rho must lie in [-1, 1], got {rho}"
                    )));
                }
                Ok(())
            }
            CopulaSpec::StudentT { rho, nu } => {
                if !(-1.0..=1.0).contains(&rho) {
                    return Err(Error::invalid(format!(
                        "student-t copula rho must lie in [-1, 1], got {rho}"
                    )));
                }
                if !(nu > 0.0 && nu.is_finite()) {
                    return Err(Error::invalid(format!(
                        "student-t copula nu must be positive and finite, got {nu}"
                    )));
                }
                Ok(())
            }
            CopulaSpec::Gumbel { theta } => {
                if !(theta >= 1.0 && theta.is_finite()) {
                    return Err(Error::invalid(format!(
                        "gumbel copula theta must be >= 1, got {theta}"
                    )));
                }
                Ok(())
            }
            CopulaSpec::Clayton { theta } => {
                if !(theta > 0.0 && theta.is_finite()) {
                    return Err(Error::invalid(format!(
                        "clayton copula theta must be positive, got {theta}"
                    )));
                }
                Ok(())
            }
            CopulaSpec::Frank { theta } => {
                if !theta.is_finite() {
                    return Err(Error::invalid(format!(
                        "frank copula theta must be finite, got {theta}"
                    )));
                }
                if theta.abs() > 300.0 {
                    return Err(Error::invalid(format!(
                        "frank copula theta must lie in [-300, 300] to stay \
                         within f64 range, got {theta}"
                    )));
                }
                Ok(())
            }
        }
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            CopulaSpec::Independence => "independence",
            CopulaSpec::Normal { .. } => "normal",
            CopulaSpec::StudentT { .. } => "student-t",
            CopulaSpec::Gumbel { .. } => "gumbel",
            CopulaSpec::Clayton { .. } => "clayton",
            CopulaSpec::Frank { .. } => "frank",
        }
    }

    /// Name of the family's dependence parameter, for labels and sweeps.
    pub fn dependence_parameter_name(&self) -> &'static str {
        match self {
            CopulaSpec::Independence => "none",
            CopulaSpec::Normal { .. } | CopulaSpec::StudentT { .. } => "rho",
            CopulaSpec::Gumbel { .. } | CopulaSpec::Clayton { .. } | CopulaSpec::Frank { .. } => {
                "theta"
            }
        }
    }

    /// The same family with the dependence parameter replaced (rho for the
    /// elliptical families, theta for the Archimedean ones); the Student-t
    /// keeps its degrees of freedom.
    pub fn with_dependence(&self, value: f64) -> Result<CopulaSpec> {
        let spec = match *self {
            CopulaSpec::Independence => {
                return Err(Error::invalid(
                    "the independence copula has no dependence parameter to sweep",
                ))
            }
            CopulaSpec::Normal { .. } => CopulaSpec::Normal { rho: value },
            CopulaSpec::StudentT { nu, .. } => CopulaSpec::StudentT { rho: value, nu },
            CopulaSpec::Gumbel { .. } => CopulaSpec::Gumbel { theta: value },
            CopulaSpec::Clayton { .. } => CopulaSpec::Clayton { theta: value },
            CopulaSpec::Frank { .. } => CopulaSpec::Frank { theta: value },
        };
        spec.validate()?;
        Ok(spec)
    }

    /// C(u, v) for u, v in [0, 1].
    pub fn cdf(&self, u: f64, v: f64) -> Result<f64> {
        self.validate()?;
        check_unit_interval("copula argument u", u)?;
        check_unit_interval("copula argument v", v)?;
        if u == 0.0 || v == 0.0 {
            return Ok(0.0);
        }
        if u == 1.0 {
            return Ok(v);
        }
        if v == 1.0 {
            return Ok(u);
        }
        let raw = self.cdf_interior(u, v)?;
        let lower = (u + v - 1.0).max(0.0);
        let upper = u.min(v);
        Ok(raw.clamp(lower, upper))
    }

    fn cdf_interior(&self, u: f64, v: f64) -> Result<f64> {
        match *self {
            CopulaSpec::Independence => Ok(u * v),
            CopulaSpec::Normal { rho } => {
                Ok(bvn_cdf_raw(norm_quantile(u), norm_quantile(v), rho))
            }
            CopulaSpec::StudentT { rho, nu } => {
                let uf = u.clamp(T_INPUT_FLOOR, 1.0 - T_INPUT_CEIL_GAP);
                let vf = v.clamp(T_INPUT_FLOOR, 1.0 - T_INPUT_CEIL_GAP);
                bivariate_t_cdf(t_quantile_raw(uf, nu), t_quantile_raw(vf, nu), rho, nu)
            }
            CopulaSpec::Gumbel { theta } => Ok(gumbel_cdf(u, v, theta)),
            CopulaSpec::Clayton { theta } => Ok(clayton_cdf(u, v, theta)),
            CopulaSpec::Frank { theta } => Ok(frank_cdf(u, v, theta)),
        }
    }

    /// dC/du (u, v) = P(V <= v | U = u) for u strictly inside (0, 1).
    pub fn partial_wrt_u(&self, u: f64, v: f64) -> Result<f64> {
        self.validate()?;
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::domain(format!(
                "conditioning argument u must lie strictly inside (0, 1), got {u}"
            )));
        }
        check_unit_interval("copula argument v", v)?;
        if v == 0.0 {
            return Ok(0.0);
        }
        if v == 1.0 {
            return Ok(1.0);
        }
        Ok(self.partial_interior(u, v)?.clamp(0.0, 1.0))
    }

    /// dC/dv (u, v) = P(U <= u | V = v); by exchangeability this is the
    /// u-partial with swapped arguments.
    pub fn partial_wrt_v(&self, u: f64, v: f64) -> Result<f64> {
        self.partial_wrt_u(v, u)
    }

    fn partial_interior(&self, u: f64, v: f64) -> Result<f64> {
        match *self {
            CopulaSpec::Independence => Ok(v),
            CopulaSpec::Normal { rho } => {
                if rho >= 1.0 {
                    return Ok(if v >= u { 1.0 } else { 0.0 });
                }
                if rho <= -1.0 {
                    return Ok(if u + v > 1.0 { 1.0 } else { 0.0 });
                }
                let x = norm_quantile(u);
                let y = norm_quantile(v);
                Ok(norm_cdf((y - rho * x) / (1.0 - rho * rho).sqrt()))
            }
            CopulaSpec::StudentT { rho, nu } => {
                if rho >= 1.0 {
                    return Ok(if v >= u { 1.0 } else { 0.0 });
                }
                if rho <= -1.0 {
                    return Ok(if u + v > 1.0 { 1.0 } else { 0.0 });
                }
                let uf = u.clamp(T_INPUT_FLOOR, 1.0 - T_INPUT_CEIL_GAP);
                let vf = v.clamp(T_INPUT_FLOOR, 1.0 - T_INPUT_CEIL_GAP);
                let x = t_quantile_raw(uf, nu);
                let y = t_quantile_raw(vf, nu);
                let scale = ((nu + 1.0) / ((1.0 - rho * rho) * (nu + x * x))).sqrt();
                Ok(t_cdf_raw((y - rho * x) * scale, nu + 1.0))
            }
            CopulaSpec::Gumbel { theta } => Ok(gumbel_partial(u, v, theta)),
            CopulaSpec::Clayton { theta } => Ok(clayton_partial(u, v, theta)),
            CopulaSpec::Frank { theta } => Ok(frank_partial(u, v, theta)),
        }
    }

    /// Draw `n` pairs with uniform margins from this copula, seeding a
    /// dedicated generator. See [`CopulaSpec::sample_pairs_with_rng`].
    pub fn sample_pairs(&self, n: usize, seed: u64) -> Result<Vec<(f64, f64)>> {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        self.sample_pairs_with_rng(n, &mut rng)
    }

    /// Draw `n` pairs with uniform margins from this copula using the given
    /// generator (callers that split work across threads hand each chunk
    /// its own stream).
    ///
    /// Elliptical families go through correlated normals (plus the shared
    /// chi-square scale for student-t); Archimedean families use conditional
    /// inversion, solving dC/du (u, .) = p by bisection.
    pub fn sample_pairs_with_rng<R: rand::Rng + ?Sized>(
        &self,
        n: usize,
        mut rng: &mut R,
    ) -> Result<Vec<(f64, f64)>> {
        self.validate()?;
        let mut out = Vec::with_capacity(n);
        match *self {
            CopulaSpec::Independence => {
                for _ in 0..n {
                    out.push((rng.gen::<f64>(), rng.gen::<f64>()));
                }
            }
            CopulaSpec::Normal { rho } => {
                let s = (1.0 - rho * rho).max(0.0).sqrt();
                for _ in 0..n {
                    let z1: f64 = StandardNormal.sample(&mut rng);
                    let z2: f64 = StandardNormal.sample(&mut rng);
                    out.push((norm_cdf(z1), norm_cdf(rho * z1 + s * z2)));
                }
            }
            CopulaSpec::StudentT { rho, nu } => {
                let s = (1.0 - rho * rho).max(0.0).sqrt();
                let chi = ChiSquared::new(nu).map_err(|e| {
                    Error::invalid(format!("student-t sampling: invalid nu: {e}"))
                })?;
                for _ in 0..n {
                    let z1: f64 = StandardNormal.sample(&mut rng);
                    let z2: f64 = StandardNormal.sample(&mut rng);
                    let w: f64 = chi.sample(&mut rng);
                    let scale = (nu / w).sqrt();
                    out.push((
                        t_cdf_raw(z1 * scale, nu),
                        t_cdf_raw((rho * z1 + s * z2) * scale, nu),
                    ));
                }
            }
            CopulaSpec::Gumbel { .. } | CopulaSpec::Clayton { .. } | CopulaSpec::Frank { .. } => {
                for _ in 0..n {
                    let u: f64 = rng.gen::<f64>().clamp(1e-12, 1.0 - 1e-12);
                    let p: f64 = rng.gen::<f64>();
                    let v = self.invert_conditional(u, p)?;
                    out.push((u, v));
                }
            }
        }
        Ok(out)
    }

    /// Solve dC/du(u, v) = p for v; the conditional CDF is nondecreasing in
    /// v, so plain bisection is reliable.
    fn invert_conditional(&self, u: f64, p: f64) -> Result<f64> {
        let mut lo = 1e-15;
        let mut hi = 1.0 - 1e-15;
        if p <= self.partial_interior(u, lo)?.clamp(0.0, 1.0) {
            return Ok(lo);
        }
        if p >= self.partial_interior(u, hi)?.clamp(0.0, 1.0) {
            return Ok(hi);
        }
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if self.partial_interior(u, mid)?.clamp(0.0, 1.0) < p {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-12 {
                break;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

/// Gumbel CDF via the factored power sum: with x = -ln u, y = -ln v and
/// a = max(x, y), (x^t + y^t)^(1/t) = a (1 + (min/max)^t)^(1/t), which never
/// overflows however large theta is.
fn gumbel_cdf(u: f64, v: f64, theta: f64) -> f64 {
    if theta == 1.0 {
        return u * v;
    }
    (-gumbel_radius(-u.ln(), -v.ln(), theta)).exp()
}

/// (x^theta + y^theta)^(1/theta) for positive x, y.
fn gumbel_radius(x: f64, y: f64, theta: f64) -> f64 {
    let a = x.max(y);
    let b = x.min(y);
    if b == 0.0 {
        return a;
    }
    a * ((b / a).powf(theta).ln_1p() / theta).exp()
}

/// dC/du for Gumbel: C * S^(1/theta - 1) * x^(theta - 1) / u rewritten as
/// C * (x / W)^(theta - 1) / u with W = S^(1/theta) >= x.
fn gumbel_partial(u: f64, v: f64, theta: f64) -> f64 {
    if theta == 1.0 {
        return v;
    }
    let x = -u.ln();
    let y = -v.ln();
    let w = gumbel_radius(x, y, theta);
    ((theta - 1.0) * (x.ln() - w.ln()) - w - u.ln()).exp()
}

/// Clayton CDF factored by the minimum: with m = min(u, v), M = max(u, v),
/// u^-t + v^-t - 1 = m^-t (1 + (m/M)^t - m^t), so
/// C = m (1 + (m/M)^t - m^t)^(-1/t) stays in range for any theta.
fn clayton_cdf(u: f64, v: f64, theta: f64) -> f64 {
    if theta < THETA_INDEPENDENT {
        return u * v;
    }
    let m = u.min(v);
    let big = u.max(v);
    let s = (m / big).powf(theta);
    let w = m.powf(theta);
    m * (-(s - w).ln_1p() / theta).exp()
}

/// dC/du for Clayton: u^(-t-1) (u^-t + v^-t - 1)^(-1/t - 1) = (C/u)^(1+t).
fn clayton_partial(u: f64, v: f64, theta: f64) -> f64 {
    if theta < THETA_INDEPENDENT {
        return v;
    }
    let c = clayton_cdf(u, v, theta);
    ((1.0 + theta) * (c.ln() - u.ln())).exp()
}

/// Frank CDF through expm1/ln_1p: C = -ln(1 + g(u) g(v) / g(1)) / theta
/// with g(x) = expm1(-theta x).
fn frank_cdf(u: f64, v: f64, theta: f64) -> f64 {
    if theta.abs() < THETA_INDEPENDENT {
        return u * v;
    }
    let g = |x: f64| (-theta * x).exp_m1();
    -(g(u) * g(v) / g(1.0)).ln_1p() / theta
}

/// dC/du for Frank: e^(-theta u) g(v) / (g(1) + g(u) g(v)).
fn frank_partial(u: f64, v: f64, theta: f64) -> f64 {
    if theta.abs() < THETA_INDEPENDENT {
        return v;
    }
    let g = |x: f64| (-theta * x).exp_m1();
    (-theta * u).exp() * g(v) / (g(1.0) + g(u) * g(v))
}

/// Sensitivity of the normal copula to its correlation: dC/drho equals the
/// bivariate normal density at (Phi^-1(u), Phi^-1(v)) (Plackett's identity).
pub fn normal_rho_derivative(u: f64, v: f64, rho: f64) -> Result<f64> {
    if !(u > 0.0 && u < 1.0 && v > 0.0 && v < 1.0) {
        return Err(Error::domain(format!(
            "normal_rho_derivative requires interior arguments, got ({u}, {v})"
        )));
    }
    if !(-1.0 < rho && rho < 1.0) {
        return Err(Error::domain(format!(
            "normal_rho_derivative requires |rho| < 1, got {rho}"
        )));
    }
    let x = norm_quantile(u);
    let y = norm_quantile(v);
    let omr2 = 1.0 - rho * rho;
    Ok((-(x * x - 2.0 * rho * x * y + y * y) / (2.0 * omr2)).exp()
        / (2.0 * std::f64::consts::PI * omr2.sqrt()))
}
