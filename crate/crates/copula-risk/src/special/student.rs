//! Student t distribution: CDF, density, quantile and a bivariate CDF.
//!
//! The univariate CDF reduces to the regularized incomplete beta,
//! F(x; nu) = 1 - I_z(nu/2, 1/2)/2 with z = nu/(nu + x^2) for x > 0, and the
//! quantile inverts it with a bracketed Newton iteration. The bivariate CDF
//! integrates the conditional law: if (X, Y) is bivariate t with correlation
//! rho and nu degrees of freedom, then given X = x,
//!
//! (Y - rho x) * sqrt((nu + 1) / ((1 - rho^2)(nu + x^2)))  ~  t_{nu+1},
//!
//! so with the substitution u = F(x; nu),
//!
//! T2(a, b; rho, nu) = int_0^{F(a)} F_{nu+1}(g(F^{-1}(u; nu))) du,
//!
//! a bounded smooth integrand on a finite interval, evaluated by adaptive
//! Gauss-Kronrod quadrature to ~1e-10 absolute accuracy.

use super::gamma::{ln_gamma, reg_inc_beta};
use super::normal::norm_quantile;
use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadConfig};

fn check_nu(nu: f64) -> Result<()> {
    if !(nu > 0.0) {
        return Err(Error::domain(format!(
            "degrees of freedom must be positive, got {nu}"
        )));
    }
    Ok(())
}

/// Student t CDF, infallible core for nu > 0.
pub(crate) fn t_cdf_raw(x: f64, nu: f64) -> f64 {
    if x == 0.0 {
        return 0.5;
    }
    if x == f64::INFINITY {
        return 1.0;
    }
    if x == f64::NEG_INFINITY {
        return 0.0;
    }
    let z = nu / (nu + x * x);
    let p = 0.5 * reg_inc_beta(0.5 * nu, 0.5, z);
    if x > 0.0 {
        1.0 - p
    } else {
        p
    }
}

/// Student t density, infallible core for nu > 0.
fn t_pdf_raw(x: f64, nu: f64) -> f64 {
    let ln_norm = ln_gamma(0.5 * (nu + 1.0)).expect("nu checked positive")
        - ln_gamma(0.5 * nu).expect("nu checked positive")
        - 0.5 * (nu * std::f64::consts::PI).ln();
    (ln_norm - 0.5 * (nu + 1.0) * (x * x / nu).ln_1p()).exp()
}

/// Student t quantile, infallible core for p in (0, 1), nu > 0.
///
/// Newton iteration started from the normal quantile, safeguarded by a
/// doubling bracket so heavy tails (small nu) cannot escape.
pub(crate) fn t_quantile_raw(p: f64, nu: f64) -> f64 {
    if p == 0.5 {
        return 0.0;
    }
    let mut lo = -1.0;
    let mut hi = 1.0;
    while t_cdf_raw(lo, nu) > p && lo > -1e300 {
        lo *= 2.0;
    }
    while t_cdf_raw(hi, nu) < p && hi < 1e300 {
        hi *= 2.0;
    }
    let mut x = norm_quantile(p).clamp(lo, hi);
    for _ in 0..100 {
        let err = t_cdf_raw(x, nu) - p;
        if err > 0.0 {
            hi = x;
        } else if err < 0.0 {
            lo = x;
        } else {
            return x;
        }
        let dens = t_pdf_raw(x, nu);
        let mut next = if dens > 0.0 { x - err / dens } else { x };
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= 1e-14 * (1.0 + x.abs()) {
            return next;
        }
        x = next;
    }
    x
}

/// Student t CDF with `nu` degrees of freedom.
pub fn student_t_cdf(x: f64, nu: f64) -> Result<f64> {
    check_nu(nu)?;
    if x.is_nan() {
        return Err(Error::domain("student_t_cdf: argument is NaN"));
    }
    Ok(t_cdf_raw(x, nu))
}

/// Student t density with `nu` degrees of freedom.
pub fn student_t_pdf(x: f64, nu: f64) -> Result<f64> {
    check_nu(nu)?;
    if x.is_nan() {
        return Err(Error::domain("student_t_pdf: argument is NaN"));
    }
    Ok(t_pdf_raw(x, nu))
}

/// Student t quantile for `p` strictly inside (0, 1).
pub fn student_t_quantile(p: f64, nu: f64) -> Result<f64> {
    check_nu(nu)?;
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!(
            "student_t_quantile: p must lie in (0, 1), got {p}"
        )));
    }
    Ok(t_quantile_raw(p, nu))
}

/// Conditional scale factor for the inner CDF of the bivariate integral.
fn conditional_arg(x: f64, b: f64, rho: f64, nu: f64) -> f64 {
    (b - rho * x) * ((nu + 1.0) / ((1.0 - rho * rho) * (nu + x * x))).sqrt()
}

/// Bivariate t CDF core for |rho| < 1 and finite b, integrating the
/// conditional CDF over the outer marginal probability `ta <= 1/2`.
fn t2_core(b: f64, rho: f64, nu: f64, ta: f64) -> Result<f64> {
    if ta == 0.0 {
        return Ok(0.0);
    }
    let cfg = QuadConfig {
        abs_tol: 1e-11,
        rel_tol: 1e-10,
        max_segments: 4096,
    };
    integrate(
        |u| {
            let x = t_quantile_raw(u, nu);
            t_cdf_raw(conditional_arg(x, b, rho, nu), nu + 1.0)
        },
        0.0,
        ta,
        &cfg,
    )
}

/// Bivariate Student t CDF P(X <= a, Y <= b) with correlation `rho` and a
/// common `nu` degrees of freedom.
pub fn bivariate_t_cdf(a: f64, b: f64, rho: f64, nu: f64) -> Result<f64> {
    check_nu(nu)?;
    if a.is_nan() || b.is_nan() {
        return Err(Error::domain("bivariate_t_cdf: argument is NaN"));
    }
    if !(-1.0..=1.0).contains(&rho) {
        return Err(Error::domain(format!(
            "bivariate_t_cdf: rho must lie in [-1, 1], got {rho}"
        )));
    }
    if a == f64::NEG_INFINITY || b == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    if a == f64::INFINITY {
        return Ok(t_cdf_raw(b, nu));
    }
    if b == f64::INFINITY {
        return Ok(t_cdf_raw(a, nu));
    }
    if rho >= 1.0 {
        return Ok(t_cdf_raw(a.min(b), nu));
    }
    if rho <= -1.0 {
        return Ok((t_cdf_raw(a, nu) + t_cdf_raw(b, nu) - 1.0).max(0.0));
    }
    // Exchangeability: integrate over the variable with the smaller marginal
    // probability so the integration interval is as short as possible, and
    // flip through the complement identity
    //   P(X <= a, Y <= b) = F(b) - P(-X <= -a, Y <= b; -rho)
    // when even the smaller one exceeds 1/2.
    let (a, b) = if t_cdf_raw(a, nu) <= t_cdf_raw(b, nu) {
        (a, b)
    } else {
        (b, a)
    };
    let ta = t_cdf_raw(a, nu);
    let v = if ta <= 0.5 {
        t2_core(b, rho, nu, ta)?
    } else {
        t_cdf_raw(b, nu) - t2_core(b, -rho, nu, 1.0 - ta)?
    };
    Ok(v.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::normal::bvn_cdf_raw;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn cdf_reference_values() {
        assert_relative_eq!(
            t_cdf_raw(0.5, 4.0),
            0.678_335_018_409_068_4,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            t_cdf_raw(-2.131_846_786, 4.0),
            0.050_000_000_018_365_95,
            max_relative = 1e-12
        );
        assert_eq!(t_cdf_raw(0.0, 7.3), 0.5);
        // nu = 1 is the Cauchy law with an elementary CDF.
        for &x in &[-3.0f64, -0.4, 0.8, 12.0] {
            let want = 0.5 + x.atan() / std::f64::consts::PI;
            assert_abs_diff_eq!(t_cdf_raw(x, 1.0), want, epsilon = 1e-14);
        }
    }

    #[test]
    fn quantile_reference_values() {
        assert_relative_eq!(
            t_quantile_raw(0.95, 4.0),
            2.131_846_786_327,
            max_relative = 1e-11
        );
        assert_relative_eq!(
            t_quantile_raw(0.01, 6.0),
            -3.142_668_403_291,
            max_relative = 1e-11
        );
    }

    #[test]
    fn quantile_roundtrip() {
        for &nu in &[1.0, 2.5, 4.0, 30.0, 1e6] {
            for &p in &[1e-9, 1e-5, 0.02, 0.3, 0.5, 0.77, 0.999, 1.0 - 1e-7] {
                let x = t_quantile_raw(p, nu);
                assert_abs_diff_eq!(t_cdf_raw(x, nu), p, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn pdf_matches_cdf_slope() {
        // h is chosen so that neither the O(h^2) truncation nor the x^2
        // cancellation inside z = nu/(nu + x^2) dominates near x = 0.
        let h = 1e-4;
        for &nu in &[1.0, 4.0, 17.0] {
            for &x in &[-1.7, 0.0, 0.9, 3.3] {
                let slope = (t_cdf_raw(x + h, nu) - t_cdf_raw(x - h, nu)) / (2.0 * h);
                assert_relative_eq!(t_pdf_raw(x, nu), slope, max_relative = 1e-6);
            }
        }
    }

    #[test]
    fn large_nu_approaches_normal() {
        use crate::special::normal::norm_cdf;
        for &x in &[-2.0, -0.5, 0.3, 1.8] {
            assert_abs_diff_eq!(t_cdf_raw(x, 1e6), norm_cdf(x), epsilon = 2e-7);
        }
    }

    #[test]
    fn bivariate_reference_values() {
        assert_abs_diff_eq!(
            bivariate_t_cdf(0.0, 0.0, 0.5, 4.0).unwrap(),
            1.0 / 3.0,
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(
            bivariate_t_cdf(0.5, -0.3, 0.27, 4.0).unwrap(),
            2.980_588_292_385e-1,
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(
            bivariate_t_cdf(-1.0, 0.8, -0.5, 4.0).unwrap(),
            8.963_910_584_900e-2,
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(
            bivariate_t_cdf(1.0, 1.0, 0.65, 4.0).unwrap(),
            7.273_986_184_194e-1,
            epsilon = 1e-9
        );
    }

    #[test]
    fn bivariate_identities() {
        let grid = [-1.4, -0.3, 0.6, 1.9];
        for &a in &grid {
            for &b in &grid {
                for &rho in &[-0.8, -0.27, 0.0, 0.39, 0.9] {
                    let lhs = bivariate_t_cdf(a, b, rho, 4.0).unwrap();
                    let swapped = bivariate_t_cdf(b, a, rho, 4.0).unwrap();
                    assert_abs_diff_eq!(lhs, swapped, epsilon = 1e-9);
                    let split = bivariate_t_cdf(a, -b, -rho, 4.0).unwrap();
                    assert_abs_diff_eq!(lhs + split, t_cdf_raw(a, 4.0), epsilon = 1e-9);
                }
            }
        }
    }

    #[test]
    fn bivariate_large_nu_matches_normal() {
        for &(a, b, rho) in &[(0.5, -0.3, 0.27), (-1.0, 0.8, -0.5), (1.0, 1.0, 0.65)] {
            let t2 = bivariate_t_cdf(a, b, rho, 1e6).unwrap();
            let n2 = bvn_cdf_raw(a, b, rho);
            assert_abs_diff_eq!(t2, n2, epsilon = 1e-5);
        }
    }

    #[test]
    fn bivariate_degenerate_and_edges() {
        assert_eq!(
            bivariate_t_cdf(0.7, f64::INFINITY, 0.4, 4.0).unwrap(),
            t_cdf_raw(0.7, 4.0)
        );
        assert_eq!(
            bivariate_t_cdf(f64::NEG_INFINITY, 0.7, 0.4, 4.0).unwrap(),
            0.0
        );
        assert_abs_diff_eq!(
            bivariate_t_cdf(0.3, 0.9, 1.0, 4.0).unwrap(),
            t_cdf_raw(0.3, 4.0),
            epsilon = 1e-15
        );
        assert!(bivariate_t_cdf(0.0, 0.0, 0.5, -1.0).is_err());
        assert!(bivariate_t_cdf(0.0, 0.0, 1.5, 4.0).is_err());
    }
}
