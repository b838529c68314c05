//! Gauss hypergeometric function 2F1(a, b; c; z).
//!
//! Direct power series sum_{k>=0} (a)_k (b)_k / (c)_k z^k / k!, which is all
//! this crate needs: the closed-form survival integral evaluates 2F1 with a
//! small negative first parameter and |z| < 1, where the ratio between
//! consecutive terms stays below |z| and convergence is geometric. When `a`
//! or `b` is a non-positive integer the series terminates exactly
//! (a polynomial), which covers integer-valued exponent sweeps.

use super::Accuracy;
use crate::error::{Error, Result};

/// True when `x` is a non-positive integer (0, -1, -2, ...), which makes a
/// Pochhammer factor vanish.
fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.trunc()
}

/// 2F1 by the direct series with explicit accuracy control.
///
/// Requires |z| < 1 and `c` not a non-positive integer. Convergence is
/// declared once the next term is below `acc.abs_tol` times the partial sum
/// in magnitude; exceeding `acc.max_terms` is a numeric error.
pub fn gauss_2f1_with(a: f64, b: f64, c: f64, z: f64, acc: Accuracy) -> Result<f64> {
    if a.is_nan() || b.is_nan() || c.is_nan() || z.is_nan() {
        return Err(Error::domain("gauss_2f1: argument is NaN"));
    }
    if is_nonpositive_integer(c) {
        return Err(Error::domain(format!(
            "gauss_2f1: c must not be a non-positive integer, got {c}"
        )));
    }
    if !(z.abs() < 1.0) {
        return Err(Error::domain(format!(
            "gauss_2f1: series requires |z| < 1, got z = {z}"
        )));
    }
    if z == 0.0 {
        return Ok(1.0);
    }
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    for k in 0..acc.max_terms {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
        if term == 0.0 {
            // A Pochhammer factor hit zero: the series is a polynomial and
            // the sum is now exact.
            return Ok(sum);
        }
        sum += term;
        if term.abs() <= acc.abs_tol * sum.abs() {
            return Ok(sum);
        }
    }
    Err(Error::numeric(format!(
        "gauss_2f1: series did not converge within {} terms (a={a}, b={b}, c={c}, z={z})",
        acc.max_terms
    )))
}

/// 2F1 with the default accuracy budget.
pub fn gauss_2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    gauss_2f1_with(a, b, c, z, Accuracy::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn reference_values() {
        let tight = Accuracy::new(1e-14, 2000).unwrap();
        let cases = [
            (-0.1, 2.0, 3.0, 0.3, 0.977_597_118_263_105_4),
            (-0.1, 2.0, 3.0, 0.708, 0.934_004_135_830_031_3),
            (1.0, 1.0, 2.0, 0.5, 1.386_294_361_119_890_6),
            (-0.15, 3.7, 4.7, 0.85, 0.837_462_795_136_541_6),
            (0.3, 0.5, 1.7, -0.6, 0.955_903_634_040_226_1),
        ];
        for &(a, b, c, z, want) in &cases {
            let got = gauss_2f1_with(a, b, c, z, tight).unwrap();
            assert_relative_eq!(got, want, max_relative = 1e-12);
        }
    }

    #[test]
    fn polynomial_termination() {
        // a = -2 terminates after three terms: 1 - 2bz/c + b(b+1)z^2/(c(c+1)).
        let (b, c, z) = (1.7, 2.9, 0.95);
        let want = 1.0 - 2.0 * b * z / c + b * (b + 1.0) * z * z / (c * (c + 1.0));
        let got = gauss_2f1(-2.0, b, c, z).unwrap();
        assert_relative_eq!(got, want, max_relative = 1e-14);
    }

    #[test]
    fn unit_argument_of_z_zero() {
        assert_eq!(gauss_2f1(0.7, 1.3, 2.2, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn domain_errors() {
        assert!(gauss_2f1(0.5, 0.5, 1.0, 1.0).is_err());
        assert!(gauss_2f1(0.5, 0.5, 1.0, -1.2).is_err());
        assert!(gauss_2f1(0.5, 0.5, 0.0, 0.3).is_err());
        assert!(gauss_2f1(0.5, 0.5, -3.0, 0.3).is_err());
        assert!(gauss_2f1(f64::NAN, 0.5, 1.0, 0.3).is_err());
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let tiny = Accuracy::new(1e-16, 4).unwrap();
        let err = gauss_2f1_with(0.9, 1.1, 1.3, 0.97, tiny).unwrap_err();
        assert!(err.to_string().contains("did not converge"));
    }

    #[test]
    fn accuracy_validation() {
        assert!(Accuracy::new(0.0, 100).is_err());
        assert!(Accuracy::new(-1.0, 100).is_err());
        assert!(Accuracy::new(1e-10, 0).is_err());
    }
}
