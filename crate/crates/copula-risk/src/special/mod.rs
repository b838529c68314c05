//! Self-contained special-function kernel.
//!
//! Everything the model needs beyond `std` math lives here: the error
//! function (Cody's rational approximations), univariate and bivariate
//! normal CDFs, the normal quantile, Student t CDF/quantile via the
//! regularized incomplete beta function, a bivariate t CDF, the Lanczos
//! gamma function, and the Gauss hypergeometric series 2F1.
//!
//! Accuracy targets are part of each function's contract and are exercised
//! by the unit tests in this directory against independently computed
//! reference values.

mod erf;
mod gamma;
mod hyp;
mod normal;
mod student;

pub use gamma::{gamma_fn, ln_gamma};
pub use hyp::{gauss_2f1, gauss_2f1_with};
pub use normal::{bivariate_normal_cdf, std_normal_cdf, std_normal_pdf, std_normal_quantile};
pub use student::{bivariate_t_cdf, student_t_cdf, student_t_pdf, student_t_quantile};

pub(crate) use normal::{bvn_cdf_raw, norm_cdf, norm_quantile};
pub(crate) use student::{t_cdf_raw, t_quantile_raw};

use crate::error::{Error, Result};

/// Series evaluation budget for [`gauss_2f1`].
///
/// The series is declared converged once the running term drops below
/// `abs_tol` times the magnitude of the partial sum; exceeding `max_terms`
/// without converging is a numeric error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Accuracy {
    pub abs_tol: f64,
    pub max_terms: usize,
}

impl Accuracy {
    pub fn new(abs_tol: f64, max_terms: usize) -> Result<Self> {
        if !(abs_tol > 0.0) {
            return Err(Error::invalid(format!(
                "Accuracy abs_tol must be positive, got {abs_tol}"
            )));
        }
        if max_terms < 1 {
            return Err(Error::invalid("Accuracy max_terms must be at least 1"));
        }
        Ok(Accuracy { abs_tol, max_terms })
    }
}

impl Default for Accuracy {
    fn default() -> Self {
        Accuracy {
            abs_tol: 1e-10,
            max_terms: 500,
        }
    }
}
