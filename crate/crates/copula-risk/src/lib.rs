//! Joint safety-security failure probabilities for connected vehicles.
//!
//! This crate couples a time-varying cyberattack hazard model with Weibull
//! hardware-failure marginals through a configurable copula family and
//! exposes:
//!
//! * the cyber failure-probability marginal, by adaptive quadrature of the
//!   hazard and in closed form through the Gauss hypergeometric function,
//! * Weibull safety marginals for vehicle lifecycle phases,
//! * five copula families (independence, normal, Student t, Gumbel, Clayton,
//!   Frank) with CDFs, conditional partials and samplers,
//! * static joint failure curves and dependence/patch-time sweeps,
//! * a dynamic failure model where each marginal is distorted by the
//!   conditional probability of the other failure mode,
//! * Monte Carlo cross-checks, closed-form-vs-quadrature equivalence checks
//!   and a timing harness.

pub mod copula;
pub mod curve;
pub mod cyber;
pub mod dynamic;
pub mod error;
pub mod joint;
pub mod presets;
pub mod quadrature;
pub mod safety;
pub mod special;
pub mod tables;
pub mod verification;

pub use error::{Error, Result};
