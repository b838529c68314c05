//! Gamma function and the regularized incomplete beta function.
//!
//! `ln_gamma` uses the Lanczos approximation with g = 607/128 and fifteen
//! coefficients (relative error ~1e-15 over the positive axis, with the
//! reflection formula below 1/2). The regularized incomplete beta
//! I_x(a, b) is evaluated by the modified Lentz continued fraction, split at
//! x = (a + 1)/(a + b + 2) so the fraction always converges quickly; it
//! backs the Student t CDF.

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_746,
    -0.491_913_816_097_620_2,
    0.339_946_499_848_118_89e-4,
    0.465_236_289_270_485_76e-4,
    -0.983_744_753_048_795_65e-4,
    0.158_088_703_224_912_49e-3,
    -0.210_264_441_724_104_88e-3,
    0.217_439_618_115_212_64e-3,
    -0.164_318_106_536_763_89e-3,
    0.844_182_239_838_527_43e-4,
    -0.261_908_384_015_814_09e-4,
    0.368_991_826_595_316_27e-5,
];

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_74;

/// ln Gamma(x) for x > 0, infallible core.
fn ln_gamma_raw(x: f64) -> f64 {
    if x < 0.5 {
        // Reflection keeps accuracy near zero.
        let s = (std::f64::consts::PI * x).sin();
        return std::f64::consts::PI.ln() - s.ln() - ln_gamma_raw(1.0 - x);
    }
    let z = x - 1.0;
    let mut a = LANCZOS[0];
    for (k, &c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    HALF_LN_2PI + (z + 0.5) * t.ln() - t + a.ln()
}

/// Natural log of the gamma function for positive arguments.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain(format!(
            "ln_gamma: argument must be positive, got {x}"
        )));
    }
    Ok(ln_gamma_raw(x))
}

/// Gamma function for positive arguments.
pub fn gamma_fn(x: f64) -> Result<f64> {
    Ok(ln_gamma(x)?.exp())
}

const FPMIN: f64 = 1e-300;
const CF_EPS: f64 = 3e-16;
const CF_MAX_ITERS: usize = 300;

/// Continued fraction for the incomplete beta, modified Lentz method.
fn betacf(a: f64, b: f64, x: f64) -> f64 {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < FPMIN {
        d = FPMIN;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=CF_MAX_ITERS {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() <= CF_EPS {
            break;
        }
    }
    h
}

/// Regularized incomplete beta function I_x(a, b) for a, b > 0 and
/// x in [0, 1].
pub(crate) fn reg_inc_beta(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_bt = ln_gamma_raw(a + b) - ln_gamma_raw(a) - ln_gamma_raw(b)
        + a * x.ln()
        + b * (-x).ln_1p();
    let bt = ln_bt.exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        bt * betacf(a, b, x) / a
    } else {
        1.0 - bt * betacf(b, a, 1.0 - x) / b
    }
}
