//! Globally adaptive Gauss-Kronrod quadrature.
//!
//! A 15-point Kronrod rule (7-point Gauss core) is applied per segment and
//! the segment with the largest error estimate is bisected until the summed
//! estimate meets the tolerance. This is the classic QAG strategy; the
//! integrands in this crate are smooth or piecewise smooth with known
//! breakpoints, so convergence is fast once breakpoints are passed in via
//! [`integrate_with_breakpoints`].

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Tolerances and subdivision budget for the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    /// Absolute tolerance on the whole integral.
    pub abs_tol: f64,
    /// Relative tolerance on the whole integral.
    pub rel_tol: f64,
    /// Maximum number of segments before giving up.
    pub max_segments: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_segments: 4096,
        }
    }
}

// 15-point Kronrod abscissae on [0, 1] (positive half; the rule is
// symmetric). Odd indices are the embedded 7-point Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_33,
    0.949_107_912_342_758_524_526_189_684_047_85,
    0.864_864_423_359_769_072_789_712_788_640_93,
    0.741_531_185_599_394_439_863_864_773_280_79,
    0.586_087_235_467_691_130_294_144_838_258_73,
    0.405_845_151_377_397_166_906_606_412_076_96,
    0.207_784_955_007_898_467_600_689_403_773_24,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_97,
    0.063_092_092_629_978_553_290_700_663_189_2,
    0.104_790_010_322_250_183_839_876_322_541_52,
    0.140_653_259_715_525_918_745_189_590_510_24,
    0.169_004_726_639_267_902_826_583_426_598_55,
    0.190_350_578_064_785_409_913_256_402_421_01,
    0.204_432_940_075_298_892_414_161_999_234_65,
    0.209_482_141_084_727_828_012_999_174_891_71,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_08,
    0.279_705_391_489_276_667_901_467_771_423_78,
    0.381_830_050_505_118_944_950_369_775_488_97,
    0.417_959_183_673_469_387_755_102_040_816_33,
];

/// One Gauss-Kronrod 15 evaluation: returns (integral, error_estimate).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut resg = fc * WG[3];
    let mut resk = fc * WGK[7];
    for j in 0..3 {
        let x = half * XGK[2 * j + 1];
        let fsum = f(center - x) + f(center + x);
        resg += WG[j] * fsum;
        resk += WGK[2 * j + 1] * fsum;
    }
    for j in 0..4 {
        let x = half * XGK[2 * j];
        let fsum = f(center - x) + f(center + x);
        resk += WGK[2 * j] * fsum;
    }
    (resk * half, ((resk - resg) * half).abs())
}

#[derive(Debug)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.partial_cmp(&other.err).unwrap_or(Ordering::Equal)
    }
}

/// Integrate `f` over `[a, b]`, `a <= b`, both finite.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadConfig) -> Result<f64> {
    integrate_with_breakpoints(f, a, b, &[], cfg)
}

/// Integrate `f` over `[a, b]` with forced initial subdivision at the given
/// breakpoints (points outside `(a, b)` are ignored). Use this when the
/// integrand has kinks at known locations.
pub fn integrate_with_breakpoints<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    cfg: &QuadConfig,
) -> Result<f64> {
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::domain(format!(
            "integrate: bounds must be finite, got [{a}, {b}]"
        )));
    }
    if a > b {
        return Err(Error::domain(format!(
            "integrate: lower bound {a} exceeds upper bound {b}"
        )));
    }
    if a == b {
        return Ok(0.0);
    }

    let mut edges: Vec<f64> = vec![a];
    let mut interior: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|p| p.is_finite() && *p > a && *p < b)
        .collect();
    interior.sort_by(|x, y| x.partial_cmp(y).unwrap());
    interior.dedup();
    edges.extend(interior);
    edges.push(b);

    let mut heap: BinaryHeap<Segment> = BinaryHeap::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    for w in edges.windows(2) {
        let (value, err) = gk15(&f, w[0], w[1]);
        total += value;
        total_err += err;
        heap.push(Segment {
            a: w[0],
            b: w[1],
            value,
            err,
        });
    }

    let span = b - a;
    while total_err > cfg.abs_tol.max(cfg.rel_tol * total.abs()) {
        if heap.len() >= cfg.max_segments {
            return Err(Error::numeric(format!(
                "integrate: not converged after {} segments (error estimate {total_err:.3e})",
                heap.len()
            )));
        }
        let worst = heap.pop().expect("heap holds at least one segment");
        let mid = 0.5 * (worst.a + worst.b);
        if mid - worst.a < f64::EPSILON * span {
            return Err(Error::numeric(format!(
                "integrate: segment at [{:.6e}, {:.6e}] cannot be split further \
                 (error estimate {total_err:.3e})",
                worst.a, worst.b
            )));
        }
        let (lv, le) = gk15(&f, worst.a, mid);
        let (rv, re) = gk15(&f, mid, worst.b);
        total += lv + rv - worst.value;
        total_err += le + re - worst.err;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: lv,
            err: le,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: rv,
            err: re,
        });
    }
    if !total.is_finite() {
        return Err(Error::numeric(
            "integrate: integrand produced a non-finite value",
        ));
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn polynomial_is_near_exact() {
        let cfg = QuadConfig::default();
        let got = integrate(|x| 3.0 * x * x, 0.0, 2.0, &cfg).unwrap();
        assert_abs_diff_eq!(got, 8.0, epsilon = 1e-12);
    }

    #[test]
    fn oscillatory_integrand() {
        let cfg = QuadConfig::default();
        let got = integrate(|x| (10.0 * x).sin(), 0.0, std::f64::consts::PI, &cfg).unwrap();
        let want = (1.0 - (10.0 * std::f64::consts::PI).cos()) / 10.0;
        assert_abs_diff_eq!(got, want, epsilon = 1e-11);
    }

    #[test]
    fn kinked_integrand_with_breakpoint() {
        let cfg = QuadConfig::default();
        let f = |x: f64| if x < 1.0 { x } else { 2.0 - x };
        let got = integrate_with_breakpoints(f, 0.0, 2.0, &[1.0], &cfg).unwrap();
        assert_abs_diff_eq!(got, 1.0, epsilon = 1e-13);
        // Without the breakpoint the integrator still gets there, just slower.
        let got2 = integrate(f, 0.0, 2.0, &cfg).unwrap();
        assert_abs_diff_eq!(got2, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn breakpoints_outside_range_are_ignored() {
        let cfg = QuadConfig::default();
        let got =
            integrate_with_breakpoints(|x| x, 0.0, 1.0, &[-3.0, 0.5, 7.0, f64::NAN], &cfg).unwrap();
        assert_abs_diff_eq!(got, 0.5, epsilon = 1e-13);
    }

    #[test]
    fn empty_and_invalid_ranges() {
        let cfg = QuadConfig::default();
        assert_eq!(integrate(|x| x, 2.0, 2.0, &cfg).unwrap(), 0.0);
        assert!(integrate(|x| x, 3.0, 1.0, &cfg).is_err());
        assert!(integrate(|x| x, 0.0, f64::INFINITY, &cfg).is_err());
    }

    #[test]
    fn reports_non_convergence() {
        let cfg = QuadConfig {
            abs_tol: 1e-300,
            rel_tol: 1e-300,
            max_segments: 16,
        };
        let err = integrate(|x| (x * 37.1).sin().abs().sqrt(), 0.0, 5.0, &cfg).unwrap_err();
        let text = err.to_string();
        assert!(text.contains("not converged"), "unexpected error: {text}");
    }
}
