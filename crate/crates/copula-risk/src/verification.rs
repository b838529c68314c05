//! Independent cross-checks of the analytic pipeline.
//!
//! Three oracles live here:
//!
//! * Monte Carlo: draw (U, V) from the copula, map them through the marginal
//!   quantile functions to failure times (T_f, T_c) and estimate
//!   P(T_f <= t, T_c <= t) by counting. This exercises the entire model from
//!   the opposite direction of the closed-form evaluation: sampling plus
//!   inverse transform instead of CDF composition.
//! * Closed form vs quadrature: the hypergeometric evaluation of the cyber
//!   CDF against adaptive integration of the hazard, reported as a maximum
//!   absolute deviation over a grid.
//! * A timing harness comparing the two cyber CDF paths under a fixed
//!   protocol: 1000 seeded points on [0, 200], split into 10 groups of 100,
//!   each timed over 100 repetitions with the first repetition discarded as
//!   warm-up, single-threaded on a monotonic clock.
//!
//! The cyber marginal saturates below 1 (the patch eventually stops all
//! attacks), so a uniform V above that supremum corresponds to a vehicle
//! whose security never fails; such samples are censored (treated as
//! never failing in the horizon) and counted in the report.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::{validate_grid, ProbabilityCurve};
use crate::cyber::CyberParams;
use crate::error::{Error, Result};
use crate::joint::JointScenario;
use crate::safety::SafetyParams;

/// Monte Carlo run configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McConfig {
    /// Number of copula draws; at least 1000.
    pub n_samples: usize,
    pub seed: u64,
    /// Evaluation times; strictly increasing, non-negative, non-empty.
    pub times: Vec<f64>,
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_samples < 1_000 {
            return Err(Error::invalid(format!(
                "Monte Carlo needs at least 1000 samples, got {}",
                self.n_samples
            )));
        }
        if self.times.is_empty() {
            return Err(Error::invalid("Monte Carlo needs at least one time"));
        }
        validate_grid(&self.times)
    }
}

/// Result of a Monte Carlo estimation run.
#[derive(Debug, Clone, Serialize)]
pub struct McReport {
    /// Empirical joint failure probability with binomial standard errors.
    pub curve: ProbabilityCurve,
    /// Samples whose uniform exceeded the cyber CDF supremum: vehicles whose
    /// security never fails. Treated as never failing within the horizon.
    pub censored_cyber: usize,
    pub n_samples: usize,
    pub seed: u64,
}

/// Inverse of the cyber CDF by monotone interpolation on a dense grid.
///
/// The grid has 8001 nodes on [0, horizon]; with the hazard bounded by a
/// few 1e-3 per hour the interpolation error in the recovered time is far
/// below the grid step, and the induced probability error is orders of
/// magnitude under the Monte Carlo noise floor.
struct CyberInverter {
    times: Vec<f64>,
    values: Vec<f64>,
    supremum: f64,
}

impl CyberInverter {
    const NODES: usize = 8001;

    fn build(params: &CyberParams, horizon: f64) -> Result<Self> {
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::invalid(format!(
                "inversion horizon must be positive and finite, got {horizon}"
            )));
        }
        let times: Vec<f64> = (0..Self::NODES)
            .map(|i| horizon * i as f64 / (Self::NODES - 1) as f64)
            .collect();
        let values: Vec<f64> = times
            .par_iter()
            .map(|&t| params.cdf(t))
            .collect::<Result<_>>()?;
        if values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::numeric(
                "cyber CDF is not strictly increasing on the inversion grid",
            ));
        }
        Ok(CyberInverter {
            times,
            values,
            supremum: params.cdf_supremum()?,
        })
    }

    fn is_censored(&self, v: f64) -> bool {
        v >= self.supremum
    }

    /// Failure time for the level `v`, or None when the level is not reached
    /// within the horizon.
    fn invert(&self, v: f64) -> Option<f64> {
        if v > *self.values.last().expect("non-empty grid") {
            return None;
        }
        let idx = self.values.partition_point(|&f| f < v);
        if idx == 0 {
            return Some(0.0);
        }
        let (f0, f1) = (self.values[idx - 1], self.values[idx]);
        let (t0, t1) = (self.times[idx - 1], self.times[idx]);
        Some(t0 + (v - f0) / (f1 - f0) * (t1 - t0))
    }
}

/// Exact inverse of the safety CDF; levels inside the baseline atom map to
/// an immediate failure at t = 0.
fn safety_inverse(p: &SafetyParams, u: f64) -> f64 {
    if u <= p.f0_offset {
        return 0.0;
    }
    let w = u - p.f0_offset;
    p.scale_lambda * (-(-w).ln_1p()).powf(1.0 / p.shape_k)
}

struct McSamples {
    t_safety: Vec<f64>,
    t_cyber: Vec<f64>,
    censored: usize,
}

/// Deterministic parallel sampling: the draw is split into 64 fixed chunks,
/// each running its own counter-mode stream of the seeded generator, so the
/// result is independent of thread scheduling.
fn draw_samples(scenario: &JointScenario, cfg: &McConfig) -> Result<McSamples> {
    let horizon = *cfg.times.last().expect("validated non-empty");
    let inverter = CyberInverter::build(&scenario.cyber, horizon)?;
    const CHUNKS: usize = 64;
    let base = cfg.n_samples / CHUNKS;
    let rem = cfg.n_samples % CHUNKS;
    let per_chunk: Vec<(Vec<f64>, Vec<f64>, usize)> = (0..CHUNKS)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
            rng.set_stream(chunk as u64);
            let m = base + usize::from(chunk < rem);
            let pairs = scenario.copula.sample_pairs_with_rng(m, &mut rng)?;
            let mut tf = Vec::with_capacity(m);
            let mut tc = Vec::with_capacity(m);
            let mut censored = 0usize;
            for (u, v) in pairs {
                tf.push(safety_inverse(&scenario.safety, u));
                if inverter.is_censored(v) {
                    censored += 1;
                }
                tc.push(inverter.invert(v).unwrap_or(f64::INFINITY));
            }
            Ok((tf, tc, censored))
        })
        .collect::<Result<_>>()?;
    let mut t_safety = Vec::with_capacity(cfg.n_samples);
    let mut t_cyber = Vec::with_capacity(cfg.n_samples);
    let mut censored = 0;
    for (tf, tc, c) in per_chunk {
        t_safety.extend(tf);
        t_cyber.extend(tc);
        censored += c;
    }
    Ok(McSamples {
        t_safety,
        t_cyber,
        censored,
    })
}

/// Monte Carlo estimate of the joint failure probability on `cfg.times`,
/// with binomial standard errors per point.
pub fn mc_joint_cdf(scenario: &JointScenario, cfg: &McConfig) -> Result<McReport> {
    cfg.validate()?;
    scenario.validate()?;
    let samples = draw_samples(scenario, cfg)?;
    let n = cfg.n_samples as f64;
    let mut values = Vec::with_capacity(cfg.times.len());
    let mut stderr = Vec::with_capacity(cfg.times.len());
    for &t in &cfg.times {
        let hits = samples
            .t_safety
            .iter()
            .zip(&samples.t_cyber)
            .filter(|(tf, tc)| **tf <= t && **tc <= t)
            .count();
        let p = hits as f64 / n;
        values.push(p);
        stderr.push((p * (1.0 - p) / n).sqrt());
    }
    let curve = ProbabilityCurve::with_stderr(
        format!("mc joint {}", scenario.copula.family_name()),
        cfg.times.clone(),
        values,
        stderr,
    )?;
    Ok(McReport {
        curve,
        censored_cyber: samples.censored,
        n_samples: cfg.n_samples,
        seed: cfg.seed,
    })
}

/// Kolmogorov-Smirnov statistics of the sampled failure times against the
/// analytic marginals, returned as (safety, cyber). Cyber samples beyond the
/// horizon count as not-yet-failed, which is exact for the restricted
/// comparison range. A 1% critical value is 1.63 / sqrt(n).
pub fn mc_marginal_ks(scenario: &JointScenario, cfg: &McConfig) -> Result<(f64, f64)> {
    cfg.validate()?;
    scenario.validate()?;
    let samples = draw_samples(scenario, cfg)?;
    let mut tf = samples.t_safety;
    tf.sort_unstable_by(f64::total_cmp);
    let ks_f = ks_statistic(&tf, cfg.n_samples, |t| scenario.safety.cdf(t))?;
    let mut tc: Vec<f64> = samples
        .t_cyber
        .iter()
        .copied()
        .filter(|t| t.is_finite())
        .collect();
    tc.sort_unstable_by(f64::total_cmp);
    let ks_c = ks_statistic(&tc, cfg.n_samples, |t| scenario.cyber.cdf(t))?;
    Ok((ks_f, ks_c))
}

/// Two-sided KS distance between the empirical CDF of `sorted` (out of
/// `n_total` samples; values above the largest entry may be omitted) and a
/// reference CDF that is continuous except for a possible atom at t = 0.
fn ks_statistic<F: Fn(f64) -> Result<f64>>(
    sorted: &[f64],
    n_total: usize,
    cdf: F,
) -> Result<f64> {
    let n = n_total as f64;
    let mut d = 0.0f64;
    let mut i = 0usize;
    while i < sorted.len() {
        let x = sorted[i];
        let mut j = i + 1;
        while j < sorted.len() && sorted[j] == x {
            j += 1;
        }
        let f = cdf(x)?;
        d = d.max((j as f64 / n - f).abs());
        if x > 0.0 {
            // Left-limit comparison; skipped at 0 where the reference CDF
            // itself may jump (the baseline atom).
            d = d.max((f - i as f64 / n).abs());
        }
        i = j;
    }
    Ok(d)
}

/// Maximum absolute deviation between the closed-form and quadrature cyber
/// CDFs over the grid. The attempt cap is disabled for the comparison (the
/// closed form does not model it).
pub fn closed_form_equivalence(cyber: &CyberParams, grid: &[f64]) -> Result<f64> {
    validate_grid(grid)?;
    let p = cyber.without_cap();
    p.validate()?;
    let mut worst = 0.0f64;
    for &t in grid {
        let c = p.cdf_closed_form(t)?;
        let q = p.cdf_quadrature(t)?;
        worst = worst.max((c - q).abs());
    }
    Ok(worst)
}

/// Per-group timing statistics; times are seconds per evaluation.
#[derive(Debug, Clone, Serialize)]
pub struct GroupStats {
    pub group: usize,
    pub mean_time_closed: f64,
    pub mean_time_quadrature: f64,
    pub speed_ratio: f64,
}

/// Timing comparison of the two cyber CDF evaluation paths.
#[derive(Debug, Clone, Serialize)]
pub struct BenchReport {
    pub seed: u64,
    pub n_points: usize,
    /// Mean seconds per evaluation across groups, closed form.
    pub mean_time_closed: f64,
    /// Mean seconds per evaluation across groups, adaptive quadrature.
    pub mean_time_quadrature: f64,
    /// mean_time_quadrature / mean_time_closed.
    pub speed_ratio: f64,
    pub groups: Vec<GroupStats>,
}

/// The 1000 candidate evaluation times for the benchmark, drawn uniformly
/// on [0, 200] from the seeded generator.
fn benchmark_points(seed: u64) -> Vec<f64> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    (0..1_000).map(|_| rng.gen::<f64>() * 200.0).collect()
}

/// Run the timing protocol: 1000 seeded points on [0, 200] split into 10
/// disjoint groups of 100; each group evaluated 100 times per method with
/// the first repetition discarded as warm-up. Single-threaded, monotonic
/// clock, cap disabled (closed-form precondition).
pub fn run_benchmark(cyber: &CyberParams, seed: u64) -> Result<BenchReport> {
    let p = cyber.without_cap();
    p.validate()?;
    let points = benchmark_points(seed);
    for &t in &points {
        p.cdf_closed_form(t)?;
        p.cdf_quadrature(t)?;
    }
    const GROUPS: usize = 10;
    const GROUP_SIZE: usize = 100;
    const REPS: usize = 100;
    let mut groups = Vec::with_capacity(GROUPS);
    for g in 0..GROUPS {
        let pts = &points[g * GROUP_SIZE..(g + 1) * GROUP_SIZE];
        let mut closed_ns = 0.0f64;
        let mut quad_ns = 0.0f64;
        for rep in 0..REPS {
            let t0 = Instant::now();
            for &t in pts {
                std::hint::black_box(p.cdf_closed_form(t).expect("pre-validated"));
            }
            let d_closed = t0.elapsed();
            let t1 = Instant::now();
            for &t in pts {
                std::hint::black_box(p.cdf_quadrature(t).expect("pre-validated"));
            }
            let d_quad = t1.elapsed();
            if rep > 0 {
                closed_ns += d_closed.as_nanos() as f64;
                quad_ns += d_quad.as_nanos() as f64;
            }
        }
        let evals = ((REPS - 1) * GROUP_SIZE) as f64;
        let mean_time_closed = closed_ns / evals * 1e-9;
        let mean_time_quadrature = quad_ns / evals * 1e-9;
        groups.push(GroupStats {
            group: g,
            mean_time_closed,
            mean_time_quadrature,
            speed_ratio: mean_time_quadrature / mean_time_closed,
        });
    }
    let mean_time_closed =
        groups.iter().map(|g| g.mean_time_closed).sum::<f64>() / GROUPS as f64;
    let mean_time_quadrature =
        groups.iter().map(|g| g.mean_time_quadrature).sum::<f64>() / GROUPS as f64;
    Ok(BenchReport {
        seed,
        n_points: points.len(),
        mean_time_closed,
        mean_time_quadrature,
        speed_ratio: mean_time_quadrature / mean_time_closed,
        groups,
    })
}
