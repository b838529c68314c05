//! Acceptance suite: thirteen numbered criteria covering reference-value
//! reproduction, structural copula properties, closed-form equivalence,
//! Monte Carlo agreement, benchmark ordering, and coupled-model continuity.
//!
//! Every test prints exactly one `[PASS]`/`[FAIL]` line with its measured
//! numbers; run with `cargo test --test acceptance -- --nocapture` to see
//! them all. Tolerances are pinned next to each check.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use copula_risk::copula::{normal_rho_derivative, CopulaSpec};
use copula_risk::curve::default_grid;
use copula_risk::cyber::{ClosedFormConstants, CyberParams};
use copula_risk::dynamic::sfdc;
use copula_risk::joint::JointScenario;
use copula_risk::presets::{cyber_base, preset};
use copula_risk::safety::LifecyclePhase;
use copula_risk::tables::reproduce;
use copula_risk::verification::{
    closed_form_equivalence, mc_joint_cdf, run_benchmark, McConfig,
};

fn report(number: u32, label: &str, pass: bool, detail: &str) {
    let tag = if pass { "[PASS]" } else { "[FAIL]" };
    println!("{tag} criterion {number}: {label} ({detail})");
    assert!(pass, "criterion {number}: {label}: {detail}");
}

/// One representative parameterization per copula family.
fn representatives() -> Vec<CopulaSpec> {
    vec![
        CopulaSpec::Normal { rho: 0.27 },
        CopulaSpec::StudentT { rho: 0.27, nu: 4.0 },
        CopulaSpec::Gumbel { theta: 2.0 },
        CopulaSpec::Frank { theta: 1.5 },
        CopulaSpec::Clayton { theta: 0.8 },
    ]
}

#[test]
fn criterion_01_marginal_anchors() {
    let start = Instant::now();
    let safety_refs = [
        (LifecyclePhase::InfantMortality, 5.865e-2),
        (LifecyclePhase::RandomFailure, 1.825e-3),
        (LifecyclePhase::WearOut, 4.341e-9),
    ];
    let mut worst_rel = 0.0f64;
    for (phase, expected) in safety_refs {
        let value = phase.params(0.0).unwrap().cdf(200.0).unwrap();
        worst_rel = worst_rel.max((value - expected).abs() / expected);
    }
    let cyber_60 = cyber_base(60.0).unwrap().cdf(200.0).unwrap();
    let cyber_48 = cyber_base(48.0).unwrap().cdf(200.0).unwrap();
    let d60 = (cyber_60 - 0.4410).abs();
    let d48 = (cyber_48 - 0.3295).abs();
    let elapsed = start.elapsed().as_secs_f64();
    let pass = worst_rel <= 1e-3 && d60 <= 2e-3 && d48 <= 2e-3 && elapsed < 1.0;
    report(
        1,
        "marginal anchors at t = 200",
        pass,
        &format!(
            "worst safety rel diff {worst_rel:.1e}, cyber abs diffs {d60:.1e} and {d48:.1e}, \
             {elapsed:.3} s"
        ),
    );
}

#[test]
fn criterion_02_independence_factorization() {
    let ff = LifecyclePhase::InfantMortality
        .params(0.0)
        .unwrap()
        .cdf(200.0)
        .unwrap();
    let fc = cyber_base(60.0).unwrap().cdf(200.0).unwrap();
    let joint = CopulaSpec::Normal { rho: 0.0 }.cdf(ff, fc).unwrap();
    let d_value = (joint - 2.586e-2).abs();
    let d_product = (joint - ff * fc).abs();
    let pass = d_value <= 5e-6 && d_product <= 1e-12;
    report(
        2,
        "independence factorization at t = 200",
        pass,
        &format!("|joint - 2.586e-2| = {d_value:.1e}, |joint - product| = {d_product:.1e}"),
    );
}

fn worst_diff(cells: &[copula_risk::tables::TableCell]) -> f64 {
    cells.iter().fold(0.0, |acc, c| acc.max(c.abs_diff))
}

#[test]
fn criterion_03_frank_table_reproduction() {
    let start = Instant::now();
    let table = reproduce("prop1-frank").unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    let worst = worst_diff(&table.cells);
    let pass = table.cells.len() == 36 && table.all_pass() && worst <= 3e-3 && elapsed < 5.0;
    report(
        3,
        "36-cell Frank table at t = 100 within 3e-3",
        pass,
        &format!(
            "{} cells, {} pass, worst |diff| {worst:.1e}, {elapsed:.3} s",
            table.cells.len(),
            table.n_pass
        ),
    );
}

#[test]
fn criterion_04_family_tables_at_200() {
    let ids = [
        "joint-normal-200",
        "joint-t-200",
        "joint-gumbel-200",
        "joint-frank-200",
        "joint-clayton-200",
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for id in ids {
        let table = reproduce(id).unwrap();
        pass &= table.all_pass();
        let flagged = table.notes.len() > 1;
        parts.push(format!(
            "{id} {}/{} worst {:.1e}{}",
            table.n_pass,
            table.cells.len(),
            worst_diff(&table.cells),
            if flagged { " [patch-time fallback]" } else { "" }
        ));
    }
    report(
        4,
        "per-family joint tables at t = 200",
        pass,
        &parts.join("; "),
    );
}

#[test]
fn criterion_05_dependence_monotonicity() {
    type Make = fn(f64) -> CopulaSpec;
    let elliptical = [-0.65, -0.39, 0.0, 0.27, 0.39, 0.65];
    let families: [(&str, Make, [f64; 6]); 5] = [
        ("normal", |r| CopulaSpec::Normal { rho: r }, elliptical),
        (
            "student-t",
            |r| CopulaSpec::StudentT { rho: r, nu: 4.0 },
            elliptical,
        ),
        (
            "gumbel",
            |t| CopulaSpec::Gumbel { theta: t },
            [1.0, 1.2, 1.5, 2.0, 3.0, 5.0],
        ),
        (
            "frank",
            |t| CopulaSpec::Frank { theta: t },
            [-2.5, -1.0, 0.0, 0.5, 1.5, 2.5],
        ),
        (
            "clayton",
            |t| CopulaSpec::Clayton { theta: t },
            [0.1, 0.2, 0.3, 1.0, 2.0, 7.0],
        ),
    ];
    let mut checks = 0usize;
    let mut violations = 0usize;
    let mut smallest_gap = f64::INFINITY;
    for (name, make, params) in families {
        for i in 1..=20 {
            for j in 1..=20 {
                let u = i as f64 / 21.0;
                let v = j as f64 / 21.0;
                let values: Vec<f64> = params
                    .iter()
                    .map(|&p| make(p).cdf(u, v).unwrap())
                    .collect();
                for w in values.windows(2) {
                    checks += 1;
                    let gap = w[1] - w[0];
                    smallest_gap = smallest_gap.min(gap);
                    if gap <= 0.0 {
                        violations += 1;
                        eprintln!("{name}: not increasing at u={u:.3} v={v:.3}");
                    }
                }
            }
        }
    }
    let pass = violations == 0;
    report(
        5,
        "strict monotonicity in the dependence parameter",
        pass,
        &format!("{checks} ordered pairs, {violations} violations, smallest gap {smallest_gap:.1e}"),
    );
}

#[test]
fn criterion_06_patch_time_curve_ordering() {
    let patch_times = [24.0, 36.0, 48.0, 60.0];
    let mut violations = 0usize;
    for copula in representatives() {
        let scenario = JointScenario::new(
            copula,
            LifecyclePhase::InfantMortality.params(0.0).unwrap(),
            cyber_base(48.0).unwrap(),
            default_grid(),
        )
        .unwrap();
        let curves = scenario.sweep_patch_time(&patch_times).unwrap();
        for pair in curves.windows(2) {
            for (early, late) in pair[0].values.iter().zip(&pair[1].values) {
                if *late < *early - 1e-12 {
                    violations += 1;
                }
            }
        }
    }
    let at_200 = |t_patch: f64| {
        JointScenario::new(
            CopulaSpec::Normal { rho: 0.27 },
            LifecyclePhase::InfantMortality.params(0.0).unwrap(),
            cyber_base(t_patch).unwrap(),
            vec![200.0],
        )
        .unwrap()
        .joint_failure_prob(200.0)
        .unwrap()
    };
    let ratio = at_200(48.0) / at_200(24.0);
    let pass = violations == 0 && (1.8..=2.2).contains(&ratio);
    report(
        6,
        "pointwise ordering under patch-time sweep",
        pass,
        &format!(
            "{violations} ordering violations over 5 families x 401 points, \
             24 to 48 hour ratio {ratio:.3}"
        ),
    );
}

#[test]
fn criterion_07_correlation_derivative_identity() {
    let mut rng = ChaCha12Rng::seed_from_u64(77);
    let h = 1e-4;
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let u = 0.02 + 0.96 * rng.gen::<f64>();
        let v = 0.02 + 0.96 * rng.gen::<f64>();
        let rho = -0.9 + 1.8 * rng.gen::<f64>();
        let up = CopulaSpec::Normal { rho: rho + h }.cdf(u, v).unwrap();
        let down = CopulaSpec::Normal { rho: rho - h }.cdf(u, v).unwrap();
        let fd = (up - down) / (2.0 * h);
        let analytic = normal_rho_derivative(u, v, rho).unwrap();
        worst = worst.max((fd - analytic).abs());
    }
    let pass = worst <= 1e-5;
    report(
        7,
        "correlation derivative matches central differences",
        pass,
        &format!("worst |fd - analytic| {worst:.1e} over 100 random triples"),
    );
}

#[test]
fn criterion_08_closed_form_equivalence() {
    let grid = default_grid();
    let base_dev = closed_form_equivalence(&cyber_base(48.0).unwrap(), &grid).unwrap();
    let mut rng = ChaCha12Rng::seed_from_u64(88);
    let mut fuzz_worst = 0.0f64;
    let mut accepted = 0usize;
    let mut attempts = 0usize;
    while accepted < 100 {
        attempts += 1;
        assert!(attempts < 10_000, "fuzz envelope rejected too many draws");
        let params = CyberParams {
            alpha1: 0.5 + 1.5 * rng.gen::<f64>(),
            beta1: 0.5 + rng.gen::<f64>(),
            p0: 1e-5 + 9e-5 * rng.gen::<f64>(),
            gamma: 0.05 + 0.25 * rng.gen::<f64>(),
            n_threshold: f64::INFINITY,
            t_patch: 20.0 + 80.0 * rng.gen::<f64>(),
            mu: 0.005 + 0.095 * rng.gen::<f64>(),
            mu2: 1e-4 + 0.0499 * rng.gen::<f64>(),
        };
        // Stay inside the series' fast-converging disc.
        if ClosedFormConstants::from_params(&params)
            .unwrap()
            .b_ratio
            .abs()
            > 0.9375
        {
            continue;
        }
        fuzz_worst = fuzz_worst.max(closed_form_equivalence(&params, &grid).unwrap());
        accepted += 1;
    }
    let pass = base_dev <= 1e-8 && fuzz_worst <= 1e-7;
    report(
        8,
        "closed form equals quadrature",
        pass,
        &format!(
            "base max deviation {base_dev:.1e}, fuzz worst {fuzz_worst:.1e} over {accepted} \
             parameter draws"
        ),
    );
}

#[test]
fn criterion_09_benchmark_speed_ratio() {
    let start = Instant::now();
    let bench = run_benchmark(&cyber_base(48.0).unwrap(), 42).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    let pass = bench.speed_ratio >= 10.0 && elapsed < 120.0;
    report(
        9,
        "closed form at least 10x faster than quadrature",
        pass,
        &format!(
            "speed ratio {:.1}, closed {:.2e} s/eval, quadrature {:.2e} s/eval, {elapsed:.1} s",
            bench.speed_ratio, bench.mean_time_closed, bench.mean_time_quadrature
        ),
    );
}

#[test]
fn criterion_10_monte_carlo_agreement() {
    let start = Instant::now();
    let times = vec![50.0, 100.0, 150.0, 200.0];
    let mut worst_z = 0.0f64;
    let mut failures = Vec::new();
    for (idx, copula) in representatives().into_iter().enumerate() {
        let f0 = match copula {
            CopulaSpec::StudentT { .. } => 0.1,
            _ => 0.0,
        };
        let family = copula.family_name();
        let scenario = JointScenario::new(
            copula,
            LifecyclePhase::InfantMortality.params(f0).unwrap(),
            cyber_base(60.0).unwrap(),
            times.clone(),
        )
        .unwrap();
        let mc = mc_joint_cdf(
            &scenario,
            &McConfig {
                n_samples: 1_000_000,
                seed: 101 + idx as u64,
                times: times.clone(),
            },
        )
        .unwrap();
        let stderr = mc.curve.stderr.as_ref().unwrap();
        for (i, &t) in times.iter().enumerate() {
            let analytic = scenario.joint_failure_prob(t).unwrap();
            let z = (analytic - mc.curve.values[i]).abs() / stderr[i];
            worst_z = worst_z.max(z);
            if z > 3.0 {
                failures.push(format!("{family} t={t} z={z:.2}"));
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let pass = failures.is_empty() && elapsed < 120.0;
    report(
        10,
        "analytic values within 3 sigma of Monte Carlo at n = 10^6",
        pass,
        &format!(
            "worst |z| {worst_z:.2} over 5 families x 4 times{}{}, {elapsed:.1} s",
            if failures.is_empty() { "" } else { "; exceedances: " },
            failures.join(", ")
        ),
    );
}

#[test]
fn criterion_11_dynamic_tables() {
    let mut pass = true;
    let mut parts = Vec::new();
    for id in ["dyn-normal", "dyn-gumbel", "dyn-frank"] {
        let table = reproduce(id).unwrap();
        pass &= table.all_pass() && worst_diff(&table.cells) <= 5e-3;
        parts.push(format!(
            "{id} {}/{} worst {:.1e}",
            table.n_pass,
            table.cells.len(),
            worst_diff(&table.cells)
        ));
    }
    let sweep = reproduce("prop4-patch").unwrap();
    pass &= sweep.all_pass();
    let mut monotone = true;
    for col in 0..3 {
        let column: Vec<f64> = sweep
            .cells
            .iter()
            .skip(col)
            .step_by(3)
            .map(|c| c.computed)
            .collect();
        monotone &= column.windows(2).all(|w| w[1] > w[0]);
    }
    pass &= monotone;
    parts.push(format!(
        "patch sweep {}/{} monotone={monotone}",
        sweep.n_pass,
        sweep.cells.len()
    ));
    report(11, "coupled-model tables at t = 200", pass, &parts.join("; "));
}

#[test]
fn criterion_12_envelope_and_rectangle_mass() {
    let mut rng = ChaCha12Rng::seed_from_u64(1212);
    let mut violations = 0usize;
    for copula in representatives() {
        for _ in 0..10_000 {
            let u = rng.gen::<f64>();
            let v = rng.gen::<f64>();
            let c = copula.cdf(u, v).unwrap();
            let lower = (u + v - 1.0).max(0.0);
            let upper = u.min(v);
            if c < lower - 1e-12 || c > upper + 1e-12 {
                violations += 1;
            }
        }
        for _ in 0..2_500 {
            let (a, b) = (rng.gen::<f64>(), rng.gen::<f64>());
            let (c1, c2) = (rng.gen::<f64>(), rng.gen::<f64>());
            let (u1, u2) = (a.min(b), a.max(b));
            let (v1, v2) = (c1.min(c2), c1.max(c2));
            let mass = copula.cdf(u2, v2).unwrap() - copula.cdf(u1, v2).unwrap()
                - copula.cdf(u2, v1).unwrap()
                + copula.cdf(u1, v1).unwrap();
            if mass < -1e-12 {
                violations += 1;
            }
        }
    }
    let pass = violations == 0;
    report(
        12,
        "bounds and rectangle positivity hold",
        pass,
        &format!("{violations} violations over 5 families x 12500 checks"),
    );
}

#[test]
fn criterion_13_coupled_safety_continuity_at_cut() {
    let base = preset("normal-dyn").unwrap();
    let open = base.dynamic.unwrap();
    let mut cut = open.clone();
    cut.t_cut = 150.0;
    let scenario = &base.scenario;
    let jump = (sfdc(150.0, scenario, &cut).unwrap() - sfdc(150.0, scenario, &open).unwrap()).abs();
    let mut worst_parallel = 0.0f64;
    for w in [155.0, 160.0, 170.0, 185.0, 200.0].windows(2) {
        let model_inc =
            sfdc(w[1], scenario, &cut).unwrap() - sfdc(w[0], scenario, &cut).unwrap();
        let marginal_inc =
            scenario.safety.cdf(w[1]).unwrap() - scenario.safety.cdf(w[0]).unwrap();
        worst_parallel = worst_parallel.max((model_inc - marginal_inc).abs());
    }
    let pass = jump <= 1e-12 && worst_parallel <= 1e-12;
    report(
        13,
        "coupled safety curve continuous and parallel after the cut",
        pass,
        &format!("|jump at 150| = {jump:.1e}, worst increment mismatch {worst_parallel:.1e}"),
    );
}
