//! Randomized property tests: structural invariants that must hold for every
//! admissible parameterization, not just the tabulated ones. Copula values
//! stay inside the Frechet bounds and assign nonnegative mass to rectangles,
//! conditional distributions behave like CDFs, marginal quantiles invert
//! their CDFs, and the post-patch series ratio stays inside the unit disc.

use proptest::prelude::*;

use copula_risk::copula::CopulaSpec;
use copula_risk::cyber::{ClosedFormConstants, CyberParams};
use copula_risk::safety::SafetyParams;

fn copula_strategy() -> impl Strategy<Value = CopulaSpec> {
    prop_oneof![
        (-0.95..0.95f64).prop_map(|rho| CopulaSpec::Normal { rho }),
        ((-0.95..0.95f64), (2.5..12.0f64))
            .prop_map(|(rho, nu)| CopulaSpec::StudentT { rho, nu }),
        (1.0..8.0f64).prop_map(|theta| CopulaSpec::Gumbel { theta }),
        (-30.0..30.0f64).prop_map(|theta| CopulaSpec::Frank { theta }),
        (0.05..10.0f64).prop_map(|theta| CopulaSpec::Clayton { theta }),
    ]
}

/// Cyber parameters drawn from the documented operating envelope, with the
/// attempt cap disabled so the closed form applies on the whole half-line.
fn cyber_envelope() -> impl Strategy<Value = CyberParams> {
    (
        0.5..2.0f64,
        0.5..1.5f64,
        1e-5..1e-4f64,
        0.05..0.3f64,
        20.0..100.0f64,
        0.005..0.1f64,
        1e-4..0.05f64,
    )
        .prop_map(
            |(alpha1, beta1, p0, gamma, t_patch, mu, mu2)| CyberParams {
                alpha1,
                beta1,
                p0,
                gamma,
                n_threshold: f64::INFINITY,
                t_patch,
                mu,
                mu2,
            },
        )
}

proptest! {
    #[test]
    fn copula_stays_inside_frechet_bounds(
        copula in copula_strategy(),
        u in 0.0..1.0f64,
        v in 0.0..1.0f64,
    ) {
        let c = copula.cdf(u, v).unwrap();
        let lower = (u + v - 1.0).max(0.0);
        let upper = u.min(v);
        prop_assert!(c >= lower - 1e-12, "{c} below {lower}");
        prop_assert!(c <= upper + 1e-12, "{c} above {upper}");
    }

    #[test]
    fn copula_boundary_values_are_exact(
        copula in copula_strategy(),
        u in 0.001..0.999f64,
    ) {
        prop_assert!(copula.cdf(u, 0.0).unwrap().abs() <= 1e-12);
        prop_assert!(copula.cdf(0.0, u).unwrap().abs() <= 1e-12);
        prop_assert!((copula.cdf(u, 1.0).unwrap() - u).abs() <= 1e-12);
        prop_assert!((copula.cdf(1.0, u).unwrap() - u).abs() <= 1e-12);
    }

    #[test]
    fn copula_assigns_nonnegative_mass_to_rectangles(
        copula in copula_strategy(),
        a in 0.0..1.0f64,
        b in 0.0..1.0f64,
        c in 0.0..1.0f64,
        d in 0.0..1.0f64,
    ) {
        let (u1, u2) = (a.min(b), a.max(b));
        let (v1, v2) = (c.min(d), c.max(d));
        let mass = copula.cdf(u2, v2).unwrap() - copula.cdf(u1, v2).unwrap()
            - copula.cdf(u2, v1).unwrap()
            + copula.cdf(u1, v1).unwrap();
        prop_assert!(mass >= -1e-12, "negative rectangle mass {mass}");
    }

    #[test]
    fn conditional_distribution_is_a_cdf_in_v(
        copula in copula_strategy(),
        u in 0.01..0.99f64,
        x in 0.01..0.99f64,
        y in 0.01..0.99f64,
    ) {
        let (v1, v2) = (x.min(y), x.max(y));
        let h1 = copula.partial_wrt_u(u, v1).unwrap();
        let h2 = copula.partial_wrt_u(u, v2).unwrap();
        prop_assert!((-1e-9..=1.0 + 1e-9).contains(&h1), "h(v|u) = {h1} outside [0, 1]");
        prop_assert!((-1e-9..=1.0 + 1e-9).contains(&h2), "h(v|u) = {h2} outside [0, 1]");
        prop_assert!(h2 >= h1 - 1e-9, "conditional decreased: {h1} -> {h2}");
    }

    #[test]
    fn safety_quantile_inverts_cdf(
        shape in 0.4..3.5f64,
        scale in 100.0..1e6f64,
        p in 1e-6..0.999f64,
    ) {
        let params = SafetyParams::new(shape, scale, 0.0).unwrap();
        let t = params.quantile(p).unwrap();
        let back = params.cdf(t).unwrap();
        prop_assert!((back - p).abs() <= 1e-9, "round trip {p} -> {t} -> {back}");
    }

    #[test]
    fn safety_quantile_rejects_levels_below_the_atom(
        shape in 0.4..3.5f64,
        scale in 100.0..1e6f64,
        f0 in 0.01..0.3f64,
        frac in 0.0..0.95f64,
    ) {
        let params = SafetyParams::new(shape, scale, f0).unwrap();
        prop_assert!(params.quantile(frac * f0).is_err());
        let p_above = f0 + frac * (0.999 - f0);
        let t = params.quantile(p_above).unwrap();
        let back = params.cdf(t).unwrap();
        prop_assert!((back - p_above).abs() <= 1e-9);
    }

    #[test]
    fn post_patch_series_ratio_stays_in_unit_disc(params in cyber_envelope()) {
        let c = ClosedFormConstants::from_params(&params).unwrap();
        prop_assert!(c.b_ratio > -1.0 && c.b_ratio < 0.0, "b = {}", c.b_ratio);
    }
}

proptest! {
    // Each case runs a bisection with many CDF evaluations; keep the case
    // count moderate so the whole target stays fast.
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cyber_quantile_inverts_cdf(
        params in cyber_envelope(),
        frac in 0.05..0.95f64,
    ) {
        let sup = params.cdf_supremum().unwrap();
        let p = frac * sup;
        let t = params.quantile(p).unwrap();
        let back = params.cdf(t).unwrap();
        prop_assert!((back - p).abs() <= 1e-8, "round trip {p} -> {t} -> {back}");
    }

    #[test]
    fn cyber_quantile_rejects_unreachable_levels(
        params in cyber_envelope(),
        frac in 0.0..0.9f64,
    ) {
        let sup = params.cdf_supremum().unwrap();
        let p = sup + frac * (1.0 - sup);
        prop_assert!(params.quantile(p).is_err());
    }
}
