//! Property tests for the spec-level invariants of the math core.

use coopnet_core::closed_form::inter_total_power;
use coopnet_core::closed_form::{
    diversity_outage_equal_means, exp_outage, inter_cellular_powers, inter_exchange_powers,
    intra_powers_and_efficiency, snr_threshold, sum_exp_cdf_general, traditional_powers,
    DecodePrior, IntraOptions, Targets,
};
use coopnet_core::lambert::{lambert_w0, lambert_wm1};
use coopnet_core::link_budget::{friis_factor, mean_snr_per_watt, Geometry, Link, RadioParams};
use coopnet_core::monte_carlo::{simulate_inter, TrialPlan};
use proptest::prelude::*;

fn radio_strategy() -> impl Strategy<Value = RadioParams<f64>> {
    (
        4e8..6e9f64,
        1e5..5e7f64,
        4e8..6e9f64,
        1e5..5e7f64,
        (0.05..20.0f64, 0.05..20.0f64, 0.05..20.0f64),
        (0.05..20.0f64, 0.05..20.0f64, 0.05..20.0f64, 0.05..20.0f64),
    )
        .prop_map(|(f_c, b_c, f_s, b_s, gains, sigmas)| RadioParams {
            f_c,
            b_c,
            f_s,
            b_s,
            g_u1: gains.0,
            g_u2: gains.1,
            g_bs: gains.2,
            sigma2_12: sigmas.0,
            sigma2_21: sigmas.1,
            sigma2_1b: sigmas.2,
            sigma2_2b: sigmas.3,
            ..RadioParams::default()
        })
}

fn geometry_strategy() -> impl Strategy<Value = Geometry<f64>> {
    (
        50.0..5000.0f64,
        50.0..5000.0f64,
        1.0..500.0f64,
        1.0..500.0f64,
    )
        .prop_map(|(d_1b, d_2b, d_12, d_21)| Geometry {
            d_1b,
            d_2b,
            d_12,
            d_21,
        })
}

/// Targets with a bounded spectral efficiency in both bands so thresholds
/// stay in floating-point range.
fn targets_for(radio: &RadioParams<f64>, p_out: f64, rho: f64) -> Targets<f64> {
    Targets {
        p_out,
        rate: rho * radio.b_c.min(radio.b_s),
    }
}

proptest! {
    #[test]
    fn friis_inverse_square_law(
        f in 4e8..6e9f64,
        d1 in 0.5..5000.0f64,
        d2 in 0.5..5000.0f64,
        g in 0.05..50.0f64,
    ) {
        let a = friis_factor(f, d1, g, 1.0).unwrap().value;
        let b = friis_factor(f, d2, g, 1.0).unwrap().value;
        let lhs = a * d1 * d1;
        let rhs = b * d2 * d2;
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(rhs.abs()));
        prop_assert!(a.is_finite() && a > 0.0);
    }

    #[test]
    fn mean_snr_scales_multiplicatively(
        radio in radio_strategy(),
        geo in geometry_strategy(),
        k in 0.01..100.0f64,
    ) {
        let base = mean_snr_per_watt(Link::U1ToBs, &radio, &geo).unwrap();
        prop_assert!(base.is_finite() && base > 0.0);

        let mut scaled = radio;
        scaled.sigma2_1b *= k;
        let s = mean_snr_per_watt(Link::U1ToBs, &scaled, &geo).unwrap();
        prop_assert!((s / base - k).abs() <= 1e-12 * k);

        let mut gained = radio;
        gained.g_bs *= k;
        let g = mean_snr_per_watt(Link::U1ToBs, &gained, &geo).unwrap();
        prop_assert!((g / base - k).abs() <= 1e-12 * k);

        let mut noisier = radio;
        noisier.n0 *= k;
        let n = mean_snr_per_watt(Link::U1ToBs, &noisier, &geo).unwrap();
        prop_assert!((n * k / base - 1.0).abs() <= 1e-12);

        let mut wider = radio;
        wider.b_c *= k;
        let w = mean_snr_per_watt(Link::U1ToBs, &wider, &geo).unwrap();
        prop_assert!((w * k / base - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn outage_cdfs_ordered_and_in_range(
        m in 1e-3..1e3f64,
        x in 1e-9..20.0f64,
    ) {
        let t = x * m;
        let single = exp_outage(m, t).unwrap();
        let diversity = diversity_outage_equal_means(m, t).unwrap();
        prop_assert!((0.0..1.0).contains(&single));
        prop_assert!((0.0..1.0).contains(&diversity));
        // diversity never hurts at equal mean SNR
        prop_assert!(diversity < single);
    }

    #[test]
    fn sum_exp_continuous_at_equal_means(
        m in 0.1..10.0f64,
        x in 1e-4..10.0f64,
        delta in 0.0..1e-8f64,
    ) {
        let t = x * m;
        let skew = sum_exp_cdf_general(m * (1.0 + delta), m * (1.0 - delta), t).unwrap();
        let equal = diversity_outage_equal_means(m, t).unwrap();
        prop_assert!((skew - equal).abs() <= 1e-10);
    }

    #[test]
    fn lambert_residuals_randomized(
        x0 in -0.3678..1e6f64,
        xm in -0.3678..-1e-12f64,
    ) {
        let w0 = lambert_w0(x0).unwrap();
        prop_assert!((w0 * w0.exp() - x0).abs() <= 1e-12 * x0.abs().max(1.0));
        let wm = lambert_wm1(xm).unwrap();
        prop_assert!((wm * wm.exp() - xm).abs() <= 1e-12 * xm.abs().max(1.0));
    }

    #[test]
    fn traditional_round_trip_randomized(
        radio in radio_strategy(),
        geo in geometry_strategy(),
        p_exp in -5.0..-0.52f64,
        rho in 0.25..6.0f64,
    ) {
        let tgt = targets_for(&radio, 10f64.powf(p_exp), rho);
        let alloc = traditional_powers(&radio, &geo, &tgt).unwrap();
        let t = snr_threshold(tgt.rate, radio.b_c);
        for (p, link) in [
            (alloc.p1_cellular, Link::U1ToBs),
            (alloc.p2_cellular, Link::U2ToBs),
        ] {
            let s = mean_snr_per_watt(link, &radio, &geo).unwrap();
            let back = exp_outage(p * s, t).unwrap();
            prop_assert!((back - tgt.p_out).abs() <= 1e-12 * tgt.p_out);
        }
    }

    #[test]
    fn cooperative_round_trips_randomized(
        radio in radio_strategy(),
        geo in geometry_strategy(),
        p_exp in -5.0..-0.52f64,
        rho in 0.25..6.0f64,
        double in any::<bool>(),
    ) {
        let tgt = targets_for(&radio, 10f64.powf(p_exp), rho);
        let prior = DecodePrior::from_target(tgt.p_out).unwrap();

        // short-range exchange
        let (p1s, p2s) = inter_exchange_powers(&radio, &geo, &tgt).unwrap();
        let ts = snr_threshold(tgt.rate, radio.b_s);
        let s12 = mean_snr_per_watt(Link::U1ToU2, &radio, &geo).unwrap();
        let s21 = mean_snr_per_watt(Link::U2ToU1, &radio, &geo).unwrap();
        prop_assert!((exp_outage(p1s * s12, ts).unwrap() - tgt.p_out).abs() <= 1e-11 * tgt.p_out);
        prop_assert!((exp_outage(p2s * s21, ts).unwrap() - tgt.p_out).abs() <= 1e-11 * tgt.p_out);

        // joint cellular phase of both cooperative schemes
        let (p1c, p2c) = inter_cellular_powers(&radio, &geo, &tgt).unwrap();
        let s1 = mean_snr_per_watt(Link::U1ToBs, &radio, &geo).unwrap();
        let s2 = mean_snr_per_watt(Link::U2ToBs, &radio, &geo).unwrap();
        let tc = snr_threshold(tgt.rate, radio.b_c);
        let mixture = prior.p_theta1 * sum_exp_cdf_general(p1c * s1, p2c * s2, tc).unwrap()
            + prior.p_theta2 * exp_outage(p1c * s1, tc).unwrap();
        prop_assert!((mixture - tgt.p_out).abs() <= 1e-9 * tgt.p_out);

        let opts = IntraOptions { exchange_double_rate: double };
        let intra = intra_powers_and_efficiency(&radio, &geo, &tgt, opts).unwrap();
        let t2 = snr_threshold(2.0 * tgt.rate, radio.b_c);
        let m = intra.allocation.p1_cellular * s1;
        let mixture = prior.p_theta1 * diversity_outage_equal_means(m, t2).unwrap()
            + prior.p_theta2 * exp_outage(m, t2).unwrap();
        prop_assert!((mixture - tgt.p_out).abs() <= 1e-9 * tgt.p_out);
    }

    #[test]
    fn simulation_is_chunking_invariant(
        seed in any::<u64>(),
        chunk in 1u64..5000,
    ) {
        let radio = RadioParams::<f64>::default();
        let geo = Geometry::default();
        let tgt = Targets::default();
        let alloc = inter_total_power(&radio, &geo, &tgt).unwrap();
        let n = 4096;
        let a = simulate_inter(
            &radio, &geo, tgt.rate, &alloc,
            &TrialPlan::new(n, seed).unwrap().with_chunk_size(chunk).unwrap(),
        ).unwrap();
        let b = simulate_inter(
            &radio, &geo, tgt.rate, &alloc,
            &TrialPlan::new(n, seed).unwrap().with_chunk_size(n).unwrap(),
        ).unwrap();
        prop_assert_eq!(a, b);
    }
}
