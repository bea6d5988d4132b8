use ldp_core::distributions::{DistributionSpec, Marginal, OrliczChain, OrliczFunction, Regime};
use ldp_core::mc::{clopper_pearson, estimate_tail, ks_statistic, ks_two_sample, wasserstein_1d, Reference};
use ldp_core::ratefn::{
    chi_square_rate, gaussian_ratio_rate, lp_cbar, rate_constant_regime, rate_lp_projection, ConstantVariant,
    LpProjectionCase, RateCurve, RateFunction,
};
use ldp_core::special::norm_cdf;
use ldp_core::stiefel::{haar_frame, project, EmpiricalMeasure};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn measure(v: Vec<f64>) -> EmpiricalMeasure {
    EmpiricalMeasure::new(v).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn chi_square_rate_is_convex_and_minimal_at_one(a in 0.01f64..8.0, b in 0.01f64..8.0) {
        let (fa, fb) = (chi_square_rate(a), chi_square_rate(b));
        prop_assert!(fa >= 0.0 && fb >= 0.0);
        prop_assert!(chi_square_rate(0.5 * (a + b)) <= 0.5 * (fa + fb) + 1e-12);
        prop_assert!(chi_square_rate(1.0).abs() < 1e-15);
    }

    #[test]
    fn cbar_root_and_bracket(p in 1.0f64..2.0, x in 1e-3f64..10.0) {
        let c = lp_cbar(p, x).unwrap();
        let residual = c.powf(p + 2.0) - c.powf(p) - x.powf(p);
        prop_assert!(residual.abs() <= 1e-10 * (1.0 + x.powf(p)));
        prop_assert!(c >= (1.0 + x.powf(p)).powf(1.0 / (p + 2.0)) - 1e-12);
        prop_assert!(c <= 1.0 + x.powf(p / (p + 2.0)) + 1e-12);
    }

    #[test]
    fn slow_constant_regime_matches_closed_form(p in 1.0f64..2.0, x in 0.05f64..3.0) {
        let jx = RateFunction::closed_form("power", Some(0.0), move |y| if y >= 0.0 { y.powf(p) / p } else { f64::INFINITY });
        let v = rate_constant_regime(&jx, ConstantVariant::B, x);
        let (closed, _) = rate_lp_projection(p, LpProjectionCase::Constant, x).unwrap();
        prop_assert!((v - closed).abs() <= 1e-6 * (1.0 + closed));
    }

    #[test]
    fn ratio_rate_vanishes_only_at_lambda(lambda in 0.05f64..0.95, z in 0.05f64..0.99) {
        let v = gaussian_ratio_rate(lambda, z);
        prop_assert!(v >= 0.0);
        if (z * z - lambda).abs() > 1e-3 {
            prop_assert!(v > 0.0);
        }
        prop_assert!(gaussian_ratio_rate(lambda, lambda.sqrt()) < 1e-14);
    }

    #[test]
    fn frames_are_orthonormal(n in 1usize..60, frac in 0.0f64..1.0, seed in any::<u64>()) {
        let k = 1 + ((n - 1) as f64 * frac) as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = haar_frame(n, k, &mut rng).unwrap();
        prop_assert!(a.orthonormality_defect() <= 1e-10);
        let x: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let y = project(&a, &x).unwrap();
        let (nx, ny) = (x.iter().map(|v| v * v).sum::<f64>(), y.iter().map(|v| v * v).sum::<f64>());
        prop_assert!(ny <= nx * (1.0 + 1e-12) + 1e-12);
    }

    #[test]
    fn ball_samples_stay_inside(p in 1.0f64..5.0, n in 1usize..200, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = DistributionSpec::LpBall { p }.sample(n, &mut rng).unwrap();
        let s: f64 = x.iter().map(|v| v.abs().powf(p)).sum();
        prop_assert!(s <= n as f64 * (1.0 + 1e-12));
    }

    #[test]
    fn orlicz_chain_stays_inside(n in 1usize..40, moves in 1usize..400, seed in any::<u64>()) {
        let v = OrliczFunction::cosh_minus_one();
        let mut chain = OrliczChain::new(v.clone(), n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        chain.run(moves, &mut rng).unwrap();
        prop_assert!(chain.state().iter().map(|&x| v.eval(x)).sum::<f64>() <= n as f64 * (1.0 + 1e-12));
    }

    #[test]
    fn wasserstein_is_a_metric(
        a in prop::collection::vec(-5.0f64..5.0, 1..30),
        b in prop::collection::vec(-5.0f64..5.0, 1..30),
        c in prop::collection::vec(-5.0f64..5.0, 1..30),
        q in 1.0f64..3.0,
    ) {
        let (a, b, c) = (measure(a), measure(b), measure(c));
        let d = |x: &EmpiricalMeasure, y: &EmpiricalMeasure| wasserstein_1d(q, x, Reference::Empirical(y)).unwrap();
        prop_assert!(d(&a, &a) == 0.0);
        prop_assert!((d(&a, &b) - d(&b, &a)).abs() <= 1e-12);
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c) + 1e-12);
        prop_assert!(wasserstein_1d(1.0, &a, Reference::Gaussian(1.0)).unwrap() >= 0.0);
    }

    #[test]
    fn ks_statistics_are_bounded(a in prop::collection::vec(-5.0f64..5.0, 1..50), b in prop::collection::vec(-5.0f64..5.0, 1..50)) {
        let (a, b) = (measure(a), measure(b));
        let d = ks_statistic(&a, norm_cdf);
        prop_assert!((0.0..=1.0).contains(&d));
        let e = ks_two_sample(&a, &b);
        prop_assert!((0.0..=1.0).contains(&e));
        prop_assert!((e - ks_two_sample(&b, &a)).abs() < 1e-15);
    }

    #[test]
    fn clopper_pearson_brackets_the_estimate(trials in 1usize..100_000, frac in 0.0f64..=1.0) {
        let hits = ((trials as f64) * frac).round() as usize;
        let (lo, hi) = clopper_pearson(hits, trials, 0.99);
        let p = hits as f64 / trials as f64;
        prop_assert!(0.0 <= lo && lo <= p + 1e-12 && p <= hi + 1e-12 && hi <= 1.0);
    }

    #[test]
    fn rate_curve_csv_round_trips(points in prop::collection::vec((-1e3f64..1e3, 0.0f64..1e6), 1..20)) {
        let curve = RateCurve { points, speed_tag: "n".into() };
        prop_assert_eq!(RateCurve::from_csv(&curve.to_csv()).unwrap(), curve);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn tail_estimates_are_deterministic(seed in any::<u64>(), x in 0.0f64..2.0) {
        let d = DistributionSpec::Product(Marginal::Normal);
        let r = Regime::Constant { k: 2 };
        let a = estimate_tail(&d, &r, 2.0, x, 25, 5000, seed).unwrap();
        let b = estimate_tail(&d, &r, 2.0, x, 25, 5000, seed).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert!(a.ci.0 <= a.p_hat && a.p_hat <= a.ci.1);
        prop_assert_eq!(a.rescaled.is_finite(), a.hits >= 1);
    }
}
