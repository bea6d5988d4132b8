use std::process::ExitCode;
use std::time::Instant;

use ldp_core::convexkit::{legendre_1d, Fn1D, Interval};
use ldp_core::distributions::{ldp_metadata, DistributionSpec, Marginal, OrliczFunction, Regime};
use ldp_core::mc::{
    decay_series, empirical_w1, exact_tail_oracle_p2, ks_statistic, median, thin_shell_oracle_p2, thin_shell_probability,
    Quantity,
};
use ldp_core::orlicz::{orlicz_bstar, orlicz_log_volume, orlicz_rate};
use ldp_core::ratefn::{
    chi_square_rate, entropy_h_lambda, gaussian_ratio_rate, lp_cbar, mp, rate_constant_regime, rate_j_q_lambda,
    rate_lp_norm, rate_lp_projection, rate_sublinear_qnorm, tilted_gaussian_logmgf, ConstantVariant, LpProjectionCase,
    MeasureArg, RateFunction, SpeedCase,
};
use ldp_core::special::{beta_reg, ln_gamma};
use ldp_core::stiefel::{haar_frame, EmpiricalMeasure};
use ldp_core::tolerances::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn power_handle(p: f64) -> RateFunction {
    RateFunction::closed_form("power", Some(0.0), move |y| if y >= 0.0 { y.powf(p) / p } else { f64::INFINITY })
}

fn constant_regime_closed_form() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for p in [1.0, 1.5] {
        let jx = power_handle(p);
        for x in [0.5, 1.0, 2.0] {
            let v = rate_constant_regime(&jx, ConstantVariant::B, x);
            let closed = (p + 2.0) / (2.0 * p) * x.powf(2.0 * p / (p + 2.0));
            worst = worst.max((v - closed).abs());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(worst <= ACC_CONSTANT_REGIME && secs < 1.0, format!("max error {worst:.3e}, {secs:.3} s"))
}

fn legendre_chi_square() -> Outcome {
    let f = Fn1D::new(|s| tilted_gaussian_logmgf(2.0, 0.0, s).unwrap_or(f64::INFINITY), Interval::below(0.5));
    let mut worst = 0.0f64;
    for t in [0.5, 1.0, 2.0, 4.0] {
        let v = match legendre_1d(&f, t) {
            Ok(v) => v,
            Err(e) => return outcome(false, format!("t={t}: {e}")),
        };
        worst = worst.max((v - chi_square_rate(t)).abs());
    }
    outcome(worst <= ACC_CHI_SQUARE, format!("max error {worst:.3e}"))
}

fn orlicz_volume() -> Outcome {
    let target = 0.5 * (2.0 * std::f64::consts::PI * std::f64::consts::E).ln();
    let v = match orlicz_log_volume(&OrliczFunction::power(2.0).unwrap()) {
        Ok(v) => v,
        Err(e) => return outcome(false, e.to_string()),
    };
    let gaps: Vec<f64> = [1e3, 1e4, 1e5, 1e6]
        .iter()
        .map(|&n: &f64| ((0.5 * n * (std::f64::consts::PI * n).ln() - ln_gamma(0.5 * n + 1.0)) / n - target).abs())
        .collect();
    let approaches = gaps.windows(2).all(|w| w[1] < w[0]);
    outcome(
        (v - target).abs() <= ACC_LOG_VOLUME && approaches,
        format!("error {:.3e}; ball gaps {:?}", (v - target).abs(), gaps.iter().map(|g| format!("{g:.2e}")).collect::<Vec<_>>()),
    )
}

fn orlicz_lp_equivalence() -> Outcome {
    let v = OrliczFunction::power(4.0).unwrap();
    let (_, m) = match orlicz_bstar(&v) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let centre_err = (m - mp(4.0)).abs();
    let mut worst = 0.0f64;
    for z in [0.5 * m, m, 1.3 * m] {
        match (orlicz_rate(&v, z), rate_lp_norm(4.0, z)) {
            (Ok(a), Ok(b)) => worst = worst.max((a - b).abs()),
            (a, b) => return outcome(false, format!("z={z}: {a:?} vs {b:?}")),
        }
    }
    outcome(
        worst <= ACC_ORLICZ_LP && centre_err <= ACC_ORLICZ_CENTER,
        format!("rate error {worst:.3e}, centre error {centre_err:.3e}"),
    )
}

fn cbar_root_and_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut worst_res, mut bound_fail, mut order_fail) = (0.0f64, 0, 0);
    for _ in 0..100 {
        let p = rng.random_range(1.0..2.0);
        let x = 10.0 * (1.0 - rng.random::<f64>());
        let c = match lp_cbar(p, x) {
            Ok(c) => c,
            Err(e) => return outcome(false, format!("p={p}, x={x}: {e}")),
        };
        worst_res = worst_res.max((c.powf(p + 2.0) - c.powf(p) - x.powf(p)).abs());
        if c < 1.0 + x.powf(p / (p + 2.0)) {
            bound_fail += 1;
        }
        let mid = x.powf(p) / c.powf(p);
        if !(x.powf(p) >= mid && mid >= x.powf(2.0 * p / (p + 2.0))) {
            order_fail += 1;
        }
    }
    outcome(
        worst_res <= ACC_ROOT_RESIDUAL && bound_fail == 0 && order_fail == 0,
        format!("max residual {worst_res:.3e}; lower bound violated {bound_fail}/100; ordering violated {order_fail}/100"),
    )
}

fn linear_regime_identity() -> Outcome {
    let cases = [(0.25, [0.2, 0.4, 0.45]), (0.5, [0.3, 0.6, 0.9]), (1.0, [0.3, 0.6, 0.9])];
    let (mut worst_h, mut worst_j) = (0.0f64, 0.0f64);
    for (lambda, zs) in cases {
        for z in zs {
            let closed = gaussian_ratio_rate(lambda, z);
            let h = entropy_h_lambda(lambda, &MeasureArg::Gaussian(z / lambda.sqrt()));
            worst_h = worst_h.max((h - closed).abs());
            match rate_j_q_lambda(2.0, lambda, z) {
                Ok(j) => worst_j = worst_j.max((j - closed).abs()),
                Err(e) => return outcome(false, format!("λ={lambda}, z={z}: {e}")),
            }
        }
    }
    outcome(
        worst_h <= ACC_GAUSSIAN_FAMILY && worst_j <= ACC_JQ_LAMBDA_Q2,
        format!("entropy error {worst_h:.3e}, J_q error {worst_j:.3e}"),
    )
}

fn exact_oracle_mc() -> Outcome {
    let start = Instant::now();
    let (d, r) = (DistributionSpec::LpBall { p: 2.0 }, Regime::Constant { k: 1 });
    let ladder = [20, 40, 60, 80];
    let x = 0.5f64;
    let target = -0.5 * (1.0 - x * x).ln();
    let run = |seed| decay_series(&d, &r, Quantity::Norm { q: 2.0 }, x, &ladder, 1_000_000, seed);
    let s = match run(42) {
        Ok(s) => s,
        Err(e) => return outcome(false, e.to_string()),
    };
    let mut covered = true;
    for e in &s.estimates {
        covered &= e.ci_contains(exact_tail_oracle_p2(e.n, 1, x).unwrap());
    }
    let oracle80 = -exact_tail_oracle_p2(80, 1, x).unwrap().ln() / 80.0;
    let rel = (oracle80 - target).abs() / target;
    let mut per_n = vec![Vec::new(); ladder.len()];
    for seed in 42..62 {
        let s = run(seed).unwrap();
        for (i, e) in s.estimates.iter().enumerate() {
            per_n[i].push(e.rescaled);
        }
    }
    let medians: Vec<f64> = per_n.iter().map(|v| median(v)).collect();
    let approaching = medians.windows(2).all(|w| (w[1] - target).abs() < (w[0] - target).abs());
    let secs = start.elapsed().as_secs_f64();
    outcome(
        covered && rel <= ACC_RESCALED_REL && approaching && secs < 120.0,
        format!(
            "CIs contain oracle: {covered}; rescaled at n=80 {oracle80:.5} (MC {:.5}) vs {target:.6}, off {:.1}%; medians {:?}; {secs:.1} s",
            s.estimates[3].rescaled,
            100.0 * rel,
            medians.iter().map(|m| format!("{m:.4}")).collect::<Vec<_>>()
        ),
    )
}

fn thin_shell() -> Outcome {
    let (n, eps) = (20, 0.1);
    let exact = thin_shell_oracle_p2(n, eps);
    let oracle_ok = (exact - 0.9f64.powi(20)).abs() <= 1e-15;
    let s = thin_shell_probability(&DistributionSpec::LpBall { p: 2.0 }, n, eps, 1_000_000, 8).unwrap();
    let mc_ok = s.ci.0 <= exact && exact <= s.ci.1;
    let mix = DistributionSpec::GaussianMixture { variances: vec![1.0, 2.0], weights: vec![0.5, 0.5] };
    let m = thin_shell_probability(&mix, 10_000, 0.2, 20_000, 8).unwrap();
    let mix_ok = (0.4..=0.6).contains(&m.p_hat);
    outcome(
        oracle_ok && mc_ok && mix_ok,
        format!(
            "oracle {exact:.6}, MC CI [{:.6}, {:.6}]; mixture at n=10⁴ {:.4}",
            s.ci.0, s.ci.1, m.p_hat
        ),
    )
}

fn stiefel_invariants() -> Outcome {
    let (n, k) = (200, 50);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let worst = (0..100).map(|_| haar_frame(n, k, &mut rng).unwrap().orthonormality_defect()).fold(0.0, f64::max);
    let draws = 500;
    let crit = 1.63 / (draws as f64).sqrt();
    let b = 0.5 * (n as f64 - 1.0);
    let passed = (0..20)
        .filter(|_| {
            let sq: Vec<f64> = (0..draws).map(|_| haar_frame(n, k, &mut rng).unwrap().entries()[(0, 0)].powi(2)).collect();
            ks_statistic(&EmpiricalMeasure::new(sq).unwrap(), |t| beta_reg(0.5, b, t.clamp(0.0, 1.0))) < crit
        })
        .count();
    outcome(worst <= ACC_FRAME_ORTHO && passed >= 18, format!("max defect {worst:.3e}; KS passes {passed}/20"))
}

fn empirical_convergence() -> Outcome {
    let (d, r) = (DistributionSpec::LpBall { p: 2.0 }, Regime::Sublinear { alpha: 0.6 });
    let mut medians = Vec::new();
    for n in [100, 1000, 10_000] {
        match empirical_w1(&d, &r, n, 20, 10) {
            Ok(v) => medians.push(median(&v)),
            Err(e) => return outcome(false, e.to_string()),
        }
    }
    let decreasing = medians.windows(2).all(|w| w[1] < w[0]);
    outcome(
        decreasing && medians[2] <= ACC_W1_LARGE_N,
        format!("medians {:?}", medians.iter().map(|m| format!("{m:.4}")).collect::<Vec<_>>()),
    )
}

fn consistency_suite() -> Outcome {
    let normal = DistributionSpec::Product(Marginal::Normal);
    let jx = ldp_metadata(&normal, &Regime::Sublinear { alpha: 0.5 }).unwrap().jx;
    let mut worst_chi = 0.0f64;
    for x in [0.3, 0.8, 1.0, 1.5, 2.5] {
        match rate_sublinear_qnorm(2.0, SpeedCase::Fast, &jx, 1.0, x) {
            Ok(v) => worst_chi = worst_chi.max((v - chi_square_rate(x * x)).abs()),
            Err(e) => return outcome(false, e.to_string()),
        }
    }
    let mut worst_lp = 0.0f64;
    for p in [1.0, 1.25, 1.5, 1.75] {
        for x in [0.0, 0.3, 0.9, 1.6, 3.0] {
            let (a, _) = rate_lp_projection(p, LpProjectionCase::SubFast, x).unwrap();
            let b = rate_lp_norm(p, x).unwrap();
            worst_lp = worst_lp.max(if a == b { 0.0 } else { (a - b).abs() });
        }
    }
    let worst_lp_ok = worst_lp <= 1e-12;
    let fams = [
        DistributionSpec::LpBall { p: 1.0 },
        DistributionSpec::LpBall { p: 1.5 },
        DistributionSpec::LpBall { p: 2.0 },
        DistributionSpec::LpBall { p: 3.0 },
        DistributionSpec::Product(Marginal::Normal),
        DistributionSpec::Product(Marginal::Rademacher),
        DistributionSpec::GaussianMixture { variances: vec![1.5], weights: vec![1.0] },
        DistributionSpec::GaussianMixture { variances: vec![1.0, 2.0], weights: vec![0.5, 0.5] },
        DistributionSpec::orlicz(OrliczFunction::power(4.0).unwrap()),
    ];
    let regimes = [Regime::Constant { k: 2 }, Regime::Sublinear { alpha: 0.5 }, Regime::Linear { lambda: 0.5 }];
    let (mut handles, mut bad) = (0, Vec::new());
    for d in &fams {
        for r in &regimes {
            let Ok(md) = ldp_metadata(d, r) else { continue };
            let Some(m) = md.m else { continue };
            handles += 1;
            let vanishes = md.jx.eval(m).abs() <= 1e-6;
            let positive = [m - HANDLE_PROBE, m + HANDLE_PROBE].iter().all(|&x| x < 0.0 || md.jx.eval(x) > 0.0);
            if !(vanishes && positive) {
                bad.push(format!("{} under {r:?}", md.jx.label()));
            }
        }
    }
    outcome(
        worst_chi <= ACC_CHI_SQUARE && worst_lp_ok && bad.is_empty(),
        format!("χ² error {worst_chi:.3e}; subfast vs norm {worst_lp:.3e}; handles checked {handles}, failing {bad:?}"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("constant regime vs closed form", constant_regime_closed_form),
        ("Legendre transform of the tilted Gaussian", legendre_chi_square),
        ("Orlicz log-volume", orlicz_volume),
        ("Orlicz and lp norm rates agree", orlicz_lp_equivalence),
        ("cbar root and bound", cbar_root_and_bound),
        ("linear-regime Gaussian identity", linear_regime_identity),
        ("exact-oracle Monte Carlo", exact_oracle_mc),
        ("thin shell", thin_shell),
        ("Stiefel invariants", stiefel_invariants),
        ("empirical-measure convergence", empirical_convergence),
        ("consistency suite", consistency_suite),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        failed += usize::from(!o.pass);
        println!("{} {:>2} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
