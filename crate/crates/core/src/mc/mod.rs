//! Monte Carlo tail estimation, exact oracles and distributional distances.

mod distance;
mod oracle;
mod predict;

pub use distance::{ks_statistic, ks_two_sample, wasserstein_1d, Reference};
pub use oracle::{exact_tail_oracle_p2, thin_shell_oracle_p2};
pub use predict::{predict_rate, speed_case_on_ladder, Quantity};

use std::f64::INFINITY;
use std::sync::OnceLock;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rayon::ThreadPool;

use crate::distributions::{ldp_metadata, DistributionSpec, Regime};
use crate::error::{invalid, Error, Result};
use crate::special::inv_beta_reg;
use crate::stiefel::{projected_empirical_fast, projected_qnorm_fast};
use crate::tolerances::CI_LEVEL;

/// Trials per RNG stream.
pub const BLOCK: usize = 1 << 16;

fn pool() -> &'static ThreadPool {
    static POOL: OnceLock<ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        let threads = std::env::var("LDP_THREADS").ok().and_then(|s| s.trim().parse::<usize>().ok()).unwrap_or(0);
        rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("failed to build worker pool")
    })
}

/// Generator for block `b` of a run seeded with `seed`.
pub fn block_rng(seed: u64, b: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(b as u64);
    rng
}

/// Sums `count(block_index, block_len)` over the blocks covering `trials`.
fn count_blocks(trials: usize, count: impl Fn(usize, usize) -> Result<usize> + Sync) -> Result<usize> {
    let blocks = trials.div_ceil(BLOCK);
    pool().install(|| {
        (0..blocks)
            .into_par_iter()
            .map(|b| count(b, BLOCK.min(trials - b * BLOCK)))
            .collect::<Result<Vec<_>>>()
            .map(|v| v.into_iter().sum())
    })
}

/// Two-sided Clopper–Pearson interval.
pub fn clopper_pearson(hits: usize, trials: usize, level: f64) -> (f64, f64) {
    let alpha = 1.0 - level;
    let (h, t) = (hits as f64, trials as f64);
    let lo = if hits == 0 { 0.0 } else { inv_beta_reg(h, t - h + 1.0, alpha / 2.0) };
    let hi = if hits == trials { 1.0 } else { inv_beta_reg(h + 1.0, t - h, 1.0 - alpha / 2.0) };
    (lo, hi)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TailEstimate {
    pub n: usize,
    pub k: usize,
    pub x: f64,
    pub trials: usize,
    pub hits: usize,
    pub p_hat: f64,
    pub ci: (f64, f64),
    pub s_n: f64,
    /// `-log(p_hat) / s_n`, `+∞` when no trial hit.
    pub rescaled: f64,
    pub censored: bool,
}

impl TailEstimate {
    fn new(n: usize, k: usize, x: f64, trials: usize, hits: usize, s_n: f64) -> Self {
        let p_hat = hits as f64 / trials as f64;
        let (lo, hi) = clopper_pearson(hits, trials, CI_LEVEL);
        let censored = hits == 0;
        let rescaled = if censored { INFINITY } else { (-p_hat.ln() / s_n).max(0.0) };
        TailEstimate { n, k, x, trials, hits, p_hat, ci: (lo.min(p_hat), hi.max(p_hat)), s_n, rescaled, censored }
    }

    pub fn ci_contains(&self, p: f64) -> bool {
        self.ci.0 <= p && p <= self.ci.1
    }
}

/// Tail probability of the projected norm selected by `quantity`.
pub fn estimate_tail_quantity(
    dist: &DistributionSpec,
    regime: &Regime,
    quantity: Quantity,
    x: f64,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<TailEstimate> {
    if trials == 0 {
        return Err(invalid("trials must be at least 1"));
    }
    if !x.is_finite() {
        return Err(invalid(format!("threshold must be finite, got {x}")));
    }
    dist.validate()?;
    let k = regime.k_n(n)?;
    let s_n = predict::speed(dist, regime, quantity, n, k)?;
    let (q, factor) = match quantity {
        Quantity::Norm { q } if matches!(regime, Regime::Constant { .. }) => (q, (n as f64).powf(1.0 / q - 0.5)),
        Quantity::Norm { q } => (q, 1.0),
        Quantity::NormKn { q } => (q, (n as f64 / k as f64).powf(1.0 / q)),
        Quantity::Empirical => return Err(Error::Unsupported("tail estimates need a norm quantity".into())),
    };
    if !(q >= 1.0) {
        return Err(invalid(format!("q must be at least 1, got {q}")));
    }
    let hits = count_blocks(trials, |b, len| {
        let mut rng = block_rng(seed, b);
        let mut sampler = dist.norm_sampler(n)?;
        let mut hits = 0;
        for _ in 0..len {
            let r = sampler.draw(&mut rng)?;
            hits += (factor * projected_qnorm_fast(n, k, q, r, &mut rng)? >= x) as usize;
        }
        Ok(hits)
    })?;
    Ok(TailEstimate::new(n, k, x, trials, hits, s_n))
}

/// Estimate of `P(n^{-1/q} ‖AᵀX‖_q ≥ x)` (`n^{-1/2}` scaling when `k` is fixed).
pub fn estimate_tail(
    dist: &DistributionSpec,
    regime: &Regime,
    q: f64,
    x: f64,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<TailEstimate> {
    estimate_tail_quantity(dist, regime, Quantity::Norm { q }, x, n, trials, seed)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecaySeries {
    pub estimates: Vec<TailEstimate>,
    pub rate_prediction: f64,
}

pub fn decay_series(
    dist: &DistributionSpec,
    regime: &Regime,
    quantity: Quantity,
    x: f64,
    ladder: &[usize],
    trials: usize,
    seed: u64,
) -> Result<DecaySeries> {
    if ladder.is_empty() {
        return Err(invalid("n ladder is empty"));
    }
    let estimates = ladder
        .iter()
        .map(|&n| estimate_tail_quantity(dist, regime, quantity, x, n, trials, seed))
        .collect::<Result<Vec<_>>>()?;
    let rate_prediction = predict_rate(dist, regime, quantity, x, ladder)?;
    Ok(DecaySeries { estimates, rate_prediction })
}

/// Estimate of `P(|‖X‖₂/√n - m| ≥ ε)` with its 99% interval.
#[derive(Debug, Clone, PartialEq)]
pub struct ShellEstimate {
    pub n: usize,
    pub eps: f64,
    pub center: f64,
    pub trials: usize,
    pub hits: usize,
    pub p_hat: f64,
    pub ci: (f64, f64),
}

pub fn thin_shell_probability(dist: &DistributionSpec, n: usize, eps: f64, trials: usize, seed: u64) -> Result<ShellEstimate> {
    if trials == 0 {
        return Err(invalid("trials must be at least 1"));
    }
    if !(eps >= 0.0) {
        return Err(invalid(format!("ε must be non-negative, got {eps}")));
    }
    let center = ldp_metadata(dist, &Regime::Constant { k: 1 })?
        .shell_center
        .ok_or_else(|| Error::Unsupported("family has no declared shell centre".into()))?;
    let root = (n as f64).sqrt();
    let hits = count_blocks(trials, |b, len| {
        let mut rng = block_rng(seed, b);
        let mut sampler = dist.norm_sampler(n)?;
        let mut hits = 0;
        for _ in 0..len {
            hits += ((sampler.draw(&mut rng)? / root - center).abs() >= eps) as usize;
        }
        Ok(hits)
    })?;
    let (lo, hi) = clopper_pearson(hits, trials, CI_LEVEL);
    let p_hat = hits as f64 / trials as f64;
    Ok(ShellEstimate { n, eps, center, trials, hits, p_hat, ci: (lo.min(p_hat), hi.max(p_hat)) })
}

/// `W_1(L^n, N(0, m²))` for single draws of the projected coordinates, one per replicate.
pub fn empirical_w1(dist: &DistributionSpec, regime: &Regime, n: usize, replicates: usize, seed: u64) -> Result<Vec<f64>> {
    let center = ldp_metadata(dist, regime)?
        .shell_center
        .ok_or_else(|| Error::Unsupported("family has no declared shell centre".into()))?;
    let k = regime.k_n(n)?;
    pool().install(|| {
        (0..replicates)
            .into_par_iter()
            .map(|r| {
                let mut rng = block_rng(seed, r);
                let mut sampler = dist.norm_sampler(n)?;
                let xnorm = sampler.draw(&mut rng)?;
                let l = projected_empirical_fast(n, k, xnorm, &mut rng)?;
                wasserstein_1d(1.0, &l, Reference::Gaussian(center))
            })
            .collect()
    })
}

/// Median of a non-empty slice (`+∞` entries sort last).
pub fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}
