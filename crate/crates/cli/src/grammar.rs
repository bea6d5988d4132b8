//! String grammars for families, regimes, quantities, grids and ladders.

use ldp_core::distributions::{DistributionSpec, Marginal, Regime};
use ldp_core::mc::Quantity;

use crate::expr::orlicz_from_str;

fn params(body: &str) -> Result<Vec<(&str, &str)>, String> {
    body.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|kv| {
            kv.split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| format!("expected key=value, got `{kv}`"))
        })
        .collect()
}

fn single<'a>(body: &'a str, key: &str, what: &str) -> Result<&'a str, String> {
    match params(body)?.as_slice() {
        [(k, v)] if *k == key => Ok(v),
        _ => Err(format!("{what} expects `{key}=<value>`, got `{body}`")),
    }
}

pub fn float(s: &str, what: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("{what}: `{s}` is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{what}: `{s}` is not finite"))
    }
}

pub fn count(s: &str, what: &str) -> Result<usize, String> {
    s.trim().parse().map_err(|_| format!("{what}: `{s}` is not a non-negative integer"))
}

fn floats(s: &str, what: &str) -> Result<Vec<f64>, String> {
    s.split(',').map(|t| float(t, what)).collect()
}

/// `lp:p=<float>`, `product:normal`, `product:rademacher`, `mixture:v=..;w=..`, `orlicz:<expr>`.
pub fn parse_dist(s: &str) -> Result<DistributionSpec, String> {
    let (head, body) = s.trim().split_once(':').ok_or_else(|| format!("unknown distribution `{s}`"))?;
    let d = match head.trim() {
        "lp" => DistributionSpec::LpBall { p: float(single(body, "p", "lp")?, "p")? },
        "product" => match body.trim() {
            "normal" => DistributionSpec::Product(Marginal::Normal),
            "rademacher" => DistributionSpec::Product(Marginal::Rademacher),
            other => return Err(format!("unknown product marginal `{other}`")),
        },
        "mixture" => {
            let (mut v, mut w) = (None, None);
            for (k, val) in params(body)? {
                match k {
                    "v" if v.is_none() => v = Some(floats(val, "v")?),
                    "w" if w.is_none() => w = Some(floats(val, "w")?),
                    _ => return Err(format!("mixture: unexpected key `{k}`")),
                }
            }
            let (Some(variances), Some(weights)) = (v, w) else {
                return Err("mixture expects `v=<list>;w=<list>`".into());
            };
            DistributionSpec::GaussianMixture { variances, weights }
        }
        "orlicz" => DistributionSpec::orlicz(orlicz_from_str(body).map_err(|e| e.to_string())?),
        other => return Err(format!("unknown distribution `{other}`")),
    };
    d.validate().map_err(|e| e.to_string())?;
    Ok(d)
}

/// `constant:k=<int>`, `sublinear:alpha=<float>`, `linear:lambda=<float>`.
pub fn parse_regime(s: &str) -> Result<Regime, String> {
    let (head, body) = s.trim().split_once(':').ok_or_else(|| format!("unknown regime `{s}`"))?;
    let r = match head.trim() {
        "constant" => Regime::Constant { k: count(single(body, "k", "constant")?, "k")? },
        "sublinear" => Regime::Sublinear { alpha: float(single(body, "alpha", "sublinear")?, "alpha")? },
        "linear" => Regime::Linear { lambda: float(single(body, "lambda", "linear")?, "lambda")? },
        other => return Err(format!("unknown regime `{other}`")),
    };
    r.validate().map_err(|e| e.to_string())?;
    Ok(r)
}

/// `norm:q=<float>`, `norm_kn:q=<float>`, `empirical`.
pub fn parse_quantity(s: &str) -> Result<Quantity, String> {
    let s = s.trim();
    if s == "empirical" {
        return Ok(Quantity::Empirical);
    }
    let (head, body) = s.split_once(':').ok_or_else(|| format!("unknown quantity `{s}`"))?;
    let q = float(single(body, "q", head)?, "q")?;
    if q < 1.0 {
        return Err(format!("q must be at least 1, got {q}"));
    }
    match head.trim() {
        "norm" => Ok(Quantity::Norm { q }),
        "norm_kn" => Ok(Quantity::NormKn { q }),
        other => Err(format!("unknown quantity `{other}`")),
    }
}

/// `<start>:<stop>:<step>`, both ends included.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, h] = parts.as_slice() else {
        return Err(format!("grid expects start:stop:step, got `{s}`"));
    };
    let (a, b, h) = (float(a, "grid start")?, float(b, "grid stop")?, float(h, "grid step")?);
    if !(h > 0.0) || b < a {
        return Err(format!("grid needs step > 0 and stop ≥ start, got `{s}`"));
    }
    let steps = ((b - a) / h * (1.0 + 1e-12)).floor();
    if steps > 1e7 {
        return Err(format!("grid `{s}` is too fine"));
    }
    Ok((0..=steps as usize).map(|i| a + i as f64 * h).collect())
}

/// Comma-separated positive sample sizes.
pub fn parse_ladder(s: &str) -> Result<Vec<usize>, String> {
    let v: Vec<usize> = s.split(',').map(|t| count(t, "n")).collect::<Result<_, _>>()?;
    if v.is_empty() || v.contains(&0) {
        return Err(format!("n ladder must be positive integers, got `{s}`"));
    }
    Ok(v)
}
