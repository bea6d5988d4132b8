//! `ldp` command-line front end.

pub mod expr;
pub mod grammar;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use ldp_core::distributions::{ldp_metadata, ldp_metadata_kn, DistributionSpec, Regime};
use ldp_core::mc::{self, block_rng, predict_rate, Quantity};
use ldp_core::ratefn::RateCurve;
use ldp_core::stiefel::{haar_frame, project};
use ldp_core::orlicz::orlicz_log_volume;
use serde::Serialize;

use grammar::{count, float, parse_dist, parse_grid, parse_ladder, parse_quantity, parse_regime};

#[derive(Debug)]
enum CliError {
    Usage(String),
    Numeric(String),
}

impl From<ldp_core::Error> for CliError {
    fn from(e: ldp_core::Error) -> Self {
        CliError::Numeric(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "ldp", version, about = "Rate functions and Monte Carlo checks for random projections")]
struct Cli {
    /// TOML file whose keys mirror the long flags; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tabulate a rate function on a grid.
    Rate(RateArgs),
    /// Draw vectors (or their projections) from a family.
    Sample(SampleArgs),
    /// Monte Carlo tail estimates along an n ladder, against the predicted rate.
    Verify(VerifyArgs),
    /// Log-volume per dimension of an Orlicz ball.
    Volume(VolumeArgs),
    /// Thin-shell probabilities along an n ladder.
    Thinshell(ThinshellArgs),
}

#[derive(Args, Debug, Default)]
struct ChainArgs {
    /// Orlicz hit-and-run burn-in, in sweeps of n moves.
    #[arg(long)]
    burnin: Option<String>,
    /// Orlicz hit-and-run moves between draws.
    #[arg(long)]
    thin: Option<String>,
}

#[derive(Args, Debug)]
struct RateArgs {
    #[arg(long)]
    dist: Option<String>,
    #[arg(long)]
    regime: Option<String>,
    /// `norm:q=<q>`, `norm_kn:q=<q>` or `empirical` (default `norm:q=2`).
    #[arg(long)]
    quantity: Option<String>,
    /// `<start>:<stop>:<step>`.
    #[arg(long)]
    grid: Option<String>,
    /// Sample sizes used to classify `s_n` against `k_n` (default 10000).
    #[arg(long)]
    ladder: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SampleArgs {
    #[arg(long)]
    dist: Option<String>,
    #[arg(long)]
    n: Option<String>,
    /// Number of draws (default 1).
    #[arg(long)]
    count: Option<String>,
    /// Emit `AᵀX` for a fresh Haar frame with `k_n` columns instead of `X`.
    #[arg(long)]
    regime: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[command(flatten)]
    chain: ChainArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    dist: Option<String>,
    #[arg(long)]
    regime: Option<String>,
    #[arg(long)]
    quantity: Option<String>,
    /// Threshold for norms, Gaussian scale for `empirical`.
    #[arg(long)]
    x: Option<String>,
    /// Comma-separated ladder of dimensions.
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    trials: Option<String>,
    /// Replicates per n for `empirical` (default 20).
    #[arg(long)]
    replicates: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[command(flatten)]
    chain: ChainArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VolumeArgs {
    #[arg(long)]
    orlicz: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ThinshellArgs {
    #[arg(long)]
    dist: Option<String>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    eps: Option<String>,
    #[arg(long)]
    trials: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[command(flatten)]
    chain: ChainArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

const CONFIG_KEYS: &[&str] = &[
    "dist", "regime", "quantity", "grid", "ladder", "n", "count", "seed", "x", "trials", "replicates", "orlicz",
    "eps", "burnin", "thin", "out",
];

/// Flag values with the config file as fallback.
struct Settings {
    file: BTreeMap<String, String>,
}

impl Settings {
    fn load(path: Option<&PathBuf>) -> CliResult<Self> {
        let mut file = BTreeMap::new();
        let Some(path) = path else {
            return Ok(Settings { file });
        };
        let src = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let table: toml::Table = src.parse().map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
        for (k, v) in table {
            if !CONFIG_KEYS.contains(&k.as_str()) {
                return Err(CliError::Usage(format!("config: unknown key `{k}`")));
            }
            file.insert(k.clone(), scalar(&k, &v)?);
        }
        Ok(Settings { file })
    }

    fn get(&self, key: &str, flag: &Option<String>) -> Option<String> {
        flag.clone().or_else(|| self.file.get(key).cloned())
    }

    fn need(&self, key: &str, flag: &Option<String>) -> CliResult<String> {
        self.get(key, flag).ok_or_else(|| CliError::Usage(format!("missing required --{key}")))
    }

    fn out(&self, flag: &Option<PathBuf>) -> Option<PathBuf> {
        flag.clone().or_else(|| self.file.get("out").map(PathBuf::from))
    }
}

fn scalar(key: &str, v: &toml::Value) -> CliResult<String> {
    Ok(match v {
        toml::Value::String(s) => s.clone(),
        toml::Value::Integer(i) => i.to_string(),
        toml::Value::Float(f) => f.to_string(),
        toml::Value::Array(items) => items.iter().map(|i| scalar(key, i)).collect::<CliResult<Vec<_>>>()?.join(","),
        _ => return Err(CliError::Usage(format!("config: unsupported value for `{key}`"))),
    })
}

fn usage<T>(r: Result<T, String>) -> CliResult<T> {
    r.map_err(CliError::Usage)
}

fn dist_with_chain(s: &Settings, dist: &Option<String>, chain: &ChainArgs) -> CliResult<DistributionSpec> {
    let mut d = usage(parse_dist(&s.need("dist", dist)?))?;
    if let DistributionSpec::OrliczBall { chain: c, .. } = &mut d {
        if let Some(b) = s.get("burnin", &chain.burnin) {
            c.burnin_sweeps = usage(count(&b, "burnin"))?;
        }
        if let Some(t) = s.get("thin", &chain.thin) {
            c.thin = Some(usage(count(&t, "thin"))?);
        }
        d.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    }
    Ok(d)
}

fn seed(s: &Settings, flag: &Option<String>) -> CliResult<u64> {
    match s.get("seed", flag) {
        None => Ok(0),
        Some(v) => v.trim().parse().map_err(|_| CliError::Usage(format!("seed: `{v}` is not an unsigned integer"))),
    }
}

fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn speed_tag(dist: &DistributionSpec, regime: &Regime, quantity: Quantity) -> CliResult<String> {
    Ok(match (quantity, regime) {
        (Quantity::Norm { .. }, _) | (Quantity::Empirical, Regime::Linear { .. }) => {
            ldp_metadata(dist, regime)?.speed.tag()
        }
        (_, Regime::Sublinear { .. }) => format!("min({},k_n)", ldp_metadata_kn(dist, regime)?.speed.tag()),
        _ => return Err(CliError::Numeric("quantity needs a growing number of directions".into())),
    })
}

fn rate(s: &Settings, a: &RateArgs) -> CliResult<String> {
    let dist = usage(parse_dist(&s.need("dist", &a.dist)?))?;
    let regime = usage(parse_regime(&s.need("regime", &a.regime)?))?;
    let quantity = usage(parse_quantity(&s.get("quantity", &a.quantity).unwrap_or_else(|| "norm:q=2".into())))?;
    let grid = usage(parse_grid(&s.need("grid", &a.grid)?))?;
    let ladder = usage(parse_ladder(&s.get("ladder", &a.ladder).unwrap_or_else(|| "10000".into())))?;
    let tag = speed_tag(&dist, &regime, quantity)?;
    let values =
        grid.iter().map(|&x| predict_rate(&dist, &regime, quantity, x, &ladder)).collect::<Result<Vec<_>, _>>()?;
    let curve = RateCurve { points: grid.into_iter().zip(values).collect(), speed_tag: tag };
    Ok(curve.to_csv())
}

fn sample(s: &Settings, a: &SampleArgs) -> CliResult<String> {
    let dist = dist_with_chain(s, &a.dist, &a.chain)?;
    let n = usage(count(&s.need("n", &a.n)?, "n"))?;
    let draws = usage(count(&s.get("count", &a.count).unwrap_or_else(|| "1".into()), "count"))?;
    let regime = s.get("regime", &a.regime).map(|r| usage(parse_regime(&r))).transpose()?;
    let mut rng = block_rng(seed(s, &a.seed)?, 0);
    let mut rows = String::new();
    for _ in 0..draws {
        let mut x = dist.sample(n, &mut rng)?;
        if let Some(r) = &regime {
            let frame = haar_frame(n, r.k_n(n)?, &mut rng)?;
            x = project(&frame, &x)?;
        }
        let row: Vec<String> = x.into_iter().map(fmt_f64).collect();
        writeln!(rows, "{}", row.join(",")).unwrap();
    }
    Ok(rows)
}

fn verify(s: &Settings, a: &VerifyArgs) -> CliResult<String> {
    let dist = dist_with_chain(s, &a.dist, &a.chain)?;
    let regime = usage(parse_regime(&s.need("regime", &a.regime)?))?;
    let quantity = usage(parse_quantity(&s.get("quantity", &a.quantity).unwrap_or_else(|| "norm:q=2".into())))?;
    let ladder = usage(parse_ladder(&s.need("n", &a.n)?))?;
    let seed = seed(s, &a.seed)?;
    let mut out = String::new();
    if quantity == Quantity::Empirical {
        let reps = usage(count(&s.get("replicates", &a.replicates).unwrap_or_else(|| "20".into()), "replicates"))?;
        if reps == 0 {
            return Err(CliError::Usage("replicates must be at least 1".into()));
        }
        out.push_str("n,k,replicates,w1_median\n");
        for &n in &ladder {
            let w = mc::median(&mc::empirical_w1(&dist, &regime, n, reps, seed)?);
            writeln!(out, "{n},{},{reps},{}", regime.k_n(n)?, fmt_f64(w)).unwrap();
        }
        return Ok(out);
    }
    let x = usage(float(&s.need("x", &a.x)?, "x"))?;
    let trials = usage(count(&s.need("trials", &a.trials)?, "trials"))?;
    if trials == 0 {
        return Err(CliError::Usage("trials must be at least 1".into()));
    }
    let series = mc::decay_series(&dist, &regime, quantity, x, &ladder, trials, seed)?;
    out.push_str("n,k,s_n,trials,hits,p_hat,ci_lo,ci_hi,rescaled,rate_prediction\n");
    for e in &series.estimates {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            e.n,
            e.k,
            fmt_f64(e.s_n),
            e.trials,
            e.hits,
            fmt_f64(e.p_hat),
            fmt_f64(e.ci.0),
            fmt_f64(e.ci.1),
            fmt_f64(e.rescaled),
            fmt_f64(series.rate_prediction)
        )
        .unwrap();
    }
    Ok(out)
}

#[derive(Serialize)]
struct VolumeReport {
    log_volume_per_dim: f64,
}

fn volume(s: &Settings, a: &VolumeArgs) -> CliResult<String> {
    let v = expr::orlicz_from_str(&s.need("orlicz", &a.orlicz)?).map_err(|e| CliError::Usage(e.to_string()))?;
    let report = VolumeReport { log_volume_per_dim: orlicz_log_volume(&v)? };
    Ok(serde_json::to_string(&report).expect("plain struct serialises") + "\n")
}

fn thinshell(s: &Settings, a: &ThinshellArgs) -> CliResult<String> {
    let dist = dist_with_chain(s, &a.dist, &a.chain)?;
    let ladder = usage(parse_ladder(&s.need("n", &a.n)?))?;
    let eps = usage(float(&s.need("eps", &a.eps)?, "eps"))?;
    let trials = usage(count(&s.need("trials", &a.trials)?, "trials"))?;
    if trials == 0 {
        return Err(CliError::Usage("trials must be at least 1".into()));
    }
    let seed = seed(s, &a.seed)?;
    let mut out = String::from("n,eps,center,trials,hits,p_hat,ci_lo,ci_hi\n");
    for &n in &ladder {
        let e = mc::thin_shell_probability(&dist, n, eps, trials, seed)?;
        writeln!(
            out,
            "{n},{},{},{},{},{},{},{}",
            fmt_f64(eps),
            fmt_f64(e.center),
            e.trials,
            e.hits,
            fmt_f64(e.p_hat),
            fmt_f64(e.ci.0),
            fmt_f64(e.ci.1)
        )
        .unwrap();
    }
    Ok(out)
}

fn dispatch(cli: &Cli) -> CliResult<(String, Option<PathBuf>)> {
    let s = Settings::load(cli.config.as_ref())?;
    Ok(match &cli.command {
        Command::Rate(a) => (rate(&s, a)?, s.out(&a.out)),
        Command::Sample(a) => (sample(&s, a)?, s.out(&a.out)),
        Command::Verify(a) => (verify(&s, a)?, s.out(&a.out)),
        Command::Volume(a) => (volume(&s, a)?, s.out(&a.out)),
        Command::Thinshell(a) => (thinshell(&s, a)?, s.out(&a.out)),
    })
}

/// Runs the tool; returns 0 on success, 2 on usage errors and 1 on numerical failures.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{text}");
            return code;
        }
    };
    let (body, out) = match dispatch(&cli) {
        Ok(r) => r,
        Err(CliError::Usage(m)) => {
            let _ = writeln!(stderr, "error: {m}");
            return 2;
        }
        Err(CliError::Numeric(m)) => {
            let _ = writeln!(stderr, "error: {m}");
            return 1;
        }
    };
    let written = match out {
        Some(path) => std::fs::write(&path, body.as_bytes()).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => stdout.write_all(body.as_bytes()).map_err(|e| e.to_string()),
    };
    match written {
        Ok(()) => 0,
        Err(m) => {
            let _ = writeln!(stderr, "error: {m}");
            1
        }
    }
}
