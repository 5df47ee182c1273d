//! Command-line front end: evaluation, verification suites, simulation runs,
//! calibration management and table emission.
//!
//! Exit codes: 0 success, 1 a verification or comparison check failed,
//! 2 usage or parse error, 3 domain error, 4 runtime abort.

mod config;
mod json;

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use chamber_bessel::bessel::BesselSpec;
use chamber_bessel::detrep::{DetRepStore, Family};
use chamber_bessel::hyperseries::{mv_series, HyperParams, SeriesResult, TruncationPolicy};
use chamber_bessel::jack::cache::JackCache;
use chamber_bessel::jack::{JackStore, Normalization};
use chamber_bessel::kernels::{default_quadrature, DensityModel};
use chamber_bessel::partitions::{enumerate_partitions, Partition};
use chamber_bessel::quadrature::QuadratureSpec;
use chamber_bessel::rootsys::{Multiplicity, RootKind, RootSystem};
use chamber_bessel::simulate::{
    default_test_functions, ensemble_csv, format_number, moment_report, quadrature_moments, simulate, SdeConfig,
};
use chamber_bessel::verify::{Check, Suite, Verifier};
use clap::{Args, Parser, Subcommand};
use log::info;
use serde::Serialize;

use config::{default_cache_dir, nums, parse_format, FileConfig, Format, RunConfig};
use json::Num;

#[derive(Parser, Debug)]
#[command(name = "chamber-bessel", version, about = "Generalized Bessel functions, radial Dunkl densities and simulation")]
struct Cli {
    /// TOML file with [root], [point], [series], [simulate] and [output] sections.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Cache directory (default: $CHAMBER_BESSEL_CACHE, else the user cache dir).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Keep Jack tables and calibration constants in memory only.
    #[arg(long, global = true)]
    no_cache: bool,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a Bessel function, a density or a raw hypergeometric series.
    Eval {
        #[command(subcommand)]
        target: EvalTarget,
    },
    /// Run an identity suite (jack, detrep, theorem1, shift, symmetrize,
    /// normalization, chapman, montecarlo) or all of them.
    Verify(VerifyArgs),
    /// Simulate the radial SDE and report moments.
    Simulate(SimulateArgs),
    /// Calibrate (or read back) a determinantal constant.
    Calibrate(CalibrateArgs),
    /// Emit plot-ready CSV tables.
    Table {
        #[command(subcommand)]
        target: TableTarget,
    },
}

#[derive(Subcommand, Debug)]
enum EvalTarget {
    Bessel(PointArgs),
    Density(PointArgs),
    Series(SeriesArgs),
}

#[derive(Subcommand, Debug)]
enum TableTarget {
    /// C-normalized Jack coefficients in the monomial basis.
    Jack(JackTableArgs),
    /// Density along the segment from --from to --to.
    Density(DensityTableArgs),
}

#[derive(Args, Debug, Clone, Default)]
struct RootArgs {
    /// Root system type: A, B or D.
    #[arg(long)]
    kind: Option<String>,
    #[arg(long)]
    m: Option<usize>,
    /// Multiplicity on ±e_i (type B only).
    #[arg(long, allow_hyphen_values = true)]
    k0: Option<f64>,
    /// Multiplicity on ±e_i ± e_j.
    #[arg(long, allow_hyphen_values = true)]
    k1: Option<f64>,
}

#[derive(Args, Debug, Clone, Default)]
struct TruncArgs {
    #[arg(long)]
    max_weight: Option<u32>,
    #[arg(long)]
    tail_ratio_threshold: Option<f64>,
    #[arg(long)]
    abs_floor: Option<f64>,
}

#[derive(Args, Debug)]
struct PointArgs {
    #[command(flatten)]
    root: RootArgs,
    #[command(flatten)]
    trunc: TruncArgs,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    x: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    y: Option<Vec<f64>>,
    #[arg(long, allow_hyphen_values = true)]
    t: Option<f64>,
}

#[derive(Args, Debug)]
struct SeriesArgs {
    #[arg(long, default_value = "f00")]
    family: Family,
    /// Lower parameter of 0F1.
    #[arg(long, allow_hyphen_values = true)]
    b: Option<f64>,
    /// Jack parameter α (default 1/k₁).
    #[arg(long)]
    alpha: Option<f64>,
    #[command(flatten)]
    root: RootArgs,
    #[command(flatten)]
    trunc: TruncArgs,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    x: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    y: Option<Vec<f64>>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Suite name or `all`.
    suite: String,
    /// Write the JSON summary here.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Monte Carlo paths for the montecarlo suite.
    #[arg(long)]
    paths: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    root: RootArgs,
    /// Starting point inside the chamber.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    y0: Option<Vec<f64>>,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    paths: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    boundary_shrink: Option<f64>,
    #[arg(long)]
    max_retries: Option<u32>,
    #[arg(long, default_value = "ensemble.csv")]
    csv: PathBuf,
    #[arg(long, default_value = "moments.json")]
    json: PathBuf,
    /// Compare the moments against quadrature of the analytic density.
    #[arg(long)]
    compare: bool,
}

#[derive(Args, Debug)]
struct CalibrateArgs {
    #[arg(long)]
    family: Family,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    phi: f64,
}

#[derive(Args, Debug)]
struct JackTableArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    weight: u32,
}

#[derive(Args, Debug)]
struct DensityTableArgs {
    #[command(flatten)]
    root: RootArgs,
    #[command(flatten)]
    trunc: TruncArgs,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    x: Option<Vec<f64>>,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    from: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    to: Vec<f64>,
    #[arg(long, default_value_t = 50)]
    steps: usize,
}

#[derive(Debug)]
enum Failure {
    ChecksFailed,
    Usage(String),
    Domain(String),
    Abort(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::ChecksFailed => 1,
            Failure::Usage(_) => 2,
            Failure::Domain(_) => 3,
            Failure::Abort(_) => 4,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::ChecksFailed => f.write_str("one or more checks failed"),
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Domain(m) => write!(f, "domain error: {m}"),
            Failure::Abort(m) => write!(f, "aborted: {m}"),
        }
    }
}

impl From<chamber_bessel::Error> for Failure {
    fn from(e: chamber_bessel::Error) -> Self {
        if e.is_domain() {
            Failure::Domain(e.to_string())
        } else {
            Failure::Abort(e.to_string())
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::Abort(format!("{}: {e}", path.display()))
}

type Outcome<T> = Result<T, Failure>;

struct Context {
    file: FileConfig,
    format: Format,
    cache_dir: Option<PathBuf>,
    jack: Arc<JackStore>,
}

impl Context {
    fn new(cli: &Cli) -> Outcome<Self> {
        let file = match &cli.config {
            Some(p) => FileConfig::load(p).map_err(Failure::Usage)?,
            None => FileConfig::default(),
        };
        let format = match (cli.format, &file.output.format) {
            (Some(f), _) => f,
            (None, Some(s)) => parse_format(s).map_err(Failure::Usage)?,
            (None, None) => Format::Json,
        };
        let cache_dir = if cli.no_cache {
            None
        } else {
            cli.cache_dir.clone().or_else(|| file.output.cache_dir.clone()).or_else(default_cache_dir)
        };
        let jack = Arc::new(match &cache_dir {
            Some(d) => JackStore::with_cache(JackCache::new(d)),
            None => JackStore::new(),
        });
        info!("cache directory: {cache_dir:?}");
        Ok(Self { file, format, cache_dir, jack })
    }

    fn detrep(&self) -> DetRepStore {
        match &self.cache_dir {
            Some(d) => DetRepStore::with_dir(self.jack.clone(), d),
            None => DetRepStore::new(self.jack.clone()),
        }
    }

    fn base_config(&self, command: &str) -> RunConfig {
        let s = &self.file.simulate;
        let policy = self.policy(&TruncArgs::default());
        RunConfig {
            command: command.into(),
            kind: self.file.root.kind.clone(),
            m: self.file.root.m,
            k0: Num(self.file.root.k0.unwrap_or(1.0)),
            k1: Num(self.file.root.k1.unwrap_or(1.0)),
            x: self.file.point.x.as_deref().map(nums),
            y: self.file.point.y.as_deref().map(nums),
            t: self.file.point.t.map(Num),
            max_weight: policy.max_weight,
            tail_ratio_threshold: Num(policy.tail_ratio_threshold),
            abs_floor: Num(policy.abs_floor),
            seed: s.seed.unwrap_or(0),
            paths: s.paths.unwrap_or(100_000),
            dt: Num(s.dt.unwrap_or(1e-3)),
            boundary_shrink: Num(s.boundary_shrink.unwrap_or(0.5)),
            max_retries: s.max_retries.unwrap_or(10),
            format: self.format,
            cache_dir: self.cache_dir.as_ref().map(|d| d.display().to_string()),
        }
    }

    fn policy(&self, a: &TruncArgs) -> TruncationPolicy {
        let d = TruncationPolicy::default();
        let s = &self.file.series;
        TruncationPolicy {
            max_weight: a.max_weight.or(s.max_weight).unwrap_or(d.max_weight),
            tail_ratio_threshold: a.tail_ratio_threshold.or(s.tail_ratio_threshold).unwrap_or(d.tail_ratio_threshold),
            abs_floor: a.abs_floor.or(s.abs_floor).unwrap_or(d.abs_floor),
        }
    }

    /// Root system and multiplicity from flags over the config file; m falls
    /// back to the length of `point`.
    fn root(&self, a: &RootArgs, point: Option<&[f64]>, cfg: &mut RunConfig) -> Outcome<(RootSystem, Multiplicity)> {
        let kind = a
            .kind
            .clone()
            .or_else(|| self.file.root.kind.clone())
            .ok_or_else(|| Failure::Usage("--kind is required".into()))?;
        let parsed: RootKind = kind.parse().map_err(|e: chamber_bessel::Error| Failure::Usage(e.to_string()))?;
        let m = a
            .m
            .or(self.file.root.m)
            .or(point.map(<[f64]>::len))
            .ok_or_else(|| Failure::Usage("--m is required".into()))?;
        let k0 = a.k0.or(self.file.root.k0).unwrap_or(1.0);
        let k1 = a.k1.or(self.file.root.k1).unwrap_or(1.0);
        for (name, v) in [("k0", k0), ("k1", k1)] {
            if !v.is_finite() {
                return Err(Failure::Usage(format!("{name} must be finite")));
            }
        }
        cfg.kind = Some(parsed.to_string());
        cfg.m = Some(m);
        cfg.k0 = Num(k0);
        cfg.k1 = Num(k1);
        let rs = RootSystem::new(parsed, m)?;
        let mult = if parsed == RootKind::B { Multiplicity::new(k0, k1)? } else { Multiplicity::uniform(k1)? };
        Ok((rs, mult))
    }
}

fn required_point(flag: Option<Vec<f64>>, file: Option<&Vec<f64>>, name: &str) -> Outcome<Vec<f64>> {
    let v = flag.or_else(|| file.cloned()).ok_or_else(|| Failure::Usage(format!("--{name} is required")))?;
    if v.iter().any(|c| !c.is_finite()) {
        return Err(Failure::Usage(format!("--{name} has non-finite entries")));
    }
    Ok(v)
}

fn check_dim(v: &[f64], m: usize, name: &str) -> Outcome<()> {
    if v.len() != m {
        return Err(Failure::Usage(format!("--{name} has {} coordinates, expected {m}", v.len())));
    }
    Ok(())
}

#[derive(Serialize)]
struct EvalRecord<'a> {
    command: &'a str,
    config: &'a RunConfig,
    value: Num,
    layers_used: u32,
    converged: bool,
}

fn emit_eval(format: Format, cfg: &RunConfig, r: &SeriesResult, value: f64) {
    match format {
        Format::Json => println!(
            "{}",
            json::to_string(&EvalRecord {
                command: &cfg.command,
                config: cfg,
                value: Num(value),
                layers_used: r.layers_used,
                converged: r.converged
            })
        ),
        Format::Csv => {
            println!("value,layers_used,converged");
            println!("{},{},{}", format_number(value), r.layers_used, r.converged);
        }
    }
}

fn cmd_eval(ctx: &Context, target: EvalTarget) -> Outcome<()> {
    match target {
        EvalTarget::Bessel(a) => {
            let mut cfg = ctx.base_config("eval bessel");
            let x = required_point(a.x, ctx.file.point.x.as_ref(), "x")?;
            let y = required_point(a.y, ctx.file.point.y.as_ref(), "y")?;
            let (rs, mult) = ctx.root(&a.root, Some(&x), &mut cfg)?;
            check_dim(&x, rs.m(), "x")?;
            check_dim(&y, rs.m(), "y")?;
            let policy = ctx.policy(&a.trunc);
            policy.validate()?;
            fill_policy(&mut cfg, &policy);
            cfg.x = Some(nums(&x));
            cfg.y = Some(nums(&y));
            let r = BesselSpec::new(rs, mult).eval(&ctx.jack, &x, &y, &policy)?;
            emit_eval(ctx.format, &cfg, &r, r.value);
        }
        EvalTarget::Density(a) => {
            let mut cfg = ctx.base_config("eval density");
            let x = required_point(a.x, ctx.file.point.x.as_ref(), "x")?;
            let y = required_point(a.y, ctx.file.point.y.as_ref(), "y")?;
            let t = a.t.or(ctx.file.point.t).ok_or_else(|| Failure::Usage("--t is required".into()))?;
            let (rs, mult) = ctx.root(&a.root, Some(&x), &mut cfg)?;
            check_dim(&x, rs.m(), "x")?;
            check_dim(&y, rs.m(), "y")?;
            rs.require_chamber(&x)?;
            rs.require_chamber(&y)?;
            let policy = ctx.policy(&a.trunc);
            policy.validate()?;
            fill_policy(&mut cfg, &policy);
            cfg.x = Some(nums(&x));
            cfg.y = Some(nums(&y));
            cfg.t = Some(Num(t));
            let quad = default_quadrature(rs.m(), &mult);
            let model = DensityModel::new(ctx.jack.clone(), rs, mult, &quad, policy.max_weight)?;
            let (p, r) = model.density_series(t, &x, &y)?;
            emit_eval(ctx.format, &cfg, &r, p);
        }
        EvalTarget::Series(a) => {
            let mut cfg = ctx.base_config("eval series");
            let x = required_point(a.x, ctx.file.point.x.as_ref(), "x")?;
            let y = required_point(a.y, ctx.file.point.y.as_ref(), "y")?;
            check_dim(&y, x.len(), "y")?;
            let k1 = a.root.k1.or(ctx.file.root.k1).unwrap_or(1.0);
            let alpha = a.alpha.unwrap_or(1.0 / k1);
            if !(alpha > 0.0 && alpha.is_finite()) {
                return Err(Failure::Usage("--alpha must be positive".into()));
            }
            let params = match a.family {
                Family::F00 => HyperParams::f00(),
                Family::F01 => HyperParams::f01(a.b.ok_or_else(|| Failure::Usage("--b is required for f01".into()))?),
            };
            let policy = ctx.policy(&a.trunc);
            policy.validate()?;
            fill_policy(&mut cfg, &policy);
            cfg.m = Some(x.len());
            cfg.k1 = Num(1.0 / alpha);
            cfg.x = Some(nums(&x));
            cfg.y = Some(nums(&y));
            let table = ctx.jack.table(alpha, x.len(), policy.max_weight)?;
            let r = mv_series(&params, &table, &x, &y, &policy)?;
            emit_eval(ctx.format, &cfg, &r, r.value);
        }
    }
    Ok(())
}

fn fill_policy(cfg: &mut RunConfig, p: &TruncationPolicy) {
    cfg.max_weight = p.max_weight;
    cfg.tail_ratio_threshold = Num(p.tail_ratio_threshold);
    cfg.abs_floor = Num(p.abs_floor);
}

#[derive(Serialize)]
struct CheckRecord<'a> {
    name: &'a str,
    residual: Num,
    tolerance: Num,
    pass: bool,
}

#[derive(Serialize)]
struct VerifyRecord<'a> {
    suite: &'a str,
    config: &'a RunConfig,
    checks: Vec<CheckRecord<'a>>,
}

fn cmd_verify(ctx: &Context, a: VerifyArgs) -> Outcome<()> {
    let suites: Vec<Suite> = if a.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![a.suite.parse().map_err(|e: chamber_bessel::Error| Failure::Usage(e.to_string()))?]
    };
    let mut cfg = ctx.base_config("verify");
    let mut v = Verifier::new(ctx.jack.clone(), ctx.detrep());
    if let Some(p) = a.paths.or(ctx.file.simulate.paths) {
        if p < 100 {
            return Err(Failure::Usage("--paths must be at least 100".into()));
        }
        v.mc_paths = p;
    }
    if let Some(s) = a.seed.or(ctx.file.simulate.seed) {
        v.seed = s;
    }
    cfg.paths = v.mc_paths;
    cfg.seed = v.seed;
    let mut named: Vec<(String, Check)> = Vec::new();
    for s in &suites {
        let report = v.run(*s)?;
        for c in report.checks {
            println!("{s}: {c}");
            let name = if suites.len() > 1 { format!("{s}/{}", c.name) } else { c.name.clone() };
            named.push((name, c));
        }
    }
    let record = VerifyRecord {
        suite: &a.suite,
        config: &cfg,
        checks: named
            .iter()
            .map(|(n, c)| CheckRecord { name: n, residual: Num(c.residual), tolerance: Num(c.tolerance), pass: c.pass })
            .collect(),
    };
    if let Some(path) = &a.json {
        std::fs::write(path, json::to_string(&record) + "\n").map_err(|e| io_failure(path, e))?;
    }
    let failed = named.iter().filter(|(_, c)| !c.pass).count();
    println!("{} checks, {failed} failed", named.len());
    if failed > 0 {
        return Err(Failure::ChecksFailed);
    }
    Ok(())
}

#[derive(Serialize)]
struct MomentRecord {
    function: String,
    estimate: Num,
    std_error: Num,
    n_paths: usize,
    seed: u64,
}

#[derive(Serialize)]
struct ComparisonRecord {
    function: String,
    quadrature: Num,
    z_score: Num,
    pass: bool,
}

#[derive(Serialize)]
struct Diagnostics {
    accepted_steps: u64,
    rejected_steps: u64,
    shrunk_steps: u64,
    min_dt: Num,
    mean_dt: Num,
}

#[derive(Serialize)]
struct SimulateRecord<'a> {
    config: &'a RunConfig,
    moments: Vec<MomentRecord>,
    diagnostics: Diagnostics,
    #[serde(skip_serializing_if = "Option::is_none")]
    comparison: Option<Vec<ComparisonRecord>>,
}

fn cmd_simulate(ctx: &Context, a: SimulateArgs) -> Outcome<()> {
    let mut cfg = ctx.base_config("simulate");
    let s = &ctx.file.simulate;
    let y0 = required_point(a.y0, ctx.file.point.x.as_ref(), "y0")?;
    let t = a.t.or(ctx.file.point.t).unwrap_or(1.0);
    let (rs, mult) = ctx.root(&a.root, Some(&y0), &mut cfg)?;
    check_dim(&y0, rs.m(), "y0")?;
    let paths = a.paths.or(s.paths).unwrap_or(100_000);
    if paths == 0 {
        return Err(Failure::Usage("--paths must be positive".into()));
    }
    let sde = SdeConfig {
        dt: a.dt.or(s.dt).unwrap_or(1e-3),
        n_paths: paths,
        seed: a.seed.or(s.seed).unwrap_or(0),
        boundary_shrink: a.boundary_shrink.or(s.boundary_shrink).unwrap_or(0.5),
        max_retries: a.max_retries.or(s.max_retries).unwrap_or(10),
        ..SdeConfig::new(rs.clone(), mult, y0.clone(), t)
    };
    cfg.x = Some(nums(&y0));
    cfg.t = Some(Num(t));
    cfg.paths = sde.n_paths;
    cfg.seed = sde.seed;
    cfg.dt = Num(sde.dt);
    cfg.boundary_shrink = Num(sde.boundary_shrink);
    cfg.max_retries = sde.max_retries;

    let ensemble = simulate(&sde)?;
    let functions = default_test_functions(&rs, &mult);
    let report = moment_report(&ensemble, &functions)?;
    std::fs::write(&a.csv, ensemble_csv(&ensemble)).map_err(|e| io_failure(&a.csv, e))?;

    let mut all_pass = true;
    let comparison = if a.compare {
        let quad = default_quadrature(rs.m(), &mult);
        let model = DensityModel::new(ctx.jack.clone(), rs.clone(), mult, &quad, 30)?;
        let rule = QuadratureSpec { panels: 16, ..QuadratureSpec::simple_root() };
        let exact = quadrature_moments(&model.prepared(t, &y0)?, &rs, &functions, &rule)?;
        let rows: Vec<ComparisonRecord> = report
            .iter()
            .zip(exact)
            .map(|(r, e)| {
                let z = (r.estimate - e).abs() / r.std_error;
                ComparisonRecord { function: r.function.clone(), quadrature: Num(e), z_score: Num(z), pass: z <= 3.0 }
            })
            .collect();
        for (r, c) in report.iter().zip(&rows) {
            println!(
                "[{}] {}: monte carlo {} ± {}, quadrature {}, z = {:.2}",
                if c.pass { "PASS" } else { "FAIL" },
                r.function,
                format_number(r.estimate),
                format_number(r.std_error),
                format_number(c.quadrature.0),
                c.z_score.0
            );
        }
        all_pass = rows.iter().all(|c| c.pass);
        Some(rows)
    } else {
        None
    };
    let record = SimulateRecord {
        config: &cfg,
        moments: report
            .iter()
            .map(|r| MomentRecord {
                function: r.function.clone(),
                estimate: Num(r.estimate),
                std_error: Num(r.std_error),
                n_paths: r.n_paths,
                seed: r.seed,
            })
            .collect(),
        diagnostics: Diagnostics {
            accepted_steps: ensemble.accepted_steps,
            rejected_steps: ensemble.rejected_steps,
            shrunk_steps: ensemble.shrunk_steps,
            min_dt: Num(ensemble.min_dt),
            mean_dt: Num(ensemble.mean_dt),
        },
        comparison,
    };
    std::fs::write(&a.json, json::to_string(&record) + "\n").map_err(|e| io_failure(&a.json, e))?;
    info!("wrote {} and {}", a.csv.display(), a.json.display());
    if !all_pass {
        return Err(Failure::ChecksFailed);
    }
    Ok(())
}

#[derive(Serialize)]
struct CalibrateRecord<'a> {
    command: &'a str,
    config: &'a RunConfig,
    family: String,
    m: usize,
    phi: Num,
    kappa: Num,
}

fn cmd_calibrate(ctx: &Context, a: CalibrateArgs) -> Outcome<()> {
    let mut cfg = ctx.base_config("calibrate");
    cfg.m = Some(a.m);
    let c = ctx.detrep().constant(a.family, a.m, a.phi)?;
    match ctx.format {
        Format::Json => println!(
            "{}",
            json::to_string(&CalibrateRecord {
                command: "calibrate",
                config: &cfg,
                family: c.family.to_string(),
                m: c.m,
                phi: Num(c.phi),
                kappa: Num(c.kappa)
            })
        ),
        Format::Csv => {
            println!("family,m,phi,kappa");
            println!("{},{},{},{}", c.family, c.m, format_number(c.phi), format_number(c.kappa));
        }
    }
    Ok(())
}

fn parts(p: &Partition) -> String {
    p.parts().iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
}

fn cmd_table(ctx: &Context, target: TableTarget) -> Outcome<()> {
    match target {
        TableTarget::Jack(a) => {
            if !(a.alpha > 0.0 && a.alpha.is_finite()) {
                return Err(Failure::Usage("--alpha must be positive".into()));
            }
            let table = ctx.jack.table(a.alpha, a.m, a.weight)?;
            println!("tau,mu,coefficient");
            for tau in enumerate_partitions(a.weight, a.m) {
                let e = table.expansion(&tau, Normalization::C).ok_or_else(|| Failure::Abort(format!("missing {tau}")))?;
                for (mu, c) in &e.coeffs {
                    println!("{},{},{}", parts(&tau), parts(mu), format_number(*c));
                }
            }
        }
        TableTarget::Density(a) => {
            let mut cfg = ctx.base_config("table density");
            let x = required_point(a.x, ctx.file.point.x.as_ref(), "x")?;
            let t = a.t.or(ctx.file.point.t).ok_or_else(|| Failure::Usage("--t is required".into()))?;
            let (rs, mult) = ctx.root(&a.root, Some(&x), &mut cfg)?;
            let m = rs.m();
            check_dim(&x, m, "x")?;
            check_dim(&a.from, m, "from")?;
            check_dim(&a.to, m, "to")?;
            if a.steps == 0 {
                return Err(Failure::Usage("--steps must be positive".into()));
            }
            let policy = ctx.policy(&a.trunc);
            policy.validate()?;
            let quad = default_quadrature(m, &mult);
            let model = DensityModel::new(ctx.jack.clone(), rs, mult, &quad, policy.max_weight)?;
            let prepared = model.prepared(t, &x)?;
            let mut header = String::from("s");
            for i in 1..=m {
                header.push_str(&format!(",y{i}"));
            }
            println!("{header},density");
            for i in 0..=a.steps {
                let s = i as f64 / a.steps as f64;
                let y: Vec<f64> = a.from.iter().zip(&a.to).map(|(f, g)| f + s * (g - f)).collect();
                model.rs().require_chamber(&y)?;
                let mut row = format_number(s);
                for v in &y {
                    row.push(',');
                    row.push_str(&format_number(*v));
                }
                println!("{row},{}", format_number(prepared.forward(&y)));
            }
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Outcome<()> {
    let ctx = Context::new(&cli)?;
    match cli.command {
        Command::Eval { target } => cmd_eval(&ctx, target),
        Command::Verify(a) => cmd_verify(&ctx, a),
        Command::Simulate(a) => cmd_simulate(&ctx, a),
        Command::Calibrate(a) => cmd_calibrate(&ctx, a),
        Command::Table { target } => cmd_table(&ctx, target),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !matches!(f, Failure::ChecksFailed) {
                eprintln!("error: {f}");
            }
            ExitCode::from(f.code())
        }
    }
}
