//! Euler–Maruyama for the radial Dunkl SDE
//!
//! dY = dB + Σ_{α∈R₊} k(α) α / ⟨α, Y⟩ dt
//!
//! with step shrinking near the walls, and moment estimates over path
//! ensembles.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernels::PreparedDensity;
use crate::quadrature::{integrate_chamber, QuadratureSpec};
use crate::rootsys::{Multiplicity, RootSystem};
use crate::sum::pairwise_sum;

/// Smallest ⟨α, y⟩ an accepted step may reach.
pub const MIN_ROOT_GAP: f64 = 1e-6;
/// Largest fraction of steps whose retry budget may run out.
pub const MAX_REJECTION_RATE: f64 = 1e-3;
const MAX_RESAMPLES_PER_STEP: u32 = 1000;

/// Σ k(α) α / ⟨α, y⟩ = ∇ log ω_k(y).
pub fn drift(rs: &RootSystem, mult: &Multiplicity, y: &[f64]) -> Result<Vec<f64>> {
    rs.check_dim(y)?;
    let mut b = vec![0.0; y.len()];
    for root in rs.positive_roots() {
        let ip = root.dot(y);
        if !(ip > 0.0) {
            return Err(Error::SingularDrift(y.to_vec()));
        }
        let c = mult.of(root.orbit) / ip;
        for (bi, &a) in b.iter_mut().zip(&root.vector) {
            *bi += c * a as f64;
        }
    }
    Ok(b)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SdeConfig {
    pub rs: RootSystem,
    pub mult: Multiplicity,
    pub y0: Vec<f64>,
    pub t_end: f64,
    pub dt: f64,
    pub n_paths: usize,
    pub seed: u64,
    /// Factor applied to the step on each retry.
    pub boundary_shrink: f64,
    /// Retries with the same increment before it is redrawn.
    pub max_retries: u32,
}

impl SdeConfig {
    pub fn new(rs: RootSystem, mult: Multiplicity, y0: Vec<f64>, t_end: f64) -> Self {
        Self { rs, mult, y0, t_end, dt: 1e-3, n_paths: 100_000, seed: 0, boundary_shrink: 0.5, max_retries: 10 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidInput(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(Error::InvalidInput(format!("t must be positive, got {}", self.t_end)));
        }
        if self.n_paths == 0 {
            return Err(Error::InvalidInput("at least one path is required".into()));
        }
        if !(self.boundary_shrink > 0.0 && self.boundary_shrink < 1.0) {
            return Err(Error::InvalidInput("boundary_shrink must lie in (0, 1)".into()));
        }
        self.rs.require_chamber(&self.y0)?;
        if !self.interior(&self.y0) {
            return Err(Error::NotInChamber(self.y0.clone()));
        }
        Ok(())
    }

    fn interior(&self, y: &[f64]) -> bool {
        self.rs.positive_roots().iter().all(|r| r.dot(y) >= MIN_ROOT_GAP)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathEnsemble {
    pub m: usize,
    /// n_paths × m terminal points, path-index order.
    pub terminal: Vec<Vec<f64>>,
    pub accepted_steps: u64,
    /// Steps whose retry budget ran out, forcing a fresh increment.
    pub rejected_steps: u64,
    pub shrunk_steps: u64,
    pub min_dt: f64,
    pub mean_dt: f64,
    pub seed: u64,
}

struct PathStats {
    terminal: Vec<f64>,
    accepted: u64,
    rejected: u64,
    shrunk: u64,
    min_dt: f64,
}

fn run_path(cfg: &SdeConfig, index: usize) -> Result<PathStats> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index as u64);
    let m = cfg.y0.len();
    let mut y = cfg.y0.clone();
    let mut t = 0.0;
    let mut stats = PathStats { terminal: Vec::new(), accepted: 0, rejected: 0, shrunk: 0, min_dt: f64::INFINITY };
    let mut z = vec![0.0; m];
    let mut proposal = vec![0.0; m];
    while t < cfg.t_end {
        let base = cfg.dt.min(cfg.t_end - t);
        let b = drift(&cfg.rs, &cfg.mult, &y)?;
        let mut resamples = 0;
        'step: loop {
            for zi in z.iter_mut() {
                *zi = StandardNormal.sample(&mut rng);
            }
            let mut h = base;
            for attempt in 0..=cfg.max_retries {
                let s = h.sqrt();
                for i in 0..m {
                    proposal[i] = y[i] + b[i] * h + s * z[i];
                }
                if cfg.interior(&proposal) {
                    if attempt > 0 {
                        stats.shrunk += 1;
                    }
                    std::mem::swap(&mut y, &mut proposal);
                    t = if h == base && base == cfg.t_end - t { cfg.t_end } else { t + h };
                    stats.accepted += 1;
                    stats.min_dt = stats.min_dt.min(h);
                    break 'step;
                }
                h *= cfg.boundary_shrink;
            }
            stats.rejected += 1;
            resamples += 1;
            if resamples >= MAX_RESAMPLES_PER_STEP {
                return Err(Error::SimulationAborted(format!(
                    "path {index}: no admissible step from {y:?} after {resamples} increments"
                )));
            }
        }
        debug_assert!(cfg.rs.in_chamber(&y));
    }
    stats.terminal = y;
    Ok(stats)
}

/// Terminal points of `n_paths` independent paths. Path i draws from the
/// ChaCha8 stream i of `seed`, so results do not depend on thread count.
pub fn simulate(cfg: &SdeConfig) -> Result<PathEnsemble> {
    cfg.validate()?;
    let paths: Vec<PathStats> = (0..cfg.n_paths).into_par_iter().map(|i| run_path(cfg, i)).collect::<Result<_>>()?;
    let accepted: u64 = paths.iter().map(|p| p.accepted).sum();
    let rejected: u64 = paths.iter().map(|p| p.rejected).sum();
    let shrunk: u64 = paths.iter().map(|p| p.shrunk).sum();
    if rejected as f64 > MAX_REJECTION_RATE * accepted as f64 {
        return Err(Error::SimulationAborted(format!(
            "retry budget exhausted on {rejected} of {accepted} steps (limit {:.1}%)",
            100.0 * MAX_REJECTION_RATE
        )));
    }
    let min_dt = paths.iter().map(|p| p.min_dt).fold(f64::INFINITY, f64::min);
    Ok(PathEnsemble {
        m: cfg.y0.len(),
        terminal: paths.into_iter().map(|p| p.terminal).collect(),
        accepted_steps: accepted,
        rejected_steps: rejected,
        shrunk_steps: shrunk,
        min_dt,
        mean_dt: cfg.t_end * cfg.n_paths as f64 / accepted as f64,
        seed: cfg.seed,
    })
}

pub struct TestFunction {
    pub name: String,
    pub f: Box<dyn Fn(&[f64]) -> f64 + Send + Sync>,
}

impl TestFunction {
    pub fn new(name: impl Into<String>, f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        Self { name: name.into(), f: Box::new(f) }
    }
}

impl std::fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "TestFunction({})", self.name)
    }
}

/// p₁(y²) = Σy_i², p₂(y²) = Σy_i⁴ and ω_k(y).
pub fn default_test_functions(rs: &RootSystem, mult: &Multiplicity) -> Vec<TestFunction> {
    let (rs, mult) = (rs.clone(), *mult);
    vec![
        TestFunction::new("p1(y^2)", |y: &[f64]| y.iter().map(|v| v * v).sum()),
        TestFunction::new("p2(y^2)", |y: &[f64]| y.iter().map(|v| v.powi(4)).sum()),
        TestFunction::new("omega_k", move |y: &[f64]| {
            rs.positive_roots().iter().map(|r| r.dot(y).abs().powf(mult.of(r.orbit))).product()
        }),
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentEstimate {
    pub function: String,
    pub estimate: f64,
    pub std_error: f64,
    pub n_paths: usize,
    pub seed: u64,
}

pub const MIN_REPORT_PATHS: usize = 100;

/// Sample mean and standard error of each function over the terminal points.
pub fn moment_report(ensemble: &PathEnsemble, functions: &[TestFunction]) -> Result<Vec<MomentEstimate>> {
    let n = ensemble.terminal.len();
    if n < MIN_REPORT_PATHS {
        return Err(Error::InvalidInput(format!("moment report needs ≥ {MIN_REPORT_PATHS} paths, got {n}")));
    }
    Ok(functions
        .iter()
        .map(|tf| {
            let values: Vec<f64> = ensemble.terminal.iter().map(|y| (tf.f)(y)).collect();
            let mean = pairwise_sum(&values) / n as f64;
            let sq: Vec<f64> = values.iter().map(|v| (v - mean).powi(2)).collect();
            let var = pairwise_sum(&sq) / (n as f64 - 1.0);
            MomentEstimate {
                function: tf.name.clone(),
                estimate: mean,
                std_error: (var / n as f64).sqrt(),
                n_paths: n,
                seed: ensemble.seed,
            }
        })
        .collect())
}

/// ∫_C f(y) p_t(x, y) dy for each test function.
pub fn quadrature_moments(density: &PreparedDensity, rs: &RootSystem, functions: &[TestFunction], quad: &QuadratureSpec) -> Result<Vec<f64>> {
    functions
        .iter()
        .map(|tf| Ok(integrate_chamber(|y| (tf.f)(y) * density.forward(y), rs, quad)?.estimate))
        .collect()
}

/// 17 significant digits, shared by the CSV and JSON writers.
pub fn format_number(v: f64) -> String {
    format!("{v:.16e}")
}

/// `path,y1,...,ym` followed by one row per path.
pub fn ensemble_csv(ensemble: &PathEnsemble) -> String {
    let mut out = String::from("path");
    for i in 1..=ensemble.m {
        out.push_str(&format!(",y{i}"));
    }
    out.push('\n');
    for (i, y) in ensemble.terminal.iter().enumerate() {
        out.push_str(&i.to_string());
        for v in y {
            out.push(',');
            out.push_str(&format_number(*v));
        }
        out.push('\n');
    }
    out
}
