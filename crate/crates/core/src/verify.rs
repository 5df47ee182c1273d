//! Identity suites with measured residuals against tolerances.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bessel::{bessel_b, bessel_d_low_rank, d_product_coefficient, symmetrization_check};
use crate::detrep::{series_value, DetRepStore, Family};
use crate::error::{Error, Result};
use crate::hyperseries::TruncationPolicy;
use crate::jack::{apply_operator, jack_expansion_exact, JackStore, Normalization, Scalar};
use crate::kernels::{default_quadrature, grabiner, grabiner_d_hyperbolic, grabiner_generic, DensityModel};
use crate::partitions::{enumerate_partitions, jack_eigenvalue, Partition};
use crate::quadrature::{integrate_chamber, QuadratureSpec};
use crate::rootsys::{Multiplicity, RootKind, RootSystem};
use crate::simulate::{default_test_functions, moment_report, quadrature_moments, simulate, SdeConfig, TestFunction};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self { name: name.into(), residual, tolerance, pass: residual <= tolerance }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {}: residual {:.3e} (tolerance {:.1e})",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.residual,
            self.tolerance
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Jack,
    Detrep,
    Theorem1,
    Shift,
    Symmetrize,
    Normalization,
    Chapman,
    Montecarlo,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Jack,
        Suite::Detrep,
        Suite::Theorem1,
        Suite::Shift,
        Suite::Symmetrize,
        Suite::Normalization,
        Suite::Chapman,
        Suite::Montecarlo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Jack => "jack",
            Suite::Detrep => "detrep",
            Suite::Theorem1 => "theorem1",
            Suite::Shift => "shift",
            Suite::Symmetrize => "symmetrize",
            Suite::Normalization => "normalization",
            Suite::Chapman => "chapman",
            Suite::Montecarlo => "montecarlo",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown suite '{s}'")))
    }
}

/// Shared stores plus the knobs that dominate runtime.
#[derive(Debug)]
pub struct Verifier {
    pub jack: Arc<JackStore>,
    pub detrep: DetRepStore,
    pub mc_paths: usize,
    pub mc_dt: f64,
    pub seed: u64,
}

impl Verifier {
    pub fn new(jack: Arc<JackStore>, detrep: DetRepStore) -> Self {
        Self { jack, detrep, mc_paths: 100_000, mc_dt: 1e-3, seed: 20_240_601 }
    }

    pub fn run(&self, suite: Suite) -> Result<SuiteReport> {
        let checks = match suite {
            Suite::Jack => self.jack_suite()?,
            Suite::Detrep => self.detrep_suite()?,
            Suite::Theorem1 => {
                let mut c = self.theorem1_suite()?;
                c.extend(self.grabiner_forms()?);
                c
            }
            Suite::Shift => self.shift_suite()?,
            Suite::Symmetrize => self.symmetrize_suite()?,
            Suite::Normalization => self.normalization_suite()?,
            Suite::Chapman => self.chapman_suite()?,
            Suite::Montecarlo => self.montecarlo_suite()?,
        };
        Ok(SuiteReport { suite, checks })
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream(salt);
        r
    }

    pub fn jack_suite(&self) -> Result<Vec<Check>> {
        let mut checks = Vec::new();
        let mut rng = self.rng(1);
        for alpha in [0.5, 1.0, 2.0, 3.0] {
            let mut sum_res = 0.0f64;
            let mut eig_res = 0.0f64;
            for m in 1..=4 {
                let table = self.jack.table(alpha, m, 8)?;
                for n in 0..=8 {
                    for _ in 0..20 {
                        let x: Vec<f64> = (0..m).map(|_| rng.random_range(0.1..2.0)).collect();
                        let total: f64 = table.layer_values(n, &x).iter().sum();
                        let want = x.iter().sum::<f64>().powi(n as i32);
                        sum_res = sum_res.max((total - want).abs() / want.abs());
                    }
                    for tau in &table.layer(n).expect("weight 8 built").partitions {
                        let e = table.expansion(tau, Normalization::C).expect("present");
                        let d = apply_operator(&e.coeffs, &alpha, m)?;
                        let rho = jack_eigenvalue(tau, alpha, m);
                        let scale = e.coeffs.iter().map(|(_, c)| c.abs()).fold(0.0, f64::max) * rho.abs().max(1.0);
                        for (mu, v) in &d {
                            let c = e.coefficient(mu).copied().unwrap_or(0.0);
                            eig_res = eig_res.max((v - rho * c).abs() / scale);
                        }
                    }
                }
            }
            checks.push(Check::new(format!("sum of C_τ = p₁^n, n≤8, m≤4, α={alpha}"), sum_res, 1e-10));
            checks.push(Check::new(format!("eigen-equation (float), |τ|≤8, m≤4, α={alpha}"), eig_res, 1e-10));
        }
        for (num, den) in [(1, 2), (1, 1), (2, 1), (3, 1)] {
            let alpha = BigRational::new(num.into(), den.into());
            let mut bad = 0usize;
            for m in 1..=3 {
                for n in 0..=6 {
                    for tau in enumerate_partitions(n, m) {
                        let e = jack_expansion_exact(&tau, alpha.clone(), m)?;
                        let d = apply_operator(&e.coeffs, &alpha, m)?;
                        let rho = exact_eigenvalue(&tau, &alpha, m);
                        for (mu, v) in &d {
                            let c = e.coefficient(mu).cloned().unwrap_or_else(<BigRational as Scalar>::zero);
                            if *v != rho.clone() * c {
                                bad += 1;
                            }
                        }
                    }
                }
            }
            checks.push(Check::new(format!("eigen-equation (exact), |τ|≤6, m≤3, α={num}/{den}"), bad as f64, 0.0));
        }
        let mut schur_res = 0.0f64;
        for m in 1..=3 {
            let table = self.jack.table(1.0, m, 6)?;
            for n in 0..=6 {
                for tau in enumerate_partitions(n, m) {
                    let e = table.expansion(&tau, Normalization::C).expect("present");
                    let ratios: Vec<f64> = (0..10)
                        .map(|_| {
                            let x = distinct_point(&mut rng, m, 0.2, 1.8, 0.15);
                            e.eval(&x).map(|c| c / schur_bialternant(&tau, &x))
                        })
                        .collect::<Result<_>>()?;
                    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
                    let hi = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                    schur_res = schur_res.max((hi - lo) / hi.abs());
                }
            }
        }
        checks.push(Check::new("C_τ^(1) / s_τ constant, |τ|≤6, m≤3", schur_res, 1e-10));
        Ok(checks)
    }

    pub fn detrep_suite(&self) -> Result<Vec<Check>> {
        let mut checks = Vec::new();
        let policy = TruncationPolicy::with_max_weight(30);
        let mut rng = self.rng(2);
        for m in [2, 3] {
            let cases: [(Family, f64); 4] = [(Family::F00, 0.0), (Family::F01, -0.5), (Family::F01, 0.5), (Family::F01, 1.0)];
            for (family, phi) in cases {
                let mut worst = 0.0f64;
                for _ in 0..25 {
                    let x = distinct_point(&mut rng, m, 0.1, 1.5, 0.05);
                    let y = distinct_point(&mut rng, m, 0.1, 1.5, 0.05);
                    let det = match family {
                        Family::F00 => self.detrep.f00_det(&x, &y)?,
                        Family::F01 => self.detrep.f01_det(phi, &x, &y)?,
                    };
                    let s = series_value(&self.jack, family, phi, &x, &y, &policy)?;
                    worst = worst.max((det - s).abs() / s.abs());
                }
                let label = match family {
                    Family::F00 => format!("0F0 determinant vs series, m={m}"),
                    Family::F01 => format!("0F1 determinant vs series, m={m}, φ={phi}"),
                };
                checks.push(Check::new(label, worst, 1e-6));
            }
        }
        Ok(checks)
    }

    fn density_model(&self, kind: RootKind, m: usize, mult: Multiplicity) -> Result<DensityModel> {
        let rs = RootSystem::new(kind, m)?;
        let quad = default_quadrature(m, &mult);
        DensityModel::new(self.jack.clone(), rs, mult, &quad, 30)
    }

    /// Densities at k ≡ 1 only; `run(Suite::Theorem1)` adds `grabiner_forms`.
    pub fn theorem1_suite(&self) -> Result<Vec<Check>> {
        let mut checks = Vec::new();
        let mut rng = self.rng(3);
        let one = Multiplicity::new(1.0, 1.0)?;
        for (kind, m) in [(RootKind::D, 2), (RootKind::D, 3), (RootKind::A, 2), (RootKind::A, 3), (RootKind::B, 2), (RootKind::B, 3)] {
            let model = self.density_model(kind, m, one)?;
            let mut worst = 0.0f64;
            for _ in 0..10 {
                let x = chamber_point(model.rs(), &mut rng, 0.1, 1.5, 0.1);
                let y = chamber_point(model.rs(), &mut rng, 0.1, 1.5, 0.1);
                for t in [0.5, 1.0, 2.0] {
                    let p = model.density(t, &x, &y)?;
                    let g = grabiner(model.rs(), t, &x, &y)?;
                    worst = worst.max((p - g).abs() / g.abs());
                }
            }
            checks.push(Check::new(format!("density = Grabiner kernel, {kind}{m}, k≡1, t∈{{½,1,2}}"), worst, 1e-6));
        }
        Ok(checks)
    }

    pub fn grabiner_forms(&self) -> Result<Vec<Check>> {
        let mut checks = Vec::new();
        let mut rng = self.rng(6);
        let cases = [(RootKind::A, 2), (RootKind::A, 3), (RootKind::A, 4), (RootKind::B, 2), (RootKind::B, 3), (RootKind::D, 2), (RootKind::D, 3)];
        for (kind, m) in cases {
            let rs = RootSystem::new(kind, m)?;
            let mut worst = 0.0f64;
            for _ in 0..10 {
                let x = chamber_point(&rs, &mut rng, 0.1, 1.5, 0.1);
                let y = chamber_point(&rs, &mut rng, 0.1, 1.5, 0.1);
                let t = rng.random_range(0.5..2.0);
                let g = grabiner_generic(&rs, t, &x, &y)?;
                let d = grabiner(&rs, t, &x, &y)?;
                worst = worst.max((g - d).abs() / d.abs());
                if kind == RootKind::D {
                    let h = grabiner_d_hyperbolic(t, &x, &y)?;
                    worst = worst.max((h - d).abs() / d.abs());
                }
            }
            checks.push(Check::new(format!("Weyl sum = determinant form, {kind}{m}"), worst, 1e-10));
        }
        Ok(checks)
    }

    /// J_D from the low-rank isomorphisms against J_B(k₀=0) + ∏x_iy_i·J_B(k₀=1)/C,
    /// once with C = 2^m and once with C = 2^m (q−½)_{(1^m)}.
    pub fn shift_suite(&self) -> Result<Vec<Check>> {
        let mut checks = Vec::new();
        let policy = TruncationPolicy::default();
        let mut rng = self.rng(4);
        for k1 in [0.5, 1.0, 2.0] {
            for m in [2, 3] {
                let rs = RootSystem::new(RootKind::D, m)?;
                let printed = 0.5f64.powi(m as i32);
                let corrected = d_product_coefficient(m, k1)?;
                let (mut wp, mut wc) = (0.0f64, 0.0f64);
                for _ in 0..20 {
                    let x = chamber_point(&rs, &mut rng, 0.1, 1.5, 0.1);
                    let y = chamber_point(&rs, &mut rng, 0.1, 1.5, 0.1);
                    let d = bessel_d_low_rank(&self.jack, &x, &y, k1, &policy)?;
                    let b0 = bessel_b(&self.jack, &x, &y, 0.0, k1, &policy)?.value;
                    let b1 = bessel_b(&self.jack, &x, &y, 1.0, k1, &policy)?.value;
                    let prod: f64 = x.iter().zip(&y).map(|(a, b)| a * b).product();
                    wp = wp.max((d - b0 - printed * prod * b1).abs() / d.abs());
                    wc = wc.max((d - b0 - corrected * prod * b1).abs() / d.abs());
                }
                checks.push(Check::new(format!("shift decomposition, C = 2^m, D{m}, k₁={k1}"), wp, 1e-8));
                checks.push(Check::new(format!("shift decomposition, C = 2^m (q−½)_(1^m), D{m}, k₁={k1}"), wc, 1e-8));
            }
        }
        Ok(checks)
    }

    pub fn symmetrize_suite(&self) -> Result<Vec<Check>> {
        let mut checks = Vec::new();
        let policy = TruncationPolicy::default();
        let mut rng = self.rng(5);
        for k1 in [0.5, 1.0, 2.0] {
            for m in [2, 3] {
                let rs = RootSystem::new(RootKind::D, m)?;
                let mut worst = 0.0f64;
                for _ in 0..20 {
                    let x = chamber_point(&rs, &mut rng, 0.1, 1.5, 0.1);
                    let y = chamber_point(&rs, &mut rng, 0.1, 1.5, 0.1);
                    let b = bessel_b(&self.jack, &x, &y, 0.0, k1, &policy)?.value;
                    worst = worst.max(symmetrization_check(&self.jack, &x, &y, k1, &policy)?.abs() / b.abs());
                }
                checks.push(Check::new(format!("½[J_D(x,y) + J_D(x,s_m y)] = J_B(k₀=0), D{m}, k₁={k1}"), worst, 1e-10));
            }
        }
        Ok(checks)
    }

    fn kernel_cases() -> Result<Vec<(RootKind, Multiplicity)>> {
        Ok(vec![
            (RootKind::A, Multiplicity::uniform(0.5)?),
            (RootKind::A, Multiplicity::uniform(1.0)?),
            (RootKind::B, Multiplicity::new(1.0, 1.0)?),
            (RootKind::D, Multiplicity::uniform(1.0)?),
        ])
    }

    fn label(kind: RootKind, mult: &Multiplicity) -> String {
        match kind {
            RootKind::B => format!("{kind}2, k=({},{})", mult.k0, mult.k1),
            _ => format!("{kind}2, k₁={}", mult.k1),
        }
    }

    pub fn normalization_suite(&self) -> Result<Vec<Check>> {
        let mut checks = Vec::new();
        let x = [1.2, 0.4];
        for (kind, mult) in Self::kernel_cases()? {
            let model = self.density_model(kind, 2, mult)?;
            let p = model.prepared(1.0, &x)?;
            let total = integrate_chamber(|y| p.forward(y), model.rs(), &simple_root_spec())?.estimate;
            checks.push(Check::new(format!("∫ density = 1, {}", Self::label(kind, &mult)), (total - 1.0).abs(), 1e-3));
            checks.push(Check::new(
                format!("c_k origin vs interior probe, {}", Self::label(kind, &mult)),
                model.constant().estimate_error,
                1e-3,
            ));
        }
        Ok(checks)
    }

    pub fn chapman_suite(&self) -> Result<Vec<Check>> {
        let mut checks = Vec::new();
        let (x, y) = ([1.2, 0.4], [0.9, 0.3]);
        for (kind, mult) in Self::kernel_cases()? {
            let model = self.density_model(kind, 2, mult)?;
            let from = model.prepared(0.5, &x)?;
            let to = model.prepared(0.5, &y)?;
            let composed = integrate_chamber(|z| from.forward(z) * to.backward(z), model.rs(), &simple_root_spec())?.estimate;
            let direct = model.density(1.0, &x, &y)?;
            checks.push(Check::new(
                format!("Chapman–Kolmogorov, s=t=½, {}", Self::label(kind, &mult)),
                (composed - direct).abs() / direct,
                1e-3,
            ));
        }
        Ok(checks)
    }

    pub fn montecarlo_suite(&self) -> Result<Vec<Check>> {
        let mut checks = Vec::new();
        let y0 = vec![1.5, 0.5];
        for (kind, mult) in [(RootKind::B, Multiplicity::new(1.0, 1.0)?), (RootKind::D, Multiplicity::uniform(1.0)?)] {
            let model = self.density_model(kind, 2, mult)?;
            let cfg = SdeConfig {
                n_paths: self.mc_paths,
                dt: self.mc_dt,
                seed: self.seed,
                ..SdeConfig::new(model.rs().clone(), mult, y0.clone(), 1.0)
            };
            let ensemble = simulate(&cfg)?;
            let functions = default_test_functions(model.rs(), &mult);
            let report = moment_report(&ensemble, &functions)?;
            let exact = quadrature_moments(&model.prepared(1.0, &y0)?, model.rs(), &functions, &simple_root_spec())?;
            for (r, e) in report.iter().zip(exact) {
                checks.push(Check::new(
                    format!("E[{}] vs quadrature in std errors, {}", r.function, Self::label(kind, &mult)),
                    (r.estimate - e).abs() / r.std_error,
                    3.0,
                ));
            }
        }
        let rs = RootSystem::new(RootKind::B, 1)?;
        let mult = Multiplicity::new(1.0, 1.0)?;
        let cfg = SdeConfig { n_paths: self.mc_paths, dt: self.mc_dt, seed: self.seed, ..SdeConfig::new(rs, mult, vec![1.0], 1.0) };
        let ensemble = simulate(&cfg)?;
        let r = moment_report(&ensemble, &[TestFunction::new("y^2", |y: &[f64]| y[0] * y[0])])?;
        checks.push(Check::new("E[Y_1²] = y₀² + 3t in std errors, B1, k₀=1", (r[0].estimate - 4.0).abs() / r[0].std_error, 3.0));
        Ok(checks)
    }
}

fn simple_root_spec() -> QuadratureSpec {
    QuadratureSpec { panels: 16, ..QuadratureSpec::simple_root() }
}

fn exact_eigenvalue(tau: &Partition, alpha: &BigRational, m: usize) -> BigRational {
    let two_over_alpha = BigRational::from_i64(2) / alpha.clone();
    let mut acc = <BigRational as Scalar>::zero();
    for (i, &p) in tau.parts().iter().enumerate() {
        let p = i64::from(p);
        acc = acc + BigRational::from_i64(p * (p - 1)) - two_over_alpha.clone() * BigRational::from_i64(p * i as i64);
    }
    acc + two_over_alpha * BigRational::from_i64((m as i64 - 1) * i64::from(tau.weight()))
}

/// s_λ(x) = det[x_i^{λ_j + m − j}] / det[x_i^{m − j}].
pub fn schur_bialternant(lambda: &Partition, x: &[f64]) -> f64 {
    let m = x.len();
    let lp = lambda.padded(m);
    let num = DMatrix::from_fn(m, m, |i, j| x[i].powi((lp[j] as usize + m - 1 - j) as i32)).determinant();
    let den = DMatrix::from_fn(m, m, |i, j| x[i].powi((m - 1 - j) as i32)).determinant();
    num / den
}

/// Decreasing point with coordinates in [lo, hi] and gaps ≥ gap.
fn distinct_point(rng: &mut ChaCha8Rng, m: usize, lo: f64, hi: f64, gap: f64) -> Vec<f64> {
    loop {
        let mut v: Vec<f64> = (0..m).map(|_| rng.random_range(lo..hi)).collect();
        v.sort_by(|a, b| b.total_cmp(a));
        if v.windows(2).all(|w| w[0] - w[1] >= gap) {
            return v;
        }
    }
}

/// Chamber point with all ⟨α, y⟩ ≥ gap-ish: magnitudes in [lo, hi]; type A
/// may take negative entries, type D may flip the last sign.
pub fn chamber_point(rs: &RootSystem, rng: &mut ChaCha8Rng, lo: f64, hi: f64, gap: f64) -> Vec<f64> {
    let m = rs.m();
    match rs.kind() {
        RootKind::A => distinct_point(rng, m, -hi, hi, gap),
        RootKind::B => distinct_point(rng, m, lo, hi, gap),
        RootKind::D => {
            let mut v = distinct_point(rng, m, lo, hi, gap);
            if rng.random_bool(0.5) {
                v[m - 1] = -v[m - 1];
            }
            v
        }
    }
}
