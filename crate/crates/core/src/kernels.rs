//! Transition densities of radial Dunkl processes in the Weyl chamber,
//!
//! p_t(x, y) = e^{−(|x|²+|y|²)/2t} J_k(x/√t, y/√t) ω_k(y)² / (c_k t^{γ+m/2}),
//!
//! the Gaussian reflection-determinant kernels at k ≡ 1, and c_k.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::bessel::{BesselSpec, PreparedBessel};
use crate::detrep::vandermonde;
use crate::error::{Error, Result};
use crate::hyperseries::{SeriesResult, TruncationPolicy};
use crate::jack::JackStore;
use crate::quadrature::{integrate_chamber, QuadratureSpec};
use crate::rootsys::{Multiplicity, RootKind, RootSystem};

pub const NORMALIZATION_SPREAD: f64 = 1e-3;

fn check_t(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidInput(format!("t must be positive, got {t}")));
    }
    Ok(())
}

fn n1(t: f64, d: f64) -> f64 {
    (-d * d / (2.0 * t)).exp() / (2.0 * PI * t).sqrt()
}

/// (2πt)^{−m/2} e^{−|v|²/2t}.
pub fn heat_kernel_n(t: f64, v: &[f64]) -> Result<f64> {
    check_t(t)?;
    let r2: f64 = v.iter().map(|c| c * c).sum();
    Ok((-r2 / (2.0 * t)).exp() / (2.0 * PI * t).powf(v.len() as f64 / 2.0))
}

/// ∏_{R₊} |⟨α, y⟩|^{2k(α)}; equals ω_k(y)² in the closed chamber.
pub fn weight_sq(rs: &RootSystem, mult: &Multiplicity, y: &[f64]) -> f64 {
    rs.positive_roots()
        .iter()
        .map(|r| r.dot(y).abs().powf(2.0 * mult.of(r.orbit)))
        .product()
}

fn det(m: usize, f: impl Fn(usize, usize) -> f64) -> f64 {
    DMatrix::from_fn(m, m, f).determinant()
}

fn check_pair(rs: &RootSystem, x: &[f64], y: &[f64]) -> Result<()> {
    rs.require_chamber(x)?;
    rs.require_chamber(y)
}

/// Σ_{k≥n} z^k/k!: e^z minus its Taylor polynomial of degree n − 1.
fn exp_tail(n: usize, z: f64) -> f64 {
    let taylor = |z: f64| (0..n).fold((0.0, 1.0), |(s, term), k| (s + term, term * z / (k + 1) as f64)).0;
    if z.abs() > 2.0 * n as f64 + 40.0 {
        return z.exp() - taylor(z);
    }
    let lead = (1..=n).fold(1.0, |acc, k| acc * z / k as f64);
    let mut acc = crate::sum::CompensatedSum::new();
    let mut term = 1.0;
    let u = z.abs();
    for k in 0..10_000usize {
        // z ≥ 0: z^k n!/(n+k)!; z < 0 (Kummer): |z|^k/k! · n/(n+k), times e^z
        let contribution = if z >= 0.0 { term } else { term * n as f64 / (n + k) as f64 };
        acc.add(contribution);
        if contribution <= 1e-17 * acc.value() {
            break;
        }
        term *= if z >= 0.0 { u / (n + k + 1) as f64 } else { u / (k + 1) as f64 };
    }
    let series = acc.value();
    if z >= 0.0 {
        lead * series
    } else {
        lead * z.exp() * series
    }
}

/// (h(y)/h(x)) Σ_{w∈W} det(w) N_{t,m}(wy − x).
///
/// With N_{t,m}(wy − x) ∝ e^{⟨wy,x⟩/t}, the alternating sum kills every
/// power of ⟨wy,x⟩ below |R₊|, so those are subtracted from each term first.
pub fn grabiner_generic(rs: &RootSystem, t: f64, x: &[f64], y: &[f64]) -> Result<f64> {
    check_t(t)?;
    check_pair(rs, x, y)?;
    let n = rs.positive_roots().len();
    let elements = rs.weyl_elements()?;
    let mut acc = crate::sum::CompensatedSum::new();
    for w in &elements {
        let wy = w.apply(y);
        let z = wy.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() / t;
        acc.add(f64::from(w.det()) * exp_tail(n, z));
    }
    let r2: f64 = x.iter().chain(y).map(|v| v * v).sum();
    let pre = heat_kernel_n(t, &vec![0.0; x.len()])? * (-r2 / (2.0 * t)).exp();
    Ok(rs.harmonic_h(y) / rs.harmonic_h(x) * pre * acc.value())
}

/// (V(y)/V(x)) det[N_t(y_j − x_i)].
pub fn grabiner_a(t: f64, x: &[f64], y: &[f64]) -> Result<f64> {
    check_t(t)?;
    let rs = RootSystem::new(RootKind::A, x.len())?;
    check_pair(&rs, x, y)?;
    let d = det(x.len(), |i, j| n1(t, y[j] - x[i]));
    Ok(vandermonde(y) / vandermonde(x) * d)
}

/// (h(y)/h(x)) det[N_t(y_j − x_i) − N_t(y_j + x_i)], h(y) = V(y²)∏y_i.
pub fn grabiner_b(t: f64, x: &[f64], y: &[f64]) -> Result<f64> {
    check_t(t)?;
    let rs = RootSystem::new(RootKind::B, x.len())?;
    check_pair(&rs, x, y)?;
    // N_t(y−x) − N_t(y+x) = 2 N_t(0) e^{−(x²+y²)/2t} sinh(xy/t)
    let d = det(x.len(), |i, j| 2.0 * n1(t, 0.0) * (-(x[i] * x[i] + y[j] * y[j]) / (2.0 * t)).exp() * (x[i] * y[j] / t).sinh());
    Ok(rs.harmonic_h(y) / rs.harmonic_h(x) * d)
}

fn squares(v: &[f64]) -> Vec<f64> {
    v.iter().map(|c| c * c).collect()
}

/// (V(y²)/V(x²)) ½(det[N_t(y_j−x_i) − N_t(y_j+x_i)] + det[N_t(y_j−x_i) + N_t(y_j+x_i)]).
pub fn grabiner_d(t: f64, x: &[f64], y: &[f64]) -> Result<f64> {
    check_t(t)?;
    let rs = RootSystem::new(RootKind::D, x.len())?;
    check_pair(&rs, x, y)?;
    let m = x.len();
    let minus = det(m, |i, j| n1(t, y[j] - x[i]) - n1(t, y[j] + x[i]));
    let plus = det(m, |i, j| n1(t, y[j] - x[i]) + n1(t, y[j] + x[i]));
    Ok(vandermonde(&squares(y)) / vandermonde(&squares(x)) * 0.5 * (minus + plus))
}

/// Same kernel as `grabiner_d`, written with sinh/cosh determinants:
/// (V(y²)/V(x²)) 2^{m−1}(2πt)^{−m/2} e^{−(|x|²+|y|²)/2t}(det sinh(x_iy_j/t) + det cosh(x_iy_j/t)).
pub fn grabiner_d_hyperbolic(t: f64, x: &[f64], y: &[f64]) -> Result<f64> {
    check_t(t)?;
    let rs = RootSystem::new(RootKind::D, x.len())?;
    check_pair(&rs, x, y)?;
    let m = x.len();
    let s = det(m, |i, j| (x[i] * y[j] / t).sinh());
    let c = det(m, |i, j| (x[i] * y[j] / t).cosh());
    let r2: f64 = x.iter().chain(y).map(|v| v * v).sum();
    let pre = 2f64.powi(m as i32 - 1) * (2.0 * PI * t).powf(-(m as f64) / 2.0) * (-r2 / (2.0 * t)).exp();
    Ok(vandermonde(&squares(y)) / vandermonde(&squares(x)) * pre * (s + c))
}

/// The k ≡ 1 kernel for the given root system by its determinant form.
pub fn grabiner(rs: &RootSystem, t: f64, x: &[f64], y: &[f64]) -> Result<f64> {
    rs.check_dim(x)?;
    rs.check_dim(y)?;
    match rs.kind() {
        RootKind::A => grabiner_a(t, x, y),
        RootKind::B => grabiner_b(t, x, y),
        RootKind::D => grabiner_d(t, x, y),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalizationConstant {
    pub kind: RootKind,
    pub m: usize,
    pub mult: Multiplicity,
    pub c_k: f64,
    /// Relative disagreement between the origin and interior probes.
    pub estimate_error: f64,
}

/// Quadrature used for c_k: Gauss–Hermite on the folded integrand when every
/// multiplicity is an integer (ω_k² then extends to a polynomial), otherwise
/// the simple-root rule.
pub fn default_quadrature(m: usize, mult: &Multiplicity) -> QuadratureSpec {
    let integer = [mult.k0, mult.k1].iter().all(|k| k.fract() == 0.0);
    match (integer, m) {
        (true, 3..) => QuadratureSpec { order: 40, ..QuadratureSpec::symmetrized() },
        (true, _) => QuadratureSpec::symmetrized(),
        (false, _) => QuadratureSpec { panels: 16, ..QuadratureSpec::simple_root() },
    }
}

/// Interior probe point for the normalization cross-check.
pub fn interior_probe(rs: &RootSystem) -> Vec<f64> {
    let m = rs.m() as f64;
    rs.chamber_probe().into_iter().map(|v| v / m).collect()
}

/// c_k = ∫_C e^{−|y|²/2} ω_k(y)² dy (the x = 0 normalization at t = 1),
/// cross-checked by integrating the full t = 1 kernel from an interior point.
pub fn normalization_c(
    store: &JackStore,
    rs: &RootSystem,
    mult: &Multiplicity,
    quad: &QuadratureSpec,
    max_weight: u32,
) -> Result<NormalizationConstant> {
    let origin = integrate_chamber(
        |y| (-0.5 * y.iter().map(|v| v * v).sum::<f64>()).exp() * weight_sq(rs, mult, y),
        rs,
        quad,
    )?
    .estimate;
    let xp = interior_probe(rs);
    let bessel = PreparedBessel::new(store, &BesselSpec::new(rs.clone(), *mult), &xp, max_weight)?;
    let x2: f64 = xp.iter().map(|v| v * v).sum();
    let probe = integrate_chamber(
        |y| {
            let r2: f64 = y.iter().map(|v| v * v).sum();
            (-0.5 * (x2 + r2)).exp() * bessel.eval(y) * weight_sq(rs, mult, y)
        },
        rs,
        quad,
    )?
    .estimate;
    let spread = (probe - origin).abs() / origin;
    if !(spread <= NORMALIZATION_SPREAD) {
        return Err(Error::NormalizationSpread { spread, bound: NORMALIZATION_SPREAD });
    }
    Ok(NormalizationConstant { kind: rs.kind(), m: rs.m(), mult: *mult, c_k: origin, estimate_error: spread })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityQuery {
    pub rs: RootSystem,
    pub mult: Multiplicity,
    pub t: f64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

/// Everything needed to evaluate p_t for one (root system, multiplicity).
#[derive(Debug, Clone)]
pub struct DensityModel {
    spec: BesselSpec,
    c: NormalizationConstant,
    store: Arc<JackStore>,
    max_weight: u32,
}

impl DensityModel {
    pub fn new(store: Arc<JackStore>, rs: RootSystem, mult: Multiplicity, quad: &QuadratureSpec, max_weight: u32) -> Result<Self> {
        let c = normalization_c(&store, &rs, &mult, quad, max_weight)?;
        Self::with_constant(store, c, max_weight)
    }

    pub fn with_constant(store: Arc<JackStore>, c: NormalizationConstant, max_weight: u32) -> Result<Self> {
        let rs = RootSystem::new(c.kind, c.m)?;
        Ok(Self { spec: BesselSpec::new(rs, c.mult), c, store, max_weight })
    }

    pub fn rs(&self) -> &RootSystem {
        &self.spec.rs
    }

    pub fn mult(&self) -> &Multiplicity {
        &self.spec.mult
    }

    pub fn constant(&self) -> &NormalizationConstant {
        &self.c
    }

    fn denominator(&self, t: f64) -> f64 {
        let m = self.spec.rs.m() as f64;
        self.c.c_k * t.powf(self.spec.mult.gamma(&self.spec.rs) + m / 2.0)
    }

    pub fn density(&self, t: f64, x: &[f64], y: &[f64]) -> Result<f64> {
        Ok(self.density_series(t, x, y)?.0)
    }

    /// The density together with the Bessel series diagnostics behind it.
    pub fn density_series(&self, t: f64, x: &[f64], y: &[f64]) -> Result<(f64, SeriesResult)> {
        check_t(t)?;
        check_pair(&self.spec.rs, x, y)?;
        let s = t.sqrt();
        let xs: Vec<f64> = x.iter().map(|v| v / s).collect();
        let ys: Vec<f64> = y.iter().map(|v| v / s).collect();
        let policy = TruncationPolicy::with_max_weight(self.max_weight);
        let j = self.spec.eval(&self.store, &xs, &ys, &policy)?;
        let r2: f64 = x.iter().chain(y).map(|v| v * v).sum();
        let p = (-r2 / (2.0 * t)).exp() * j.value * weight_sq(&self.spec.rs, &self.spec.mult, y) / self.denominator(t);
        Ok((p, j))
    }

    pub fn query(&self, q: &DensityQuery) -> Result<f64> {
        if q.rs != self.spec.rs || q.mult != self.spec.mult {
            return Err(Error::InvalidInput("query does not match the density model".into()));
        }
        self.density(q.t, &q.x, &q.y)
    }

    /// p_t(x, ·) and p_t(·, x) for a fixed x, without chamber checks, for
    /// quadrature loops.
    pub fn prepared(&self, t: f64, x: &[f64]) -> Result<PreparedDensity> {
        check_t(t)?;
        self.spec.rs.require_chamber(x)?;
        let s = t.sqrt();
        let xs: Vec<f64> = x.iter().map(|v| v / s).collect();
        let bessel = PreparedBessel::new(&self.store, &self.spec, &xs, self.max_weight)?;
        let x2: f64 = x.iter().map(|v| v * v).sum();
        Ok(PreparedDensity {
            t,
            rs: self.spec.rs.clone(),
            mult: self.spec.mult,
            bessel,
            scale: (-x2 / (2.0 * t)).exp() / self.denominator(t),
            weight_x: weight_sq(&self.spec.rs, &self.spec.mult, x),
        })
    }
}

#[derive(Debug, Clone)]
pub struct PreparedDensity {
    t: f64,
    rs: RootSystem,
    mult: Multiplicity,
    bessel: PreparedBessel,
    scale: f64,
    weight_x: f64,
}

impl PreparedDensity {
    fn common(&self, v: &[f64]) -> f64 {
        let s = self.t.sqrt();
        let vs: Vec<f64> = v.iter().map(|c| c / s).collect();
        let r2: f64 = v.iter().map(|c| c * c).sum();
        self.scale * (-r2 / (2.0 * self.t)).exp() * self.bessel.eval(&vs)
    }

    /// p_t(x, y).
    pub fn forward(&self, y: &[f64]) -> f64 {
        self.common(y) * weight_sq(&self.rs, &self.mult, y)
    }

    /// p_t(z, x).
    pub fn backward(&self, z: &[f64]) -> f64 {
        self.common(z) * self.weight_x
    }
}

pub fn density(model: &DensityModel, query: &DensityQuery) -> Result<f64> {
    model.query(query)
}
