//! Truncated hypergeometric series of two vector arguments,
//!
//! pFq^{(α)}(a; b; x, y) = Σ_n Σ_{|τ|=n} [∏(a_i)_τ / ∏(b_j)_τ] C_τ(x) C_τ(y) / (C_τ(1) n!),
//!
//! and the scalar series 0F1 / 0F0.

use crate::error::{Error, Result};
use crate::jack::{power_table, JackTable};
use crate::partitions::{factorial, gen_pochhammer, Partition};
use crate::sum::CompensatedSum;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    /// Highest weight layer summed.
    pub max_weight: u32,
    /// Early stop once the last two layers, taken together, shrink by this
    /// factor against the two before them ...
    pub tail_ratio_threshold: f64,
    /// ... and together are at most abs_floor · max(1, |partial sum|).
    /// Pairs rather than single layers, since whole layers can vanish (odd
    /// weights at zero-sum arguments in two variables).
    pub abs_floor: f64,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self { max_weight: 30, tail_ratio_threshold: 0.5, abs_floor: 1e-14 }
    }
}

impl TruncationPolicy {
    pub fn with_max_weight(max_weight: u32) -> Self {
        Self { max_weight, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tail_ratio_threshold > 0.0 && self.abs_floor > 0.0) {
            return Err(Error::InvalidInput("truncation thresholds must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesResult {
    pub value: f64,
    pub last_layer_magnitude: f64,
    pub layers_used: u32,
    pub converged: bool,
}

/// Upper (a) and lower (b) parameters of pFq.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct HyperParams {
    pub upper: Vec<f64>,
    pub lower: Vec<f64>,
}

impl HyperParams {
    pub fn f00() -> Self {
        Self::default()
    }

    pub fn f01(b: f64) -> Self {
        Self { upper: Vec::new(), lower: vec![b] }
    }

    /// ∏(a_i)_τ / ∏(b_j)_τ; a vanishing lower symbol is a pole.
    pub fn coefficient(&self, tau: &Partition, alpha: f64) -> Result<f64> {
        let mut c = 1.0;
        for &a in &self.upper {
            c *= gen_pochhammer(a, tau, alpha).unwrap_or(0.0);
        }
        for &b in &self.lower {
            c /= gen_pochhammer(b, tau, alpha)?;
        }
        Ok(c)
    }
}

fn is_nonpositive_integer(b: f64) -> bool {
    b <= 0.0 && b.fract() == 0.0
}

/// 0F1(; b; z) = Σ z^n / ((b)_n n!).
pub fn uni_0f1(b: f64, z: f64) -> Result<f64> {
    if is_nonpositive_integer(b) {
        return Err(Error::Pole(format!("0F1 with b = {b}")));
    }
    if z == 0.0 {
        return Ok(1.0);
    }
    if b == 0.5 {
        let s = 2.0 * z.abs().sqrt();
        return Ok(if z > 0.0 { s.cosh() } else { s.cos() });
    }
    if b == 1.5 {
        let s = 2.0 * z.abs().sqrt();
        return Ok(if z > 0.0 { s.sinh() / s } else { s.sin() / s });
    }
    let mut acc = CompensatedSum::new();
    let mut term = 1.0f64;
    acc.add(term);
    for n in 0..100_000u32 {
        let n = f64::from(n);
        term *= z / ((b + n) * (n + 1.0));
        acc.add(term);
        if term.abs() < 1e-17 * acc.value().abs() && n > z.abs().sqrt() {
            return Ok(acc.value());
        }
    }
    Err(Error::Domain(format!("0F1({b}; {z}) did not converge")))
}

pub fn uni_0f0(z: f64) -> f64 {
    z.exp()
}

/// Partial sum of the two-argument series through `policy.max_weight`, or
/// earlier when the tail heuristic fires.
pub fn mv_series(
    params: &HyperParams,
    table: &JackTable<f64>,
    x: &[f64],
    y: &[f64],
    policy: &TruncationPolicy,
) -> Result<SeriesResult> {
    policy.validate()?;
    let m = table.m();
    for v in [x, y] {
        if v.len() != m {
            return Err(Error::DimensionMismatch { expected: m, got: v.len() });
        }
    }
    if table.max_weight() < policy.max_weight {
        return Err(Error::TableTooShort { have: table.max_weight(), need: policy.max_weight });
    }
    let alpha = *table.alpha();
    let mut total = CompensatedSum::new();
    let mut mags: Vec<f64> = Vec::with_capacity(policy.max_weight as usize + 1);
    let mut result = SeriesResult { value: 0.0, last_layer_magnitude: 0.0, layers_used: 0, converged: false };
    for n in 0..=policy.max_weight {
        let layer = table.layer(n).expect("weight checked");
        let cx = table.layer_values(n, x);
        let cy = table.layer_values(n, y);
        let ones = table.layer_at_ones(n);
        let nfact = factorial(n as usize);
        let mut layer_sum = CompensatedSum::new();
        let mut mag = 0.0;
        for (t, tau) in layer.partitions.iter().enumerate() {
            let coef = params.coefficient(tau, alpha)?;
            let term = coef * (cx[t] * cy[t]) / (ones[t] * nfact);
            layer_sum.add(term);
            mag += term.abs();
        }
        total.add(layer_sum.value());
        let value = total.value();
        mags.push(mag);
        let settled = n >= 3 && {
            let k = n as usize;
            let tail = mags[k] + mags[k - 1];
            tail <= policy.abs_floor * value.abs().max(1.0)
                && (tail == 0.0 || tail < policy.tail_ratio_threshold * (mags[k - 2] + mags[k - 3]))
        };
        result = SeriesResult { value, last_layer_magnitude: mag, layers_used: n + 1, converged: settled };
        if settled {
            break;
        }
    }
    Ok(result)
}

/// The series with x fixed, collapsed to one symmetric polynomial in y per
/// weight layer: Σ_n Σ_μ b_μ m_μ(y). Evaluating at many y (quadrature) then
/// costs one monomial sweep per point. Always sums every layer.
#[derive(Debug, Clone)]
pub struct PreparedSeries {
    table: std::sync::Arc<JackTable<f64>>,
    coeffs: Vec<Vec<f64>>,
}

impl PreparedSeries {
    pub fn new(
        params: &HyperParams,
        table: std::sync::Arc<JackTable<f64>>,
        x: &[f64],
        max_weight: u32,
    ) -> Result<Self> {
        if table.max_weight() < max_weight {
            return Err(Error::TableTooShort { have: table.max_weight(), need: max_weight });
        }
        if x.len() != table.m() {
            return Err(Error::DimensionMismatch { expected: table.m(), got: x.len() });
        }
        let alpha = *table.alpha();
        let mut coeffs = Vec::with_capacity(max_weight as usize + 1);
        for n in 0..=max_weight {
            let layer = table.layer(n).expect("weight checked");
            let cx = table.layer_values(n, x);
            let ones = table.layer_at_ones(n);
            let nfact = factorial(n as usize);
            let mut b = vec![0.0; layer.partitions.len()];
            for (t, tau) in layer.partitions.iter().enumerate() {
                let a = params.coefficient(tau, alpha)? * cx[t] / (ones[t] * nfact);
                for (slot, c) in b.iter_mut().zip(&layer.c[t]) {
                    *slot += a * c;
                }
            }
            coeffs.push(b);
        }
        Ok(Self { table, coeffs })
    }

    pub fn eval(&self, y: &[f64]) -> f64 {
        let n_max = self.coeffs.len() as u32 - 1;
        let powers = power_table(y, n_max);
        let mut total = CompensatedSum::new();
        for (n, b) in self.coeffs.iter().enumerate() {
            let mono = self.table.monomials(n as u32, &powers);
            for (c, v) in b.iter().zip(&mono) {
                total.add(c * v);
            }
        }
        total.value()
    }
}

/// Arguments (x²/2t, y²/2t), componentwise.
pub fn bessel_prefactor_args(x: &[f64], y: &[f64], t: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidInput(format!("t must be positive, got {t}")));
    }
    let f = |v: &[f64]| v.iter().map(|c| c * c / (2.0 * t)).collect();
    Ok((f(x), f(y)))
}
