//! Generalized Bessel functions J_k(x, y) = D_k^W(x, y)/|W| of types A, B, D.
//!
//! A: 0F0^{(1/k₁)}(x, y), summed after splitting off the centre of mass:
//!    0F0(x, y) = e^{m x̄ ȳ} 0F0(x − x̄, y − ȳ)
//! B: 0F1^{(1/k₁)}(k₀ + (m−1)k₁ + ½; x²/2, y²/2)
//! D: c_m ∏x_iy_i · 0F1^{(1/k₁)}(q+½; x²/2, y²/2) + 0F1^{(1/k₁)}(q−½; x²/2, y²/2),
//!    q = 1 + (m−1)k₁, c_m = 2^{−m} / (q−½)_{(1^m)}.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hyperseries::{bessel_prefactor_args, mv_series, uni_0f1, HyperParams, PreparedSeries, SeriesResult, TruncationPolicy};
use crate::jack::JackStore;
use crate::partitions::{gen_pochhammer, Partition};
use crate::rootsys::{Multiplicity, RootKind, RootSystem};

#[derive(Debug, Clone, PartialEq)]
pub struct BesselSpec {
    pub rs: RootSystem,
    pub mult: Multiplicity,
}

impl BesselSpec {
    pub fn new(rs: RootSystem, mult: Multiplicity) -> Self {
        Self { rs, mult }
    }

    pub fn alpha(&self) -> f64 {
        self.mult.alpha()
    }

    /// 1 + (m−1)k₁.
    pub fn q(&self) -> f64 {
        1.0 + (self.rs.m() as f64 - 1.0) * self.mult.k1
    }

    pub fn eval(&self, store: &JackStore, x: &[f64], y: &[f64], policy: &TruncationPolicy) -> Result<SeriesResult> {
        let (k0, k1) = (self.mult.k0, self.mult.k1);
        match self.rs.kind() {
            RootKind::A => bessel_a(store, x, y, k1, policy),
            RootKind::B => bessel_b(store, x, y, k0, k1, policy),
            RootKind::D => bessel_d(store, x, y, k1, policy),
        }
    }
}

fn check_k1(k1: f64) -> Result<()> {
    if !(k1 > 0.0 && k1.is_finite()) {
        return Err(Error::Domain(format!("k₁ must be positive, got {k1}")));
    }
    Ok(())
}

fn check_pair(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), got: y.len() });
    }
    if x.is_empty() {
        return Err(Error::InvalidInput("empty point".into()));
    }
    Ok(())
}

pub fn bessel_a(store: &JackStore, x: &[f64], y: &[f64], k1: f64, policy: &TruncationPolicy) -> Result<SeriesResult> {
    check_k1(k1)?;
    check_pair(x, y)?;
    let table = store.table(1.0 / k1, x.len(), policy.max_weight)?;
    let (xc, xm) = centered(x);
    let (yc, ym) = centered(y);
    let mut r = mv_series(&HyperParams::f00(), &table, &xc, &yc, policy)?;
    let f = (x.len() as f64 * xm * ym).exp();
    r.value *= f;
    r.last_layer_magnitude *= f;
    Ok(r)
}

fn centered(v: &[f64]) -> (Vec<f64>, f64) {
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    (v.iter().map(|c| c - mean).collect(), mean)
}

pub fn b_parameter(m: usize, k0: f64, k1: f64) -> f64 {
    k0 + (m as f64 - 1.0) * k1 + 0.5
}

pub fn bessel_b(
    store: &JackStore,
    x: &[f64],
    y: &[f64],
    k0: f64,
    k1: f64,
    policy: &TruncationPolicy,
) -> Result<SeriesResult> {
    check_k1(k1)?;
    check_pair(x, y)?;
    if !(k0 >= 0.0) {
        return Err(Error::Domain(format!("k₀ must be non-negative, got {k0}")));
    }
    let (u, v) = bessel_prefactor_args(x, y, 1.0)?;
    let table = store.table(1.0 / k1, x.len(), policy.max_weight)?;
    mv_series(&HyperParams::f01(b_parameter(x.len(), k0, k1)), &table, &u, &v, policy)
}

/// Coefficient of ∏x_iy_i in the D formula: 2^{−m} / (q−½)_{(1^m)}^{(1/k₁)}.
pub fn d_product_coefficient(m: usize, k1: f64) -> Result<f64> {
    check_k1(k1)?;
    let q = 1.0 + (m as f64 - 1.0) * k1;
    let column = Partition::new(vec![1; m])?;
    Ok(0.5f64.powi(m as i32) / gen_pochhammer(q - 0.5, &column, 1.0 / k1)?)
}

/// Shift-principle constant C = 2^m (q−½)_{(1^m)}, i.e. 1 / d_product_coefficient.
pub fn shift_constant(m: usize, k1: f64) -> Result<f64> {
    Ok(1.0 / d_product_coefficient(m, k1)?)
}

pub fn bessel_d(store: &JackStore, x: &[f64], y: &[f64], k1: f64, policy: &TruncationPolicy) -> Result<SeriesResult> {
    check_pair(x, y)?;
    let m = x.len();
    if m < 2 {
        return Err(Error::DimensionTooSmall { kind: 'D', m });
    }
    let prod: f64 = x.iter().zip(y).map(|(a, b)| a * b).product();
    let c = d_product_coefficient(m, k1)? * prod;
    let plus = bessel_b(store, x, y, 1.0, k1, policy)?;
    let minus = bessel_b(store, x, y, 0.0, k1, policy)?;
    Ok(SeriesResult {
        value: c * plus.value + minus.value,
        last_layer_magnitude: c.abs() * plus.last_layer_magnitude + minus.last_layer_magnitude,
        layers_used: plus.layers_used.max(minus.layers_used),
        converged: plus.converged && minus.converged,
    })
}

/// J_D for m ∈ {2, 3} through the isomorphisms D₂ ≅ A₁ × A₁ (axes e₁ ± e₂)
/// and D₃ ≅ A₃, without going through the type B series.
pub fn bessel_d_low_rank(store: &JackStore, x: &[f64], y: &[f64], k1: f64, policy: &TruncationPolicy) -> Result<f64> {
    check_pair(x, y)?;
    check_k1(k1)?;
    match x.len() {
        2 => {
            let minus = (x[0] - x[1]).powi(2) * (y[0] - y[1]).powi(2) / 16.0;
            let plus = (x[0] + x[1]).powi(2) * (y[0] + y[1]).powi(2) / 16.0;
            Ok(uni_0f1(k1 + 0.5, minus)? * uni_0f1(k1 + 0.5, plus)?)
        }
        3 => {
            let w = |v: &[f64]| {
                [
                    0.5 * (v[0] + v[1] + v[2]),
                    0.5 * (v[0] - v[1] - v[2]),
                    0.5 * (-v[0] + v[1] - v[2]),
                    0.5 * (-v[0] - v[1] + v[2]),
                ]
            };
            Ok(bessel_a(store, &w(x), &w(y), k1, policy)?.value)
        }
        m => Err(Error::InvalidInput(format!("no low-rank isomorphism for D{m}"))),
    }
}

/// bessel_D − [bessel_B(k₀=0) + coefficient·∏x_iy_i·bessel_B(k₀=1)].
pub fn shift_residual_with(
    store: &JackStore,
    x: &[f64],
    y: &[f64],
    k1: f64,
    coefficient: f64,
    policy: &TruncationPolicy,
) -> Result<f64> {
    let d = bessel_d(store, x, y, k1, policy)?.value;
    let b0 = bessel_b(store, x, y, 0.0, k1, policy)?.value;
    let b1 = bessel_b(store, x, y, 1.0, k1, policy)?.value;
    let prod: f64 = x.iter().zip(y).map(|(a, b)| a * b).product();
    Ok(d - (b0 + coefficient * prod * b1))
}

/// Shift decomposition residual with C = 2^m (q−½)_{(1^m)}.
pub fn shift_decomposition_check(store: &JackStore, x: &[f64], y: &[f64], k1: f64, policy: &TruncationPolicy) -> Result<f64> {
    let c = d_product_coefficient(x.len(), k1)?;
    shift_residual_with(store, x, y, k1, c, policy)
}

/// ½[bessel_D(x,y) + bessel_D(x, s_m y)] − bessel_B(x, y, 0, k₁).
pub fn symmetrization_check(store: &JackStore, x: &[f64], y: &[f64], k1: f64, policy: &TruncationPolicy) -> Result<f64> {
    let mut flipped = y.to_vec();
    if let Some(last) = flipped.last_mut() {
        *last = -*last;
    }
    let d = bessel_d(store, x, y, k1, policy)?.value;
    let ds = bessel_d(store, x, &flipped, k1, policy)?.value;
    let b = bessel_b(store, x, y, 0.0, k1, policy)?.value;
    Ok(0.5 * (d + ds) - b)
}

/// J_k(x, ·) for one fixed x, with every weight layer up to `max_weight`
/// summed. Used inside quadrature loops.
#[derive(Debug, Clone)]
pub struct PreparedBessel {
    kind: RootKind,
    /// m·x̄ for type A.
    shift: f64,
    main: PreparedSeries,
    product: Option<(f64, PreparedSeries)>,
}

impl PreparedBessel {
    pub fn new(store: &JackStore, spec: &BesselSpec, x: &[f64], max_weight: u32) -> Result<Self> {
        spec.rs.check_dim(x)?;
        let m = spec.rs.m();
        let (k0, k1) = (spec.mult.k0, spec.mult.k1);
        let table: Arc<_> = store.table(1.0 / k1, m, max_weight)?;
        let half_sq: Vec<f64> = x.iter().map(|v| v * v / 2.0).collect();
        let kind = spec.rs.kind();
        Ok(match kind {
            RootKind::A => {
                let (xc, xm) = centered(x);
                Self {
                    kind,
                    shift: m as f64 * xm,
                    main: PreparedSeries::new(&HyperParams::f00(), table, &xc, max_weight)?,
                    product: None,
                }
            }
            RootKind::B => Self {
                kind,
                shift: 0.0,
                main: PreparedSeries::new(&HyperParams::f01(b_parameter(m, k0, k1)), table, &half_sq, max_weight)?,
                product: None,
            },
            RootKind::D => {
                let c = d_product_coefficient(m, k1)? * x.iter().product::<f64>();
                let plus = PreparedSeries::new(&HyperParams::f01(b_parameter(m, 1.0, k1)), table.clone(), &half_sq, max_weight)?;
                Self {
                    kind,
                    shift: 0.0,
                    main: PreparedSeries::new(&HyperParams::f01(b_parameter(m, 0.0, k1)), table, &half_sq, max_weight)?,
                    product: Some((c, plus)),
                }
            }
        })
    }

    pub fn eval(&self, y: &[f64]) -> f64 {
        match self.kind {
            RootKind::A => {
                let (yc, ym) = centered(y);
                (self.shift * ym).exp() * self.main.eval(&yc)
            }
            _ => {
                let v: Vec<f64> = y.iter().map(|c| c * c / 2.0).collect();
                let base = self.main.eval(&v);
                match &self.product {
                    Some((c, plus)) => base + c * y.iter().product::<f64>() * plus.eval(&v),
                    None => base,
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    fn pol() -> TruncationPolicy {
        TruncationPolicy::default()
    }

    #[test]
    fn rank_one_closed_forms() {
        let s = JackStore::new();
        let (x, y) = (1.3, 0.7);
        let a = bessel_a(&s, &[x], &[y], 1.0, &pol()).unwrap().value;
        assert!(rel(a, (x * y).exp()) < 1e-14);
        let b1 = bessel_b(&s, &[x], &[y], 1.0, 1.0, &pol()).unwrap().value;
        assert!(rel(b1, (x * y).sinh() / (x * y)) < 1e-14);
        let b0 = bessel_b(&s, &[x], &[y], 0.0, 1.0, &pol()).unwrap().value;
        assert!(rel(b0, (x * y).cosh()) < 1e-14);
    }

    #[test]
    fn origin_values() {
        let s = JackStore::new();
        assert_eq!(bessel_a(&s, &[0.4, 0.1], &[0.0, 0.0], 2.0, &pol()).unwrap().value, 1.0);
        assert_eq!(bessel_b(&s, &[0.0, 0.0], &[0.4, 0.1], 1.0, 0.5, &pol()).unwrap().value, 1.0);
        assert_eq!(bessel_d(&s, &[0.4, 0.1, 0.05], &[0.0; 3], 1.0, &pol()).unwrap().value, 1.0);
    }

    #[test]
    fn product_coefficient_values() {
        // m = 2: 1/(4(½+k₁)·½) → 1/(1+2k₁) on ∏x_iy_i
        for k in [0.5, 1.0, 2.0] {
            assert!(rel(d_product_coefficient(2, k).unwrap(), 1.0 / (1.0 + 2.0 * k)) < 1e-15);
        }
        assert!(rel(d_product_coefficient(3, 1.0).unwrap(), 1.0 / 15.0) < 1e-15);
        assert!(rel(shift_constant(2, 1.0).unwrap(), 3.0) < 1e-15);
    }

    #[test]
    fn d2_splits_into_rank_one_factors() {
        // D₂ ≅ A₁ × A₁ via the axes e₁ ± e₂.
        let s = JackStore::new();
        for k in [0.5, 1.0, 2.0] {
            for (x, y) in [([1.2f64, 0.4], [0.9f64, -0.3]), ([1.5, 0.8], [1.0, 0.6]), ([0.7, -0.2], [2.0, 1.1])] {
                let want = uni_0f1(k + 0.5, (x[0] - x[1]).powi(2) * (y[0] - y[1]).powi(2) / 16.0).unwrap()
                    * uni_0f1(k + 0.5, (x[0] + x[1]).powi(2) * (y[0] + y[1]).powi(2) / 16.0).unwrap();
                let got = bessel_d(&s, &x, &y, k, &pol()).unwrap().value;
                assert!(rel(got, want) < 1e-12, "k={k}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn d3_matches_a3_through_the_isomorphism() {
        fn w(v: &[f64]) -> [f64; 4] {
            [
                0.5 * (v[0] + v[1] + v[2]),
                0.5 * (v[0] - v[1] - v[2]),
                0.5 * (-v[0] + v[1] - v[2]),
                0.5 * (-v[0] - v[1] + v[2]),
            ]
        }
        let s = JackStore::new();
        for k in [0.5, 1.0, 2.0] {
            for (x, y) in [([1.0, 0.6, 0.2], [0.8, 0.5, -0.1]), ([1.4, 0.3, 0.1], [0.9, 0.7, 0.4])] {
                let want = bessel_a(&s, &w(&x), &w(&y), k, &pol()).unwrap().value;
                let got = bessel_d(&s, &x, &y, k, &pol()).unwrap().value;
                assert!(rel(got, want) < 1e-11, "k={k}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn type_a_matches_determinant_form_at_k1() {
        let s = JackStore::new();
        let det = crate::detrep::DetRepStore::new(Arc::new(JackStore::new()));
        let (x, y) = ([1.1, 0.3], [0.7, -0.4]);
        let a = bessel_a(&s, &x, &y, 1.0, &pol()).unwrap().value;
        assert!(rel(a, det.f00_det(&x, &y).unwrap()) < 1e-10);
    }

    #[test]
    fn weyl_invariance() {
        let s = JackStore::new();
        let x = [1.1, 0.6, 0.2];
        let y = [0.9, 0.5, 0.3];
        for kind in [RootKind::A, RootKind::B, RootKind::D] {
            let spec = BesselSpec::new(RootSystem::new(kind, 3).unwrap(), Multiplicity::new(0.7, 1.5).unwrap());
            let base = spec.eval(&s, &x, &y, &pol()).unwrap().value;
            for w in spec.rs.weyl_elements().unwrap() {
                let v = spec.eval(&s, &w.apply(&x), &w.apply(&y), &pol()).unwrap().value;
                assert!(rel(v, base) < 1e-12, "{kind}");
                let v = spec.eval(&s, &x, &w.apply(&y), &pol()).unwrap().value;
                let u = spec.eval(&s, &w.apply(&x), &y, &pol()).unwrap().value;
                assert!(rel(v, u) < 1e-12, "{kind}");
            }
        }
    }

    #[test]
    fn symmetric_in_arguments() {
        let s = JackStore::new();
        let (x, y) = ([1.0, 0.4], [0.3, -0.8]);
        for kind in [RootKind::A, RootKind::B, RootKind::D] {
            let spec = BesselSpec::new(RootSystem::new(kind, 2).unwrap(), Multiplicity::new(1.0, 0.5).unwrap());
            let a = spec.eval(&s, &x, &y, &pol()).unwrap().value;
            let b = spec.eval(&s, &y, &x, &pol()).unwrap().value;
            assert!(rel(a, b) < 1e-14);
        }
    }

    #[test]
    fn sign_flip_moves_only_product_term() {
        let s = JackStore::new();
        let (x, y) = ([1.0, 0.5], [0.8, 0.2]);
        let f = [0.8, -0.2];
        let d = bessel_d(&s, &x, &y, 1.0, &pol()).unwrap().value;
        let df = bessel_d(&s, &x, &f, 1.0, &pol()).unwrap().value;
        let b = bessel_b(&s, &x, &y, 0.0, 1.0, &pol()).unwrap().value;
        assert!(rel(0.5 * (d + df), b) < 1e-14);
        assert!(symmetrization_check(&s, &x, &y, 2.0, &pol()).unwrap().abs() < 1e-13);
    }

    #[test]
    fn shift_residuals() {
        let s = JackStore::new();
        assert_eq!(shift_decomposition_check(&s, &[1.0, 0.5], &[0.0, 0.0], 1.0, &pol()).unwrap(), 0.0);
        let r = shift_decomposition_check(&s, &[1.0, 0.5], &[1.0, 0.5], 1.0, &pol()).unwrap();
        assert!(r.abs() < 1e-13);
        let r = shift_decomposition_check(&s, &[0.9, 0.5, 0.2], &[0.7, 0.4, 0.1], 0.5, &pol()).unwrap();
        assert!(r.abs() < 1e-13);
    }

    #[test]
    fn prepared_matches_direct() {
        let s = JackStore::new();
        let x = [1.2, 0.5];
        let y = [0.8, 0.3];
        for kind in [RootKind::A, RootKind::B, RootKind::D] {
            let spec = BesselSpec::new(RootSystem::new(kind, 2).unwrap(), Multiplicity::new(1.0, 0.5).unwrap());
            let p = PreparedBessel::new(&s, &spec, &x, 30).unwrap();
            let d = spec.eval(&s, &x, &y, &pol()).unwrap().value;
            assert!(rel(p.eval(&y), d) < 1e-13, "{kind}");
        }
    }

    #[test]
    fn rejects_bad_input() {
        let s = JackStore::new();
        assert!(matches!(bessel_d(&s, &[1.0], &[1.0], 1.0, &pol()), Err(Error::DimensionTooSmall { .. })));
        assert!(bessel_a(&s, &[1.0, 0.0], &[1.0], 1.0, &pol()).is_err());
        assert!(bessel_b(&s, &[1.0], &[1.0], -0.5, 1.0, &pol()).is_err());
        assert!(bessel_a(&s, &[1.0], &[1.0], 0.0, &pol()).is_err());
    }
}
