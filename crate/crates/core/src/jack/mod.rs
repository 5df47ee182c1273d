//! Jack polynomials C_τ^{(α)} in m variables, expanded in the monomial
//! symmetric basis.
//!
//! Coefficients come from the eigenoperator
//! D = Σ x_i²∂_i² + (2/α) Σ_{i≠j} x_i²/(x_i - x_j) ∂_i.
//! On m_ν it acts as D m_ν = Σ_μ (A_{νμ} + (2/α) B_{νμ}) m_μ with integer
//! A, B that vanish unless μ ≤ ν in dominance. Each layer of weight n is
//! solved in three steps:
//!
//! 1. build A and B on the partitions of n with at most m parts;
//! 2. for every τ solve (D - ρ_τ) P_τ = 0 downward in dominance, with the
//!    coefficient of m_τ fixed to 1;
//! 3. rescale so that Σ_τ c_τ P_τ = (x_1 + ... + x_m)^n, which is triangular
//!    against the multinomial coefficients n!/∏μ_i!.
//!
//! The same code runs in exact rational arithmetic (`BigRational`) and in
//! `f64`.

pub mod cache;

use std::collections::HashMap;
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Arc, Mutex};

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::partitions::{dominance_leq, enumerate_partitions, Partition};
use crate::sum::CompensatedSum;

/// Admissible range of α in float mode.
pub const ALPHA_RANGE: (f64, f64) = (1e-3, 1e3);

/// Arithmetic used for Jack coefficients.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const MODE: &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    /// Exact zero in rational mode; a relative threshold in float mode.
    fn is_negligible(&self, scale: &Self) -> bool;
    fn to_f64(&self) -> f64;
    fn encode(&self) -> String;
    fn decode(s: &str) -> Option<Self>;
}

impl Scalar for f64 {
    const MODE: &'static str = "float";

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn is_negligible(&self, scale: &Self) -> bool {
        self.abs() <= 1e-12 * scale.abs().max(1.0)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn encode(&self) -> String {
        format!("{self:.16e}")
    }
    fn decode(s: &str) -> Option<Self> {
        s.trim().parse().ok()
    }
}

impl Scalar for BigRational {
    const MODE: &'static str = "exact";

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(v.into())
    }
    fn is_negligible(&self, _scale: &Self) -> bool {
        self.is_zero()
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn encode(&self) -> String {
        self.to_string()
    }
    fn decode(s: &str) -> Option<Self> {
        s.trim().parse().ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    MonicP,
    C,
}

/// One Jack polynomial in the monomial basis. Entries cover every μ ≤ τ in
/// dominance with at most m parts.
#[derive(Debug, Clone, PartialEq)]
pub struct JackExpansion<T = f64> {
    pub tau: Partition,
    pub alpha: T,
    pub m: usize,
    pub normalization: Normalization,
    pub coeffs: Vec<(Partition, T)>,
}

impl<T: Scalar> JackExpansion<T> {
    pub fn coefficient(&self, mu: &Partition) -> Option<&T> {
        self.coeffs.iter().find(|(p, _)| p == mu).map(|(_, c)| c)
    }

    /// Value at (1, ..., 1), exact in rational mode.
    pub fn at_ones_exact(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |acc, (mu, c)| {
            acc + c.clone() * monomial_at_ones_scalar::<T>(mu, self.m)
        })
    }
}

impl JackExpansion<f64> {
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.m {
            return Err(Error::DimensionMismatch { expected: self.m, got: x.len() });
        }
        let mut acc = CompensatedSum::new();
        for (mu, c) in &self.coeffs {
            acc.add(c * monomial_symmetric(mu, x));
        }
        Ok(acc.value())
    }
}

/// m_μ(x): sum over distinct rearrangements of the padded parts.
pub fn monomial_symmetric(mu: &Partition, x: &[f64]) -> f64 {
    let mut acc = CompensatedSum::new();
    for a in mu.orbit(x.len()) {
        acc.add(a.iter().zip(x).map(|(&e, v)| v.powi(e as i32)).product());
    }
    acc.value()
}

fn monomial_at_ones_scalar<T: Scalar>(mu: &Partition, m: usize) -> T {
    T::from_i64(mu.orbit(m).len() as i64)
}

fn multinomial<T: Scalar>(mu: &Partition) -> T {
    let mut rest = u64::from(mu.weight());
    let mut out = T::one();
    for &p in mu.parts() {
        out = out * T::from_i64(binomial(rest, u64::from(p)) as i64);
        rest -= u64::from(p);
    }
    out
}

fn binomial(n: u64, k: u64) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * u128::from(n - i) / u128::from(i + 1))
}

/// Integer matrices A, B of the eigenoperator on one weight layer:
/// D m_ν = Σ_μ (A[ν][μ] + (2/α) B[ν][μ]) m_μ.
#[derive(Debug, Clone)]
pub struct OperatorAction {
    pub partitions: Vec<Partition>,
    pub a: Vec<Vec<i64>>,
    pub b: Vec<Vec<i64>>,
}

impl OperatorAction {
    pub fn new(n: u32, m: usize) -> Self {
        let partitions = enumerate_partitions(n, m);
        let len = partitions.len();
        let index: HashMap<Vec<u32>, usize> =
            partitions.iter().enumerate().map(|(i, p)| (p.padded(m), i)).collect();
        let mut a = vec![vec![0i64; len]; len];
        let mut b = vec![vec![0i64; len]; len];
        let decreasing = |v: &[u32]| v.windows(2).all(|w| w[0] >= w[1]);
        for (nu, p) in partitions.iter().enumerate() {
            for e in p.orbit(m) {
                // Only coefficients at sorted exponent vectors are needed: the
                // image is symmetric.
                if decreasing(&e) {
                    a[nu][nu] += e.iter().map(|&v| i64::from(v) * (i64::from(v) - 1)).sum::<i64>();
                }
                for i in 0..m {
                    for j in i + 1..m {
                        let (ei, ej) = (e[i], e[j]);
                        if decreasing(&e) {
                            b[nu][nu] += i64::from(ei.max(ej));
                        }
                        // The pair {e, e with i,j swapped} also produces the
                        // chain strictly between them, weighted by the gap.
                        if ei > ej {
                            let d = ei - ej;
                            let mut f = e.clone();
                            for _ in 1..d {
                                f[i] -= 1;
                                f[j] += 1;
                                if decreasing(&f) {
                                    b[nu][index[&f]] += i64::from(d);
                                }
                            }
                        }
                    }
                }
            }
        }
        Self { partitions, a, b }
    }

    fn entry<T: Scalar>(&self, nu: usize, mu: usize, two_over_alpha: &T) -> T {
        T::from_i64(self.a[nu][mu]) + two_over_alpha.clone() * T::from_i64(self.b[nu][mu])
    }
}

/// Jack polynomials of one weight: C coefficients and monic-P coefficients.
#[derive(Debug, Clone)]
pub struct JackLayer<T> {
    pub weight: u32,
    pub partitions: Vec<Partition>,
    /// `c[t][u]` is the coefficient of m_{partitions[u]} in C_{partitions[t]}.
    pub c: Vec<Vec<T>>,
    pub p: Vec<Vec<T>>,
    pub eigenvalues: Vec<T>,
}

fn solve_layer<T: Scalar>(alpha: &T, m: usize, n: u32) -> Result<JackLayer<T>> {
    let action = OperatorAction::new(n, m);
    let parts = &action.partitions;
    let len = parts.len();
    let two_over_alpha = T::from_i64(2) / alpha.clone();
    let d: Vec<Vec<T>> = (0..len)
        .map(|nu| (0..len).map(|mu| action.entry(nu, mu, &two_over_alpha)).collect())
        .collect();
    let rho: Vec<T> = (0..len).map(|i| d[i][i].clone()).collect();

    // Reverse-lex order is a linear extension of dominance, so every ν that
    // maps onto μ comes earlier in the list.
    let mut p = vec![vec![T::zero(); len]; len];
    for t in 0..len {
        p[t][t] = T::one();
        for mu in t + 1..len {
            if !dominance_leq(&parts[mu], &parts[t])? {
                continue;
            }
            let mut s = T::zero();
            for nu in t..mu {
                if p[t][nu] != T::zero() && d[nu][mu] != T::zero() {
                    s = s + p[t][nu].clone() * d[nu][mu].clone();
                }
            }
            let gap = rho[t].clone() - rho[mu].clone();
            if gap.is_negligible(&rho[t]) {
                return Err(Error::EigenvalueCollision {
                    tau: parts[t].to_string(),
                    mu: parts[mu].to_string(),
                });
            }
            p[t][mu] = s / gap;
        }
    }

    let mut scale = vec![T::zero(); len];
    for t in 0..len {
        let mut s = multinomial::<T>(&parts[t]);
        for sigma in 0..t {
            s = s - scale[sigma].clone() * p[sigma][t].clone();
        }
        scale[t] = s;
    }
    let c = (0..len)
        .map(|t| p[t].iter().map(|v| scale[t].clone() * v.clone()).collect())
        .collect();
    let eigenvalues = solve_eigenvalues(alpha, m, parts);
    Ok(JackLayer { weight: n, partitions: parts.clone(), c, p, eigenvalues })
}

/// Operator eigenvalues Σ τ_i(τ_i - 1) + (2/α) Σ τ_i (m - i) (1-based i).
pub(crate) fn solve_eigenvalues<T: Scalar>(alpha: &T, m: usize, partitions: &[Partition]) -> Vec<T> {
    let two_over_alpha = T::from_i64(2) / alpha.clone();
    partitions
        .iter()
        .map(|tau| {
            tau.parts().iter().enumerate().fold(T::zero(), |acc, (i, &p)| {
                let p = i64::from(p);
                acc + T::from_i64(p * (p - 1)) + two_over_alpha.clone() * T::from_i64(p * (m - 1 - i) as i64)
            })
        })
        .collect()
}

/// All Jack polynomials of weight 0..=max_weight in m variables for one α.
#[derive(Debug, Clone)]
pub struct JackTable<T = f64> {
    alpha: T,
    m: usize,
    layers: Vec<JackLayer<T>>,
    orbits: Vec<Vec<Vec<Vec<u32>>>>,
    at_ones: Vec<Vec<f64>>,
}

impl<T: Scalar> JackTable<T> {
    pub fn build(alpha: T, m: usize, max_weight: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidInput("m must be ≥ 1".into()));
        }
        let a = alpha.to_f64();
        if !(a >= ALPHA_RANGE.0 && a <= ALPHA_RANGE.1) {
            return Err(Error::InvalidInput(format!(
                "α = {a} outside [{}, {}]",
                ALPHA_RANGE.0, ALPHA_RANGE.1
            )));
        }
        let layers = (0..=max_weight)
            .map(|n| solve_layer(&alpha, m, n))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_layers(alpha, m, layers))
    }

    pub(crate) fn from_layers(alpha: T, m: usize, layers: Vec<JackLayer<T>>) -> Self {
        let orbits = layers
            .iter()
            .map(|l| l.partitions.iter().map(|p| p.orbit(m)).collect())
            .collect();
        let at_ones = layers
            .iter()
            .map(|l| {
                l.c.iter()
                    .map(|row| {
                        row.iter()
                            .zip(&l.partitions)
                            .fold(T::zero(), |acc, (c, mu)| {
                                acc + c.clone() * monomial_at_ones_scalar::<T>(mu, m)
                            })
                            .to_f64()
                    })
                    .collect()
            })
            .collect();
        Self { alpha, m, layers, orbits, at_ones }
    }

    pub fn alpha(&self) -> &T {
        &self.alpha
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn max_weight(&self) -> u32 {
        self.layers.len() as u32 - 1
    }

    pub fn layer(&self, n: u32) -> Option<&JackLayer<T>> {
        self.layers.get(n as usize)
    }

    pub fn layers(&self) -> &[JackLayer<T>] {
        &self.layers
    }

    fn locate(&self, tau: &Partition) -> Option<(&JackLayer<T>, usize)> {
        let layer = self.layers.get(tau.weight() as usize)?;
        let t = layer.partitions.iter().position(|p| p == tau)?;
        Some((layer, t))
    }

    pub fn expansion(&self, tau: &Partition, normalization: Normalization) -> Option<JackExpansion<T>> {
        let (layer, t) = self.locate(tau)?;
        let row = match normalization {
            Normalization::C => &layer.c[t],
            Normalization::MonicP => &layer.p[t],
        };
        let coeffs = layer
            .partitions
            .iter()
            .zip(row)
            .filter(|(mu, _)| dominance_leq(mu, tau).unwrap_or(false))
            .map(|(mu, c)| (mu.clone(), c.clone()))
            .collect();
        Some(JackExpansion { tau: tau.clone(), alpha: self.alpha.clone(), m: self.m, normalization, coeffs })
    }

    /// Eigenvalue of the operator on C_τ, read off the diagonal of the action.
    pub fn eigenvalue(&self, tau: &Partition) -> Option<T> {
        let (layer, t) = self.locate(tau)?;
        Some(layer.eigenvalues[t].clone())
    }

    /// C_τ(1, ..., 1) for every τ of weight n, in layer order.
    pub fn layer_at_ones(&self, n: u32) -> &[f64] {
        &self.at_ones[n as usize]
    }
}

impl JackTable<f64> {
    /// Values m_μ(x) for every μ of weight n.
    pub fn monomials(&self, n: u32, powers: &[Vec<f64>]) -> Vec<f64> {
        self.orbits[n as usize]
            .iter()
            .map(|orbit| {
                let mut acc = CompensatedSum::new();
                for e in orbit {
                    acc.add(e.iter().enumerate().map(|(i, &k)| powers[i][k as usize]).product());
                }
                acc.value()
            })
            .collect()
    }

    /// C_τ(x) for every τ of weight n, in layer order.
    pub fn layer_values(&self, n: u32, x: &[f64]) -> Vec<f64> {
        let powers = power_table(x, n);
        let mono = self.monomials(n, &powers);
        self.layers[n as usize]
            .c
            .iter()
            .map(|row| {
                let mut acc = CompensatedSum::new();
                for (c, v) in row.iter().zip(&mono) {
                    if *c != 0.0 {
                        acc.add(c * v);
                    }
                }
                acc.value()
            })
            .collect()
    }
}

/// powers[i][p] = x_i^p for p ≤ n.
pub fn power_table(x: &[f64], n: u32) -> Vec<Vec<f64>> {
    x.iter()
        .map(|&v| {
            let mut row = Vec::with_capacity(n as usize + 1);
            let mut acc = 1.0;
            for _ in 0..=n {
                row.push(acc);
                acc *= v;
            }
            row
        })
        .collect()
}

/// C-normalized expansion of C_τ^{(α)} in m variables.
pub fn jack_expansion(tau: &Partition, alpha: f64, m: usize) -> Result<JackExpansion<f64>> {
    if tau.len() > m {
        return Err(Error::InvalidInput(format!("partition {tau} has more than {m} parts")));
    }
    let table = JackTable::build(alpha, m, tau.weight())?;
    Ok(table.expansion(tau, Normalization::C).expect("τ is in its own layer"))
}

/// Exact-rational version of [`jack_expansion`].
pub fn jack_expansion_exact(tau: &Partition, alpha: BigRational, m: usize) -> Result<JackExpansion<BigRational>> {
    if tau.len() > m {
        return Err(Error::InvalidInput(format!("partition {tau} has more than {m} parts")));
    }
    let table = JackTable::build(alpha, m, tau.weight())?;
    Ok(table.expansion(tau, Normalization::C).expect("τ is in its own layer"))
}

pub fn jack_eval(expansion: &JackExpansion<f64>, x: &[f64]) -> Result<f64> {
    expansion.eval(x)
}

/// C_τ^{(α)}(1, ..., 1).
pub fn jack_at_ones(tau: &Partition, alpha: f64, m: usize) -> Result<f64> {
    Ok(jack_expansion(tau, alpha, m)?.at_ones_exact())
}

/// Applies the eigenoperator to a symmetric polynomial of homogeneous weight
/// given in the monomial basis.
pub fn apply_operator<T: Scalar>(poly: &[(Partition, T)], alpha: &T, m: usize) -> Result<Vec<(Partition, T)>> {
    let Some(n) = poly.first().map(|(p, _)| p.weight()) else {
        return Ok(Vec::new());
    };
    let action = OperatorAction::new(n, m);
    let two_over_alpha = T::from_i64(2) / alpha.clone();
    let mut out = vec![T::zero(); action.partitions.len()];
    for (nu_p, c) in poly {
        if nu_p.weight() != n {
            return Err(Error::WeightMismatch(nu_p.weight(), n));
        }
        let nu = action
            .partitions
            .iter()
            .position(|p| p == nu_p)
            .ok_or_else(|| Error::InvalidInput(format!("{nu_p} has more than {m} parts")))?;
        for (mu, slot) in out.iter_mut().enumerate() {
            let e = action.entry(nu, mu, &two_over_alpha);
            if e != T::zero() {
                *slot = slot.clone() + c.clone() * e;
            }
        }
    }
    Ok(action.partitions.into_iter().zip(out).collect())
}

/// Memoized f64 Jack tables keyed by (α, m), optionally backed by the disk
/// cache. A stored table is reused whenever its weight suffices.
#[derive(Debug, Default)]
pub struct JackStore {
    cache: Option<cache::JackCache>,
    tables: Mutex<HashMap<(u64, usize), Arc<JackTable<f64>>>>,
}

impl JackStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_cache(cache: cache::JackCache) -> Self {
        Self { cache: Some(cache), tables: Mutex::default() }
    }

    pub fn table(&self, alpha: f64, m: usize, weight: u32) -> Result<Arc<JackTable<f64>>> {
        let key = (alpha.to_bits(), m);
        if let Some(t) = self.tables.lock().expect("jack store lock").get(&key) {
            if t.max_weight() >= weight {
                return Ok(Arc::clone(t));
            }
        }
        let table = match &self.cache {
            Some(c) => c.load_or_build(alpha, m, weight)?,
            None => JackTable::build(alpha, m, weight)?,
        };
        let table = Arc::new(table);
        self.tables.lock().expect("jack store lock").insert(key, Arc::clone(&table));
        Ok(table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::jack_eigenvalue;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn weight_one_is_power_sum() {
        for m in 1..=4 {
            let e = jack_expansion(&p(&[1]), 0.7, m).unwrap();
            assert_eq!(e.coeffs, vec![(p(&[1]), 1.0)]);
            assert_eq!(e.eval(&vec![0.5; m]).unwrap(), 0.5 * m as f64);
            assert_eq!(jack_at_ones(&p(&[1]), 0.7, m).unwrap(), m as f64);
        }
        let e = jack_expansion(&p(&[1]), 1.0, 2).unwrap();
        assert_eq!(e.eval(&[0.5, 1.5]).unwrap(), 2.0);
    }

    #[test]
    fn empty_partition_is_one() {
        let e = jack_expansion(&Partition::empty(), 2.0, 3).unwrap();
        assert_eq!(e.eval(&[0.3, -2.0, 7.0]).unwrap(), 1.0);
        assert_eq!(jack_at_ones(&Partition::empty(), 2.0, 3).unwrap(), 1.0);
    }

    #[test]
    fn weight_two_by_hand() {
        // P_(2) = m_(2) + 2/(1+α) m_(1,1), c_(1,1) = 2α/(1+α) relative to P_(1,1) = m_(1,1).
        let alpha = rat(3, 1);
        let table = JackTable::build(alpha.clone(), 2, 2).unwrap();
        let p2 = table.expansion(&p(&[2]), Normalization::MonicP).unwrap();
        assert_eq!(p2.coefficient(&p(&[1, 1])).unwrap(), &rat(2, 4));
        let c11 = table.expansion(&p(&[1, 1]), Normalization::C).unwrap();
        // (x1+x2)^2 = m_(2) + 2 m_(1,1); C_(2) = m_(2) + (2/(1+α)) m_(1,1)
        assert_eq!(c11.coefficient(&p(&[1, 1])).unwrap(), &(rat(2, 1) - rat(2, 4)));
        assert_eq!(c11.coefficient(&p(&[1, 1])).unwrap(), &(rat(2, 1) * alpha.clone() / (rat(1, 1) + alpha)));

        let e = jack_expansion(&p(&[1, 1]), 1.0, 2).unwrap();
        assert_eq!(e.eval(&[2.0, 3.0]).unwrap(), 6.0);
        assert_eq!(jack_at_ones(&p(&[1, 1]), 1.0, 2).unwrap(), 1.0);
    }

    #[test]
    fn weight_two_sum_is_square() {
        for alpha in [0.5, 1.0, 2.0, 3.0] {
            let x = [0.3, 1.7];
            let s = jack_expansion(&p(&[2]), alpha, 2).unwrap().eval(&x).unwrap()
                + jack_expansion(&p(&[1, 1]), alpha, 2).unwrap().eval(&x).unwrap();
            assert!((s - 4.0).abs() < 1e-14);
        }
    }

    #[test]
    fn exact_eigen_equation_small() {
        let alpha = rat(1, 2);
        let table = JackTable::build(alpha.clone(), 3, 5).unwrap();
        for layer in table.layers() {
            for tau in &layer.partitions {
                let e = table.expansion(tau, Normalization::C).unwrap();
                let image = apply_operator(&e.coeffs, &alpha, 3).unwrap();
                let rho = table.eigenvalue(tau).unwrap();
                for (mu, v) in image {
                    let c = e.coefficient(&mu).cloned().unwrap_or_else(<BigRational as Scalar>::zero);
                    assert_eq!(v, rho.clone() * c, "τ={tau} μ={mu}");
                }
                assert_eq!(Scalar::to_f64(&rho), jack_eigenvalue(tau, 0.5, 3));
            }
        }
    }

    #[test]
    fn leading_coefficient_and_support() {
        let table = JackTable::build(2.0, 3, 6).unwrap();
        for layer in table.layers() {
            for tau in &layer.partitions {
                let e = table.expansion(tau, Normalization::MonicP).unwrap();
                assert_eq!(e.coefficient(tau), Some(&1.0));
                assert!(e.coeffs.iter().all(|(mu, _)| dominance_leq(mu, tau).unwrap()));
                let c = table.expansion(tau, Normalization::C).unwrap();
                assert!(*c.coefficient(tau).unwrap() != 0.0);
            }
        }
    }

    #[test]
    fn table_at_ones_matches_eval() {
        let table = JackTable::build(0.5, 3, 6).unwrap();
        for n in 0..=6 {
            let vals = table.layer_values(n, &[1.0, 1.0, 1.0]);
            for (v, w) in vals.iter().zip(table.layer_at_ones(n)) {
                assert!((v - w).abs() <= 1e-12 * w.abs());
            }
        }
    }

    #[test]
    fn rejects_out_of_range_alpha_and_long_partitions() {
        assert!(JackTable::build(1e-4, 2, 2).is_err());
        assert!(jack_expansion(&p(&[1, 1, 1]), 1.0, 2).is_err());
    }

    #[test]
    fn store_reuses_tables() {
        let store = JackStore::new();
        let a = store.table(1.0, 3, 6).unwrap();
        let b = store.table(1.0, 3, 4).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
        let c = store.table(1.0, 3, 8).unwrap();
        assert_eq!(c.max_weight(), 8);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(30, 15), 155117520);
        assert_eq!(multinomial::<f64>(&p(&[2, 1, 1])), 12.0);
    }
}
