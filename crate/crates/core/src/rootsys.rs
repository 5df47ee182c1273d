//! Root systems of types A_{m-1}, B_m and D_m in R^m.
//!
//! Roots are stored as exact integer vectors and Weyl group elements as signed
//! permutations, so inner products with roots and determinants of group
//! elements are exact. Floating point enters only through user points.

use std::fmt;

use crate::error::{Error, Result};

/// Largest m for which the full Weyl group is enumerated (|W(B_6)| = 46080).
pub const MAX_ENUMERATION_DIM: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RootKind {
    A,
    B,
    D,
}

impl RootKind {
    pub fn letter(self) -> char {
        match self {
            RootKind::A => 'A',
            RootKind::B => 'B',
            RootKind::D => 'D',
        }
    }
}

impl fmt::Display for RootKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl std::str::FromStr for RootKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(RootKind::A),
            "B" | "b" => Ok(RootKind::B),
            "D" | "d" => Ok(RootKind::D),
            other => Err(Error::InvalidInput(format!("unknown root system kind '{other}'"))),
        }
    }
}

/// W-orbit a root belongs to. Type B has the short roots e_i in their own
/// orbit; every other root is `Long`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orbit {
    Short,
    Long,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Root {
    pub vector: Vec<i64>,
    pub orbit: Orbit,
}

impl Root {
    pub fn dot(&self, y: &[f64]) -> f64 {
        self.vector
            .iter()
            .zip(y)
            .filter(|(a, _)| **a != 0)
            .map(|(a, v)| *a as f64 * v)
            .sum()
    }

    fn norm2(&self) -> i64 {
        self.vector.iter().map(|a| a * a).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootSystem {
    kind: RootKind,
    m: usize,
    positive_roots: Vec<Root>,
}

impl RootSystem {
    /// Positive system R_+ for the given type: {e_i - e_j} for A,
    /// {e_i, e_i ± e_j} for B, {e_i ± e_j} for D (i < j).
    pub fn new(kind: RootKind, m: usize) -> Result<Self> {
        let min = match kind {
            RootKind::A | RootKind::B => 1,
            RootKind::D => 2,
        };
        if m < min {
            return Err(Error::DimensionTooSmall { kind: kind.letter(), m });
        }
        let unit = |i: usize| {
            let mut v = vec![0i64; m];
            v[i] = 1;
            v
        };
        let pair = |i: usize, j: usize, s: i64| {
            let mut v = vec![0i64; m];
            v[i] = 1;
            v[j] = s;
            v
        };
        let mut roots = Vec::new();
        if kind == RootKind::B {
            for i in 0..m {
                roots.push(Root { vector: unit(i), orbit: Orbit::Short });
            }
        }
        for i in 0..m {
            for j in i + 1..m {
                roots.push(Root { vector: pair(i, j, -1), orbit: Orbit::Long });
                if kind != RootKind::A {
                    roots.push(Root { vector: pair(i, j, 1), orbit: Orbit::Long });
                }
            }
        }
        Ok(Self { kind, m, positive_roots: roots })
    }

    pub fn kind(&self) -> RootKind {
        self.kind
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive_roots
    }

    /// Simple system: e_i - e_{i+1} (i < m), plus e_m for B and e_{m-1} + e_m for D.
    pub fn simple_roots(&self) -> Vec<Vec<i64>> {
        let m = self.m;
        let mut s: Vec<Vec<i64>> = (0..m.saturating_sub(1))
            .map(|i| {
                let mut v = vec![0; m];
                v[i] = 1;
                v[i + 1] = -1;
                v
            })
            .collect();
        match self.kind {
            RootKind::A => {}
            RootKind::B => {
                let mut v = vec![0; m];
                v[m - 1] = 1;
                s.push(v);
            }
            RootKind::D => {
                let mut v = vec![0; m];
                v[m - 2] = 1;
                v[m - 1] = 1;
                s.push(v);
            }
        }
        s
    }

    /// Full root set R = R_+ ∪ (-R_+).
    pub fn all_roots(&self) -> Vec<Vec<i64>> {
        let mut r: Vec<Vec<i64>> = self.positive_roots.iter().map(|a| a.vector.clone()).collect();
        r.extend(self.positive_roots.iter().map(|a| a.vector.iter().map(|v| -v).collect()));
        r
    }

    /// Order of the Weyl group: m!, 2^m m!, 2^{m-1} m!.
    pub fn weyl_order(&self) -> u64 {
        let fact: u64 = (1..=self.m as u64).product();
        match self.kind {
            RootKind::A => fact,
            RootKind::B => fact << self.m,
            RootKind::D => fact << (self.m - 1),
        }
    }

    /// A point strictly inside the chamber: (m, m-1, ..., 1).
    pub fn chamber_probe(&self) -> Vec<f64> {
        (0..self.m).map(|i| (self.m - i) as f64).collect()
    }

    /// Membership in the open chamber ⟨α, x⟩ > 0 for all simple α.
    ///
    /// Inner products are exact up to the float addition; a value within
    /// 1e-12·|x| of zero counts as the boundary.
    pub fn in_chamber(&self, x: &[f64]) -> bool {
        if x.len() != self.m || x.iter().any(|v| !v.is_finite()) {
            return false;
        }
        let scale = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let tol = 1e-12 * scale;
        self.simple_roots()
            .iter()
            .all(|a| a.iter().zip(x).map(|(a, v)| *a as f64 * v).sum::<f64>() > tol)
    }

    pub fn require_chamber(&self, x: &[f64]) -> Result<()> {
        self.check_dim(x)?;
        if self.in_chamber(x) {
            Ok(())
        } else {
            Err(Error::NotInChamber(x.to_vec()))
        }
    }

    pub fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.m {
            return Err(Error::DimensionMismatch { expected: self.m, got: x.len() });
        }
        Ok(())
    }

    /// ω_k(y) = ∏_{α ∈ R_+} ⟨α, y⟩^{k(α)}.
    pub fn omega_k(&self, mult: &Multiplicity, y: &[f64]) -> Result<f64> {
        self.check_dim(y)?;
        let mut prod = 1.0;
        for root in &self.positive_roots {
            let k = mult.of(root.orbit);
            if k == 0.0 {
                continue;
            }
            let ip = root.dot(y);
            let factor = if k.fract() == 0.0 && k.abs() < i32::MAX as f64 {
                ip.powi(k as i32)
            } else if ip < 0.0 {
                return Err(Error::Domain(format!(
                    "negative inner product {ip} with non-integer exponent {k}"
                )));
            } else {
                ip.powf(k)
            };
            prod *= factor;
        }
        Ok(prod)
    }

    /// h(y) = ∏_{α ∈ R_+} ⟨α, y⟩.
    pub fn harmonic_h(&self, y: &[f64]) -> f64 {
        self.positive_roots.iter().map(|r| r.dot(y)).product()
    }

    /// Reflection σ_α(v) = v - 2⟨α,v⟩/⟨α,α⟩ α on an integer vector.
    pub fn reflect(alpha: &[i64], v: &[i64]) -> Vec<i64> {
        let root = Root { vector: alpha.to_vec(), orbit: Orbit::Long };
        let ip: i64 = alpha.iter().zip(v).map(|(a, b)| a * b).sum();
        let n2 = root.norm2();
        debug_assert_eq!((2 * ip) % n2, 0, "crystallographic reflection");
        let c = 2 * ip / n2;
        v.iter().zip(alpha).map(|(b, a)| b - c * a).collect()
    }

    /// Representative of the W-orbit of y in the closed chamber.
    pub fn fold_to_chamber(&self, y: &[f64]) -> Vec<f64> {
        let mut v: Vec<f64> = match self.kind {
            RootKind::A => y.to_vec(),
            RootKind::B | RootKind::D => y.iter().map(|v| v.abs()).collect(),
        };
        v.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
        if self.kind == RootKind::D {
            let negatives = y.iter().filter(|v| **v < 0.0).count();
            let has_zero = y.contains(&0.0);
            if negatives % 2 == 1 && !has_zero {
                let last = v.len() - 1;
                v[last] = -v[last];
            }
        }
        v
    }

    /// Enumerates W as signed permutations; guarded at m ≤ 6.
    pub fn weyl_elements(&self) -> Result<Vec<WeylElement>> {
        if self.m > MAX_ENUMERATION_DIM {
            return Err(Error::EnumerationGuard { m: self.m, max: MAX_ENUMERATION_DIM });
        }
        let perms = permutations(self.m);
        let sign_patterns: Vec<Vec<i8>> = match self.kind {
            RootKind::A => vec![vec![1; self.m]],
            RootKind::B | RootKind::D => (0..1u32 << self.m)
                .map(|mask| {
                    (0..self.m)
                        .map(|i| if mask >> i & 1 == 1 { -1 } else { 1 })
                        .collect::<Vec<i8>>()
                })
                .filter(|s| {
                    self.kind == RootKind::B || s.iter().filter(|v| **v < 0).count() % 2 == 0
                })
                .collect(),
        };
        let mut out = Vec::with_capacity(perms.len() * sign_patterns.len());
        for p in &perms {
            for s in &sign_patterns {
                out.push(WeylElement::new(p.clone(), s.clone()));
            }
        }
        Ok(out)
    }
}

/// Multiplicity function: k0 on the short orbit {e_i} (type B only), k1 on
/// the long orbit {e_i ± e_j}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Multiplicity {
    pub k0: f64,
    pub k1: f64,
}

impl Multiplicity {
    pub fn new(k0: f64, k1: f64) -> Result<Self> {
        if !(k0.is_finite() && k0 >= 0.0) {
            return Err(Error::InvalidInput(format!("k0 must be finite and ≥ 0, got {k0}")));
        }
        if !(k1.is_finite() && k1 > 0.0) {
            return Err(Error::InvalidInput(format!("k1 must be finite and > 0, got {k1}")));
        }
        Ok(Self { k0, k1 })
    }

    /// Single-orbit multiplicity for types A and D.
    pub fn uniform(k1: f64) -> Result<Self> {
        Self::new(0.0, k1)
    }

    pub fn of(&self, orbit: Orbit) -> f64 {
        match orbit {
            Orbit::Short => self.k0,
            Orbit::Long => self.k1,
        }
    }

    /// Jack parameter α = 1/k1.
    pub fn alpha(&self) -> f64 {
        1.0 / self.k1
    }

    /// γ = Σ_{α ∈ R_+} k(α), from the orbit sizes.
    pub fn gamma(&self, rs: &RootSystem) -> f64 {
        let m = rs.m() as f64;
        match rs.kind() {
            RootKind::A => m * (m - 1.0) / 2.0 * self.k1,
            RootKind::B => m * self.k0 + m * (m - 1.0) * self.k1,
            RootKind::D => m * (m - 1.0) * self.k1,
        }
    }
}

/// Signed permutation acting by (w y)_i = sign_i · y_{perm_i}.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeylElement {
    perm: Vec<usize>,
    signs: Vec<i8>,
    det: i8,
}

impl WeylElement {
    pub fn new(perm: Vec<usize>, signs: Vec<i8>) -> Self {
        let det = permutation_sign(&perm) * signs.iter().product::<i8>();
        Self { perm, signs, det }
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn det(&self) -> i8 {
        self.det
    }

    pub fn apply(&self, y: &[f64]) -> Vec<f64> {
        self.perm
            .iter()
            .zip(&self.signs)
            .map(|(&p, &s)| f64::from(s) * y[p])
            .collect()
    }

    pub fn apply_int(&self, y: &[i64]) -> Vec<i64> {
        self.perm.iter().zip(&self.signs).map(|(&p, &s)| i64::from(s) * y[p]).collect()
    }
}

fn permutation_sign(perm: &[usize]) -> i8 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1i8;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut j = start;
        while !seen[j] {
            seen[j] = true;
            j = perm[j];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// All permutations of 0..n in lexicographic order.
pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (0..n).collect();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("successor exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}
