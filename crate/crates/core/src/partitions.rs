//! Integer partitions, dominance order, generalized Pochhammer symbols and the
//! Jack eigenvalue.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Weakly decreasing list of positive parts; trailing zeros are trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidInput(format!("parts {parts:?} are not weakly decreasing")));
        }
        Ok(Self::trimmed(parts))
    }

    /// Sorts the parts first.
    pub fn from_unsorted(mut parts: Vec<u32>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self::trimmed(parts)
    }

    fn trimmed(mut parts: Vec<u32>) -> Self {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Self(parts)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Part i (0-based), zero past the end.
    pub fn part(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// Parts padded with zeros to length m.
    pub fn padded(&self, m: usize) -> Vec<u32> {
        (0..m).map(|i| self.part(i)).collect()
    }

    /// Distinct rearrangements of the parts padded to length m, i.e. the
    /// exponent vectors of the monomial symmetric polynomial m_λ.
    pub fn orbit(&self, m: usize) -> Vec<Vec<u32>> {
        let mut cur = self.padded(m);
        cur.sort_unstable();
        let mut out = vec![cur.clone()];
        // next lexicographic permutation of a multiset
        loop {
            let Some(i) = (1..m).rev().find(|&i| cur[i - 1] < cur[i]) else {
                return out;
            };
            let j = (i..m).rev().find(|&j| cur[j] > cur[i - 1]).expect("successor exists");
            cur.swap(i - 1, j);
            cur[i..].reverse();
            out.push(cur.clone());
        }
    }

    /// m_λ(1, ..., 1) = m! / ∏ (multiplicity of each distinct part, zeros included)!.
    pub fn monomial_at_ones(&self, m: usize) -> f64 {
        let padded = self.padded(m);
        let mut denom = 1.0;
        let mut run = 1;
        for i in 1..=m {
            if i < m && padded[i] == padded[i - 1] {
                run += 1;
            } else {
                denom *= factorial(run);
                run = 1;
            }
        }
        factorial(m) / denom
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// All partitions of n with at most max_len parts, in reverse
/// lexicographic order: (n), (n-1,1), ...
pub fn enumerate_partitions(n: u32, max_len: usize) -> Vec<Partition> {
    fn rec(rest: u32, max_part: u32, slots: usize, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        if slots == 0 {
            return;
        }
        for p in (1..=rest.min(max_part)).rev() {
            cur.push(p);
            rec(rest - p, p, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, max_len, &mut Vec::new(), &mut out);
    out
}

/// Dominance comparison of equal-weight partitions by prefix sums.
pub fn dominance_cmp(mu: &Partition, lambda: &Partition) -> Result<Option<Ordering>> {
    if mu.weight() != lambda.weight() {
        return Err(Error::WeightMismatch(mu.weight(), lambda.weight()));
    }
    let len = mu.len().max(lambda.len());
    let (mut sm, mut sl) = (0u32, 0u32);
    let (mut le, mut ge) = (true, true);
    for i in 0..len {
        sm += mu.part(i);
        sl += lambda.part(i);
        le &= sm <= sl;
        ge &= sm >= sl;
    }
    Ok(match (le, ge) {
        (true, true) => Some(Ordering::Equal),
        (true, false) => Some(Ordering::Less),
        (false, true) => Some(Ordering::Greater),
        (false, false) => None,
    })
}

/// μ ≤ λ in dominance order.
pub fn dominance_leq(mu: &Partition, lambda: &Partition) -> Result<bool> {
    Ok(matches!(dominance_cmp(mu, lambda)?, Some(Ordering::Less | Ordering::Equal)))
}

/// Generalized Pochhammer symbol (a)_τ^{(α)} = ∏_i (a - (i-1)/α)_{τ_i}.
///
/// Fails when one of the rising-factorial factors is exactly zero, which is a
/// pole when the symbol sits in a denominator.
pub fn gen_pochhammer(a: f64, tau: &Partition, alpha: f64) -> Result<f64> {
    let mut prod = 1.0;
    for (i, &p) in tau.parts().iter().enumerate() {
        let base = a - i as f64 / alpha;
        for s in 0..p {
            let f = base + f64::from(s);
            if f == 0.0 {
                return Err(Error::Pole(format!("(a)_τ with a={a}, τ={tau}, α={alpha}")));
            }
            prod *= f;
        }
    }
    Ok(prod)
}

/// Eigenvalue of Σ x_i²∂_i² + (2/α) Σ_{i≠j} x_i²/(x_i - x_j) ∂_i on the Jack
/// polynomial indexed by τ in m variables:
/// Σ τ_i (τ_i - 1 - (2/α)(i-1)) + (2/α)(m-1)|τ|.
pub fn jack_eigenvalue(tau: &Partition, alpha: f64, m: usize) -> f64 {
    let two_over_alpha = 2.0 / alpha;
    tau.parts()
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let p = f64::from(p);
            p * (p - 1.0) + two_over_alpha * p * (m - 1 - i) as f64
        })
        .sum()
}
