//! Tensor quadrature over a Weyl chamber.
//!
//! * `Indicator`: Gauss–Hermite on ℝ^m, nodes outside the open chamber dropped.
//! * `Symmetrized`: Gauss–Hermite on ℝ^m of f∘fold, divided by |W|. Exact up
//!   to rule order for W-invariant extensions that are smooth.
//! * `SimpleRoot`: composite Gauss–Legendre in simple-root coordinates
//!   u_i = ⟨α_i, y⟩ ∈ [0, 2·extent] (plus a free coordinate for A). Suits
//!   integrands that vanish like a non-smooth power at the walls.

use std::str::FromStr;

use gauss_quad::{GaussHermite, GaussLegendre};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rootsys::{RootKind, RootSystem};
use crate::sum::pairwise_sum;

pub const MAX_TENSOR_DIM: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    Indicator,
    Symmetrized,
    SimpleRoot,
}

impl FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "indicator" => Ok(Rule::Indicator),
            "symmetrized" => Ok(Rule::Symmetrized),
            "simple-root" => Ok(Rule::SimpleRoot),
            _ => Err(Error::InvalidInput(format!("unknown quadrature rule '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rule: Rule,
    /// Gauss–Hermite order per axis, or Gauss–Legendre points per panel.
    pub order: usize,
    /// Gauss–Hermite weight e^{−|y|²/2σ²}.
    pub scale: f64,
    /// Simple-root rule: panels per axis and half-width of the covered box.
    pub panels: usize,
    pub extent: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { rule: Rule::Indicator, order: 60, scale: 1.0, panels: 12, extent: 9.0 }
    }
}

impl QuadratureSpec {
    pub fn symmetrized() -> Self {
        Self { rule: Rule::Symmetrized, ..Self::default() }
    }

    pub fn simple_root() -> Self {
        Self { rule: Rule::SimpleRoot, order: 8, ..Self::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub estimate: f64,
    pub nodes: usize,
}

/// Gauss–Hermite nodes and weights for ∫_ℝ f(y) dy with the rule's weight
/// removed: y = √2σξ, w' = √2σ·w·e^{ξ²}.
pub fn hermite_rule(order: usize, scale: f64) -> Result<Vec<(f64, f64)>> {
    let n = order.try_into().map_err(|_| Error::InvalidInput("quadrature order must be ≥ 1".into()))?;
    let s = std::f64::consts::SQRT_2 * scale;
    Ok(GaussHermite::new(n).iter().map(|(x, w)| (s * x, s * w * (x * x).exp())).collect())
}

/// Composite Gauss–Legendre on [a, b].
pub fn legendre_rule(a: f64, b: f64, panels: usize, order: usize) -> Result<Vec<(f64, f64)>> {
    let n = order.try_into().map_err(|_| Error::InvalidInput("quadrature order must be ≥ 1".into()))?;
    if panels == 0 {
        return Err(Error::InvalidInput("panel count must be ≥ 1".into()));
    }
    let gl = GaussLegendre::new(n);
    let h = (b - a) / panels as f64;
    let mut out = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let lo = a + h * p as f64;
        for (x, w) in gl.iter() {
            out.push((lo + 0.5 * h * (x + 1.0), 0.5 * h * w));
        }
    }
    Ok(out)
}

fn tensor(rules: &[Vec<(f64, f64)>]) -> Vec<(Vec<f64>, f64)> {
    let mut out = vec![(Vec::with_capacity(rules.len()), 1.0)];
    for rule in rules {
        out = out
            .into_iter()
            .flat_map(|(p, w)| {
                rule.iter().map(move |&(x, v)| {
                    let mut q = p.clone();
                    q.push(x);
                    (q, w * v)
                })
            })
            .collect();
    }
    out
}

/// y from simple-root coordinates; returns y and the Jacobian |dy/du|.
fn from_simple_coordinates(kind: RootKind, u: &[f64]) -> (Vec<f64>, f64) {
    let m = u.len();
    let mut y = vec![0.0; m];
    match kind {
        // u = (y_1−y_2, ..., y_{m−1}−y_m, y_m)
        RootKind::A | RootKind::B => {
            y[m - 1] = u[m - 1];
            for i in (0..m - 1).rev() {
                y[i] = y[i + 1] + u[i];
            }
            (y, 1.0)
        }
        // u = (y_1−y_2, ..., y_{m−1}−y_m, y_{m−1}+y_m)
        RootKind::D => {
            y[m - 2] = 0.5 * (u[m - 2] + u[m - 1]);
            y[m - 1] = 0.5 * (u[m - 1] - u[m - 2]);
            for i in (0..m - 2).rev() {
                y[i] = y[i + 1] + u[i];
            }
            (y, 0.5)
        }
    }
}

/// Nodes and weights of the selected rule restricted to the chamber.
pub fn chamber_nodes(rs: &RootSystem, spec: &QuadratureSpec) -> Result<Vec<(Vec<f64>, f64)>> {
    let m = rs.m();
    if m > MAX_TENSOR_DIM {
        return Err(Error::EnumerationGuard { m, max: MAX_TENSOR_DIM });
    }
    if !(spec.scale > 0.0 && spec.extent > 0.0) {
        return Err(Error::InvalidInput("quadrature scale and extent must be positive".into()));
    }
    Ok(match spec.rule {
        Rule::Indicator => {
            let h = hermite_rule(spec.order, spec.scale)?;
            tensor(&vec![h; m]).into_iter().filter(|(y, _)| rs.in_chamber(y)).collect()
        }
        Rule::Symmetrized => {
            let h = hermite_rule(spec.order, spec.scale)?;
            let w = rs.weyl_order() as f64;
            tensor(&vec![h; m]).into_iter().map(|(y, v)| (rs.fold_to_chamber(&y), v / w)).collect()
        }
        Rule::SimpleRoot => {
            let gap = legendre_rule(0.0, 2.0 * spec.extent, spec.panels, spec.order)?;
            let mut rules = vec![gap; m];
            if rs.kind() == RootKind::A {
                rules[m - 1] = legendre_rule(-spec.extent, spec.extent, spec.panels, spec.order)?;
            }
            tensor(&rules)
                .into_iter()
                .map(|(u, w)| {
                    let (y, jac) = from_simple_coordinates(rs.kind(), &u);
                    (y, w * jac)
                })
                .collect()
        }
    })
}

/// ∫_C f(y) dy. Nodes are evaluated in parallel and reduced pairwise in node
/// order, so the result does not depend on scheduling. For the symmetrized
/// rule f also sees wall points.
pub fn integrate_chamber<F>(f: F, rs: &RootSystem, spec: &QuadratureSpec) -> Result<QuadResult>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let nodes = chamber_nodes(rs, spec)?;
    let values: Vec<f64> = nodes.par_iter().map(|(y, w)| if *w == 0.0 { 0.0 } else { w * f(y) }).collect();
    Ok(QuadResult { estimate: pairwise_sum(&values), nodes: nodes.len() })
}
