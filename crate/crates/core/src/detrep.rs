//! Determinant forms of 0F0 and 0F1 at Jack parameter 1:
//!
//! 0F0^{(1)}(x, y)     = κ · det[exp(x_i y_j)] / (V(x) V(y))
//! 0F1^{(1)}(m+φ; x, y) = κ · det[0F1(1+φ; x_i y_j)] / (V(x) V(y))
//!
//! with κ fixed numerically against the series. Constants persist in the
//! `detrep v1` file.

use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use log::warn;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cache::{read_checksummed, write_checksummed, Lookup};
use crate::error::{Error, Result};
use crate::hyperseries::{mv_series, uni_0f1, HyperParams, TruncationPolicy};
use crate::jack::JackStore;

pub const DEGENERACY_TOL: f64 = 1e-6;
pub const CALIBRATION_PROBES: usize = 10;
pub const CALIBRATION_SPREAD: f64 = 1e-8;
pub const CALIBRATION_WEIGHT: u32 = 30;
pub const MAX_CALIBRATION_DIM: usize = 6;
const VERSION: &str = "detrep v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    F00,
    F01,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::F00 => "F00",
            Family::F01 => "F01",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "F00" => Ok(Family::F00),
            "F01" => Ok(Family::F01),
            _ => Err(Error::InvalidInput(format!("unknown family '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetRepConstant {
    pub family: Family,
    pub m: usize,
    /// Only meaningful for F01.
    pub phi: f64,
    pub kappa: f64,
}

impl DetRepConstant {
    pub fn eval(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        for v in [x, y] {
            if v.len() != self.m {
                return Err(Error::DimensionMismatch { expected: self.m, got: v.len() });
            }
        }
        Ok(self.kappa * raw_ratio(self.family, self.phi, x, y)?)
    }
}

/// ∏_{i<j} (x_i − x_j).
pub fn vandermonde(x: &[f64]) -> f64 {
    let mut v = 1.0;
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            v *= x[i] - x[j];
        }
    }
    v
}

fn check_separated(v: &[f64]) -> Result<()> {
    let scale = v.iter().fold(1.0f64, |a, c| a.max(c.abs()));
    let tol = DEGENERACY_TOL * scale;
    let mut gap = f64::INFINITY;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            gap = gap.min((v[i] - v[j]).abs());
        }
    }
    if gap <= tol {
        return Err(Error::Degenerate { gap, tol });
    }
    Ok(())
}

fn check_phi(phi: f64) -> Result<()> {
    if !(phi > -1.0) {
        return Err(Error::Domain(format!("φ must exceed −1, got {phi}")));
    }
    Ok(())
}

/// det[f(x_i y_j)] / (V(x) V(y)) without the constant.
pub fn raw_ratio(family: Family, phi: f64, x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), got: y.len() });
    }
    if family == Family::F01 {
        check_phi(phi)?;
    }
    check_separated(x)?;
    check_separated(y)?;
    let m = x.len();
    let mut entries = Vec::with_capacity(m * m);
    for xi in x {
        for yj in y {
            entries.push(match family {
                Family::F00 => (xi * yj).exp(),
                Family::F01 => uni_0f1(1.0 + phi, xi * yj)?,
            });
        }
    }
    let det = DMatrix::from_row_slice(m, m, &entries).determinant();
    Ok(det / (vandermonde(x) * vandermonde(y)))
}

fn series_params(family: Family, m: usize, phi: f64) -> HyperParams {
    match family {
        Family::F00 => HyperParams::f00(),
        Family::F01 => HyperParams::f01(m as f64 + phi),
    }
}

/// The α = 1 series the determinant form reproduces.
pub fn series_value(
    store: &JackStore,
    family: Family,
    phi: f64,
    x: &[f64],
    y: &[f64],
    policy: &TruncationPolicy,
) -> Result<f64> {
    let table = store.table(1.0, x.len(), policy.max_weight)?;
    Ok(mv_series(&series_params(family, x.len(), phi), &table, x, y, policy)?.value)
}

/// Fixed probe pairs: coordinates in [0.05, 1], pairwise gaps ≥ 0.08, so
/// |x_i y_j| ≤ 1.
pub fn calibration_probes(m: usize) -> Vec<(Vec<f64>, Vec<f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6465_7472_6570);
    let draw = |rng: &mut ChaCha8Rng| loop {
        let mut v: Vec<f64> = (0..m).map(|_| rng.random_range(0.05..1.0)).collect();
        v.sort_by(|a, b| b.total_cmp(a));
        if v.windows(2).all(|w| w[0] - w[1] >= 0.08) {
            return v;
        }
    };
    (0..CALIBRATION_PROBES).map(|_| (draw(&mut rng), draw(&mut rng))).collect()
}

/// κ as the geometric mean of series / raw determinant ratio over the fixed
/// probes; fails if the relative spread exceeds the bound.
pub fn calibrate(store: &JackStore, family: Family, m: usize, phi: f64) -> Result<DetRepConstant> {
    if m == 0 || m > MAX_CALIBRATION_DIM {
        return Err(Error::EnumerationGuard { m, max: MAX_CALIBRATION_DIM });
    }
    let phi = if family == Family::F00 { 0.0 } else { phi };
    if family == Family::F01 {
        check_phi(phi)?;
    }
    let policy = TruncationPolicy { max_weight: CALIBRATION_WEIGHT, tail_ratio_threshold: 1e-300, abs_floor: 1e-300 };
    let mut ratios = Vec::with_capacity(CALIBRATION_PROBES);
    for (x, y) in calibration_probes(m) {
        let s = series_value(store, family, phi, &x, &y, &policy)?;
        let r = raw_ratio(family, phi, &x, &y)?;
        let q = s / r;
        if !(q.is_finite() && q > 0.0) {
            return Err(Error::CalibrationSpread { spread: f64::INFINITY, bound: CALIBRATION_SPREAD });
        }
        ratios.push(q);
    }
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().copied().fold(0.0, f64::max);
    let kappa = (ratios.iter().map(|r| r.ln()).sum::<f64>() / ratios.len() as f64).exp();
    let spread = (hi - lo) / kappa;
    if spread > CALIBRATION_SPREAD {
        return Err(Error::CalibrationSpread { spread, bound: CALIBRATION_SPREAD });
    }
    Ok(DetRepConstant { family, m, phi, kappa })
}

type Key = (Family, usize, u64);

fn key(family: Family, m: usize, phi: f64) -> Key {
    let phi = if family == Family::F00 { 0.0 } else { phi };
    (family, m, phi.to_bits())
}

fn encode(c: &DetRepConstant) -> String {
    format!("family={} m={} phi={:?} kappa={:?}", c.family, c.m, c.phi, c.kappa)
}

fn decode(line: &str) -> Option<DetRepConstant> {
    let mut fields = HashMap::new();
    for tok in line.split_whitespace() {
        let (k, v) = tok.split_once('=')?;
        fields.insert(k, v);
    }
    let c = DetRepConstant {
        family: fields.get("family")?.parse().ok()?,
        m: fields.get("m")?.parse().ok()?,
        phi: fields.get("phi")?.parse().ok()?,
        kappa: fields.get("kappa")?.parse().ok()?,
    };
    (fields.len() == 4 && c.kappa.is_finite() && c.kappa > 0.0).then_some(c)
}

/// Calibrated constants, memoized and optionally persisted under `dir`.
#[derive(Debug)]
pub struct DetRepStore {
    jack: Arc<JackStore>,
    path: Option<PathBuf>,
    memo: Mutex<HashMap<Key, DetRepConstant>>,
}

impl DetRepStore {
    pub fn new(jack: Arc<JackStore>) -> Self {
        Self { jack, path: None, memo: Mutex::default() }
    }

    pub fn with_dir(jack: Arc<JackStore>, dir: &Path) -> Self {
        let path = dir.join("detrep_v1.txt");
        let memo = match load(&path) {
            Lookup::Hit(cs) => cs.into_iter().map(|c| (key(c.family, c.m, c.phi), c)).collect(),
            Lookup::Miss => HashMap::new(),
            Lookup::Invalid(reason) => {
                warn!("ignoring detrep cache {}: {reason}; recalibrating", path.display());
                HashMap::new()
            }
        };
        Self { jack, path: Some(path), memo: Mutex::new(memo) }
    }

    pub fn jack(&self) -> &Arc<JackStore> {
        &self.jack
    }

    pub fn constant(&self, family: Family, m: usize, phi: f64) -> Result<DetRepConstant> {
        let k = key(family, m, phi);
        if let Some(c) = self.memo.lock().expect("detrep lock").get(&k) {
            return Ok(*c);
        }
        let c = calibrate(&self.jack, family, m, phi)?;
        let mut memo = self.memo.lock().expect("detrep lock");
        memo.insert(k, c);
        if let Some(path) = &self.path {
            let mut all: Vec<_> = memo.values().copied().collect();
            all.sort_by_key(encode);
            let mut lines = vec![VERSION.to_string()];
            lines.extend(all.iter().map(encode));
            if let Err(e) = write_checksummed(path, &lines) {
                warn!("could not write detrep cache: {e}");
            }
        }
        Ok(c)
    }

    pub fn f00_det(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        self.constant(Family::F00, x.len(), 0.0)?.eval(x, y)
    }

    pub fn f01_det(&self, phi: f64, x: &[f64], y: &[f64]) -> Result<f64> {
        check_phi(phi)?;
        self.constant(Family::F01, x.len(), phi)?.eval(x, y)
    }
}

fn load(path: &Path) -> Lookup<Vec<DetRepConstant>> {
    let lines = match read_checksummed(path) {
        Lookup::Hit(l) => l,
        Lookup::Miss => return Lookup::Miss,
        Lookup::Invalid(e) => return Lookup::Invalid(e),
    };
    match lines.split_first() {
        Some((head, rest)) if head == VERSION => match rest.iter().map(|l| decode(l)).collect::<Option<Vec<_>>>() {
            Some(cs) => Lookup::Hit(cs),
            None => Lookup::Invalid("malformed record".into()),
        },
        _ => Lookup::Invalid("version mismatch".into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    fn store() -> DetRepStore {
        DetRepStore::new(Arc::new(JackStore::new()))
    }

    #[test]
    fn vandermonde_examples() {
        assert_eq!(vandermonde(&[3.0]), 1.0);
        assert_eq!(vandermonde(&[3.0, 1.0]), 2.0);
        assert_eq!(vandermonde(&[3.0, 1.0, 0.0]), 6.0);
    }

    #[test]
    fn raw_examples() {
        assert!(rel(raw_ratio(Family::F00, 0.0, &[0.7], &[1.3]).unwrap(), (0.91f64).exp()) < 1e-15);
        let e = std::f64::consts::E;
        assert!(rel(raw_ratio(Family::F00, 0.0, &[1.0, 0.0], &[1.0, 0.0]).unwrap(), e - 1.0) < 1e-15);
        let v = raw_ratio(Family::F01, 0.5, &[0.8], &[0.5]).unwrap();
        assert!(rel(v, uni_0f1(1.5, 0.4).unwrap()) < 1e-15);
    }

    #[test]
    fn calibrated_constants() {
        let s = store();
        assert!((s.constant(Family::F00, 1, 0.0).unwrap().kappa - 1.0).abs() < 1e-12);
        assert!((s.constant(Family::F00, 2, 0.0).unwrap().kappa - 1.0).abs() < 1e-10);
        assert!((s.constant(Family::F00, 3, 0.0).unwrap().kappa - 2.0).abs() < 1e-9);
        assert!((s.constant(Family::F01, 1, 0.3).unwrap().kappa - 1.0).abs() < 1e-12);
        assert!((s.constant(Family::F01, 2, 0.5).unwrap().kappa - 1.5).abs() < 1e-9);
        assert!((s.constant(Family::F01, 2, -0.5).unwrap().kappa - 0.5).abs() < 1e-9);
        assert!((s.constant(Family::F01, 3, 0.5).unwrap().kappa - 11.25).abs() < 1e-7);
        assert!((s.constant(Family::F01, 3, -0.5).unwrap().kappa - 0.75).abs() < 1e-9);
    }

    #[test]
    fn calibration_is_reproducible() {
        let a = calibrate(&JackStore::new(), Family::F01, 2, 1.0).unwrap();
        let b = calibrate(&JackStore::new(), Family::F01, 2, 1.0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn degeneracy_rejected() {
        let r = raw_ratio(Family::F00, 0.0, &[1.0, 1.0 + 1e-7], &[0.5, 0.2]);
        assert!(matches!(r, Err(Error::Degenerate { .. })));
        assert!(store().f01_det(-1.0, &[1.0, 0.5], &[0.5, 0.2]).is_err());
    }

    #[test]
    fn continuous_near_degeneracy() {
        let s = store();
        let y = [0.9, 0.4, 0.1];
        let a = s.f00_det(&[1.0, 0.5 + 1e-5, 0.5], &y).unwrap();
        let b = s.f00_det(&[1.0, 0.5 + 1e-4, 0.5], &y).unwrap();
        assert!(rel(a, b) < 1e-4);
    }

    #[test]
    fn persisted_and_reloaded() {
        let dir = tempfile::tempdir().unwrap();
        let jack = Arc::new(JackStore::new());
        let c = DetRepStore::with_dir(jack.clone(), dir.path()).constant(Family::F01, 2, 0.5).unwrap();
        let text = std::fs::read_to_string(dir.path().join("detrep_v1.txt")).unwrap();
        assert!(text.starts_with("detrep v1\nfamily=F01 m=2 phi=0.5 kappa="));
        let again = DetRepStore::with_dir(jack, dir.path());
        assert_eq!(again.memo.lock().unwrap().get(&key(Family::F01, 2, 0.5)), Some(&c));
    }
}
