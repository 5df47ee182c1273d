use std::sync::Arc;

use chamber_bessel::jack::JackStore;
use chamber_bessel::kernels::{default_quadrature, DensityModel};
use chamber_bessel::quadrature::{integrate_chamber, QuadratureSpec};
use chamber_bessel::rootsys::{Multiplicity, RootKind, RootSystem};
use chamber_bessel::simulate::{ensemble_csv, moment_report, simulate, SdeConfig, TestFunction};

fn cfg(kind: RootKind, m: usize, y0: Vec<f64>, paths: usize, seed: u64) -> SdeConfig {
    let rs = RootSystem::new(kind, m).unwrap();
    let mult = Multiplicity::new(1.0, 1.0).unwrap();
    SdeConfig { n_paths: paths, seed, dt: 2e-3, ..SdeConfig::new(rs, mult, y0, 0.5) }
}

#[test]
fn same_seed_same_bytes() {
    let c = cfg(RootKind::D, 2, vec![1.0, 0.2], 300, 42);
    let a = ensemble_csv(&simulate(&c).unwrap());
    let b = ensemble_csv(&simulate(&c).unwrap());
    assert_eq!(a, b);
    let other = ensemble_csv(&simulate(&SdeConfig { seed: 43, ..c }).unwrap());
    assert_ne!(a, other);
}

#[test]
fn paths_stay_in_the_chamber() {
    let c = cfg(RootKind::B, 2, vec![0.4, 0.1], 500, 7);
    let e = simulate(&c).unwrap();
    for y in &e.terminal {
        assert!(c.rs.in_chamber(y), "{y:?}");
    }
    assert!(e.rejected_steps as f64 <= 1e-3 * e.accepted_steps as f64);
}

#[test]
fn bessel_process_second_moment() {
    // E[Y_t²] = y₀² + (2k₀ + 1)t for the rank-one B process.
    let c = SdeConfig { t_end: 1.0, ..cfg(RootKind::B, 1, vec![1.0], 4000, 3) };
    let e = simulate(&c).unwrap();
    let r = moment_report(&e, &[TestFunction::new("y^2", |y: &[f64]| y[0] * y[0])]).unwrap();
    assert!((r[0].estimate - 4.0).abs() < 4.0 * r[0].std_error, "{:?}", r[0]);
}

#[test]
fn density_mean_matches_monte_carlo_loosely() {
    let c = cfg(RootKind::D, 2, vec![1.2, 0.3], 4000, 11);
    let e = simulate(&c).unwrap();
    let f = TestFunction::new("y1", |y: &[f64]| y[0]);
    let r = moment_report(&e, &[f]).unwrap();
    let model = DensityModel::new(Arc::new(JackStore::new()), c.rs.clone(), c.mult, &default_quadrature(2, &c.mult), 30).unwrap();
    let p = model.prepared(c.t_end, &c.y0).unwrap();
    let rule = QuadratureSpec { panels: 16, ..QuadratureSpec::simple_root() };
    let mean = integrate_chamber(|y| y[0] * p.forward(y), &c.rs, &rule).unwrap().estimate;
    assert!((r[0].estimate - mean).abs() < 4.0 * r[0].std_error, "{} vs {mean}", r[0].estimate);
}
