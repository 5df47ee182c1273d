//! Acceptance criteria 1-10. Prints one line per criterion and exits non-zero
//! when a criterion fails that is not listed in `KNOWN_RED`.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use chamber_bessel::detrep::DetRepStore;
use chamber_bessel::jack::{jack_expansion_exact, JackStore};
use chamber_bessel::partitions::{enumerate_partitions, Partition};
use chamber_bessel::verify::{Check, Verifier};
use chamber_bessel::Result;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The decomposition with coefficient ∏(x_i y_i / 2) does not hold; the
/// corrected constant is checked alongside and reported in the note.
const KNOWN_RED: &[u8] = &[6];

struct Outcome {
    id: u8,
    title: &'static str,
    checks: Vec<Check>,
    note: String,
    secs: f64,
}

impl Outcome {
    fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    fn worst(&self) -> Option<&Check> {
        self.checks.iter().max_by(|a, b| (a.residual / a.tolerance.max(1e-300)).total_cmp(&(b.residual / b.tolerance.max(1e-300))))
    }
}

fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Evaluates Σ x_i² ∂_i² P + (2/α) Σ_{i≠j} x_i²/(x_i − x_j) ∂_i P at x with
/// P expanded into ordinary monomials.
fn operator_at(poly: &[(Partition, BigRational)], alpha: &BigRational, x: &[BigRational]) -> (BigRational, BigRational) {
    let m = x.len();
    let zero = rational(0, 1);
    let mut value = zero.clone();
    let mut d1 = vec![zero.clone(); m];
    let mut d2 = vec![zero.clone(); m];
    let pow = |v: &BigRational, e: i64| -> BigRational {
        if e < 0 {
            return rational(0, 1);
        }
        (0..e).fold(rational(1, 1), |acc, _| acc * v)
    };
    for (mu, c) in poly {
        for exps in mu.orbit(m) {
            let e: Vec<i64> = exps.iter().map(|&v| i64::from(v)).collect();
            let full: BigRational = (0..m).map(|i| pow(&x[i], e[i])).fold(rational(1, 1), |a, b| a * b);
            value += c * &full;
            for i in 0..m {
                let rest: BigRational = (0..m).filter(|&j| j != i).map(|j| pow(&x[j], e[j])).fold(rational(1, 1), |a, b| a * b);
                d1[i] += c * rational(e[i], 1) * pow(&x[i], e[i] - 1) * &rest;
                d2[i] += c * rational(e[i] * (e[i] - 1), 1) * pow(&x[i], e[i] - 2) * &rest;
            }
        }
    }
    let two_over_alpha = rational(2, 1) / alpha;
    let mut out = zero;
    for i in 0..m {
        out += &x[i] * &x[i] * &d2[i];
        for j in 0..m {
            if j != i {
                out += &two_over_alpha * &x[i] * &x[i] / (&x[i] - &x[j]) * &d1[i];
            }
        }
    }
    (out, value)
}

fn rho_exact(tau: &Partition, alpha: &BigRational, m: usize) -> BigRational {
    let t = rational(2, 1) / alpha;
    let mut acc = rational(0, 1);
    for (i, &p) in tau.parts().iter().enumerate() {
        let p = i64::from(p);
        acc += rational(p * (p - 1), 1) - &t * rational(p * i as i64, 1);
    }
    acc + t * rational((m as i64 - 1) * i64::from(tau.weight()), 1)
}

/// Pointwise exact check at three distinct rational points per τ.
fn exact_eigen_pointwise() -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut checks = Vec::new();
    for (n, d) in [(1, 2), (1, 1), (2, 1), (3, 1)] {
        let alpha = rational(n, d);
        let mut mismatches = 0usize;
        let mut count = 0usize;
        for m in 1..=3 {
            for w in 0..=6 {
                for tau in enumerate_partitions(w, m) {
                    let e = jack_expansion_exact(&tau, alpha.clone(), m)?;
                    let rho = rho_exact(&tau, &alpha, m);
                    for _ in 0..3 {
                        let mut ints: Vec<i64> = Vec::new();
                        while ints.len() < m {
                            let v = rng.random_range(1..40);
                            if !ints.contains(&v) {
                                ints.push(v);
                            }
                        }
                        let x: Vec<BigRational> = ints.iter().map(|&v| rational(v, 7)).collect();
                        let (lhs, p) = operator_at(&e.coeffs, &alpha, &x);
                        count += 1;
                        if lhs != &rho * &p {
                            mismatches += 1;
                        }
                    }
                }
            }
        }
        checks.push(Check::new(format!("exact operator at {count} rational points, α={n}/{d}"), mismatches as f64, 0.0));
    }
    Ok(checks)
}

fn run() -> Result<Vec<Outcome>> {
    let jack = Arc::new(JackStore::new());
    let v = Verifier::new(jack.clone(), DetRepStore::new(jack));
    let mut out = Vec::new();
    let start = Instant::now();
    let jack_checks = v.jack_suite()?;
    // criteria 1-3 share one pass over the Jack tables
    let shared = start.elapsed().as_secs_f64();
    let mut timed = |id, title, f: &mut dyn FnMut() -> Result<(Vec<Check>, String)>| -> Result<()> {
        let start = Instant::now();
        let (checks, note) = f()?;
        let extra = if id <= 3 { shared } else { 0.0 };
        out.push(Outcome { id, title, checks, note, secs: start.elapsed().as_secs_f64() + extra });
        Ok(())
    };

    let pick = |key: &str| -> Vec<Check> { jack_checks.iter().filter(|c| c.name.contains(key)).cloned().collect() };
    let (c1, c2, c3) = (pick("sum of C_τ"), pick("eigen-equation"), pick("s_τ constant"));
    timed(1, "Jack normalization Σ C_τ = p₁^n", &mut || Ok((c1.clone(), String::new())))?;
    timed(2, "eigen-equation, exact and float", &mut || {
        let mut c = c2.clone();
        c.extend(exact_eigen_pointwise()?);
        Ok((c, String::new()))
    })?;
    timed(3, "α=1 Schur proportionality", &mut || Ok((c3.clone(), String::new())))?;
    timed(4, "determinantal forms vs series", &mut || Ok((v.detrep_suite()?, String::new())))?;
    timed(5, "density at k≡1 vs Grabiner, A/B/D", &mut || Ok((v.theorem1_suite()?, String::new())))?;
    timed(6, "shift decomposition with C = 2^m", &mut || {
        let all = v.shift_suite()?;
        let (printed, corrected): (Vec<Check>, Vec<Check>) = all.into_iter().partition(|c| c.name.contains("C = 2^m,"));
        let worst = corrected.iter().map(|c| c.residual).fold(0.0, f64::max);
        let ok = corrected.iter().all(|c| c.pass);
        let note = format!(
            "with C = 2^m (q−½)_(1^m): worst {worst:.3e} {}",
            if ok { "PASS" } else { "FAIL" }
        );
        Ok((printed, note))
    })?;
    timed(7, "symmetrization of J_D gives J_B(k₀=0)", &mut || Ok((v.symmetrize_suite()?, String::new())))?;
    timed(8, "density mass and Chapman–Kolmogorov", &mut || {
        let mut c = v.normalization_suite()?;
        c.extend(v.chapman_suite()?);
        Ok((c, String::new()))
    })?;
    timed(9, "Monte Carlo moments within 3σ", &mut || Ok((v.montecarlo_suite()?, String::new())))?;
    timed(10, "Grabiner cross forms", &mut || Ok((v.grabiner_forms()?, String::new())))?;
    Ok(out)
}

fn main() -> ExitCode {
    let verbose = std::env::args().any(|a| a == "--verbose");
    let outcomes = match run() {
        Ok(o) => o,
        Err(e) => {
            eprintln!("acceptance run aborted: {e}");
            return ExitCode::FAILURE;
        }
    };
    let mut unexpected = 0;
    for o in &outcomes {
        let worst = o.worst().map(|c| format!("worst {:.3e} (tol {:.1e}) at {}", c.residual, c.tolerance, c.name)).unwrap_or_default();
        let tag = match (o.pass(), KNOWN_RED.contains(&o.id)) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => {
                unexpected += 1;
                "FAIL"
            }
        };
        println!("criterion {:>2} {tag}: {} [{:.1}s] {worst}", o.id, o.title, o.secs);
        if !o.note.is_empty() {
            println!("             {}", o.note);
        }
        if verbose || !o.pass() {
            for c in &o.checks {
                println!("               {c}");
            }
        }
    }
    let passed = outcomes.iter().filter(|o| o.pass()).count();
    println!("acceptance: {passed}/{} criteria pass, {unexpected} unexpected failures", outcomes.len());
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
