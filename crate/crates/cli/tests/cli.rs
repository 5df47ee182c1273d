use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chamber-bessel"))
        .args(args)
        .env("CHAMBER_BESSEL_CACHE", cache)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

#[test]
fn eval_bessel_emits_one_record() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["eval", "bessel", "--kind", "D", "--m", "2", "--k1", "1", "--x", "1,0.5", "--y", "0.8,0.2"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["command"], "eval bessel");
    assert_eq!(v["converged"], true);
    assert!((v["value"].as_f64().unwrap() - 1.1005385209178076).abs() < 1e-14);
    assert_eq!(v["config"]["kind"], "D");
    assert_eq!(v["config"]["cache_dir"], dir.path().display().to_string());
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("\"value\": 1.1005385209178076e0"), "{text}");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&run(d, &["eval", "bessel", "--kind", "D", "--m", "2", "--x", "1,0.5"])), 2);
    assert_eq!(code(&run(d, &["eval", "density", "--kind", "A", "--m", "2", "--k1", "1", "--t", "1", "--x", "2,1", "--y", "1,2"])), 3);
    assert_eq!(code(&run(d, &["eval", "bessel", "--kind", "Q", "--x", "1", "--y", "1"])), 2);
    assert_eq!(code(&run(d, &["eval", "bessel", "--kind", "A", "--x", "1,x", "--y", "1,2"])), 2);
    assert_eq!(code(&run(d, &["eval", "bessel", "--kind", "D", "--m", "2", "--k1", "-1", "--x", "1,0.5", "--y", "1,0.2"])), 3);
    assert_eq!(code(&run(d, &["verify", "nosuch"])), 2);
    assert_eq!(code(&run(d, &["simulate", "--kind", "B", "--m", "2", "--y0", "1.5,0.5", "--paths", "0"])), 2);
    assert_eq!(code(&run(d, &["nosuchcommand"])), 2);
    assert_eq!(code(&run(d, &["--help"])), 0);
}

#[test]
fn csv_and_json_carry_the_same_digits() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["eval", "density", "--kind", "B", "--m", "2", "--t", "1", "--x", "1.2,0.4", "--y", "0.9,0.3"];
    let j = run(dir.path(), &args);
    let mut with_csv = args.to_vec();
    with_csv.extend(["--format", "csv"]);
    let c = run(dir.path(), &with_csv);
    assert_eq!(code(&j), 0);
    assert_eq!(code(&c), 0);
    let csv = String::from_utf8(c.stdout).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("value,layers_used,converged"));
    let value = lines.next().unwrap().split(',').next().unwrap().to_string();
    assert!(String::from_utf8_lossy(&j.stdout).contains(&format!("\"value\": {value}")));
}

#[test]
fn config_file_then_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "[root]\nkind = \"D\"\nm = 2\nk1 = 2.0\n\n[point]\nx = [1.0, 0.5]\ny = [0.8, 0.2]\n\n[series]\nmax_weight = 24\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let from_file = json(&run(dir.path(), &["--config", cfg, "eval", "bessel"]));
    assert_eq!(from_file["config"]["k1"].as_f64(), Some(2.0));
    assert_eq!(from_file["config"]["max_weight"], 24);
    let overridden = json(&run(dir.path(), &["--config", cfg, "eval", "bessel", "--k1", "1"]));
    assert_eq!(overridden["config"]["k1"].as_f64(), Some(1.0));
    let flags = json(&run(dir.path(), &["eval", "bessel", "--kind", "D", "--k1", "1", "--max-weight", "24", "--x", "1,0.5", "--y", "0.8,0.2"]));
    assert_eq!(overridden["value"], flags["value"]);
    std::fs::write(dir.path().join("bad.toml"), "[root]\nkindd = 1\n").unwrap();
    let bad = dir.path().join("bad.toml");
    assert_eq!(code(&run(dir.path(), &["--config", bad.to_str().unwrap(), "eval", "bessel"])), 2);
}

#[test]
fn cache_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let o = run(&cache, &["calibrate", "--family", "f01", "--m", "2", "--phi", "0.5"]);
    assert_eq!(code(&o), 0);
    assert!((json(&o)["kappa"].as_f64().unwrap() - 1.5).abs() < 1e-10);
    let files: Vec<_> = std::fs::read_dir(&cache).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    assert!(files.iter().any(|f| f == "detrep_v1.txt"), "{files:?}");
    assert!(files.iter().any(|f| f.starts_with("jackcache_v1")), "{files:?}");
    let flag = dir.path().join("flag");
    let o = run(&cache, &["--cache-dir", flag.to_str().unwrap(), "table", "jack", "--alpha", "1", "--m", "2", "--weight", "2"]);
    assert_eq!(code(&o), 0);
    assert!(flag.exists());
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("tau,mu,coefficient"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn verify_writes_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.json");
    let o = run(dir.path(), &["verify", "symmetrize", "--json", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["suite"], "symmetrize");
    let checks = v["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    for c in checks {
        assert_eq!(c["pass"], true);
        assert!(c["residual"].as_f64().unwrap() <= c["tolerance"].as_f64().unwrap());
    }
    assert!(String::from_utf8_lossy(&o.stdout).contains("[PASS]"));
}

#[test]
fn verify_shift_reports_the_failing_constant() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["verify", "shift"]);
    assert_eq!(code(&o), 1);
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("[FAIL] shift decomposition, C = 2^m, D2"));
    assert!(text.contains("[PASS] shift decomposition, C = 2^m (q−½)_(1^m), D2"));
}

#[test]
fn simulate_is_reproducible_and_compares() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let files = |tag: &str| (d.join(format!("{tag}.csv")), d.join(format!("{tag}.json")));
    let go = |tag: &str, extra: &[&str]| {
        let (c, j) = files(tag);
        let mut args = vec!["simulate", "--kind", "B", "--m", "2", "--k0", "1", "--k1", "1", "--y0", "1.5,0.5", "--t", "1"];
        args.extend(["--paths", "1500", "--dt", "0.002", "--seed", "42"]);
        args.extend(["--csv", c.to_str().unwrap(), "--json", j.to_str().unwrap()]);
        args.extend(extra);
        run(d, &args)
    };
    let a = go("a", &["--compare"]);
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stdout));
    assert!(String::from_utf8_lossy(&a.stdout).contains("[PASS] p1(y^2)"));
    assert_eq!(code(&go("b", &[])), 0);
    assert_eq!(code(&go("c", &[])), 0);
    let read = |p: std::path::PathBuf| std::fs::read(p).unwrap();
    assert_eq!(read(files("a").0), read(files("b").0));
    assert_eq!(read(files("b").1), read(files("c").1));
    let csv = String::from_utf8(read(files("a").0)).unwrap();
    assert_eq!(csv.lines().next(), Some("path,y1,y2"));
    assert_eq!(csv.lines().count(), 1501);
    let v: Value = serde_json::from_slice(&read(files("a").1)).unwrap();
    let moments = v["moments"].as_array().unwrap();
    assert_eq!(moments.len(), 3);
    assert_eq!(moments[0]["n_paths"], 1500);
    assert_eq!(moments[0]["seed"], 42);
    assert_eq!(v["config"]["seed"], 42);
    assert_eq!(v["comparison"].as_array().unwrap().len(), 3);
}
