use std::path::PathBuf;
use std::process::{Command, Output};

fn surfpoints(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_surfpoints"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("surfpoints-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn trace_at_one() {
    let o = surfpoints(&["trace", "--prime", "5", "--lambda", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "p,lambda,a_leg,a_cl,A_p\n5,1,,-2,-1\n");
}

#[test]
fn trace_table_json() {
    let o = surfpoints(&["trace", "--prime", "7", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r["A_p"].as_i64().unwrap().abs() <= 21));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["verify", "--primes", "4"],
        vec!["verify", "--primes", "5..50", "--suite", "nope"],
        vec!["trace", "--prime", "5", "--lambda", "0"],
        vec!["moments", "--prime", "7", "--max-m", "9"],
        vec!["distribution", "--prime", "101", "--bins", "5"],
        vec!["trace"],
        vec!["frobnicate"],
    ] {
        assert_eq!(surfpoints(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn verify_small_primes() {
    let o = surfpoints(&["verify", "--primes", "5..13", "--suite", "all"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    for r in v.as_array().unwrap() {
        assert!(r["failures"].as_array().unwrap().is_empty());
        assert!(r["checks"].as_u64().unwrap() > 0);
    }
    // Residue-gated halves are announced, never silently passed.
    assert!(String::from_utf8_lossy(&o.stderr).contains("skipping 9G9 checks"));
}

#[test]
fn verify_reports_failures_with_exit_1() {
    let o = surfpoints(&["verify", "--primes", "7", "--suite", "gn-as-stated"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let f = &v[0]["failures"][0];
    for key in ["identity", "inputs", "lhs", "rhs"] {
        assert!(f[key].is_string(), "{key}");
    }
}

#[test]
fn verify_gn_exhaustive_at_seven() {
    let o = surfpoints(&["verify", "--primes", "7", "--suite", "gn"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v[0].get("sampled").is_none());
}

#[test]
fn sampled_suites_record_their_lambdas() {
    let a = surfpoints(&[
        "verify", "--primes", "101", "--suite", "fast", "--seed", "5",
    ]);
    let b = surfpoints(&[
        "verify", "--primes", "101", "--suite", "fast", "--seed", "5",
    ]);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v[0]["sampled"].as_array().unwrap().len(), 20);
    assert_eq!(v[0]["seed"], 5);
}

#[test]
fn moments_targets() {
    let o = surfpoints(&["moments", "--prime", "101", "--max-m", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let targets: Vec<i64> = v[0]["targets"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t.as_i64().unwrap())
        .collect();
    assert_eq!(targets, [0, 1, -1, 3]);
    let g = surfpoints(&[
        "moments", "--primes", "7,11", "--suite", "3g3", "--format", "csv",
    ]);
    assert_eq!(g.status.code(), Some(0));
    let text = stdout(&g);
    assert!(text.starts_with("p,m,raw,normalized,normalized_approx,target,gap\n"));
    assert!(text.lines().skip(1).all(|l| l.starts_with("7,")));
}

#[test]
fn distribution_csv_columns() {
    let o = surfpoints(&["distribution", "--prime", "101", "--bins", "12"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "bin_left,bin_right,count,empirical_density,model_a,model_b"
    );
    let counts: u64 = lines
        .map(|l| l.split(',').nth(2).unwrap().parse::<u64>().unwrap())
        .sum();
    assert_eq!(counts, 100);
}

#[test]
fn gn_values_decode() {
    let o = surfpoints(&["gn", "--prime", "11", "--lambda", "3"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["family"], "9G9");
    assert!(v[0]["decoded"].as_i64().unwrap().abs() <= 33);
    assert_eq!(
        surfpoints(&["gn", "--prime", "7", "--lambda", "1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn gauss_and_jacobi() {
    let o = surfpoints(&["gauss", "--prime", "7", "--index", "2"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v[0]["abs_squared"].as_f64().unwrap() - 7.0).abs() < 1e-9);
    assert_eq!(v[0]["pi_exponent"], 4);
    let o = surfpoints(&["jacobi", "--prime", "7", "--index", "1", "--index2", "2"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let (re, im) = (v[0]["re"].as_f64().unwrap(), v[0]["im"].as_f64().unwrap());
    assert!((re * re + im * im - 7.0).abs() < 1e-9);
}

#[test]
fn config_file_and_out_path() {
    let cfg = scratch("run.toml");
    let out = scratch("trace.csv");
    std::fs::write(&cfg, "prime = 5\nlambda = 3\nformat = \"json\"\n").unwrap();
    let o = surfpoints(&[
        "trace",
        "--config",
        cfg.to_str().unwrap(),
        "--format",
        "csv",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("p,lambda,a_leg,a_cl,A_p\n5,3,"));
    std::fs::write(&cfg, "prime = \"five\"\n").unwrap();
    let o = surfpoints(&["trace", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}
