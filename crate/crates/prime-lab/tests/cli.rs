//! End-to-end tests of the binary: flag parsing, exit codes, stdout
//! contracts, file outputs, and the sieve cache.

use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prime-lab"))
        .args(args)
        .env_remove("PRIME_LAB_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn primes_count_only() {
    let out = run(&["primes", "--cutoff", "100", "--count-only", "--quiet"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "25");
}

#[test]
fn primes_accepts_scientific_notation() {
    let out = run(&["primes", "--cutoff", "1e2", "--count-only", "--quiet"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "25");
}

#[test]
fn primes_lists_values() {
    let out = run(&["primes", "--cutoff", "10", "--quiet"]);
    assert_eq!(stdout(&out), "2\n3\n5\n7\n");
}

#[test]
fn eval_point_value() {
    let out = run(&["eval", "--cutoff", "2", "--exponent", "0.5", "--t", "0", "--quiet"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("0.70711"), "got {:?}", stdout(&out));
}

#[test]
fn budget_reports_regime() {
    let out = run(&["budget", "--cutoff", "10", "--exponent", "0.5", "--quiet"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("1.17619"), "got {text:?}");
    assert!(text.contains("Balance"), "got {text:?}");
}

#[test]
fn coincidence_fraction_value() {
    // t = pi / ln 2 puts exactly the first of four primes in a 0.01 band.
    let t = std::f64::consts::PI / std::f64::consts::LN_2;
    let out = run(&[
        "coincidence",
        "--cutoff",
        "10",
        "--t",
        &t.to_string(),
        "--delta",
        "0.01",
        "--quiet",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "0.25000");
}

#[test]
fn validation_failures_exit_one() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    let bad_flag = run(&["primes", "--cutoff", "2.5"]);
    assert_eq!(bad_flag.status.code(), Some(1));
    assert!(stderr(&bad_flag).contains("--cutoff"), "error names the flag");
    assert_eq!(run(&["budget", "--exponent", "-1"]).status.code(), Some(1));
    let bad_theta = run(&["eval", "--theta", "spiral", "--t", "1"]);
    assert_eq!(bad_theta.status.code(), Some(1));
    assert!(stderr(&bad_theta).contains("--theta"));
    let bad_delta = run(&["coincidence", "--delta", "7"]);
    assert_eq!(bad_delta.status.code(), Some(1));
    let bad_cutoffs = run(&["slope", "--cutoffs", "1e4,abc"]);
    assert_eq!(bad_cutoffs.status.code(), Some(1));
    assert!(stderr(&bad_cutoffs).contains("--cutoffs"));
}

#[test]
fn unknown_subcommand_prints_usage() {
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).to_lowercase().contains("usage"));
}

#[test]
fn io_failures_exit_two() {
    let file = tempfile::NamedTempFile::new().unwrap();
    let below_file = format!("{}/sub", file.path().display());
    let out = run(&["figure1", "--cutoff", "10", "--samples", "16", "--out", &below_file]);
    assert_eq!(out.status.code(), Some(2), "stderr: {}", stderr(&out));
}

#[test]
fn help_exits_zero_and_touches_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_prime-lab"))
        .args(["--help"])
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for sub in [
        "primes",
        "eval",
        "budget",
        "slope",
        "crossings",
        "wells",
        "coincidence",
        "figure1",
        "figure2",
        "scaling",
    ] {
        assert!(text.contains(sub), "--help lists {sub}");
    }
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);

    // Per-subcommand help documents the flags.
    for sub in ["eval", "figure2", "scaling"] {
        let out = run(&[sub, "--help"]);
        assert_eq!(out.status.code(), Some(0));
        assert!(stdout(&out).contains("--seed"));
    }
}

#[test]
fn quiet_suppresses_timing_lines() {
    let noisy = run(&["primes", "--cutoff", "10", "--count-only"]);
    assert!(stdout(&noisy).contains("# completed in"));
    let quiet = run(&["primes", "--cutoff", "10", "--count-only", "--quiet"]);
    assert!(!stdout(&quiet).contains("# completed in"));
}

#[test]
fn crossings_and_wells_write_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "crossings",
        "--cutoff",
        "10",
        "--t-start",
        "0",
        "--t-end",
        "30",
        "--samples",
        "1500",
        "--quiet",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = std::fs::read_to_string(dir.path().join("crossings.csv")).unwrap();
    assert!(text.starts_with("t0,slope,residual\n"));
    assert!(text.lines().count() > 1);

    let out = run(&[
        "wells",
        "--cutoff",
        "100",
        "--quiet",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("wells.csv")).unwrap();
    assert_eq!(text.lines().count(), 5, "4 wells + header: {text}");
}

#[test]
fn eval_grid_writes_signal_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "eval",
        "--cutoff",
        "10",
        "--t-start",
        "0",
        "--t-end",
        "1",
        "--samples",
        "8",
        "--derivative",
        "--quiet",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("signal.csv")).unwrap();
    assert!(text.starts_with("t,value,derivative\n"));
    assert_eq!(text.lines().count(), 9);
}

#[test]
fn cache_env_variable_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("primes.cache");
    let out = Command::new(env!("CARGO_BIN_EXE_prime-lab"))
        .args(["primes", "--cutoff", "1000", "--count-only", "--quiet"])
        .env("PRIME_LAB_CACHE", &cache)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "168");
    assert!(cache.exists(), "cache file written");

    // Second run loads the cache (and still answers correctly).
    let out = Command::new(env!("CARGO_BIN_EXE_prime-lab"))
        .args(["primes", "--cutoff", "100", "--count-only", "--quiet"])
        .env("PRIME_LAB_CACHE", &cache)
        .output()
        .unwrap();
    assert_eq!(stdout(&out).trim(), "25");

    // A corrupt cache is a hard error, not silent fallback.
    std::fs::write(&cache, "4\n6\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_prime-lab"))
        .args(["primes", "--cutoff", "100", "--count-only"])
        .env("PRIME_LAB_CACHE", &cache)
        .output()
        .unwrap();
    assert_ne!(out.status.code(), Some(0));
}

#[test]
fn figure1_respects_config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("fig1.conf");
    let out_dir = dir.path().join("fig1");
    std::fs::write(
        &conf,
        format!(
            "experiment = progressive\ncutoff = 10\nsamples = 32\nt_start = 140\nt_end = 160\nout = {}\n",
            out_dir.display()
        ),
    )
    .unwrap();

    // Config alone: cutoff 10 gives pi(10) = 4 prefix columns.
    let out = run(&["figure1", "--quiet", "--config", conf.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let csv = std::fs::read_to_string(out_dir.join("progressive.csv")).unwrap();
    assert!(csv.starts_with("t,upto_2,upto_3,upto_5,upto_7\n"));

    // Flag wins over the file: cutoff 20 gives pi(20) = 8 columns.
    let out = run(&[
        "figure1",
        "--quiet",
        "--config",
        conf.to_str().unwrap(),
        "--cutoff",
        "20",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(out_dir.join("progressive.csv")).unwrap();
    let header_cols = csv.lines().next().unwrap().split(',').count();
    assert_eq!(header_cols, 9);

    // A config file written for another experiment is rejected.
    let wrong = dir.path().join("wrong.conf");
    std::fs::write(&wrong, "experiment = scaling_study\n").unwrap();
    let out = run(&["figure1", "--config", wrong.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn figure2_small_run_emits_expected_files() {
    let dir = tempfile::tempdir().unwrap();
    let refs = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/zeta_zeros_140_160.txt");
    let out = run(&[
        "figure2",
        "--cutoffs",
        "100,200",
        "--samples",
        "400",
        "--refs",
        refs.to_str().unwrap(),
        "--quiet",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    for name in [
        "signal_x0.25_P100.csv",
        "signal_x0.5_P200.csv",
        "signal_x0.75_P200.csv",
        "weight_comparison.svg",
        "summary.csv",
    ] {
        assert!(dir.path().join(name).exists(), "{name} missing");
    }
    let summary = std::fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 7, "6 cells + header");

    // Missing reference file is an I/O failure.
    let out = run(&[
        "figure2",
        "--cutoffs",
        "100,200",
        "--samples",
        "100",
        "--refs",
        "/nonexistent/refs.txt",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn scaling_small_run_prints_and_writes() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "scaling",
        "--cutoffs",
        "1e3,2e3,4e3",
        "--exponents",
        "0.5",
        "--empirical-samples",
        "200",
        "--quiet",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("Balance"));
    for name in ["budgets.csv", "slopes.csv", "fits.csv", "scaling.svg"] {
        assert!(dir.path().join(name).exists(), "{name} missing");
    }
}

#[test]
fn threads_flag_does_not_change_output_files() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    for (dir, threads) in [(&dir_a, "1"), (&dir_b, "8")] {
        let out = run(&[
            "figure1",
            "--cutoff",
            "50",
            "--samples",
            "256",
            "--threads",
            threads,
            "--quiet",
            "--out",
            dir.path().to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    for name in ["progressive.csv", "progressive_wells.csv", "progressive.svg"] {
        let a = std::fs::read(dir_a.path().join(name)).unwrap();
        let b = std::fs::read(dir_b.path().join(name)).unwrap();
        assert_eq!(a, b, "{name} differs across thread counts");
    }
}
