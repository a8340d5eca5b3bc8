//! Acceptance suite: one test per criterion, each printing a PASS line
//! (run with `--nocapture` to see them). Criteria cover prime counts, the
//! three budget regimes, RMS slope scaling, the quasi-random-phase
//! heuristic, kernel fidelity and determinism, the crossing detector, and
//! byte-identical experiment reruns.

mod common;

use std::path::Path;
use std::process::Command;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use prime_lab::analysis::{
    amplitude_budget, detect_crossings, empirical_rms_signal, empirical_rms_slope,
    fit_scaling_exponent, heuristic_rms_slope, log_log_antiderivative,
};
use prime_lab::experiments::{compute_weight_comparison, ExperimentConfig};
use prime_lab::signal::{eval_grid, eval_point, Harmonic};
use prime_lab::{build_ensemble, sieve_primes, SampleGrid};

// Criteria run one at a time so the per-criterion runtime budgets mean
// something on a loaded machine.
static SERIAL: Mutex<()> = Mutex::new(());

fn serial() -> std::sync::MutexGuard<'static, ()> {
    SERIAL.lock().unwrap_or_else(|poisoned| poisoned.into_inner())
}

#[test]
fn criterion_01_prime_counts() {
    let _guard = serial();
    let started = Instant::now();
    let small = sieve_primes(100).unwrap();
    let large = sieve_primes(1_000_000).unwrap();
    assert_eq!(small.len(), 25, "pi(100)");
    assert_eq!(large.len(), 78_498, "pi(1e6)");
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");

    // Exhaustive cross-check against trial division up to 1e4.
    let oracle = common::trial_division_primes(10_000);
    let sieved = sieve_primes(10_000).unwrap();
    assert_eq!(sieved.primes(), &oracle[..]);

    println!("criterion 01 PASS - prime counts exact (25 and 78498) in {elapsed:?}");
}

#[test]
fn criterion_02_balance_budget_growth() {
    let _guard = serial();
    let started = Instant::now();
    let table = sieve_primes(1_000_000).unwrap();
    let cutoffs = [1_000u64, 10_000, 100_000, 1_000_000];
    let budgets: Vec<f64> = cutoffs
        .iter()
        .map(|&p| amplitude_budget(&table.truncated(p), 0.5).unwrap().exact)
        .collect();
    for w in cutoffs.windows(2).zip(budgets.windows(2)) {
        let (pair, vals) = w;
        let diff = vals[1] - vals[0];
        let lnln = log_log_antiderivative(pair[1] as f64) - log_log_antiderivative(pair[0] as f64);
        let rel = (diff - lnln).abs() / lnln;
        assert!(
            rel < 0.15,
            "increment {} -> {}: {diff} vs lnln {lnln} (rel {rel})",
            pair[0],
            pair[1]
        );
    }
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(5), "took {elapsed:?}");

    // Direct-summation oracle over trial-division primes at the endpoint.
    let oracle = common::direct_budget(&common::trial_division_primes(1_000_000), 0.5);
    assert!((budgets[3] - oracle).abs() <= 1e-10 * oracle);

    println!("criterion 02 PASS - balance budget tracks ln ln P within 15% in {elapsed:?}");
}

#[test]
fn criterion_03_overdamped_boundedness() {
    let _guard = serial();
    let started = Instant::now();
    let table = sieve_primes(1_000_000).unwrap();
    let budget = |p: u64| amplitude_budget(&table.truncated(p), 0.75).unwrap().exact;
    let gap_fine = budget(1_000_000) - budget(10_000);
    let gap_coarse = budget(1_000_000) - budget(100);
    assert!(gap_fine < 0.01, "B_1e6 - B_1e4 = {gap_fine}");
    assert!(gap_coarse < 0.06, "B_1e6 - B_100 = {gap_coarse}");
    assert!(gap_fine > 0.0 && gap_coarse > 0.0);
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    println!(
        "criterion 03 PASS - over-damped budget bounded (gaps {gap_fine:.5} / {gap_coarse:.5}) in {elapsed:?}"
    );
}

#[test]
fn criterion_04_high_energy_growth() {
    let _guard = serial();
    let started = Instant::now();
    let table = sieve_primes(1_000_000).unwrap();
    let b_small = amplitude_budget(&table.truncated(10_000), 0.25).unwrap().exact;
    let b_large = amplitude_budget(&table, 0.25).unwrap().exact;
    let ratio = b_large / b_small;
    assert!(ratio > 5.0, "ratio {ratio}");
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    println!("criterion 04 PASS - high-energy budget ratio {ratio:.3} > 5 in {elapsed:?}");
}

#[test]
fn criterion_05_rms_slope_scaling() {
    let _guard = serial();
    let started = Instant::now();
    let cutoffs = [10_000u64, 100_000, 1_000_000];
    let fit = |x: f64| fit_scaling_exponent(x, &cutoffs).unwrap().fitted_exponent;
    let low = fit(0.25);
    let mid = fit(0.5);
    let high = fit(0.75);
    assert!((low - 0.25).abs() < 0.06, "x=0.25 fit {low}");
    assert!(high.abs() < 0.02, "x=0.75 fit {high}");
    assert!(high < mid && mid < low, "ordering: {high} {mid} {low}");
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    println!(
        "criterion 05 PASS - fitted exponents {low:.4} / {mid:.4} / {high:.4} in {elapsed:?}"
    );
}

#[test]
fn criterion_06_quasi_random_phase() {
    let _guard = serial();
    let started = Instant::now();
    let table = sieve_primes(10_000).unwrap();
    let ensemble = build_ensemble(&table, 0.5).unwrap();
    let window = SampleGrid::new(1_000.0, 2_000.0, 2).unwrap();

    let sampled_slope = empirical_rms_slope(&ensemble, &window, 5_000, 0).unwrap();
    let heuristic = heuristic_rms_slope(&table, 0.5).unwrap();
    let slope_ratio = sampled_slope / heuristic;
    assert!(
        (slope_ratio - 1.0).abs() < 0.25,
        "slope ratio {slope_ratio}"
    );

    let sampled_signal = empirical_rms_signal(&ensemble, &window, 5_000, 0).unwrap();
    let predicted = (amplitude_budget(&table, 0.5).unwrap().exact / 2.0).sqrt();
    let signal_ratio = sampled_signal / predicted;
    assert!(
        (signal_ratio - 1.0).abs() < 0.25,
        "signal ratio {signal_ratio}"
    );

    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    println!(
        "criterion 06 PASS - sampled/heuristic RMS ratios {slope_ratio:.4} (slope), {signal_ratio:.4} (signal) in {elapsed:?}"
    );
}

#[test]
fn criterion_07_kernel_fidelity() {
    let _guard = serial();
    let table = sieve_primes(1_000_000).unwrap();
    let ensemble = build_ensemble(&table, 0.5).unwrap();
    let grid = SampleGrid::new(140.0, 160.0, 3000).unwrap();

    let started = Instant::now();
    let signal = eval_grid(&ensemble, &grid, true);
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(60), "kernel took {elapsed:?}");

    // Recurrence vs direct pointwise evaluation, every grid point.
    let scale = ensemble.amplitude_bound();
    for (k, t) in grid.points().enumerate() {
        let direct = eval_point(&ensemble, t);
        assert!(
            (signal.values()[k] - direct).abs() <= 1e-9 * scale,
            "index {k}"
        );
    }

    // Sixteen seeded random indices against the high-precision oracle.
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..16 {
        let k = (rng.next_u64() % 3000) as usize;
        let oracle = common::direct_signal(table.primes(), 0.5, grid.point(k));
        assert!(
            (signal.values()[k] - oracle).abs() < 1e-8,
            "index {k}: {} vs oracle {oracle}",
            signal.values()[k]
        );
    }

    // Bit-identical output across thread counts.
    for threads in [1usize, 4, 8] {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        let run = pool.install(|| eval_grid(&ensemble, &grid, true));
        let same_values = run
            .values()
            .iter()
            .zip(signal.values())
            .all(|(a, b)| a.to_bits() == b.to_bits());
        let same_derivs = run
            .derivatives()
            .unwrap()
            .iter()
            .zip(signal.derivatives().unwrap())
            .all(|(a, b)| a.to_bits() == b.to_bits());
        assert!(same_values && same_derivs, "{threads} threads diverged");
    }

    println!("criterion 07 PASS - kernel within 1e-9 of direct evaluation, bit-stable over 1/4/8 threads, grid in {elapsed:?}");
}

#[test]
fn criterion_08_crossing_detector() {
    let _guard = serial();
    // Single-frequency harness: roots of cos at odd multiples of pi/2.
    let harness = Harmonic {
        amplitude: 1.0,
        frequency: 1.0,
    };
    let grid = SampleGrid::new(0.0, 10.0, 1001).unwrap();
    let scan = detect_crossings(&harness.sample(&grid, false), &harness);
    let expected_roots = [
        std::f64::consts::FRAC_PI_2,
        3.0 * std::f64::consts::FRAC_PI_2,
        5.0 * std::f64::consts::FRAC_PI_2,
    ];
    let expected_slopes = [-1.0, 1.0, -1.0];
    assert_eq!(scan.crossings.len(), 3);
    for ((c, root), slope) in scan.crossings.iter().zip(expected_roots).zip(expected_slopes) {
        assert!((c.t0 - root).abs() < 1e-9, "root {} vs {root}", c.t0);
        assert!((c.slope - slope).abs() < 1e-6, "slope {} vs {slope}", c.slope);
    }

    // Prime ensemble: every reported crossing re-verified directly.
    let ensemble = build_ensemble(&sieve_primes(10).unwrap(), 0.5).unwrap();
    let grid = SampleGrid::new(0.0, 30.0, 3001).unwrap();
    let signal = eval_grid(&ensemble, &grid, false);
    let scan = detect_crossings(&signal, &ensemble);
    assert!(!scan.crossings.is_empty());
    let dt = grid.spacing();
    for c in &scan.crossings {
        assert!(eval_point(&ensemble, c.t0).abs() < 1e-9, "t0 {}", c.t0);
        let sign_change = eval_point(&ensemble, c.t0 - dt).signum()
            * eval_point(&ensemble, c.t0 + dt).signum();
        assert_eq!(sign_change, -1.0, "no strict sign change at {}", c.t0);
    }

    println!(
        "criterion 08 PASS - harness roots/slopes exact, {} ensemble crossings re-verified",
        scan.crossings.len()
    );
}

#[test]
fn criterion_09_figure_properties() {
    let _guard = serial();
    let dir = tempfile::tempdir().unwrap();
    let config = ExperimentConfig::weight_comparison(dir.path());
    let cells = compute_weight_comparison(&config).unwrap();
    assert_eq!(cells.len(), 6, "3 exponents x 2 cutoffs");

    let cell = |x: f64, p: u64| {
        cells
            .iter()
            .find(|c| c.exponent == x && c.cutoff == p)
            .unwrap()
    };

    // High-energy regime: the large ensemble dwarfs the small one.
    let amp_ratio = cell(0.25, 1_000_000).max_abs / cell(0.25, 100).max_abs;
    assert!(amp_ratio > 3.0, "amplitude ratio {amp_ratio}");

    // Over-damped regime: the energy gap stays small.
    let gap = cell(0.75, 1_000_000).budget_exact - cell(0.75, 100).budget_exact;
    assert!(gap < 0.06, "energy gap {gap}");

    // Balance regime: both cutoffs develop wells deeper than 1.
    assert!(cell(0.5, 100).well_count >= 1);
    assert!(cell(0.5, 1_000_000).well_count >= 1);

    println!(
        "criterion 09 PASS - 6 cells; x=0.25 ratio {amp_ratio:.2} > 3, x=0.75 gap {gap:.4} < 0.06, x=0.5 wells {} / {}",
        cell(0.5, 100).well_count,
        cell(0.5, 1_000_000).well_count
    );
}

#[test]
fn criterion_10_experiment_determinism() {
    let _guard = serial();
    let binary = env!("CARGO_BIN_EXE_prime-lab");
    let commands: [&[&str]; 3] = [
        &["figure1"],
        &["figure2"],
        &["scaling"],
    ];
    for args in commands {
        let dir_a = tempfile::tempdir().unwrap();
        let dir_b = tempfile::tempdir().unwrap();
        for dir in [dir_a.path(), dir_b.path()] {
            let output = Command::new(binary)
                .args(args)
                .args(["--seed", "123", "--quiet", "--out"])
                .arg(dir)
                .output()
                .unwrap();
            assert!(
                output.status.success(),
                "{args:?} failed: {}",
                String::from_utf8_lossy(&output.stderr)
            );
        }
        assert_dirs_byte_identical(dir_a.path(), dir_b.path(), args[0]);
    }
    println!("criterion 10 PASS - figure1/figure2/scaling reruns byte-identical");
}

fn assert_dirs_byte_identical(a: &Path, b: &Path, what: &str) {
    let mut names: Vec<String> = std::fs::read_dir(a)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert!(!names.is_empty(), "{what}: no outputs");
    let mut names_b: Vec<String> = std::fs::read_dir(b)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names_b.sort();
    assert_eq!(names, names_b, "{what}: file sets differ");
    for name in &names {
        let bytes_a = std::fs::read(a.join(name)).unwrap();
        let bytes_b = std::fs::read(b.join(name)).unwrap();
        assert!(bytes_a == bytes_b, "{what}: {name} differs between runs");
    }
}
