//! Command-line interface: every operation as a subcommand with reproducible
//! configuration. Exit codes: 0 success, 1 validation error, 2 runtime/I-O
//! error.

use std::collections::HashMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use crate::analysis::{
    amplitude_budget, coincidence_fraction, detect_crossings, detect_wells,
    fit_scaling_exponent_with_empirical,
};
use crate::error::{Error, Result};
use crate::experiments::{
    compute_progressive, compute_scaling_study, compute_weight_comparison, emit_progressive,
    emit_scaling_study, emit_weight_comparison, load_refs, ComparisonCell, ExperimentConfig,
    ExperimentKind, ProgressiveOutcome, ScalingOutcome, DEFAULT_SAMPLES, DEFAULT_T_END,
    DEFAULT_T_START,
};
use crate::primes::{sieve_primes, sieve_primes_cached, PrimeTable};
use crate::signal::{
    eval_derivative_point, eval_grid, eval_phase_referenced, eval_phase_referenced_point,
    eval_point, PhaseReference, SampleGrid,
};

/// Environment variable naming the sieve cache file.
pub const CACHE_ENV_VAR: &str = "PRIME_LAB_CACHE";

#[derive(Parser, Debug)]
#[command(
    name = "prime-lab",
    version,
    about = "Prime-weighted oscillatory signal laboratory",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Seed for all randomized sampling [default: 0]
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Cap the worker-thread count; outputs are identical for any value
    /// [default: all cores]
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Suppress timing lines on standard output
    #[arg(long, global = true)]
    quiet: bool,

    /// Prime cache file; overrides the PRIME_LAB_CACHE environment variable
    /// [default: none]
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sieve primes up to a cutoff and print them (or just the count)
    Primes {
        /// Upper bound; accepts scientific notation like 1e6 [default: 100]
        #[arg(long, value_parser = parse_count, default_value = "100")]
        cutoff: u64,
        /// Print only the number of primes
        #[arg(long)]
        count_only: bool,
    },

    /// Evaluate the raw signal at a point (--t) or on a grid
    Eval {
        /// Prime cutoff [default: 100]
        #[arg(long, value_parser = parse_count, default_value = "100")]
        cutoff: u64,
        /// Weight exponent x [default: 0.5]
        #[arg(long, default_value_t = 0.5)]
        exponent: f64,
        /// Evaluate at this single t instead of a grid [default: grid mode]
        #[arg(long)]
        t: Option<f64>,
        /// Grid start [default: 140]
        #[arg(long)]
        t_start: Option<f64>,
        /// Grid end [default: 160]
        #[arg(long)]
        t_end: Option<f64>,
        /// Grid sample count [default: 3000]
        #[arg(long, value_parser = parse_count)]
        samples: Option<u64>,
        /// Phase reference (zero | linear:<rate> | rs); selecting one
        /// evaluates the phase-referenced signal [default: raw signal]
        #[arg(long)]
        theta: Option<PhaseReference>,
        /// Also evaluate the derivative (raw signal only)
        #[arg(long)]
        derivative: bool,
        /// Directory for CSV output [default: none]
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Squared-amplitude budget with integral approximation and regime
    Budget {
        /// Prime cutoff [default: 100]
        #[arg(long, value_parser = parse_count, default_value = "100")]
        cutoff: u64,
        /// Weight exponent x [default: 0.5]
        #[arg(long, default_value_t = 0.5)]
        exponent: f64,
        /// Directory for CSV output [default: none]
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Heuristic vs sampled RMS slope across cutoffs, with a log-log fit
    Slope {
        /// Weight exponent x [default: 0.5]
        #[arg(long, default_value_t = 0.5)]
        exponent: f64,
        /// Comma-separated cutoffs [default: 1e4,1e5,1e6]
        #[arg(long)]
        cutoffs: Option<String>,
        /// Sampling window start [default: 1000]
        #[arg(long, default_value_t = 1000.0)]
        t_start: f64,
        /// Sampling window end [default: 2000]
        #[arg(long, default_value_t = 2000.0)]
        t_end: f64,
        /// Random sample count [default: 5000]
        #[arg(long, value_parser = parse_count, default_value = "5000")]
        samples: u64,
        /// Directory for CSV output [default: none]
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Detect zero-like crossings of the raw signal on a grid
    Crossings {
        /// Prime cutoff [default: 100]
        #[arg(long, value_parser = parse_count, default_value = "100")]
        cutoff: u64,
        /// Weight exponent x [default: 0.5]
        #[arg(long, default_value_t = 0.5)]
        exponent: f64,
        /// Grid start [default: 140]
        #[arg(long, default_value_t = DEFAULT_T_START)]
        t_start: f64,
        /// Grid end [default: 160]
        #[arg(long, default_value_t = DEFAULT_T_END)]
        t_end: f64,
        /// Grid sample count [default: 3000]
        #[arg(long, value_parser = parse_count, default_value = "3000")]
        samples: u64,
        /// Directory for CSV output [default: none]
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Detect destructive-interference wells of the raw signal on a grid
    Wells {
        /// Prime cutoff [default: 100]
        #[arg(long, value_parser = parse_count, default_value = "100")]
        cutoff: u64,
        /// Weight exponent x [default: 0.5]
        #[arg(long, default_value_t = 0.5)]
        exponent: f64,
        /// Grid start [default: 140]
        #[arg(long, default_value_t = DEFAULT_T_START)]
        t_start: f64,
        /// Grid end [default: 160]
        #[arg(long, default_value_t = DEFAULT_T_END)]
        t_end: f64,
        /// Grid sample count [default: 3000]
        #[arg(long, value_parser = parse_count, default_value = "3000")]
        samples: u64,
        /// Minimum well depth [default: 1.0]
        #[arg(long, default_value_t = 1.0)]
        depth_threshold: f64,
        /// Directory for CSV output [default: none]
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Fraction of primes in the destructive phase band at a given t
    Coincidence {
        /// Prime cutoff [default: 100]
        #[arg(long, value_parser = parse_count, default_value = "100")]
        cutoff: u64,
        /// Sample point [default: 0]
        #[arg(long, default_value_t = 0.0)]
        t: f64,
        /// Half-width of the band around phase pi, in (0, pi) [default: pi/2]
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
        delta: f64,
    },

    /// Progressive superposition experiment (one curve per added prime)
    Figure1 {
        /// Prime cutoff [default: 97]
        #[arg(long, value_parser = parse_count)]
        cutoff: Option<u64>,
        /// Weight exponent x [default: 0.5]
        #[arg(long)]
        exponent: Option<f64>,
        /// Grid start [default: 140]
        #[arg(long)]
        t_start: Option<f64>,
        /// Grid end [default: 160]
        #[arg(long)]
        t_end: Option<f64>,
        /// Grid sample count [default: 3000]
        #[arg(long, value_parser = parse_count)]
        samples: Option<u64>,
        /// Phase reference (zero | linear:<rate> | rs) [default: zero]
        #[arg(long)]
        theta: Option<PhaseReference>,
        /// Minimum well depth [default: 1.0]
        #[arg(long)]
        depth_threshold: Option<f64>,
        /// Output directory; files are written only when given [default: none]
        #[arg(long)]
        out: Option<PathBuf>,
        /// Flat key-value configuration file; command-line flags win
        /// [default: none]
        #[arg(long)]
        config: Option<PathBuf>,
    },

    /// Weight-exponent comparison experiment (grid of x-by-cutoff cells)
    Figure2 {
        /// Comma-separated weight exponents [default: 0.25,0.5,0.75]
        #[arg(long)]
        exponents: Option<String>,
        /// Comma-separated cutoffs [default: 100,1e6]
        #[arg(long)]
        cutoffs: Option<String>,
        /// Grid start [default: 140]
        #[arg(long)]
        t_start: Option<f64>,
        /// Grid end [default: 160]
        #[arg(long)]
        t_end: Option<f64>,
        /// Grid sample count [default: 3000]
        #[arg(long, value_parser = parse_count)]
        samples: Option<u64>,
        /// Reference-ordinate file for the dashed overlay [default: none]
        #[arg(long)]
        refs: Option<PathBuf>,
        /// Minimum well depth for the summary [default: 1.0]
        #[arg(long)]
        depth_threshold: Option<f64>,
        /// Output directory; files are written only when given [default: none]
        #[arg(long)]
        out: Option<PathBuf>,
        /// Flat key-value configuration file; command-line flags win
        /// [default: none]
        #[arg(long)]
        config: Option<PathBuf>,
    },

    /// Budget and RMS-slope scaling study across cutoffs
    Scaling {
        /// Comma-separated weight exponents [default: 0.25,0.5,0.75]
        #[arg(long)]
        exponents: Option<String>,
        /// Comma-separated cutoffs [default: 1e3,1e4,1e5,1e6]
        #[arg(long)]
        cutoffs: Option<String>,
        /// Sampling window start [default: 1000]
        #[arg(long)]
        t_start: Option<f64>,
        /// Sampling window end [default: 2000]
        #[arg(long)]
        t_end: Option<f64>,
        /// Random samples per empirical RMS estimate [default: 2000]
        #[arg(long, value_parser = parse_count)]
        empirical_samples: Option<u64>,
        /// Output directory; files are written only when given [default: none]
        #[arg(long)]
        out: Option<PathBuf>,
        /// Flat key-value configuration file; command-line flags win
        /// [default: none]
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

/// Parse the full argv (including the program name), run the command, and
/// return the process exit code.
pub fn dispatch<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };

    let quiet = cli.quiet;
    let started = Instant::now();
    let outcome = match cli.threads {
        Some(n) if n > 0 => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| run(cli)),
            Err(e) => Err(Error::Config(format!("--threads: {e}"))),
        },
        Some(_) => Err(Error::Config("--threads must be positive".into())),
        None => run(cli),
    };
    match outcome {
        Ok(()) => {
            if !quiet {
                println!("# completed in {} ms", started.elapsed().as_millis());
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_validation() {
                1
            } else {
                2
            }
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let seed = cli.seed.unwrap_or(0);
    let cache = cli.cache.clone();
    match cli.command {
        Command::Primes { cutoff, count_only } => {
            let table = obtain_table(cutoff, cache.as_deref())?;
            if count_only {
                println!("{}", table.len());
            } else {
                for p in table.primes() {
                    println!("{p}");
                }
            }
            Ok(())
        }

        Command::Eval {
            cutoff,
            exponent,
            t,
            t_start,
            t_end,
            samples,
            theta,
            derivative,
            out,
        } => {
            let table = obtain_table(cutoff, cache.as_deref())?;
            let ensemble = crate::primes::build_ensemble(&table, exponent)?;
            if let Some(t) = t {
                match &theta {
                    Some(reference) => {
                        let w = eval_phase_referenced_point(&ensemble, t, reference)?;
                        println!("W({t}) = {w:.5}");
                    }
                    None => {
                        println!("S({t}) = {:.5}", eval_point(&ensemble, t));
                        if derivative {
                            println!("S'({t}) = {:.5}", eval_derivative_point(&ensemble, t));
                        }
                    }
                }
                return Ok(());
            }
            let grid = SampleGrid::new(
                t_start.unwrap_or(DEFAULT_T_START),
                t_end.unwrap_or(DEFAULT_T_END),
                to_usize("--samples", samples.unwrap_or(DEFAULT_SAMPLES as u64))?,
            )?;
            let signal = match &theta {
                Some(reference) => eval_phase_referenced(&ensemble, &grid, reference)?,
                None => eval_grid(&ensemble, &grid, derivative),
            };
            println!(
                "evaluated {} points on [{}, {}]; max |signal| = {:.5}",
                grid.n_samples(),
                grid.t_start(),
                grid.t_end(),
                signal.max_abs()
            );
            if let Some(dir) = out {
                std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
                let path = dir.join("signal.csv");
                signal.save_csv(&path)?;
                println!("wrote {}", path.display());
            }
            Ok(())
        }

        Command::Budget {
            cutoff,
            exponent,
            out,
        } => {
            let table = obtain_table(cutoff, cache.as_deref())?;
            let report = amplitude_budget(&table, exponent)?;
            println!("cutoff           {}", report.cutoff);
            println!("exponent         {}", report.exponent);
            println!("exact            {:.5}", report.exact);
            println!("integral_approx  {:.5}", report.integral_approx);
            println!("regime           {}", report.regime);
            if let Some(dir) = out {
                let config = scaling_config_for_out(dir, vec![exponent], vec![cutoff], seed);
                let outcome = ScalingOutcome {
                    budgets: vec![report],
                    slopes: vec![],
                };
                for path in emit_scaling_study(&config, &outcome)? {
                    println!("wrote {}", path.display());
                }
            }
            Ok(())
        }

        Command::Slope {
            exponent,
            cutoffs,
            t_start,
            t_end,
            samples,
            out,
        } => {
            let cutoffs = match cutoffs {
                Some(ref s) => parse_u64_list("--cutoffs", s)?,
                None => vec![10_000, 100_000, 1_000_000],
            };
            let window = SampleGrid::new(t_start, t_end, 2)?;
            let n = to_usize("--samples", samples)?;
            let report =
                fit_scaling_exponent_with_empirical(exponent, &cutoffs, &window, n, seed)?;
            println!("exponent {exponent}");
            println!(
                "{:>10}  {:>14}  {:>14}",
                "cutoff", "heuristic_rms", "empirical_rms"
            );
            let empirical = report.empirical_rms.as_ref().expect("sampled column");
            for (i, &p) in report.cutoffs.iter().enumerate() {
                println!(
                    "{:>10}  {:>14.6}  {:>14.6}",
                    p, report.heuristic_rms[i], empirical[i]
                );
            }
            println!("fitted_exponent     {:.6}", report.fitted_exponent);
            println!("predicted_exponent  {:.6}", report.predicted_exponent);
            if let Some(dir) = out {
                let config = scaling_config_for_out(dir, vec![exponent], cutoffs, seed);
                let outcome = ScalingOutcome {
                    budgets: vec![],
                    slopes: vec![report],
                };
                for path in emit_scaling_study(&config, &outcome)? {
                    println!("wrote {}", path.display());
                }
            }
            Ok(())
        }

        Command::Crossings {
            cutoff,
            exponent,
            t_start,
            t_end,
            samples,
            out,
        } => {
            let table = obtain_table(cutoff, cache.as_deref())?;
            let ensemble = crate::primes::build_ensemble(&table, exponent)?;
            let grid = SampleGrid::new(t_start, t_end, to_usize("--samples", samples)?)?;
            let signal = eval_grid(&ensemble, &grid, false);
            let scan = detect_crossings(&signal, &ensemble);
            if scan.degenerate_input {
                println!("signal is identically zero on the grid; nothing to report");
                return Ok(());
            }
            println!("{} crossings", scan.crossings.len());
            println!("{:>16}  {:>12}  {:>10}", "t0", "slope", "residual");
            for c in &scan.crossings {
                println!("{:>16.9}  {:>12.6}  {:>10.3e}", c.t0, c.slope, c.residual);
            }
            if let Some(dir) = out {
                std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
                let path = dir.join("crossings.csv");
                let mut text = String::from("t0,slope,residual\n");
                for c in &scan.crossings {
                    text.push_str(&format!(
                        "{},{},{}\n",
                        fmt(c.t0),
                        fmt(c.slope),
                        fmt(c.residual)
                    ));
                }
                std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
                println!("wrote {}", path.display());
            }
            Ok(())
        }

        Command::Wells {
            cutoff,
            exponent,
            t_start,
            t_end,
            samples,
            depth_threshold,
            out,
        } => {
            let table = obtain_table(cutoff, cache.as_deref())?;
            let ensemble = crate::primes::build_ensemble(&table, exponent)?;
            let grid = SampleGrid::new(t_start, t_end, to_usize("--samples", samples)?)?;
            let signal = eval_grid(&ensemble, &grid, false);
            let wells = detect_wells(&signal, depth_threshold)?;
            println!("{} wells deeper than {depth_threshold}", wells.len());
            println!("{:>16}  {:>10}  {:>10}", "t_center", "depth", "half_width");
            for w in &wells {
                println!(
                    "{:>16.9}  {:>10.5}  {:>10.5}",
                    w.t_center, w.depth, w.half_width
                );
            }
            if let Some(dir) = out {
                std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
                let path = dir.join("wells.csv");
                let mut text = String::from("t_center,depth,half_width\n");
                for w in &wells {
                    text.push_str(&format!(
                        "{},{},{}\n",
                        fmt(w.t_center),
                        fmt(w.depth),
                        fmt(w.half_width)
                    ));
                }
                std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
                println!("wrote {}", path.display());
            }
            Ok(())
        }

        Command::Coincidence { cutoff, t, delta } => {
            let table = obtain_table(cutoff, cache.as_deref())?;
            let fraction = coincidence_fraction(&table, t, delta)?;
            println!("{fraction:.5}");
            Ok(())
        }

        Command::Figure1 {
            cutoff,
            exponent,
            t_start,
            t_end,
            samples,
            theta,
            depth_threshold,
            out,
            config,
        } => {
            let file = load_file_config(config.as_deref())?;
            let mut cfg = ExperimentConfig::progressive(out_dir(&out, &file));
            check_experiment_key(&file, ExperimentKind::Progressive)?;
            if let Some(c) = pick(cutoff, &file, "cutoff", parse_count_cfg)? {
                cfg.cutoffs = vec![c];
            }
            if let Some(x) = pick(exponent, &file, "exponent", parse_f64_cfg)? {
                cfg.exponents = vec![x];
            }
            cfg.grid = resolve_grid(t_start, t_end, samples, &file, cfg.grid)?;
            if let Some(th) = pick(theta, &file, "theta", parse_theta_cfg)? {
                cfg.theta = th;
            }
            if let Some(d) = pick(depth_threshold, &file, "depth_threshold", parse_f64_cfg)? {
                cfg.depth_threshold = d;
            }
            cfg.seed = seed;

            let outcome = compute_progressive(&cfg)?;
            print_progressive(&outcome);
            if wants_output(&out, &file) {
                for path in emit_progressive(&cfg, &outcome)? {
                    println!("wrote {}", path.display());
                }
            }
            Ok(())
        }

        Command::Figure2 {
            exponents,
            cutoffs,
            t_start,
            t_end,
            samples,
            refs,
            depth_threshold,
            out,
            config,
        } => {
            let file = load_file_config(config.as_deref())?;
            let mut cfg = ExperimentConfig::weight_comparison(out_dir(&out, &file));
            check_experiment_key(&file, ExperimentKind::WeightComparison)?;
            if let Some(xs) = pick(exponents, &file, "exponents", parse_f64_list_cfg)? {
                cfg.exponents = parse_f64_list("--exponents", &xs)?;
            }
            if let Some(ps) = pick(cutoffs, &file, "cutoffs", parse_u64_list_cfg_raw)? {
                cfg.cutoffs = parse_u64_list("--cutoffs", &ps)?;
            }
            cfg.grid = resolve_grid(t_start, t_end, samples, &file, cfg.grid)?;
            if let Some(r) = pick(refs, &file, "refs", parse_path_cfg)? {
                cfg.reference_ordinates_path = Some(r);
            }
            if let Some(d) = pick(depth_threshold, &file, "depth_threshold", parse_f64_cfg)? {
                cfg.depth_threshold = d;
            }
            cfg.seed = seed;

            let reference = load_refs(&cfg)?;
            let cells = compute_weight_comparison(&cfg)?;
            print_comparison(&cells);
            if wants_output(&out, &file) {
                for path in emit_weight_comparison(&cfg, &cells, reference.as_ref())? {
                    println!("wrote {}", path.display());
                }
            }
            Ok(())
        }

        Command::Scaling {
            exponents,
            cutoffs,
            t_start,
            t_end,
            empirical_samples,
            out,
            config,
        } => {
            let file = load_file_config(config.as_deref())?;
            let mut cfg = ExperimentConfig::scaling_study(out_dir(&out, &file));
            check_experiment_key(&file, ExperimentKind::ScalingStudy)?;
            if let Some(xs) = pick(exponents, &file, "exponents", parse_f64_list_cfg)? {
                cfg.exponents = parse_f64_list("--exponents", &xs)?;
            }
            if let Some(ps) = pick(cutoffs, &file, "cutoffs", parse_u64_list_cfg_raw)? {
                cfg.cutoffs = parse_u64_list("--cutoffs", &ps)?;
            }
            let window_start =
                pick(t_start, &file, "t_start", parse_f64_cfg)?.unwrap_or(cfg.grid.t_start());
            let window_end =
                pick(t_end, &file, "t_end", parse_f64_cfg)?.unwrap_or(cfg.grid.t_end());
            cfg.grid = SampleGrid::new(window_start, window_end, 2)?;
            if let Some(n) =
                pick(empirical_samples, &file, "empirical_samples", parse_count_cfg)?
            {
                cfg.empirical_samples = to_usize("--empirical-samples", n)?;
            }
            cfg.seed = seed;

            let outcome = compute_scaling_study(&cfg)?;
            print_scaling(&outcome);
            if wants_output(&out, &file) {
                for path in emit_scaling_study(&cfg, &outcome)? {
                    println!("wrote {}", path.display());
                }
            }
            Ok(())
        }
    }
}

fn print_progressive(outcome: &ProgressiveOutcome) {
    println!(
        "{} prefix signals on [{}, {}] x {}",
        outcome.prefixes.len(),
        outcome.grid.t_start(),
        outcome.grid.t_end(),
        outcome.grid.n_samples()
    );
    println!(
        "{:>6}  {:>6}  {:>10}  {:>10}  {:>10}",
        "prefix", "prime", "max_abs", "wells", "max_depth"
    );
    for (j, prefix) in outcome.prefixes.iter().enumerate() {
        let wells = &outcome.wells_per_prefix[j];
        let max_depth = wells.iter().map(|w| w.depth).fold(0.0, f64::max);
        println!(
            "{:>6}  {:>6}  {:>10.5}  {:>10}  {:>10.5}",
            j,
            outcome.primes[j],
            prefix.max_abs(),
            wells.len(),
            max_depth
        );
    }
}

fn print_comparison(cells: &[ComparisonCell]) {
    println!(
        "{:>9}  {:>9}  {:>10}  {:>10}  {:>6}  {:>12}",
        "exponent", "cutoff", "max_abs", "crossings", "wells", "budget_exact"
    );
    for c in cells {
        println!(
            "{:>9}  {:>9}  {:>10.5}  {:>10}  {:>6}  {:>12.5}",
            c.exponent, c.cutoff, c.max_abs, c.crossing_count, c.well_count, c.budget_exact
        );
    }
}

fn print_scaling(outcome: &ScalingOutcome) {
    println!(
        "{:>9}  {:>9}  {:>12}  {:>15}  {:>10}",
        "exponent", "cutoff", "exact", "integral_approx", "regime"
    );
    for b in &outcome.budgets {
        println!(
            "{:>9}  {:>9}  {:>12.5}  {:>15.5}  {:>10}",
            b.exponent, b.cutoff, b.exact, b.integral_approx, b.regime
        );
    }
    println!();
    println!(
        "{:>9}  {:>16}  {:>19}",
        "exponent", "fitted_exponent", "predicted_exponent"
    );
    for s in &outcome.slopes {
        println!(
            "{:>9}  {:>16.6}  {:>19.6}",
            s.exponent, s.fitted_exponent, s.predicted_exponent
        );
    }
}

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

/// Sieve with the cache resolved from the flag, then the environment.
fn obtain_table(cutoff: u64, cache_flag: Option<&Path>) -> Result<PrimeTable> {
    let cache = cache_flag
        .map(Path::to_path_buf)
        .or_else(|| std::env::var_os(CACHE_ENV_VAR).map(PathBuf::from));
    match cache {
        Some(path) => sieve_primes_cached(cutoff, &path),
        None => sieve_primes(cutoff),
    }
}

fn scaling_config_for_out(
    dir: PathBuf,
    exponents: Vec<f64>,
    cutoffs: Vec<u64>,
    seed: u64,
) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::scaling_study(dir);
    cfg.exponents = exponents;
    cfg.cutoffs = cutoffs;
    cfg.seed = seed;
    cfg
}

/// Exact nonnegative integer, in plain or scientific notation ("1e6").
fn parse_count(s: &str) -> std::result::Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("{s:?} is not a number"))?;
    if !v.is_finite() || v < 0.0 || v > 9.007_199_254_740_992e15 || v.fract() != 0.0 {
        return Err(format!("{s:?} is not an exact nonnegative integer"));
    }
    Ok(v as u64)
}

fn to_usize(flag: &str, v: u64) -> Result<usize> {
    usize::try_from(v).map_err(|_| Error::Config(format!("{flag}: {v} is out of range")))
}

fn parse_u64_list(flag: &str, s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(|part| parse_count(part.trim()).map_err(|e| Error::Config(format!("{flag}: {e}"))))
        .collect()
}

fn parse_f64_list(flag: &str, s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("{flag}: {part:?} is not a number")))
        })
        .collect()
}

/// Flat key-value configuration file: `key = value` lines, `#` comments.
struct FileConfig(HashMap<String, String>);

impl FileConfig {
    fn out(&self) -> Option<&String> {
        self.0.get("out")
    }
}

fn load_file_config(path: Option<&Path>) -> Result<Option<FileConfig>> {
    let Some(path) = path else {
        return Ok(None);
    };
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut map = HashMap::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Config(format!(
                "{}:{}: expected `key = value`",
                path.display(),
                idx + 1
            )));
        };
        map.insert(key.trim().to_lowercase(), value.trim().to_string());
    }
    Ok(Some(FileConfig(map)))
}

/// Flag value if given, otherwise the config-file value, otherwise None.
fn pick<T, F>(flag: Option<T>, file: &Option<FileConfig>, key: &str, parse: F) -> Result<Option<T>>
where
    F: Fn(&str, &str) -> Result<T>,
{
    if flag.is_some() {
        return Ok(flag);
    }
    match file {
        Some(FileConfig(map)) => map.get(key).map(|v| parse(key, v)).transpose(),
        None => Ok(None),
    }
}

fn check_experiment_key(file: &Option<FileConfig>, expected: ExperimentKind) -> Result<()> {
    if let Some(FileConfig(map)) = file {
        if let Some(value) = map.get("experiment") {
            let kind: ExperimentKind = value
                .parse()
                .map_err(|e: String| Error::Config(format!("experiment: {e}")))?;
            if kind != expected {
                return Err(Error::Config(format!(
                    "configuration file is for {kind}, but {expected} was requested"
                )));
            }
        }
    }
    Ok(())
}

fn parse_count_cfg(key: &str, v: &str) -> Result<u64> {
    parse_count(v).map_err(|e| Error::Config(format!("{key}: {e}")))
}

fn parse_f64_cfg(key: &str, v: &str) -> Result<f64> {
    v.parse()
        .map_err(|_| Error::Config(format!("{key}: {v:?} is not a number")))
}

fn parse_theta_cfg(key: &str, v: &str) -> Result<PhaseReference> {
    v.parse()
        .map_err(|e: String| Error::Config(format!("{key}: {e}")))
}

fn parse_path_cfg(_key: &str, v: &str) -> Result<PathBuf> {
    Ok(PathBuf::from(v))
}

/// List values stay raw strings through `pick` so flag and file sources share
/// one parser that names the source in errors.
fn parse_f64_list_cfg(_key: &str, v: &str) -> Result<String> {
    Ok(v.to_string())
}

fn parse_u64_list_cfg_raw(_key: &str, v: &str) -> Result<String> {
    Ok(v.to_string())
}

fn out_dir(flag: &Option<PathBuf>, file: &Option<FileConfig>) -> PathBuf {
    if let Some(dir) = flag {
        return dir.clone();
    }
    if let Some(cfg) = file {
        if let Some(dir) = cfg.out() {
            return PathBuf::from(dir);
        }
    }
    // Placeholder; emission only happens when wants_output is true.
    PathBuf::from("out")
}

fn wants_output(flag: &Option<PathBuf>, file: &Option<FileConfig>) -> bool {
    flag.is_some() || file.as_ref().is_some_and(|c| c.out().is_some())
}

fn resolve_grid(
    t_start: Option<f64>,
    t_end: Option<f64>,
    samples: Option<u64>,
    file: &Option<FileConfig>,
    default: SampleGrid,
) -> Result<SampleGrid> {
    let start = pick(t_start, file, "t_start", parse_f64_cfg)?.unwrap_or(default.t_start());
    let end = pick(t_end, file, "t_end", parse_f64_cfg)?.unwrap_or(default.t_end());
    let n = match pick(samples, file, "samples", parse_count_cfg)? {
        Some(v) => to_usize("--samples", v)?,
        None => default.n_samples(),
    };
    SampleGrid::new(start, end, n)
}
