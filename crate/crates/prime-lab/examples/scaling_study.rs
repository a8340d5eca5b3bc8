//! The full scaling study as a scripted experiment: budget table, slope
//! table, fitted growth exponents, and a log-log SVG with predicted-slope
//! guide lines, all written under out/scaling.

use prime_lab::experiments::{compute_scaling_study, emit_scaling_study, ExperimentConfig};

fn main() -> Result<(), prime_lab::Error> {
    let mut config = ExperimentConfig::scaling_study("out/scaling");
    config.empirical_samples = 500; // keep the sampled column quick

    let outcome = compute_scaling_study(&config)?;

    println!("{:>9}  {:>9}  {:>12}  {:>10}", "exponent", "cutoff", "exact", "regime");
    for b in &outcome.budgets {
        println!(
            "{:>9}  {:>9}  {:>12.6}  {:>10}",
            b.exponent, b.cutoff, b.exact, b.regime
        );
    }

    println!();
    for s in &outcome.slopes {
        println!(
            "x = {:<5} fitted exponent {:>9.5}, predicted power law {:>5.2}",
            s.exponent, s.fitted_exponent, s.predicted_exponent
        );
    }

    println!();
    for path in emit_scaling_study(&config, &outcome)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}
