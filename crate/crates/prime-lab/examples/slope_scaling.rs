//! RMS slope scaling: heuristic prediction vs seeded random sampling.
//!
//! The heuristic RMS slope sqrt(1/2 sum p^-2x ln^2 p) grows like
//! P^((1-2x)/2) sqrt(log P) below the balance exponent, like log P at it,
//! and saturates above it. The log-log fit recovers those growth exponents,
//! and uniform random sampling of S' confirms the quasi-random-phase value.

use prime_lab::analysis::fit_scaling_exponent_with_empirical;
use prime_lab::SampleGrid;

fn main() -> Result<(), prime_lab::Error> {
    let cutoffs: [u64; 3] = [10_000, 100_000, 1_000_000];
    let window = SampleGrid::new(1_000.0, 2_000.0, 2)?;
    let seed = 0;

    for x in [0.25, 0.5, 0.75] {
        let report = fit_scaling_exponent_with_empirical(x, &cutoffs, &window, 2_000, seed)?;
        println!("x = {x}");
        println!(
            "{:>9}  {:>14}  {:>14}",
            "cutoff", "heuristic_rms", "empirical_rms"
        );
        let sampled = report.empirical_rms.as_ref().unwrap();
        for (i, &p) in report.cutoffs.iter().enumerate() {
            println!(
                "{:>9}  {:>14.6}  {:>14.6}",
                p, report.heuristic_rms[i], sampled[i]
            );
        }
        println!(
            "fitted exponent {:.4} (predicted power law: {:.4})\n",
            report.fitted_exponent, report.predicted_exponent
        );
    }
    Ok(())
}
