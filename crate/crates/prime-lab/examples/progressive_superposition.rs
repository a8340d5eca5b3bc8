//! Progressive superposition: add primes 2, 3, 5, ..., 97 one at a time and
//! watch the destructive-interference wells deepen.
//!
//! Reproduces the progressive-figure experiment with its standard defaults
//! (N = 97, x = 1/2, theta = zero, t in [140, 160] at 3000 samples) and
//! writes progressive.csv, progressive_wells.csv, and progressive.svg.

use prime_lab::experiments::{compute_progressive, emit_progressive, ExperimentConfig};

fn main() -> Result<(), prime_lab::Error> {
    let config = ExperimentConfig::progressive("out/figure1");
    let outcome = compute_progressive(&config)?;

    println!(
        "{:>6}  {:>6}  {:>8}  {:>10}",
        "prefix", "prime", "wells", "max_depth"
    );
    for (j, wells) in outcome.wells_per_prefix.iter().enumerate() {
        let deepest = wells.iter().map(|w| w.depth).fold(0.0, f64::max);
        println!(
            "{:>6}  {:>6}  {:>8}  {:>10.4}",
            j,
            outcome.primes[j],
            wells.len(),
            deepest
        );
    }

    let final_wells = outcome.wells_per_prefix.last().unwrap();
    println!(
        "\nfull ensemble: {} wells deeper than {}",
        final_wells.len(),
        config.depth_threshold
    );
    for w in final_wells {
        println!(
            "  t = {:>10.4}  depth = {:>7.4}  half-width = {:>7.4}",
            w.t_center, w.depth, w.half_width
        );
    }

    for path in emit_progressive(&config, &outcome)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}
