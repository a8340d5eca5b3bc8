//! Zero-like crossings and destructive-interference wells of the raw signal.
//!
//! Every reported crossing is a refined root with a genuinely nonzero slope
//! (a true sign change, not a tangency); wells are local minima below the
//! depth threshold with half-widths measured to the enclosing zero
//! crossings.

use prime_lab::analysis::{detect_crossings, detect_wells};
use prime_lab::signal::{eval_grid, eval_point};
use prime_lab::{build_ensemble, sieve_primes, SampleGrid};

fn main() -> Result<(), prime_lab::Error> {
    let table = sieve_primes(100)?;
    let ensemble = build_ensemble(&table, 0.5)?;
    let grid = SampleGrid::new(140.0, 160.0, 3000)?;
    let signal = eval_grid(&ensemble, &grid, false);

    let scan = detect_crossings(&signal, &ensemble);
    println!("{} zero-like crossings on [140, 160]:", scan.crossings.len());
    println!("{:>14}  {:>10}  {:>10}", "t0", "slope", "residual");
    for c in &scan.crossings {
        // Re-verify Def.-style: the signal really vanishes here.
        assert!(eval_point(&ensemble, c.t0).abs() < 1e-9);
        println!("{:>14.6}  {:>10.5}  {:>10.2e}", c.t0, c.slope, c.residual);
    }

    let wells = detect_wells(&signal, 1.0)?;
    println!("\n{} wells deeper than 1.0:", wells.len());
    println!("{:>14}  {:>8}  {:>10}", "t_center", "depth", "half_width");
    for w in &wells {
        println!("{:>14.6}  {:>8.4}  {:>10.4}", w.t_center, w.depth, w.half_width);
    }
    Ok(())
}
