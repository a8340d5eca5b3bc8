//! The squared-amplitude budget B_P(x) = sum p^-2x in its three regimes.
//!
//! Below the balance exponent the budget grows polynomially with the cutoff,
//! at x = 1/2 it tracks ln ln P, and above it the sum converges. The
//! integral approximation from the prime-density heuristic is printed next
//! to the exact sum.

use prime_lab::analysis::{amplitude_budget, log_log_antiderivative};
use prime_lab::sieve_primes;

fn main() -> Result<(), prime_lab::Error> {
    let cutoffs: [u64; 4] = [1_000, 10_000, 100_000, 1_000_000];
    let table = sieve_primes(*cutoffs.last().unwrap())?;

    for x in [0.25, 0.5, 0.75] {
        println!("x = {x}");
        println!(
            "{:>9}  {:>12}  {:>15}  {:>10}",
            "cutoff", "exact", "integral_approx", "regime"
        );
        for &p in &cutoffs {
            let report = amplitude_budget(&table.truncated(p), x)?;
            println!(
                "{:>9}  {:>12.6}  {:>15.6}  {:>10}",
                p, report.exact, report.integral_approx, report.regime
            );
        }
        println!();
    }

    // At the balance exponent successive budget increments track ln ln P.
    println!("balance-regime increments vs ln ln P:");
    let mut prev: Option<(u64, f64)> = None;
    for &p in &cutoffs {
        let exact = amplitude_budget(&table.truncated(p), 0.5)?.exact;
        if let Some((p0, b0)) = prev {
            let lnln = log_log_antiderivative(p as f64) - log_log_antiderivative(p0 as f64);
            println!(
                "  {p0:>7} -> {p:>7}: dB = {:.6}, d lnln = {:.6}",
                exact - b0,
                lnln
            );
        }
        prev = Some((p, exact));
    }
    Ok(())
}
