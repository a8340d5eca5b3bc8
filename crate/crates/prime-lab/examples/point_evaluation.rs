//! Pointwise evaluation of the prime cosine signal and its derivative.
//!
//! Builds the weighted ensemble for primes up to 100 at the balance exponent
//! x = 1/2 and samples S(t) and S'(t) at a few points, checking the triangle
//! bound |S(t)| <= sum of weights along the way.

use prime_lab::signal::{eval_derivative_point, eval_point};
use prime_lab::{build_ensemble, sieve_primes};

fn main() -> Result<(), prime_lab::Error> {
    let table = sieve_primes(100)?;
    println!("{} primes up to 100", table.len());

    let ensemble = build_ensemble(&table, 0.5)?;
    let bound = ensemble.amplitude_bound();
    println!("amplitude bound (sum of p^-1/2): {bound:.6}\n");

    println!("{:>8}  {:>12}  {:>12}", "t", "S(t)", "S'(t)");
    for t in [0.0, 10.0, 25.0, 141.1, 150.4, 157.6] {
        let s = eval_point(&ensemble, t);
        let ds = eval_derivative_point(&ensemble, t);
        assert!(s.abs() <= bound);
        println!("{t:>8.2}  {s:>12.6}  {ds:>12.6}");
    }

    println!("\nat t = 0 every cosine is 1, so S(0) equals the amplitude bound:");
    println!("S(0) = {:.12}", eval_point(&ensemble, 0.0));
    Ok(())
}
