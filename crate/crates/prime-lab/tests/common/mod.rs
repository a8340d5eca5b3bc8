//! Independent oracles shared by the integration suites.
//!
//! Everything here deliberately avoids the crate's computational paths:
//! primes come from trial division (not the sieve), weights from `powf`
//! (not `exp(-x ln p)`), and sums are accumulated in double-double
//! precision rather than Kahan form.
//!
//! Each test binary uses its own subset of these helpers.
#![allow(dead_code)]

/// Trial-division primality; the slow, obviously-correct reference.
pub fn is_prime_trial(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub fn trial_division_primes(limit: u64) -> Vec<u64> {
    (2..=limit).filter(|&n| is_prime_trial(n)).collect()
}

/// Double-double accumulator (error-free two-sum), ~32 significant digits
/// for sums of f64 terms.
#[derive(Debug, Clone, Copy, Default)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

impl DoubleDouble {
    pub fn add(&mut self, v: f64) {
        let (s, e) = two_sum(self.hi, v);
        let lo = self.lo + e;
        let (hi, lo) = quick_two_sum(s, lo);
        self.hi = hi;
        self.lo = lo;
    }

    pub fn value(&self) -> f64 {
        self.hi + self.lo
    }
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - bb) + (b - (s - bb));
    (s, e)
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

/// Direct high-precision evaluation of `sum p^-x cos(t ln p)` over an
/// explicit prime list.
pub fn direct_signal(primes: &[u64], exponent: f64, t: f64) -> f64 {
    let mut acc = DoubleDouble::default();
    for &p in primes {
        let w = (p as f64).powf(-exponent);
        acc.add(w * (t * (p as f64).ln()).cos());
    }
    acc.value()
}

/// Direct high-precision `sum p^-2x` budget.
pub fn direct_budget(primes: &[u64], exponent: f64) -> f64 {
    let mut acc = DoubleDouble::default();
    for &p in primes {
        acc.add((p as f64).powf(-2.0 * exponent));
    }
    acc.value()
}

#[allow(dead_code)]
pub fn assert_close(actual: f64, expected: f64, tol: f64, what: &str) {
    assert!(
        (actual - expected).abs() <= tol,
        "{what}: {actual} vs {expected} (tol {tol})"
    );
}
