//! A numerical laboratory for finite prime-weighted oscillatory signals.
//!
//! The model is a finite superposition of cosine modes, one per prime `p` up
//! to a cutoff, with frequency `log p` and amplitude `p^(-x)`. This crate
//! synthesizes those signals fast and deterministically, detects the
//! zero-like crossings and destructive-interference wells they develop, and
//! measures how amplitude budgets and RMS slopes scale with the cutoff —
//! the behavior that singles out `x = 1/2` as the balance exponent between
//! the high-energy (`x < 1/2`) and over-damped (`x > 1/2`) regimes.
//!
//! Quick taste:
//!
//! ```
//! use prime_lab::{build_ensemble, sieve_primes, signal};
//!
//! let table = sieve_primes(100)?;
//! assert_eq!(table.len(), 25);
//! let ensemble = build_ensemble(&table, 0.5)?;
//! let grid = signal::SampleGrid::new(140.0, 160.0, 3000)?;
//! let s = signal::eval_grid(&ensemble, &grid, false);
//! assert!(s.max_abs() <= ensemble.amplitude_bound());
//! # Ok::<(), prime_lab::Error>(())
//! ```
//!
//! The runnable `examples/` directory walks through every major capability;
//! the `prime-lab` binary exposes the same operations as subcommands.

pub mod analysis;
pub mod cli;
mod error;
pub mod experiments;
pub mod primes;
pub mod signal;
mod sum;

pub use error::{Error, Result};
pub use primes::{build_ensemble, sieve_primes, PrimeTable, WeightedEnsemble};
pub use signal::{PhaseReference, SampleGrid, SampledSignal, Waveform};
