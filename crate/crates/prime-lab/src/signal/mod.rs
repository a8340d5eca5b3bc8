//! Signal synthesis: pointwise and grid evaluation of the prime cosine sum,
//! its derivative, phase-referenced variants, and progressive partial sums.

mod kernel;

use std::io::{BufRead, Write};
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::primes::WeightedEnsemble;
use crate::sum::{kahan_sum, KahanSum};

pub(crate) use kernel::{eval_grid_sums, Companion};

/// Uniform sample grid `t_k = t_start + k * spacing`, with the last point
/// pinned to `t_end` exactly rather than accumulated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleGrid {
    t_start: f64,
    t_end: f64,
    n_samples: usize,
}

impl SampleGrid {
    pub fn new(t_start: f64, t_end: f64, n_samples: usize) -> Result<Self> {
        if !(t_start.is_finite() && t_end.is_finite() && t_start < t_end) || n_samples < 2 {
            return Err(Error::InvalidGrid {
                t_start,
                t_end,
                n_samples,
            });
        }
        Ok(SampleGrid {
            t_start,
            t_end,
            n_samples,
        })
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    pub fn spacing(&self) -> f64 {
        (self.t_end - self.t_start) / (self.n_samples - 1) as f64
    }

    /// k-th sample point; the final point is `t_end` exactly.
    pub fn point(&self, k: usize) -> f64 {
        debug_assert!(k < self.n_samples);
        if k == self.n_samples - 1 {
            self.t_end
        } else {
            self.t_start + k as f64 * self.spacing()
        }
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_samples).map(move |k| self.point(k))
    }
}

/// A signal sampled on a [`SampleGrid`], optionally with derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSignal {
    grid: SampleGrid,
    values: Vec<f64>,
    derivatives: Option<Vec<f64>>,
}

impl SampledSignal {
    pub fn new(grid: SampleGrid, values: Vec<f64>, derivatives: Option<Vec<f64>>) -> Self {
        assert_eq!(values.len(), grid.n_samples());
        if let Some(d) = &derivatives {
            assert_eq!(d.len(), grid.n_samples());
        }
        SampledSignal {
            grid,
            values,
            derivatives,
        }
    }

    pub fn grid(&self) -> &SampleGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn derivatives(&self) -> Option<&[f64]> {
        self.derivatives.as_deref()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// CSV with header `t,value[,derivative]` at full round-trip precision
    /// (17 significant digits).
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        match &self.derivatives {
            Some(_) => writeln!(out, "t,value,derivative")?,
            None => writeln!(out, "t,value")?,
        }
        for (k, t) in self.grid.points().enumerate() {
            match &self.derivatives {
                Some(d) => writeln!(
                    out,
                    "{},{},{}",
                    fmt_f64(t),
                    fmt_f64(self.values[k]),
                    fmt_f64(d[k])
                )?,
                None => writeln!(out, "{},{}", fmt_f64(t), fmt_f64(self.values[k]))?,
            }
        }
        Ok(())
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).map_err(|e| Error::io(path, e))?;
        std::fs::write(path, buf).map_err(|e| Error::io(path, e))
    }

    /// Parse a CSV produced by [`SampledSignal::write_csv`].
    pub fn read_csv<R: BufRead>(reader: R) -> Result<SampledSignal> {
        let mut lines = reader.lines();
        let header = lines
            .next()
            .transpose()
            .map_err(|e| Error::io("<csv>", e))?
            .ok_or_else(|| Error::Config("empty signal CSV".into()))?;
        let with_derivative = match header.trim() {
            "t,value" => false,
            "t,value,derivative" => true,
            other => {
                return Err(Error::Config(format!("unrecognized signal header {other:?}")));
            }
        };
        let mut ts = Vec::new();
        let mut values = Vec::new();
        let mut derivatives = Vec::new();
        for (idx, line) in lines.enumerate() {
            let line = line.map_err(|e| Error::io("<csv>", e))?;
            if line.trim().is_empty() {
                continue;
            }
            let mut fields = line.split(',');
            let mut next = |name: &str| -> Result<f64> {
                fields
                    .next()
                    .ok_or_else(|| Error::Config(format!("row {}: missing {name}", idx + 2)))?
                    .trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Config(format!("row {}: bad {name}", idx + 2)))
            };
            ts.push(next("t")?);
            values.push(next("value")?);
            if with_derivative {
                derivatives.push(next("derivative")?);
            }
        }
        if ts.len() < 2 {
            return Err(Error::Config("signal CSV needs at least 2 rows".into()));
        }
        let grid = SampleGrid::new(ts[0], *ts.last().unwrap(), ts.len())?;
        let span = grid.t_end() - grid.t_start();
        for (k, &t) in ts.iter().enumerate() {
            if (t - grid.point(k)).abs() > 1e-9 * span {
                return Err(Error::Config(format!("row {}: t values are not uniform", k + 2)));
            }
        }
        Ok(SampledSignal::new(
            grid,
            values,
            with_derivative.then_some(derivatives),
        ))
    }
}

/// 17-significant-digit formatting; round-trips f64 exactly.
pub(crate) fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Phase reference θ(t) for the phase-referenced signal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhaseReference {
    /// θ(t) = 0; reduces the phase-referenced signal to twice the raw one.
    Zero,
    /// θ(t) = ω t.
    Linear(f64),
    /// θ(t) = (t/2) ln(t/2π) − t/2 − π/8; requires t > 0.
    RiemannSiegelApprox,
}

impl PhaseReference {
    pub fn theta(&self, t: f64) -> f64 {
        match self {
            PhaseReference::Zero => 0.0,
            PhaseReference::Linear(rate) => rate * t,
            PhaseReference::RiemannSiegelApprox => {
                0.5 * t * (t / std::f64::consts::TAU).ln()
                    - 0.5 * t
                    - std::f64::consts::FRAC_PI_8
            }
        }
    }

    fn validate_grid(&self, grid: &SampleGrid) -> Result<()> {
        if matches!(self, PhaseReference::RiemannSiegelApprox) && grid.t_start() <= 0.0 {
            return Err(Error::ThetaDomain {
                t_start: grid.t_start(),
            });
        }
        Ok(())
    }
}

impl Default for PhaseReference {
    fn default() -> Self {
        PhaseReference::Zero
    }
}

impl std::fmt::Display for PhaseReference {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PhaseReference::Zero => write!(f, "zero"),
            PhaseReference::Linear(rate) => write!(f, "linear:{rate}"),
            PhaseReference::RiemannSiegelApprox => write!(f, "rs"),
        }
    }
}

impl FromStr for PhaseReference {
    type Err = String;

    /// Accepts `zero`, `linear:<rate>`, or `rs`.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("zero") {
            return Ok(PhaseReference::Zero);
        }
        if s.eq_ignore_ascii_case("rs") {
            return Ok(PhaseReference::RiemannSiegelApprox);
        }
        if let Some(rate) = s.strip_prefix("linear:") {
            let rate: f64 = rate
                .parse()
                .map_err(|_| format!("bad linear rate {rate:?}"))?;
            return Ok(PhaseReference::Linear(rate));
        }
        Err(format!(
            "unknown phase reference {s:?} (expected zero, linear:<rate>, or rs)"
        ))
    }
}

/// Anything that can be evaluated pointwise with a derivative. Implemented by
/// [`WeightedEnsemble`] and by the single-frequency [`Harmonic`] used for
/// detector calibration.
pub trait Waveform {
    fn value(&self, t: f64) -> f64;
    fn derivative(&self, t: f64) -> f64;
    /// Triangle-inequality bound on |value|.
    fn amplitude_bound(&self) -> f64;
    /// Typical derivative magnitude, used to scale slope thresholds.
    fn rms_slope_scale(&self) -> f64;
}

impl Waveform for WeightedEnsemble {
    fn value(&self, t: f64) -> f64 {
        eval_point(self, t)
    }

    fn derivative(&self, t: f64) -> f64 {
        eval_derivative_point(self, t)
    }

    fn amplitude_bound(&self) -> f64 {
        WeightedEnsemble::amplitude_bound(self)
    }

    fn rms_slope_scale(&self) -> f64 {
        kahan_sum(
            self.weights()
                .iter()
                .zip(self.table().logs())
                .map(|(&w, &lp)| 0.5 * w * w * lp * lp),
        )
        .sqrt()
    }
}

/// `amplitude * cos(frequency * t)` — a one-component calibration signal.
#[derive(Debug, Clone, Copy)]
pub struct Harmonic {
    pub amplitude: f64,
    pub frequency: f64,
}

impl Harmonic {
    pub fn sample(&self, grid: &SampleGrid, with_derivative: bool) -> SampledSignal {
        let values = grid.points().map(|t| self.value(t)).collect();
        let derivatives =
            with_derivative.then(|| grid.points().map(|t| self.derivative(t)).collect());
        SampledSignal::new(*grid, values, derivatives)
    }
}

impl Waveform for Harmonic {
    fn value(&self, t: f64) -> f64 {
        self.amplitude * (self.frequency * t).cos()
    }

    fn derivative(&self, t: f64) -> f64 {
        -self.amplitude * self.frequency * (self.frequency * t).sin()
    }

    fn amplitude_bound(&self) -> f64 {
        self.amplitude.abs()
    }

    fn rms_slope_scale(&self) -> f64 {
        (self.amplitude * self.frequency).abs() / std::f64::consts::SQRT_2
    }
}

/// `sum_{p<=P} p^{-x} cos(t log p)`, compensated, ascending-prime order.
pub fn eval_point(ensemble: &WeightedEnsemble, t: f64) -> f64 {
    let mut acc = KahanSum::new();
    for (&lp, &w) in ensemble.table().logs().iter().zip(ensemble.weights()) {
        acc.add(w * (t * lp).cos());
    }
    acc.value()
}

/// `-sum_{p<=P} p^{-x} log(p) sin(t log p)`, compensated, ascending-prime order.
pub fn eval_derivative_point(ensemble: &WeightedEnsemble, t: f64) -> f64 {
    let mut acc = KahanSum::new();
    for (&lp, &w) in ensemble.table().logs().iter().zip(ensemble.weights()) {
        acc.add(-w * lp * (t * lp).sin());
    }
    acc.value()
}

/// Raw signal on a grid, via the rotation-recurrence kernel. Deterministic
/// for any thread count; agrees with [`eval_point`] to 1e-9 relative to the
/// weight sum.
pub fn eval_grid(
    ensemble: &WeightedEnsemble,
    grid: &SampleGrid,
    with_derivative: bool,
) -> SampledSignal {
    let companion = if with_derivative {
        Companion::Derivative
    } else {
        Companion::None
    };
    let sums = eval_grid_sums(
        ensemble.table().logs(),
        ensemble.weights(),
        grid,
        companion,
    );
    SampledSignal::new(*grid, sums.cos_sum, sums.companion)
}

/// Phase-referenced signal `2 sum p^{-x} cos(θ(t) − t log p)` on a grid.
pub fn eval_phase_referenced(
    ensemble: &WeightedEnsemble,
    grid: &SampleGrid,
    theta: &PhaseReference,
) -> Result<SampledSignal> {
    theta.validate_grid(grid)?;
    let sums = eval_grid_sums(
        ensemble.table().logs(),
        ensemble.weights(),
        grid,
        Companion::Sine,
    );
    let sin_sum = sums.companion.expect("sine companion requested");
    let values = grid
        .points()
        .enumerate()
        .map(|(k, t)| {
            let (sin_t, cos_t) = theta.theta(t).sin_cos();
            2.0 * (cos_t * sums.cos_sum[k] + sin_t * sin_sum[k])
        })
        .collect();
    Ok(SampledSignal::new(*grid, values, None))
}

/// Phase-referenced signal at a single point, term by term.
pub fn eval_phase_referenced_point(
    ensemble: &WeightedEnsemble,
    t: f64,
    theta: &PhaseReference,
) -> Result<f64> {
    if matches!(theta, PhaseReference::RiemannSiegelApprox) && t <= 0.0 {
        return Err(Error::ThetaDomain { t_start: t });
    }
    let th = theta.theta(t);
    let mut acc = KahanSum::new();
    for (&lp, &w) in ensemble.table().logs().iter().zip(ensemble.weights()) {
        acc.add(2.0 * w * (th - t * lp).cos());
    }
    Ok(acc.value())
}

/// Largest cutoff accepted by [`progressive_partial_sums`]; the output holds
/// one full grid per prime, so it is meant for small ensembles.
pub const DEFAULT_PREFIX_CEILING: u64 = 1000;

/// Phase-referenced prefix signals, one per prime: element `j` uses only the
/// first `j + 1` primes. The last element equals the full phase-referenced
/// signal up to summation-order rounding.
pub fn progressive_partial_sums(
    ensemble: &WeightedEnsemble,
    grid: &SampleGrid,
    theta: &PhaseReference,
) -> Result<Vec<SampledSignal>> {
    let cutoff = ensemble.table().cutoff();
    if cutoff > DEFAULT_PREFIX_CEILING {
        return Err(Error::PrefixCeiling {
            cutoff,
            ceiling: DEFAULT_PREFIX_CEILING,
        });
    }
    theta.validate_grid(grid)?;
    let thetas: Vec<f64> = grid.points().map(|t| theta.theta(t)).collect();
    let ts: Vec<f64> = grid.points().collect();
    let mut running = vec![0.0f64; grid.n_samples()];
    let mut out = Vec::with_capacity(ensemble.len());
    for (&lp, &w) in ensemble.table().logs().iter().zip(ensemble.weights()) {
        for (k, acc) in running.iter_mut().enumerate() {
            *acc += 2.0 * w * (thetas[k] - ts[k] * lp).cos();
        }
        out.push(SampledSignal::new(*grid, running.clone(), None));
    }
    Ok(out)
}
