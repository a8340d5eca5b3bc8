//! Scripted, configuration-driven experiments emitting CSV and SVG: the
//! progressive-superposition figure, the weight-exponent comparison figure,
//! and the budget/slope scaling study.

mod svg;

use std::io::BufRead;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::analysis::{
    amplitude_budget, detect_crossings, detect_wells, fit_scaling_exponent_with_empirical,
    BudgetReport, SlopeScalingReport, Well,
};
use crate::error::{Error, Result};
use crate::primes::{build_ensemble, sieve_primes};
use crate::signal::{
    eval_grid, progressive_partial_sums, PhaseReference, SampleGrid, SampledSignal,
};
use svg::{Panel, SvgDoc, PALETTE, REFERENCE_COLOR};

pub const DEFAULT_T_START: f64 = 140.0;
pub const DEFAULT_T_END: f64 = 160.0;
pub const DEFAULT_SAMPLES: usize = 3000;
pub const DEFAULT_PROGRESSIVE_CUTOFF: u64 = 97;
pub const DEFAULT_EXPONENTS: [f64; 3] = [0.25, 0.5, 0.75];
pub const DEFAULT_COMPARISON_CUTOFFS: [u64; 2] = [100, 1_000_000];
pub const DEFAULT_SCALING_CUTOFFS: [u64; 4] = [1_000, 10_000, 100_000, 1_000_000];
pub const DEFAULT_SCALING_WINDOW: (f64, f64) = (1_000.0, 2_000.0);
pub const DEFAULT_EMPIRICAL_SAMPLES: usize = 2_000;
pub const DEFAULT_DEPTH_THRESHOLD: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    Progressive,
    WeightComparison,
    ScalingStudy,
}

impl std::fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExperimentKind::Progressive => write!(f, "progressive"),
            ExperimentKind::WeightComparison => write!(f, "weight_comparison"),
            ExperimentKind::ScalingStudy => write!(f, "scaling_study"),
        }
    }
}

impl std::str::FromStr for ExperimentKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "progressive" => Ok(ExperimentKind::Progressive),
            "weight_comparison" => Ok(ExperimentKind::WeightComparison),
            "scaling_study" => Ok(ExperimentKind::ScalingStudy),
            other => Err(format!("unknown experiment {other:?}")),
        }
    }
}

/// Everything an experiment run needs; constructors supply the standard
/// defaults for each experiment.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub exponents: Vec<f64>,
    pub cutoffs: Vec<u64>,
    pub grid: SampleGrid,
    pub theta: PhaseReference,
    pub reference_ordinates_path: Option<PathBuf>,
    pub output_dir: PathBuf,
    pub seed: u64,
    pub depth_threshold: f64,
    pub empirical_samples: usize,
}

impl ExperimentConfig {
    pub fn progressive(output_dir: impl Into<PathBuf>) -> Self {
        ExperimentConfig {
            kind: ExperimentKind::Progressive,
            exponents: vec![0.5],
            cutoffs: vec![DEFAULT_PROGRESSIVE_CUTOFF],
            grid: default_grid(),
            theta: PhaseReference::Zero,
            reference_ordinates_path: None,
            output_dir: output_dir.into(),
            seed: 0,
            depth_threshold: DEFAULT_DEPTH_THRESHOLD,
            empirical_samples: DEFAULT_EMPIRICAL_SAMPLES,
        }
    }

    pub fn weight_comparison(output_dir: impl Into<PathBuf>) -> Self {
        ExperimentConfig {
            kind: ExperimentKind::WeightComparison,
            exponents: DEFAULT_EXPONENTS.to_vec(),
            cutoffs: DEFAULT_COMPARISON_CUTOFFS.to_vec(),
            grid: default_grid(),
            theta: PhaseReference::Zero,
            reference_ordinates_path: None,
            output_dir: output_dir.into(),
            seed: 0,
            depth_threshold: DEFAULT_DEPTH_THRESHOLD,
            empirical_samples: DEFAULT_EMPIRICAL_SAMPLES,
        }
    }

    pub fn scaling_study(output_dir: impl Into<PathBuf>) -> Self {
        ExperimentConfig {
            kind: ExperimentKind::ScalingStudy,
            exponents: DEFAULT_EXPONENTS.to_vec(),
            cutoffs: DEFAULT_SCALING_CUTOFFS.to_vec(),
            grid: SampleGrid::new(DEFAULT_SCALING_WINDOW.0, DEFAULT_SCALING_WINDOW.1, 2)
                .expect("static window"),
            theta: PhaseReference::Zero,
            reference_ordinates_path: None,
            output_dir: output_dir.into(),
            seed: 0,
            depth_threshold: DEFAULT_DEPTH_THRESHOLD,
            empirical_samples: DEFAULT_EMPIRICAL_SAMPLES,
        }
    }

    fn validate(&self, kind: ExperimentKind) -> Result<()> {
        if self.kind != kind {
            return Err(Error::Config(format!(
                "configuration is for {}, but {} was requested",
                self.kind, kind
            )));
        }
        if self.exponents.is_empty() {
            return Err(Error::Config("exponent list is empty".into()));
        }
        if self.exponents.iter().any(|&x| !(x > 0.0)) {
            return Err(Error::Config("exponents must be positive".into()));
        }
        if self.cutoffs.is_empty() {
            return Err(Error::Config("cutoff list is empty".into()));
        }
        if self.cutoffs.iter().any(|&p| p < 2) {
            return Err(Error::Config("cutoffs must be at least 2".into()));
        }
        Ok(())
    }
}

fn default_grid() -> SampleGrid {
    SampleGrid::new(DEFAULT_T_START, DEFAULT_T_END, DEFAULT_SAMPLES).expect("static grid")
}

/// Externally supplied t-values (e.g. known zeta-zero ordinates) drawn as a
/// dashed overlay for visual comparison only; they never enter any signal
/// computation.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceOrdinates {
    pub ordinates: Vec<f64>,
    pub source: String,
}

/// Parse a reference-ordinate file: one decimal per line, `#` comments and
/// blank lines allowed, strictly ascending.
pub fn load_reference_ordinates(path: &Path) -> Result<ReferenceOrdinates> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let reader = std::io::BufReader::new(file);
    let mut ordinates = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let value: f64 = text.parse().map_err(|_| Error::OrdinateParse {
            path: path.to_path_buf(),
            line: idx + 1,
            text: text.to_string(),
        })?;
        if let Some(&last) = ordinates.last() {
            if value <= last {
                return Err(Error::OrdinateOrder {
                    path: path.to_path_buf(),
                    line: idx + 1,
                });
            }
        }
        ordinates.push(value);
    }
    let source = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    Ok(ReferenceOrdinates { ordinates, source })
}

/// In-memory result of the progressive-superposition experiment.
#[derive(Debug, Clone)]
pub struct ProgressiveOutcome {
    pub primes: Vec<u64>,
    pub prefixes: Vec<SampledSignal>,
    pub wells_per_prefix: Vec<Vec<Well>>,
    pub grid: SampleGrid,
}

/// In-memory result of one weight-comparison cell.
#[derive(Debug, Clone)]
pub struct ComparisonCell {
    pub exponent: f64,
    pub cutoff: u64,
    pub signal: SampledSignal,
    pub max_abs: f64,
    pub crossing_count: usize,
    pub well_count: usize,
    pub budget_exact: f64,
}

/// In-memory result of the scaling study.
#[derive(Debug, Clone)]
pub struct ScalingOutcome {
    pub budgets: Vec<BudgetReport>,
    pub slopes: Vec<SlopeScalingReport>,
}

pub fn compute_progressive(config: &ExperimentConfig) -> Result<ProgressiveOutcome> {
    config.validate(ExperimentKind::Progressive)?;
    if config.cutoffs.len() != 1 || config.exponents.len() != 1 {
        return Err(Error::Config(
            "the progressive experiment takes exactly one cutoff and one exponent".into(),
        ));
    }
    let table = sieve_primes(config.cutoffs[0])?;
    let ensemble = build_ensemble(&table, config.exponents[0])?;
    let prefixes = progressive_partial_sums(&ensemble, &config.grid, &config.theta)?;

    // Triangle-inequality audit: prefix j is bounded by twice its weight sum.
    let mut bound = 0.0;
    for (j, prefix) in prefixes.iter().enumerate() {
        bound += ensemble.weights()[j];
        let limit = 2.0 * bound * (1.0 + 1e-12) + 1e-12;
        assert!(
            prefix.max_abs() <= limit,
            "prefix {j} exceeds its amplitude bound"
        );
    }

    let wells_per_prefix = prefixes
        .iter()
        .map(|s| detect_wells(s, config.depth_threshold))
        .collect::<Result<Vec<_>>>()?;
    Ok(ProgressiveOutcome {
        primes: table.primes().to_vec(),
        prefixes,
        wells_per_prefix,
        grid: config.grid,
    })
}

pub fn compute_weight_comparison(config: &ExperimentConfig) -> Result<Vec<ComparisonCell>> {
    config.validate(ExperimentKind::WeightComparison)?;
    let largest = *config.cutoffs.iter().max().expect("nonempty");
    let table = sieve_primes(largest)?;

    let cells: Vec<(f64, u64)> = config
        .exponents
        .iter()
        .flat_map(|&x| config.cutoffs.iter().map(move |&p| (x, p)))
        .collect();

    cells
        .into_par_iter()
        .map(|(exponent, cutoff)| {
            let sub = table.truncated(cutoff);
            let ensemble = build_ensemble(&sub, exponent)?;
            let signal = eval_grid(&ensemble, &config.grid, false);
            let limit = ensemble.amplitude_bound() * (1.0 + 1e-12) + 1e-12;
            assert!(signal.max_abs() <= limit, "triangle bound violated");
            let crossing_count = detect_crossings(&signal, &ensemble).crossings.len();
            let well_count = detect_wells(&signal, config.depth_threshold)?.len();
            let budget_exact = amplitude_budget(&sub, exponent)?.exact;
            Ok(ComparisonCell {
                exponent,
                cutoff,
                max_abs: signal.max_abs(),
                signal,
                crossing_count,
                well_count,
                budget_exact,
            })
        })
        .collect()
}

pub fn compute_scaling_study(config: &ExperimentConfig) -> Result<ScalingOutcome> {
    config.validate(ExperimentKind::ScalingStudy)?;
    let largest = *config.cutoffs.iter().max().expect("nonempty");
    let table = sieve_primes(largest)?;
    let mut budgets = Vec::new();
    let mut slopes = Vec::new();
    for &exponent in &config.exponents {
        for &cutoff in &config.cutoffs {
            budgets.push(amplitude_budget(&table.truncated(cutoff), exponent)?);
        }
        slopes.push(fit_scaling_exponent_with_empirical(
            exponent,
            &config.cutoffs,
            &config.grid,
            config.empirical_samples,
            config.seed,
        )?);
    }
    Ok(ScalingOutcome { budgets, slopes })
}

/// Run the progressive experiment and write its CSV/SVG outputs.
pub fn run_progressive(config: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let outcome = compute_progressive(config)?;
    emit_progressive(config, &outcome)
}

/// Run the weight-exponent comparison and write its outputs.
pub fn run_weight_comparison(config: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let refs = load_refs(config)?;
    let cells = compute_weight_comparison(config)?;
    emit_weight_comparison(config, &cells, refs.as_ref())
}

/// Run the scaling study and write its outputs.
pub fn run_scaling_study(config: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let outcome = compute_scaling_study(config)?;
    emit_scaling_study(config, &outcome)
}

pub(crate) fn load_refs(config: &ExperimentConfig) -> Result<Option<ReferenceOrdinates>> {
    config
        .reference_ordinates_path
        .as_deref()
        .map(load_reference_ordinates)
        .transpose()
}

pub fn emit_progressive(
    config: &ExperimentConfig,
    outcome: &ProgressiveOutcome,
) -> Result<Vec<PathBuf>> {
    let dir = &config.output_dir;
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();

    // Wide CSV: t plus one column per prefix.
    let mut header = vec!["t".to_string()];
    header.extend(outcome.primes.iter().map(|p| format!("upto_{p}")));
    let rows = (0..outcome.grid.n_samples()).map(|k| {
        let mut row = Vec::with_capacity(header.len());
        row.push(num(outcome.grid.point(k)));
        row.extend(outcome.prefixes.iter().map(|s| num(s.values()[k])));
        row
    });
    written.push(write_table(dir.join("progressive.csv"), &header, rows)?);

    let well_rows = outcome.wells_per_prefix.iter().enumerate().map(|(j, wells)| {
        let max_depth = wells.iter().map(|w| w.depth).fold(0.0, f64::max);
        vec![
            j.to_string(),
            outcome.primes[j].to_string(),
            wells.len().to_string(),
            num(max_depth),
        ]
    });
    written.push(write_table(
        dir.join("progressive_wells.csv"),
        &["prefix_index", "prime", "well_count", "max_depth"],
        well_rows,
    )?);

    written.push(write_text(
        dir.join("progressive.svg"),
        progressive_svg(outcome),
    )?);
    Ok(written)
}

pub fn emit_weight_comparison(
    config: &ExperimentConfig,
    cells: &[ComparisonCell],
    refs: Option<&ReferenceOrdinates>,
) -> Result<Vec<PathBuf>> {
    let dir = &config.output_dir;
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();

    for cell in cells {
        let name = format!("signal_x{}_P{}.csv", cell.exponent, cell.cutoff);
        let path = dir.join(name);
        cell.signal.save_csv(&path)?;
        written.push(path);
    }

    written.push(write_text(
        dir.join("weight_comparison.svg"),
        weight_comparison_svg(cells, refs),
    )?);

    // Summary last, single-threaded, rows in cell order.
    let rows = cells.iter().map(|c| {
        vec![
            c.exponent.to_string(),
            c.cutoff.to_string(),
            num(c.max_abs),
            c.crossing_count.to_string(),
            c.well_count.to_string(),
            num(c.budget_exact),
        ]
    });
    written.push(write_table(
        dir.join("summary.csv"),
        &[
            "exponent",
            "cutoff",
            "max_abs",
            "crossing_count",
            "well_count",
            "budget_exact",
        ],
        rows,
    )?);
    Ok(written)
}

pub fn emit_scaling_study(
    config: &ExperimentConfig,
    outcome: &ScalingOutcome,
) -> Result<Vec<PathBuf>> {
    let dir = &config.output_dir;
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();

    let budget_rows = outcome.budgets.iter().map(|b| {
        vec![
            b.exponent.to_string(),
            b.cutoff.to_string(),
            num(b.exact),
            num(b.integral_approx),
            b.regime.to_string(),
        ]
    });
    written.push(write_table(
        dir.join("budgets.csv"),
        &["exponent", "cutoff", "exact", "integral_approx", "regime"],
        budget_rows,
    )?);

    let slope_rows = outcome.slopes.iter().flat_map(|report| {
        report.cutoffs.iter().enumerate().map(move |(i, &p)| {
            let empirical = report
                .empirical_rms
                .as_ref()
                .map(|col| num(col[i]))
                .unwrap_or_default();
            vec![
                report.exponent.to_string(),
                p.to_string(),
                num(report.heuristic_rms[i]),
                empirical,
            ]
        })
    });
    written.push(write_table(
        dir.join("slopes.csv"),
        &["exponent", "cutoff", "heuristic_rms", "empirical_rms"],
        slope_rows,
    )?);

    let fit_rows = outcome.slopes.iter().map(|r| {
        vec![
            r.exponent.to_string(),
            num(r.fitted_exponent),
            num(r.predicted_exponent),
        ]
    });
    written.push(write_table(
        dir.join("fits.csv"),
        &["exponent", "fitted_exponent", "predicted_exponent"],
        fit_rows,
    )?);

    written.push(write_text(dir.join("scaling.svg"), scaling_svg(outcome))?);
    Ok(written)
}

fn progressive_svg(outcome: &ProgressiveOutcome) -> String {
    let mut doc = SvgDoc::new(900.0, 720.0);
    let grid = &outcome.grid;
    let final_signal = outcome.prefixes.last().expect("at least one prefix");
    let final_max = final_signal.max_abs().max(1e-12);
    let offset_step = 0.35 * final_max;
    let n_curves = outcome.prefixes.len();

    // Panel (a): prefix traces stacked seismogram-style, earliest on top.
    let stack_top = final_max * 1.1 + offset_step * (n_curves - 1) as f64;
    let panel_a = Panel {
        x0: 70.0,
        y0: 30.0,
        w: 790.0,
        h: 400.0,
        x_min: grid.t_start(),
        x_max: grid.t_end(),
        y_min: -final_max * 1.1,
        y_max: stack_top,
    };
    panel_a.frame(&mut doc);
    panel_a.title(&mut doc, "progressive superposition (one trace per added prime)");
    for (j, prefix) in outcome.prefixes.iter().enumerate() {
        let offset = offset_step * (n_curves - 1 - j) as f64;
        let color = PALETTE[j % PALETTE.len()];
        panel_a.series(
            &mut doc,
            grid.points()
                .enumerate()
                .map(|(k, t)| (t, prefix.values()[k] + offset)),
            color,
            0.8,
        );
    }

    // Panel (b): full ensemble with detected wells marked.
    let panel_b = Panel {
        x0: 70.0,
        y0: 480.0,
        w: 790.0,
        h: 200.0,
        x_min: grid.t_start(),
        x_max: grid.t_end(),
        y_min: -final_max * 1.15,
        y_max: final_max * 1.15,
    };
    panel_b.frame(&mut doc);
    panel_b.title(&mut doc, "full ensemble with interference wells");
    panel_b.hline(&mut doc, 0.0, "#bbbbbb", Some("2 3"));
    panel_b.series(
        &mut doc,
        grid.points()
            .enumerate()
            .map(|(k, t)| (t, final_signal.values()[k])),
        PALETTE[0],
        1.2,
    );
    for well in outcome.wells_per_prefix.last().expect("nonempty") {
        panel_b.marker(&mut doc, well.t_center, -well.depth, REFERENCE_COLOR);
    }
    doc.finish()
}

fn weight_comparison_svg(cells: &[ComparisonCell], refs: Option<&ReferenceOrdinates>) -> String {
    let mut exponents: Vec<f64> = cells.iter().map(|c| c.exponent).collect();
    exponents.sort_by(f64::total_cmp);
    exponents.dedup();
    let mut cutoffs: Vec<u64> = cells.iter().map(|c| c.cutoff).collect();
    cutoffs.sort_unstable();
    cutoffs.dedup();

    let (cell_w, cell_h, margin_x, margin_y) = (430.0, 230.0, 70.0, 50.0);
    let width = margin_x + cutoffs.len() as f64 * (cell_w + 40.0);
    let height = 20.0 + exponents.len() as f64 * (cell_h + margin_y);
    let mut doc = SvgDoc::new(width, height);

    for (row, &x) in exponents.iter().enumerate() {
        for (col, &p) in cutoffs.iter().enumerate() {
            let Some(cell) = cells.iter().find(|c| c.exponent == x && c.cutoff == p) else {
                continue;
            };
            let y_span = cell.max_abs.max(1e-12) * 1.1;
            let panel = Panel {
                x0: margin_x + col as f64 * (cell_w + 40.0),
                y0: 40.0 + row as f64 * (cell_h + margin_y),
                w: cell_w,
                h: cell_h,
                x_min: cell.signal.grid().t_start(),
                x_max: cell.signal.grid().t_end(),
                y_min: -y_span,
                y_max: y_span,
            };
            panel.frame(&mut doc);
            panel.title(&mut doc, &format!("x={x}, P={p}"));
            panel.hline(&mut doc, 0.0, "#bbbbbb", Some("2 3"));
            if let Some(r) = refs {
                for &ordinate in &r.ordinates {
                    panel.vline(&mut doc, ordinate, REFERENCE_COLOR, Some("5 4"));
                }
            }
            let grid = cell.signal.grid();
            panel.series(
                &mut doc,
                grid.points()
                    .enumerate()
                    .map(|(k, t)| (t, cell.signal.values()[k])),
                PALETTE[0],
                0.9,
            );
        }
    }
    doc.finish()
}

fn scaling_svg(outcome: &ScalingOutcome) -> String {
    let mut doc = SvgDoc::new(720.0, 520.0);
    let mut x_min = f64::INFINITY;
    let mut x_max = f64::NEG_INFINITY;
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for report in &outcome.slopes {
        for (i, &p) in report.cutoffs.iter().enumerate() {
            let lx = (p as f64).ln();
            let ly = report.heuristic_rms[i].ln();
            x_min = x_min.min(lx);
            x_max = x_max.max(lx);
            y_min = y_min.min(ly);
            y_max = y_max.max(ly);
        }
    }
    let pad_y = 0.1 * (y_max - y_min).max(1.0);
    let panel = Panel {
        x0: 80.0,
        y0: 40.0,
        w: 600.0,
        h: 420.0,
        x_min: x_min - 0.3,
        x_max: x_max + 0.3,
        y_min: y_min - pad_y,
        y_max: y_max + pad_y,
    };
    panel.frame(&mut doc);
    panel.title(&mut doc, "ln RMS slope vs ln P (dashed: predicted growth)");
    for (idx, report) in outcome.slopes.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        let pts: Vec<(f64, f64)> = report
            .cutoffs
            .iter()
            .zip(&report.heuristic_rms)
            .map(|(&p, &r)| ((p as f64).ln(), r.ln()))
            .collect();
        panel.series(&mut doc, pts.iter().copied(), color, 1.3);
        for &(x, y) in &pts {
            panel.marker(&mut doc, x, y, color);
        }
        // Guide line with the predicted slope, anchored at the first point.
        let (x0, y0) = pts[0];
        let (x1, _) = *pts.last().expect("three or more cutoffs");
        let (gx0, gy0) = panel.map(x0, y0);
        let (gx1, gy1) = panel.map(x1, y0 + report.predicted_exponent * (x1 - x0));
        doc.line(gx0, gy0, gx1, gy1, color, 1.0, Some("6 4"));
        doc.text(
            panel.x0 + panel.w - 66.0,
            panel.y0 + 18.0 + 16.0 * idx as f64,
            12.0,
            "start",
            &format!("x={}", report.exponent),
        );
    }
    doc.finish()
}

/// 17-significant-digit cell formatting for CSV output.
fn num(v: f64) -> String {
    crate::signal::fmt_f64(v)
}

fn write_table(
    path: PathBuf,
    header: &[impl AsRef<str>],
    rows: impl Iterator<Item = Vec<String>>,
) -> Result<PathBuf> {
    let mut text = String::new();
    let header: Vec<&str> = header.iter().map(AsRef::as_ref).collect();
    text.push_str(&header.join(","));
    text.push('\n');
    for row in rows {
        text.push_str(&row.join(","));
        text.push('\n');
    }
    std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

fn write_text(path: PathBuf, content: String) -> Result<PathBuf> {
    std::fs::write(&path, content).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

/// Read a CSV written by this module back into header + string cells.
pub fn read_table(path: &Path) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Config(format!("{} is empty", path.display())))?
        .split(',')
        .map(str::to_string)
        .collect();
    let rows = lines
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    Ok((header, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn experiment_kind_round_trips() {
        for kind in [
            ExperimentKind::Progressive,
            ExperimentKind::WeightComparison,
            ExperimentKind::ScalingStudy,
        ] {
            assert_eq!(kind.to_string().parse::<ExperimentKind>().unwrap(), kind);
        }
        assert!("figure3".parse::<ExperimentKind>().is_err());
    }

    #[test]
    fn config_validation_catches_misuse() {
        let mut c = ExperimentConfig::weight_comparison("out");
        assert!(c.validate(ExperimentKind::WeightComparison).is_ok());
        assert!(c.validate(ExperimentKind::Progressive).is_err());
        c.exponents.clear();
        assert!(c.validate(ExperimentKind::WeightComparison).is_err());
        let mut c = ExperimentConfig::progressive("out");
        c.cutoffs = vec![1];
        assert!(c.validate(ExperimentKind::Progressive).is_err());
        let mut c = ExperimentConfig::progressive("out");
        c.exponents = vec![0.5, 0.75];
        assert!(compute_progressive(&c).is_err());
    }

    #[test]
    fn ordinate_parsing() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("refs.txt");

        std::fs::write(&path, "# comment\n141.1237\n143.1118\n").unwrap();
        let refs = load_reference_ordinates(&path).unwrap();
        assert_eq!(refs.ordinates, vec![141.1237, 143.1118]);
        assert_eq!(refs.source, "refs.txt");

        std::fs::write(&path, "").unwrap();
        assert!(load_reference_ordinates(&path).unwrap().ordinates.is_empty());

        std::fs::write(&path, "abc\n").unwrap();
        match load_reference_ordinates(&path) {
            Err(Error::OrdinateParse { line, .. }) => assert_eq!(line, 1),
            other => panic!("expected parse error, got {other:?}"),
        }

        std::fs::write(&path, "143.0\n141.0\n").unwrap();
        match load_reference_ordinates(&path) {
            Err(Error::OrdinateOrder { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected order error, got {other:?}"),
        }

        assert!(load_reference_ordinates(Path::new("/nonexistent/refs.txt")).is_err());
    }

    #[test]
    fn shipped_reference_file_is_valid() {
        let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/zeta_zeros_140_160.txt");
        let refs = load_reference_ordinates(&path).unwrap();
        assert_eq!(refs.ordinates.len(), 10);
        assert!(refs.ordinates.iter().all(|&t| (140.0..160.0).contains(&t)));
        assert_eq!(refs.ordinates[0], 141.1237);
        assert_eq!(*refs.ordinates.last().unwrap(), 158.85);
    }

    #[test]
    fn progressive_outputs_are_consistent() {
        let dir = tempfile::tempdir().unwrap();
        let mut config = ExperimentConfig::progressive(dir.path());
        config.grid = SampleGrid::new(140.0, 160.0, 400).unwrap();
        let outcome = compute_progressive(&config).unwrap();
        assert_eq!(outcome.prefixes.len(), 25);
        let paths = emit_progressive(&config, &outcome).unwrap();
        assert_eq!(paths.len(), 3);
        for p in &paths {
            assert!(p.exists(), "{} missing", p.display());
        }

        let (header, rows) = read_table(&paths[0]).unwrap();
        assert_eq!(header.len(), 26);
        assert_eq!(header[0], "t");
        assert_eq!(header[1], "upto_2");
        assert_eq!(header[25], "upto_97");
        assert_eq!(rows.len(), 400);
        // Round trip: parse back the final column and compare exactly.
        for (k, row) in rows.iter().enumerate() {
            let parsed: f64 = row[25].parse().unwrap();
            assert_eq!(parsed, outcome.prefixes[24].values()[k]);
        }
    }

    #[test]
    fn degenerate_progressive_run_still_emits() {
        let dir = tempfile::tempdir().unwrap();
        let mut config = ExperimentConfig::progressive(dir.path());
        config.cutoffs = vec![2];
        config.grid = SampleGrid::new(10.0, 20.0, 64).unwrap();
        let paths = run_progressive(&config).unwrap();
        assert_eq!(paths.len(), 3);
        let (header, rows) = read_table(&paths[0]).unwrap();
        assert_eq!(header, vec!["t", "upto_2"]);
        assert_eq!(rows.len(), 64);
    }

    #[test]
    fn comparison_summary_and_overlay_independence() {
        let dir_plain = tempfile::tempdir().unwrap();
        let mut config = ExperimentConfig::weight_comparison(dir_plain.path());
        config.cutoffs = vec![100, 1000];
        config.grid = SampleGrid::new(140.0, 160.0, 500).unwrap();
        let paths_plain = run_weight_comparison(&config).unwrap();
        // 6 cell CSVs + SVG + summary
        assert_eq!(paths_plain.len(), 8);

        let dir_refs = tempfile::tempdir().unwrap();
        let mut with_refs = config.clone();
        with_refs.output_dir = dir_refs.path().to_path_buf();
        with_refs.reference_ordinates_path =
            Some(Path::new(env!("CARGO_MANIFEST_DIR")).join("data/zeta_zeros_140_160.txt"));
        let paths_refs = run_weight_comparison(&with_refs).unwrap();

        // The overlay must not alter any CSV byte.
        for (a, b) in paths_plain.iter().zip(&paths_refs) {
            assert_eq!(a.file_name(), b.file_name());
            if a.extension().is_some_and(|e| e == "csv") {
                assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
            }
        }
        // But the SVG gains dashed reference lines.
        let svg_plain = std::fs::read_to_string(&paths_plain[6]).unwrap();
        let svg_refs = std::fs::read_to_string(&paths_refs[6]).unwrap();
        assert!(svg_refs.len() > svg_plain.len());

        // Missing reference file is an I/O error.
        let mut broken = config.clone();
        broken.reference_ordinates_path = Some(PathBuf::from("/nonexistent/refs.txt"));
        assert!(matches!(
            run_weight_comparison(&broken),
            Err(Error::Io { .. })
        ));
    }

    #[test]
    fn scaling_outputs_cover_every_exponent() {
        let dir = tempfile::tempdir().unwrap();
        let mut config = ExperimentConfig::scaling_study(dir.path());
        config.cutoffs = vec![1000, 2000, 4000];
        config.exponents = vec![0.5];
        config.empirical_samples = 200;
        let paths = run_scaling_study(&config).unwrap();
        assert_eq!(paths.len(), 4);
        let (_, budget_rows) = read_table(&paths[0]).unwrap();
        assert_eq!(budget_rows.len(), 3);
        assert!(budget_rows.iter().all(|r| r[4] == "Balance"));
        let (_, slope_rows) = read_table(&paths[1]).unwrap();
        assert_eq!(slope_rows.len(), 3);
        let (_, fit_rows) = read_table(&paths[2]).unwrap();
        assert_eq!(fit_rows.len(), 1);
    }
}
