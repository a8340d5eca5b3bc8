//! Deterministic grid-evaluation kernel.
//!
//! Each prime contributes `w * cos(t_k * log p)` across the grid. Instead of
//! calling `sin_cos` per (prime, point) pair, the kernel advances each
//! prime's phase across a grid segment by complex rotation (two multiplies,
//! two adds per component) and resynchronizes with a direct `sin_cos` at
//! fixed absolute grid indices (multiples of [`RESYNC_INTERVAL`]).
//!
//! Summation is structured so the floating-point operation sequence per grid
//! point is a pure function of the ensemble and the grid: primes are split
//! into fixed [`PRIME_BLOCK`]-sized blocks, each block is Kahan-summed in
//! ascending-prime order, and block partials are Kahan-merged in ascending
//! block order. Work may be scheduled over grid segments or over prime
//! blocks; both schedules execute the same operations per point, so the
//! output is bit-identical for any thread count and either axis.

use rayon::prelude::*;

use super::SampleGrid;
use crate::sum::KahanSum;

/// Grid steps between direct sin/cos resynchronizations. At 256 steps the
/// accumulated rotation drift stays below ~1e-13 per term, far inside the
/// 1e-9 relative fidelity contract even for 1e5-point grids.
pub(crate) const RESYNC_INTERVAL: usize = 256;

/// Primes per summation block.
pub(crate) const PRIME_BLOCK: usize = 1024;

/// Upper bound on transient partial-sum storage for the block-parallel axis.
const BLOCK_AXIS_MEM_LIMIT: usize = 128 << 20;

/// Companion series accumulated alongside the cosine sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Companion {
    /// Cosine sum only.
    None,
    /// `-sum w * log p * sin(t log p)` — the signal derivative.
    Derivative,
    /// `sum w * sin(t log p)` — for phase-referenced recombination.
    Sine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Axis {
    Segments,
    Blocks,
}

pub(crate) struct GridSums {
    pub cos_sum: Vec<f64>,
    pub companion: Option<Vec<f64>>,
}

/// Evaluate `sum_p w_p cos(t_k log p)` (plus the requested companion) on the
/// whole grid. Deterministic: output depends only on `(logs, weights, grid,
/// companion)`.
pub(crate) fn eval_grid_sums(
    logs: &[f64],
    weights: &[f64],
    grid: &SampleGrid,
    companion: Companion,
) -> GridSums {
    eval_grid_sums_on(logs, weights, grid, companion, select_axis(logs.len(), grid, companion))
}

pub(crate) fn select_axis(n_primes: usize, grid: &SampleGrid, companion: Companion) -> Axis {
    let n = grid.n_samples();
    let n_blocks = n_primes.div_ceil(PRIME_BLOCK).max(1);
    let n_segments = n.div_ceil(RESYNC_INTERVAL).max(1);
    let streams = if companion == Companion::None { 1 } else { 2 };
    let block_axis_mem = n_blocks * n * streams * std::mem::size_of::<f64>();
    if n_blocks > n_segments && block_axis_mem <= BLOCK_AXIS_MEM_LIMIT {
        Axis::Blocks
    } else {
        Axis::Segments
    }
}

pub(crate) fn eval_grid_sums_on(
    logs: &[f64],
    weights: &[f64],
    grid: &SampleGrid,
    companion: Companion,
    axis: Axis,
) -> GridSums {
    debug_assert_eq!(logs.len(), weights.len());
    match axis {
        Axis::Segments => by_segments(logs, weights, grid, companion),
        Axis::Blocks => by_blocks(logs, weights, grid, companion),
    }
}

/// One prime block over one grid segment, accumulated into per-point Kahan
/// partials. This is the only place term contributions are generated; both
/// scheduling axes call it with identical arguments.
fn accumulate(
    logs: &[f64],
    weights: &[f64],
    grid: &SampleGrid,
    seg_start: usize,
    companion: Companion,
    cos_acc: &mut [KahanSum],
    comp_acc: &mut [KahanSum],
) {
    let seg_len = cos_acc.len();
    let dt = grid.spacing();
    let t0 = grid.point(seg_start);
    for (&lp, &w) in logs.iter().zip(weights) {
        let (sin_step, cos_step) = (dt * lp).sin_cos();
        let (mut s, mut c) = (t0 * lp).sin_cos();
        match companion {
            Companion::None => {
                for acc in cos_acc.iter_mut().take(seg_len) {
                    acc.add(w * c);
                    let c_next = c * cos_step - s * sin_step;
                    let s_next = s * cos_step + c * sin_step;
                    c = c_next;
                    s = s_next;
                }
            }
            Companion::Derivative => {
                let wl = w * lp;
                for k in 0..seg_len {
                    cos_acc[k].add(w * c);
                    comp_acc[k].add(-wl * s);
                    let c_next = c * cos_step - s * sin_step;
                    let s_next = s * cos_step + c * sin_step;
                    c = c_next;
                    s = s_next;
                }
            }
            Companion::Sine => {
                for k in 0..seg_len {
                    cos_acc[k].add(w * c);
                    comp_acc[k].add(w * s);
                    let c_next = c * cos_step - s * sin_step;
                    let s_next = s * cos_step + c * sin_step;
                    c = c_next;
                    s = s_next;
                }
            }
        }
    }
}

fn by_segments(logs: &[f64], weights: &[f64], grid: &SampleGrid, companion: Companion) -> GridSums {
    let n = grid.n_samples();
    let has_comp = companion != Companion::None;
    let n_segments = n.div_ceil(RESYNC_INTERVAL);

    let per_segment: Vec<(Vec<f64>, Vec<f64>)> = (0..n_segments)
        .into_par_iter()
        .map(|si| {
            let seg_start = si * RESYNC_INTERVAL;
            let seg_len = RESYNC_INTERVAL.min(n - seg_start);
            let mut total = vec![KahanSum::new(); seg_len];
            let mut total_comp = vec![KahanSum::new(); if has_comp { seg_len } else { 0 }];
            let mut part = vec![KahanSum::new(); seg_len];
            let mut part_comp = vec![KahanSum::new(); if has_comp { seg_len } else { 0 }];
            for (block_logs, block_weights) in blocks(logs, weights) {
                part.fill(KahanSum::new());
                part_comp.fill(KahanSum::new());
                accumulate(
                    block_logs,
                    block_weights,
                    grid,
                    seg_start,
                    companion,
                    &mut part,
                    &mut part_comp,
                );
                for k in 0..seg_len {
                    total[k].add(part[k].value());
                }
                if has_comp {
                    for k in 0..seg_len {
                        total_comp[k].add(part_comp[k].value());
                    }
                }
            }
            (
                total.iter().map(KahanSum::value).collect(),
                total_comp.iter().map(KahanSum::value).collect(),
            )
        })
        .collect();

    let mut cos_sum = Vec::with_capacity(n);
    let mut comp = if has_comp { Vec::with_capacity(n) } else { Vec::new() };
    for (seg_vals, seg_comp) in per_segment {
        cos_sum.extend_from_slice(&seg_vals);
        comp.extend_from_slice(&seg_comp);
    }
    GridSums {
        cos_sum,
        companion: has_comp.then_some(comp),
    }
}

fn by_blocks(logs: &[f64], weights: &[f64], grid: &SampleGrid, companion: Companion) -> GridSums {
    let n = grid.n_samples();
    let has_comp = companion != Companion::None;
    let n_segments = n.div_ceil(RESYNC_INTERVAL);

    let partials: Vec<(Vec<f64>, Vec<f64>)> = blocks(logs, weights)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(block_logs, block_weights)| {
            let mut val = vec![KahanSum::new(); n];
            let mut comp = vec![KahanSum::new(); if has_comp { n } else { 0 }];
            for si in 0..n_segments {
                let seg_start = si * RESYNC_INTERVAL;
                let seg_len = RESYNC_INTERVAL.min(n - seg_start);
                let comp_slice = if has_comp {
                    &mut comp[seg_start..seg_start + seg_len]
                } else {
                    &mut comp[..]
                };
                accumulate(
                    block_logs,
                    block_weights,
                    grid,
                    seg_start,
                    companion,
                    &mut val[seg_start..seg_start + seg_len],
                    comp_slice,
                );
            }
            (
                val.iter().map(KahanSum::value).collect(),
                comp.iter().map(KahanSum::value).collect(),
            )
        })
        .collect();

    // Merge block partials in ascending block order.
    let mut total = vec![KahanSum::new(); n];
    let mut total_comp = vec![KahanSum::new(); if has_comp { n } else { 0 }];
    for (vals, comps) in &partials {
        for k in 0..n {
            total[k].add(vals[k]);
        }
        if has_comp {
            for k in 0..n {
                total_comp[k].add(comps[k]);
            }
        }
    }
    GridSums {
        cos_sum: total.iter().map(KahanSum::value).collect(),
        companion: has_comp.then(|| total_comp.iter().map(KahanSum::value).collect()),
    }
}

fn blocks<'a>(
    logs: &'a [f64],
    weights: &'a [f64],
) -> impl Iterator<Item = (&'a [f64], &'a [f64])> {
    logs.chunks(PRIME_BLOCK).zip(weights.chunks(PRIME_BLOCK))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(t0: f64, t1: f64, n: usize) -> SampleGrid {
        SampleGrid::new(t0, t1, n).unwrap()
    }

    fn toy_ensemble(n_primes: usize) -> (Vec<f64>, Vec<f64>) {
        // Synthetic frequency/weight pairs; enough entries to span many blocks.
        let logs: Vec<f64> = (0..n_primes).map(|i| ((i + 2) as f64).ln()).collect();
        let weights: Vec<f64> = logs.iter().map(|l| (-0.5 * l).exp()).collect();
        (logs, weights)
    }

    #[test]
    fn axes_are_bit_identical() {
        let (logs, weights) = toy_ensemble(5000); // 5 blocks
        let g = grid(140.0, 160.0, 700); // 3 segments
        for companion in [Companion::None, Companion::Derivative, Companion::Sine] {
            let a = eval_grid_sums_on(&logs, &weights, &g, companion, Axis::Segments);
            let b = eval_grid_sums_on(&logs, &weights, &g, companion, Axis::Blocks);
            assert_eq!(a.cos_sum, b.cos_sum);
            assert_eq!(a.companion, b.companion);
        }
    }

    #[test]
    fn rotation_tracks_direct_evaluation() {
        let (logs, weights) = toy_ensemble(300);
        let g = grid(0.0, 50.0, 2000);
        let out = eval_grid_sums(&logs, &weights, &g, Companion::Sine);
        let scale: f64 = weights.iter().sum();
        for k in (0..2000).step_by(97) {
            let t = g.point(k);
            let direct_c: f64 = logs
                .iter()
                .zip(&weights)
                .map(|(&l, &w)| w * (t * l).cos())
                .sum();
            let direct_s: f64 = logs
                .iter()
                .zip(&weights)
                .map(|(&l, &w)| w * (t * l).sin())
                .sum();
            assert!((out.cos_sum[k] - direct_c).abs() <= 1e-9 * scale);
            assert!((out.companion.as_ref().unwrap()[k] - direct_s).abs() <= 1e-9 * scale);
        }
    }

    #[test]
    fn thread_count_does_not_change_bits() {
        let (logs, weights) = toy_ensemble(4096);
        let g = grid(140.0, 160.0, 1500);
        let reference = eval_grid_sums(&logs, &weights, &g, Companion::Derivative);
        for threads in [1usize, 4, 8] {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            let out = pool.install(|| eval_grid_sums(&logs, &weights, &g, Companion::Derivative));
            assert_eq!(out.cos_sum, reference.cos_sum);
            assert_eq!(out.companion, reference.companion);
        }
    }
}
