//! Rasterization of generator sets onto regular grids.
//!
//! Three renderers produce identical images:
//!
//! - [`render_brute_force`]: every generator evaluated at every point, the
//!   `O(N·n)` baseline and the oracle everything else is tested against.
//! - [`render_improved`]: two steps. Step 1 walks, for each generator, the
//!   grid points inside the axis-aligned bounding box of its sublevel
//!   ellipsoid `{dist ≤ t}` and records candidates with `dist ≤ t`. Step 2
//!   resolves every point step 1 never assigned by brute force. Any point
//!   whose true winner has `dist ≤ t` is inside that winner's ellipsoid,
//!   hence inside its box, so step 1 already saw the winning pair and the
//!   result equals the baseline exactly.
//! - [`render_section_improved`]: renders a d-dimensional set restricted to
//!   the hyperplane `x_axis = h` on a (d−1)-dimensional grid. A generator
//!   enters step 1 only if its ellipsoid actually cuts the plane, i.e.
//!   `(h − s_axis)² < (t + w)·(M⁻¹)_axis,axis`; it is then reduced by
//!   [`crate::section::section_hyperplane`] and scanned like above. Step 2
//!   falls back to brute force over *all* reduced generators, including the
//!   skipped ones, whose cells can still own far-away pixels.
//!
//! Ties are broken by the smaller generator index, in every step of every
//! renderer. Work is parallelized over disjoint slabs of the first grid
//! axis, so the output is bit-identical for any thread count.

mod grid;

pub use grid::{grid_points_in_box, CoverageImage, GridSpec, LabelImage, RenderStats, NONE_LABEL};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{bounding_box, dist, Generator, GeneratorSet, MAX_DIM};
use crate::section::{section_set, FlatSpec};

/// One generator with its clipped per-axis scan ranges.
struct BoxedGen<'a> {
    label: u32,
    gen: &'a Generator,
    lo: [usize; MAX_DIM],
    hi: [usize; MAX_DIM],
}

fn check_grid_set(grid: &GridSpec, set: &GeneratorSet) -> Result<()> {
    if grid.dim() != set.dim() {
        return Err(Error::DimensionMismatch {
            expected: set.dim(),
            got: grid.dim(),
        });
    }
    Ok(())
}

fn check_improved_inputs(set: &GeneratorSet, threshold: f64) -> Result<()> {
    if !(threshold > 0.0) || !threshold.is_finite() {
        return Err(Error::NonpositiveThreshold(threshold));
    }
    for (index, g) in set.iter().enumerate() {
        if g.weight() < 0.0 {
            return Err(Error::NegativeWeight {
                index,
                weight: g.weight(),
            });
        }
    }
    Ok(())
}

/// Scan ranges for each generator; a generator whose box misses the grid on
/// any axis is normalized to fully empty so the slab loop skips it outright.
fn boxed_generators<'a>(
    grid: &GridSpec,
    gens: impl Iterator<Item = (u32, &'a Generator)>,
    threshold: f64,
) -> Result<Vec<BoxedGen<'a>>> {
    gens.map(|(label, gen)| {
        let b = bounding_box(gen, threshold)?;
        let ranges = grid_points_in_box(grid, &b);
        let mut lo = [0usize; MAX_DIM];
        let mut hi = [0usize; MAX_DIM];
        if ranges.iter().any(|r| r.is_empty()) {
            return Ok(BoxedGen { label, gen, lo, hi });
        }
        for (a, r) in ranges.iter().enumerate() {
            lo[a] = r.start;
            hi[a] = r.end;
        }
        Ok(BoxedGen { label, gen, lo, hi })
    })
    .collect()
}

#[inline]
fn candidate_update(labels: &mut [u32], dists: &mut [f64], off: usize, d: f64, label: u32) {
    // strict total order (distance, label): smaller label wins exact ties
    if d < dists[off] || (d == dists[off] && label < labels[off]) {
        dists[off] = d;
        labels[off] = label;
    }
}

/// Step 1 of the improved renderer. Returns the number of distance
/// evaluations (every point of every box counts, hit or miss).
fn step1_pass(
    grid: &GridSpec,
    gens: &[BoxedGen<'_>],
    threshold: f64,
    labels: &mut [u32],
    dists: &mut [f64],
) -> u64 {
    let d = grid.dim();
    let slab: usize = grid.counts()[1..].iter().product();
    labels
        .par_chunks_mut(slab)
        .zip(dists.par_chunks_mut(slab))
        .enumerate()
        .map(|(i0, (lch, dch))| {
            let mut evals = 0u64;
            let mut x = [0.0; MAX_DIM];
            x[0] = grid.axis_coord(0, i0);
            for bg in gens {
                if i0 < bg.lo[0] || i0 >= bg.hi[0] {
                    continue;
                }
                if d == 1 {
                    let dv = dist(&x[..1], bg.gen);
                    evals += 1;
                    if dv <= threshold {
                        candidate_update(lch, dch, 0, dv, bg.label);
                    }
                    continue;
                }
                let last = d - 1;
                let mut ix = [0usize; MAX_DIM];
                ix[1..last].copy_from_slice(&bg.lo[1..last]);
                'boxes: loop {
                    let mut off_base = 0usize;
                    for a in 1..last {
                        x[a] = grid.axis_coord(a, ix[a]);
                        off_base += ix[a] * grid.stride(a);
                    }
                    for k in bg.lo[last]..bg.hi[last] {
                        x[last] = grid.axis_coord(last, k);
                        let dv = dist(&x[..d], bg.gen);
                        evals += 1;
                        if dv <= threshold {
                            candidate_update(lch, dch, off_base + k, dv, bg.label);
                        }
                    }
                    if last <= 1 {
                        break;
                    }
                    let mut a = last - 1;
                    loop {
                        ix[a] += 1;
                        if ix[a] < bg.hi[a] {
                            break;
                        }
                        if a == 1 {
                            break 'boxes;
                        }
                        ix[a] = bg.lo[a];
                        a -= 1;
                    }
                }
            }
            evals
        })
        .sum()
}

/// Brute-force pass over either every point (`only_unassigned = false`) or
/// the points step 1 left unassigned. Returns the number of points resolved.
fn fallback_pass(
    grid: &GridSpec,
    set: &GeneratorSet,
    labels: &mut [u32],
    dists: &mut [f64],
    only_unassigned: bool,
) -> u64 {
    let d = grid.dim();
    let slab: usize = grid.counts()[1..].iter().product();
    labels
        .par_chunks_mut(slab)
        .zip(dists.par_chunks_mut(slab))
        .enumerate()
        .map(|(i0, (lch, dch))| {
            let mut points = 0u64;
            let mut x = [0.0; MAX_DIM];
            x[0] = grid.axis_coord(0, i0);
            let resolve = |off: usize, x: &[f64], lch: &mut [u32], dch: &mut [f64]| {
                if only_unassigned && lch[off] != NONE_LABEL {
                    return 0u64;
                }
                let (label, dv) = set.classify(x);
                lch[off] = label as u32;
                dch[off] = dv;
                1
            };
            if d == 1 {
                points += resolve(0, &x[..1], lch, dch);
            } else {
                let last = d - 1;
                let mut ix = [0usize; MAX_DIM];
                'slab: loop {
                    let mut off_base = 0usize;
                    for a in 1..last {
                        x[a] = grid.axis_coord(a, ix[a]);
                        off_base += ix[a] * grid.stride(a);
                    }
                    for k in 0..grid.counts()[last] {
                        x[last] = grid.axis_coord(last, k);
                        points += resolve(off_base + k, &x[..d], lch, dch);
                    }
                    if last <= 1 {
                        break;
                    }
                    let mut a = last - 1;
                    loop {
                        ix[a] += 1;
                        if ix[a] < grid.counts()[a] {
                            break;
                        }
                        if a == 1 {
                            break 'slab;
                        }
                        ix[a] = 0;
                        a -= 1;
                    }
                }
            }
            points
        })
        .sum()
}

/// Evaluate every generator at every grid point; the `O(N·n)` baseline.
///
/// `step2_evals` records all `N·n` evaluations; `step1_evals` stays zero.
pub fn render_brute_force(
    grid: &GridSpec,
    set: &GeneratorSet,
) -> Result<(LabelImage, RenderStats)> {
    check_grid_set(grid, set)?;
    let total = grid.num_points();
    let mut labels = vec![NONE_LABEL; total];
    let mut dists = vec![f64::INFINITY; total];
    let points = fallback_pass(grid, set, &mut labels, &mut dists, false);
    let stats = RenderStats {
        step1_evals: 0,
        step2_evals: points * set.len() as u64,
        step2_points: points,
    };
    Ok((LabelImage::from_parts(grid.clone(), labels, dists), stats))
}

/// Two-step renderer: ellipsoid-box scan, then brute-force fallback.
///
/// Requires `threshold > 0` and nonnegative weights (apply
/// [`crate::transform::normalize_nonnegative`] first if needed). Output
/// labels equal [`render_brute_force`] exactly.
pub fn render_improved(
    grid: &GridSpec,
    set: &GeneratorSet,
    threshold: f64,
) -> Result<(LabelImage, RenderStats)> {
    check_grid_set(grid, set)?;
    check_improved_inputs(set, threshold)?;
    let total = grid.num_points();
    let mut labels = vec![NONE_LABEL; total];
    let mut dists = vec![f64::INFINITY; total];
    let gens = boxed_generators(
        grid,
        set.iter().enumerate().map(|(i, g)| (i as u32, g)),
        threshold,
    )?;
    let step1_evals = step1_pass(grid, &gens, threshold, &mut labels, &mut dists);
    let step2_points = fallback_pass(grid, set, &mut labels, &mut dists, true);
    let stats = RenderStats {
        step1_evals,
        step2_evals: step2_points * set.len() as u64,
        step2_points,
    };
    Ok((LabelImage::from_parts(grid.clone(), labels, dists), stats))
}

/// Step 1 only, keeping [`NONE_LABEL`] where no ellipsoid reached.
///
/// Useful for visualizing how coverage grows with the threshold; the covered
/// region is nondecreasing in `threshold`.
pub fn step1_coverage(
    grid: &GridSpec,
    set: &GeneratorSet,
    threshold: f64,
) -> Result<(CoverageImage, RenderStats)> {
    check_grid_set(grid, set)?;
    check_improved_inputs(set, threshold)?;
    let total = grid.num_points();
    let mut labels = vec![NONE_LABEL; total];
    let mut dists = vec![f64::INFINITY; total];
    let gens = boxed_generators(
        grid,
        set.iter().enumerate().map(|(i, g)| (i as u32, g)),
        threshold,
    )?;
    let step1_evals = step1_pass(grid, &gens, threshold, &mut labels, &mut dists);
    let covered = labels.iter().filter(|&&l| l != NONE_LABEL).count();
    Ok((
        CoverageImage {
            grid: grid.clone(),
            labels,
            covered,
        },
        RenderStats {
            step1_evals,
            step2_evals: 0,
            step2_points: 0,
        },
    ))
}

/// Render the section of a d-dimensional set with the hyperplane
/// `x_axis = h` onto a (d−1)-dimensional grid.
///
/// Step 1 skips generators whose ellipsoid misses the plane; step 2 falls
/// back to brute force over the full reduced set. Output labels equal
/// [`render_brute_force`] on [`section_set`] of the input exactly.
pub fn render_section_improved(
    grid: &GridSpec,
    set: &GeneratorSet,
    axis: usize,
    h: f64,
    threshold: f64,
) -> Result<(LabelImage, RenderStats)> {
    if axis >= set.dim() {
        return Err(Error::InvalidFlat(format!(
            "axis {axis} out of range for dimension {}",
            set.dim()
        )));
    }
    if grid.dim() + 1 != set.dim() {
        return Err(Error::DimensionMismatch {
            expected: set.dim() - 1,
            got: grid.dim(),
        });
    }
    check_improved_inputs(set, threshold)?;
    let reduced = section_set(set, &FlatSpec::hyperplane(axis, h)?)?;

    let total = grid.num_points();
    let mut labels = vec![NONE_LABEL; total];
    let mut dists = vec![f64::INFINITY; total];

    // Only generators whose ellipsoid cuts the plane enter step 1:
    // (h − s_axis)² < (t + w)·(M⁻¹)_axis,axis. The reduced radius
    // t + w̃ is then positive, so the reduced bounding box exists.
    let hit_pairs: Vec<(u32, &Generator)> = set
        .iter()
        .zip(reduced.iter())
        .enumerate()
        .filter_map(|(i, (g, rg))| {
            let gap = h - g.seed()[axis];
            let inv_kk = g.aniso().inv_diagonal()[axis];
            let hits =
                gap * gap < (threshold + g.weight()) * inv_kk && threshold + rg.weight() > 0.0;
            hits.then_some((i as u32, rg))
        })
        .collect();
    let gens = boxed_generators(grid, hit_pairs.into_iter(), threshold)?;
    let step1_evals = step1_pass(grid, &gens, threshold, &mut labels, &mut dists);
    let step2_points = fallback_pass(grid, &reduced, &mut labels, &mut dists, true);
    let stats = RenderStats {
        step1_evals,
        step2_evals: step2_points * reduced.len() as u64,
        step2_points,
    };
    Ok((LabelImage::from_parts(grid.clone(), labels, dists), stats))
}
