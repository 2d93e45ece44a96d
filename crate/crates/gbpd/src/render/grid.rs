//! Regular point lattices and rendered label images.
//!
//! Sample points follow the pixel-center convention: along axis `i`, index
//! `j` sits at `origin[i] + (j + ½)·spacing[i]`. Linear indices are
//! row-major with the last axis fastest, matching the on-disk label layout.

use std::ops::Range;

use crate::error::{Error, Result};
use crate::geometry::{check_dim, AxisBox, MAX_DIM};

/// Sentinel label for a point not yet assigned to any generator. Never
/// present in a fully rendered image.
pub const NONE_LABEL: u32 = u32::MAX;

/// A regular lattice of sample points in an axis-aligned window.
#[derive(Clone, Debug)]
pub struct GridSpec {
    dim: usize,
    origin: [f64; MAX_DIM],
    spacing: [f64; MAX_DIM],
    counts: [usize; MAX_DIM],
    strides: [usize; MAX_DIM],
}

impl GridSpec {
    pub fn new(origin: &[f64], spacing: &[f64], counts: &[usize]) -> Result<Self> {
        let dim = counts.len();
        check_dim(dim)?;
        if origin.len() != dim || spacing.len() != dim {
            return Err(Error::InvalidGrid(format!(
                "origin/spacing/counts lengths differ: {}/{}/{}",
                origin.len(),
                spacing.len(),
                dim
            )));
        }
        let mut total: usize = 1;
        for i in 0..dim {
            if !(spacing[i] > 0.0) || !spacing[i].is_finite() {
                return Err(Error::InvalidGrid(format!(
                    "spacing {} on axis {i} must be positive and finite",
                    spacing[i]
                )));
            }
            if !origin[i].is_finite() {
                return Err(Error::InvalidGrid(format!("non-finite origin on axis {i}")));
            }
            if counts[i] == 0 {
                return Err(Error::InvalidGrid(format!("zero count on axis {i}")));
            }
            total = total
                .checked_mul(counts[i])
                .ok_or_else(|| Error::InvalidGrid("point count overflows usize".into()))?;
        }
        let mut o = [0.0; MAX_DIM];
        let mut s = [0.0; MAX_DIM];
        let mut c = [1usize; MAX_DIM];
        o[..dim].copy_from_slice(origin);
        s[..dim].copy_from_slice(spacing);
        c[..dim].copy_from_slice(counts);
        let mut strides = [1usize; MAX_DIM];
        for i in (0..dim.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * c[i + 1];
        }
        Ok(Self {
            dim,
            origin: o,
            spacing: s,
            counts: c,
            strides,
        })
    }

    /// Grid with the same spacing on every axis.
    pub fn uniform(origin: &[f64], spacing: f64, counts: &[usize]) -> Result<Self> {
        let s = vec![spacing; counts.len()];
        Self::new(origin, &s, counts)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn counts(&self) -> &[usize] {
        &self.counts[..self.dim]
    }

    #[inline]
    pub fn origin(&self) -> &[f64] {
        &self.origin[..self.dim]
    }

    #[inline]
    pub fn spacing(&self) -> &[f64] {
        &self.spacing[..self.dim]
    }

    /// Total number of sample points.
    #[inline]
    pub fn num_points(&self) -> usize {
        self.counts[..self.dim].iter().product()
    }

    /// Coordinate of index `j` along one axis (pixel-center convention).
    #[inline]
    pub fn axis_coord(&self, axis: usize, j: usize) -> f64 {
        self.origin[axis] + (j as f64 + 0.5) * self.spacing[axis]
    }

    /// Row-major linear index, last axis fastest.
    #[inline]
    pub fn linear_index(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.dim);
        let mut flat = 0;
        for i in 0..self.dim {
            debug_assert!(idx[i] < self.counts[i]);
            flat += idx[i] * self.strides[i];
        }
        flat
    }

    /// Inverse of [`Self::linear_index`].
    #[inline]
    pub fn decompose(&self, mut flat: usize) -> [usize; MAX_DIM] {
        let mut idx = [0usize; MAX_DIM];
        for i in 0..self.dim {
            idx[i] = flat / self.strides[i];
            flat %= self.strides[i];
        }
        idx
    }

    /// Coordinates of the sample point with the given per-axis indices.
    #[inline]
    pub fn point(&self, idx: &[usize]) -> [f64; MAX_DIM] {
        let mut x = [0.0; MAX_DIM];
        for i in 0..self.dim {
            x[i] = self.axis_coord(i, idx[i]);
        }
        x
    }

    #[inline]
    pub(crate) fn stride(&self, axis: usize) -> usize {
        self.strides[axis]
    }

    /// The window covered by the grid: `[origin, origin + counts·spacing]`.
    pub fn window(&self) -> AxisBox {
        let mut hi = [0.0; MAX_DIM];
        for i in 0..self.dim {
            hi[i] = self.origin[i] + self.counts[i] as f64 * self.spacing[i];
        }
        AxisBox::new(&self.origin[..self.dim], &hi[..self.dim]).expect("grid window is a valid box")
    }

    /// Grid of one dimension less, with the given axis removed; the surviving
    /// axes keep their relative order, origin and spacing.
    pub fn drop_axis(&self, axis: usize) -> Result<GridSpec> {
        if axis >= self.dim {
            return Err(Error::InvalidGrid(format!(
                "axis {axis} out of range for dimension {}",
                self.dim
            )));
        }
        if self.dim == 1 {
            return Err(Error::InvalidGrid(
                "cannot drop the only axis of a 1-d grid".into(),
            ));
        }
        let keep: Vec<usize> = (0..self.dim).filter(|&i| i != axis).collect();
        let origin: Vec<f64> = keep.iter().map(|&i| self.origin[i]).collect();
        let spacing: Vec<f64> = keep.iter().map(|&i| self.spacing[i]).collect();
        let counts: Vec<usize> = keep.iter().map(|&i| self.counts[i]).collect();
        GridSpec::new(&origin, &spacing, &counts)
    }
}

/// Per-axis half-open index ranges of the pixel centers inside
/// `box ∩ window`; an axis yields an empty range when they are disjoint.
pub fn grid_points_in_box(grid: &GridSpec, b: &AxisBox) -> Vec<Range<usize>> {
    assert_eq!(b.dim(), grid.dim(), "box dimension does not match grid");
    (0..grid.dim())
        .map(|i| axis_range(grid, i, b.lower()[i], b.upper()[i]))
        .collect()
}

/// Index range of centers with `lower ≤ origin + (j+½)·spacing ≤ upper`,
/// clamped to the axis.
pub(crate) fn axis_range(grid: &GridSpec, axis: usize, lower: f64, upper: f64) -> Range<usize> {
    let n = grid.counts[axis] as i64;
    let lo_f = (lower - grid.origin[axis]) / grid.spacing[axis] - 0.5;
    let hi_f = (upper - grid.origin[axis]) / grid.spacing[axis] - 0.5;
    let lo = (lo_f.ceil() as i64).clamp(0, n);
    let hi = ((hi_f.floor() as i64) + 1).clamp(0, n);
    if hi <= lo {
        return 0..0;
    }
    lo as usize..hi as usize
}

/// A rendered image: the grid, the winning label per point, and the winning
/// distance value per point.
#[derive(Clone, Debug)]
pub struct LabelImage {
    grid: GridSpec,
    labels: Vec<u32>,
    best_dist: Vec<f64>,
}

impl LabelImage {
    pub(crate) fn from_parts(grid: GridSpec, labels: Vec<u32>, best_dist: Vec<f64>) -> Self {
        debug_assert_eq!(labels.len(), grid.num_points());
        debug_assert_eq!(best_dist.len(), grid.num_points());
        Self {
            grid,
            labels,
            best_dist,
        }
    }

    #[inline]
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    /// Winning generator index per point, row-major (last axis fastest).
    #[inline]
    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    /// Winning distance value per point, same layout as [`Self::labels`].
    #[inline]
    pub fn best_dist(&self) -> &[f64] {
        &self.best_dist
    }

    pub fn label_at(&self, idx: &[usize]) -> u32 {
        self.labels[self.grid.linear_index(idx)]
    }
}

/// Partial image after the first pass of the improved renderer: points not
/// reached keep [`NONE_LABEL`].
#[derive(Clone, Debug)]
pub struct CoverageImage {
    pub grid: GridSpec,
    pub labels: Vec<u32>,
    /// Number of points with a label assigned.
    pub covered: usize,
}

/// Distance-evaluation counters for one render.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RenderStats {
    /// Evaluations inside bounding boxes during step 1.
    pub step1_evals: u64,
    /// Evaluations in the brute-force fallback.
    pub step2_evals: u64,
    /// Points left unassigned after step 1 and resolved by the fallback.
    pub step2_points: u64,
}

impl RenderStats {
    pub fn total_evals(&self) -> u64 {
        self.step1_evals + self.step2_evals
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pixel_centers() {
        let g = GridSpec::uniform(&[0.0], 0.25, &[4]).unwrap();
        assert_eq!(g.axis_coord(0, 0), 0.125);
        assert_eq!(g.axis_coord(0, 3), 0.875);
        let w = g.window();
        assert_eq!(w.lower(), &[0.0]);
        assert_eq!(w.upper(), &[1.0]);
    }

    #[test]
    fn linear_index_round_trip() {
        let g = GridSpec::uniform(&[0.0, 0.0, 0.0], 1.0, &[3, 4, 5]).unwrap();
        assert_eq!(g.num_points(), 60);
        // last axis fastest
        assert_eq!(g.linear_index(&[0, 0, 1]), 1);
        assert_eq!(g.linear_index(&[0, 1, 0]), 5);
        assert_eq!(g.linear_index(&[1, 0, 0]), 20);
        for flat in 0..60 {
            let idx = g.decompose(flat);
            assert_eq!(g.linear_index(&idx[..3]), flat);
        }
    }

    #[test]
    fn box_ranges_examples() {
        let g = GridSpec::uniform(&[0.0], 0.25, &[4]).unwrap();
        // full window
        let b = AxisBox::new(&[-1.0], &[2.0]).unwrap();
        assert_eq!(grid_points_in_box(&g, &b), vec![0..4]);
        // centers are 0.125, 0.375, 0.625, 0.875; box [0.2, 0.7] → {1, 2}
        let b = AxisBox::new(&[0.2], &[0.7]).unwrap();
        assert_eq!(grid_points_in_box(&g, &b), vec![1..3]);
        // strictly between two centers
        let b = AxisBox::new(&[0.14], &[0.37]).unwrap();
        assert_eq!(grid_points_in_box(&g, &b), vec![0..0]);
        // fully outside the window
        let b = AxisBox::new(&[5.0], &[6.0]).unwrap();
        assert!(grid_points_in_box(&g, &b)[0].is_empty());
    }

    #[test]
    fn boundary_centers_are_inclusive() {
        let g = GridSpec::uniform(&[0.0], 1.0, &[4]).unwrap();
        // box edges exactly on centers 0.5 and 2.5
        let b = AxisBox::new(&[0.5], &[2.5]).unwrap();
        assert_eq!(grid_points_in_box(&g, &b), vec![0..3]);
    }

    #[test]
    fn drop_axis_keeps_survivors() {
        let g = GridSpec::new(&[0.0, 1.0, 2.0], &[0.5, 0.25, 0.125], &[8, 4, 2]).unwrap();
        let r = g.drop_axis(1).unwrap();
        assert_eq!(r.counts(), &[8, 2]);
        assert_eq!(r.origin(), &[0.0, 2.0]);
        assert_eq!(r.spacing(), &[0.5, 0.125]);
        assert!(g.drop_axis(3).is_err());
    }

    #[test]
    fn grid_validation() {
        assert!(GridSpec::uniform(&[0.0], 0.0, &[4]).is_err());
        assert!(GridSpec::uniform(&[0.0], -1.0, &[4]).is_err());
        assert!(GridSpec::uniform(&[0.0], 1.0, &[0]).is_err());
        assert!(GridSpec::uniform(&[0.0, 0.0], 1.0, &[4]).is_err());
        assert!(GridSpec::uniform(&[], 1.0, &[]).is_err());
    }
}
