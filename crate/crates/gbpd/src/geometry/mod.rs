//! Core domain types and distance primitives.
//!
//! A tessellation cell is defined by a *generator* `(s, M, w)`: a seed point
//! `s`, an SPD anisotropy matrix `M` and a scalar weight `w`. The governing
//! distance is
//!
//! ```text
//! dist(x, (s, M, w)) = (x − s)ᵀ M (x − s) − w
//! ```
//!
//! and each point of space belongs to the generator minimizing it. With
//! `M = I` this is a power diagram (Laguerre tessellation); with equal
//! weights as well, an ordinary Voronoi diagram.
//!
//! The sublevel set `{x : dist(x, g) ≤ t}` is an ellipsoid centred at the
//! seed; [`bounding_box`] and [`ellipsoid_volume`] describe it and drive both
//! the accelerated renderer and the cost model.

mod matrix;

pub use matrix::{SpdMatrix, SquareMatrix, MAX_DIM, SYMMETRY_TOL};

pub(crate) use matrix::check_dim;

use crate::error::{Error, Result};

/// One cell's defining data: seed point, anisotropy matrix, weight.
///
/// Weights may be negative here; the improved renderer is the only consumer
/// that insists on nonnegative weights, and it checks at its own boundary.
#[derive(Clone, Debug)]
pub struct Generator {
    seed: [f64; MAX_DIM],
    aniso: SpdMatrix,
    weight: f64,
}

impl Generator {
    pub fn new(seed: &[f64], aniso: SpdMatrix, weight: f64) -> Result<Self> {
        if seed.len() != aniso.dim() {
            return Err(Error::DimensionMismatch {
                expected: aniso.dim(),
                got: seed.len(),
            });
        }
        if seed.iter().any(|v| !v.is_finite()) || !weight.is_finite() {
            return Err(Error::NonFinite("generator seed or weight"));
        }
        let mut s = [0.0; MAX_DIM];
        s[..seed.len()].copy_from_slice(seed);
        Ok(Self {
            seed: s,
            aniso,
            weight,
        })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.aniso.dim()
    }

    #[inline]
    pub fn seed(&self) -> &[f64] {
        &self.seed[..self.aniso.dim()]
    }

    #[inline]
    pub fn aniso(&self) -> &SpdMatrix {
        &self.aniso
    }

    #[inline]
    pub fn weight(&self) -> f64 {
        self.weight
    }

    /// Same generator with a different weight; used by the weight transforms.
    pub(crate) fn with_weight(&self, weight: f64) -> Generator {
        Generator {
            seed: self.seed,
            aniso: self.aniso.clone(),
            weight,
        }
    }
}

/// Finite ordered list of generators sharing one dimension.
///
/// A generator's index in the list is its permanent label; every transform
/// and section in this crate preserves that order.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    dim: usize,
    items: Vec<Generator>,
}

impl GeneratorSet {
    pub fn new(items: Vec<Generator>) -> Result<Self> {
        let dim = items.first().ok_or(Error::EmptySet)?.dim();
        for g in &items {
            if g.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: g.dim(),
                });
            }
        }
        Ok(Self { dim, items })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.items.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false // non-empty by construction
    }

    #[inline]
    pub fn get(&self, label: usize) -> &Generator {
        &self.items[label]
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Generator> {
        self.items.iter()
    }

    pub fn items(&self) -> &[Generator] {
        &self.items
    }

    pub fn min_weight(&self) -> f64 {
        self.items
            .iter()
            .map(|g| g.weight)
            .fold(f64::INFINITY, f64::min)
    }

    /// Label and distance of the winning generator at `x`.
    ///
    /// Ties go to the smallest label; this is the single tie-break rule every
    /// renderer in the crate shares.
    #[inline]
    pub fn classify(&self, x: &[f64]) -> (usize, f64) {
        let mut best = f64::INFINITY;
        let mut label = 0usize;
        for (i, g) in self.items.iter().enumerate() {
            let d = dist(x, g);
            if d < best {
                best = d;
                label = i;
            }
        }
        (label, best)
    }
}

/// Axis-aligned box given by its lower and upper corners.
#[derive(Clone, Debug)]
pub struct AxisBox {
    dim: usize,
    lower: [f64; MAX_DIM],
    upper: [f64; MAX_DIM],
}

impl AxisBox {
    pub fn new(lower: &[f64], upper: &[f64]) -> Result<Self> {
        let dim = lower.len();
        check_dim(dim)?;
        if upper.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: upper.len(),
            });
        }
        for i in 0..dim {
            if !(lower[i] <= upper[i]) {
                return Err(Error::InvalidBox(format!(
                    "lower {} exceeds upper {} on axis {i}",
                    lower[i], upper[i]
                )));
            }
        }
        let mut lo = [0.0; MAX_DIM];
        let mut hi = [0.0; MAX_DIM];
        lo[..dim].copy_from_slice(lower);
        hi[..dim].copy_from_slice(upper);
        Ok(Self {
            dim,
            lower: lo,
            upper: hi,
        })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn lower(&self) -> &[f64] {
        &self.lower[..self.dim]
    }

    #[inline]
    pub fn upper(&self) -> &[f64] {
        &self.upper[..self.dim]
    }

    pub fn side(&self, axis: usize) -> f64 {
        assert!(axis < self.dim);
        self.upper[axis] - self.lower[axis]
    }

    pub fn volume(&self) -> f64 {
        (0..self.dim).map(|i| self.side(i)).product()
    }

    /// Closed containment test.
    pub fn contains(&self, x: &[f64]) -> bool {
        assert_eq!(x.len(), self.dim, "point dimension does not match box");
        (0..self.dim).all(|i| x[i] >= self.lower[i] && x[i] <= self.upper[i])
    }

    /// Grow (or, with negative `r`, shrink) the box by `r` on every side.
    pub fn dilated(&self, r: f64) -> Result<AxisBox> {
        let mut lo = [0.0; MAX_DIM];
        let mut hi = [0.0; MAX_DIM];
        for i in 0..self.dim {
            lo[i] = self.lower[i] - r;
            hi[i] = self.upper[i] + r;
        }
        AxisBox::new(&lo[..self.dim], &hi[..self.dim])
    }
}

/// The governing distance `(x − s)ᵀ M (x − s) − w`.
///
/// Panics if the point dimension does not match the generator.
#[inline]
pub fn dist(x: &[f64], g: &Generator) -> f64 {
    let d = g.dim();
    assert_eq!(x.len(), d, "point dimension does not match generator");
    let mut dx = [0.0; MAX_DIM];
    for i in 0..d {
        dx[i] = x[i] - g.seed[i];
    }
    g.aniso.quadratic_form(&dx[..d]) - g.weight
}

/// Whether `x` lies in the closed sublevel ellipsoid `{dist ≤ threshold}`.
///
/// No scaled matrix `M/(t+w)` is ever formed; the test is the plain
/// quadratic-form comparison, so it agrees with [`dist`] bit for bit.
pub fn ellipsoid_contains(x: &[f64], g: &Generator, threshold: f64) -> Result<bool> {
    let radius_sq = threshold + g.weight();
    if !(radius_sq > 0.0) {
        return Err(Error::NonpositiveRadius(radius_sq));
    }
    Ok(dist(x, g) <= threshold)
}

/// Smallest axis-aligned box around the sublevel ellipsoid: the half-width
/// along axis `i` is `√((t+w)·(M⁻¹)ᵢᵢ)`, centred at the seed.
pub fn bounding_box(g: &Generator, threshold: f64) -> Result<AxisBox> {
    let radius_sq = threshold + g.weight();
    if !(radius_sq > 0.0) {
        return Err(Error::NonpositiveRadius(radius_sq));
    }
    let inv_diag = g.aniso.inv_diagonal();
    let d = g.dim();
    let mut lo = [0.0; MAX_DIM];
    let mut hi = [0.0; MAX_DIM];
    for i in 0..d {
        let half = (radius_sq * inv_diag[i]).sqrt();
        lo[i] = g.seed[i] - half;
        hi[i] = g.seed[i] + half;
    }
    AxisBox::new(&lo[..d], &hi[..d])
}

/// Volume of the d-dimensional unit ball.
pub fn unit_ball_volume(dim: usize) -> f64 {
    use std::f64::consts::PI;
    match dim {
        1 => 2.0,
        2 => PI,
        3 => 4.0 * PI / 3.0,
        4 => PI * PI / 2.0,
        _ => panic!("dimension {dim} outside supported range 1..=4"),
    }
}

/// Volume of the sublevel ellipsoid: `κ_d · (t+w)^{d/2} / √det M`.
pub fn ellipsoid_volume(g: &Generator, threshold: f64) -> Result<f64> {
    let radius_sq = threshold + g.weight();
    if !(radius_sq > 0.0) {
        return Err(Error::NonpositiveRadius(radius_sq));
    }
    Ok(unit_ball_volume(g.dim()) * radius_power(radius_sq, g.dim()) / g.aniso.det().sqrt())
}

/// `radius_sq^(dim/2)` without going through `powf` for the common cases.
#[inline]
pub(crate) fn radius_power(radius_sq: f64, dim: usize) -> f64 {
    match dim {
        1 => radius_sq.sqrt(),
        2 => radius_sq,
        3 => radius_sq * radius_sq.sqrt(),
        4 => radius_sq * radius_sq,
        _ => radius_sq.powf(dim as f64 / 2.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn gen2(seed: [f64; 2], entries: [f64; 4], w: f64) -> Generator {
        Generator::new(&seed, SpdMatrix::new(2, &entries).unwrap(), w).unwrap()
    }

    #[test]
    fn dist_at_seed_is_minus_weight() {
        let g = gen2([1.0, 2.0], [2.0, 1.0, 1.0, 3.0], 0.0);
        assert_eq!(dist(&[1.0, 2.0], &g), 0.0);
        let g = gen2([1.0, 2.0], [2.0, 1.0, 1.0, 3.0], 0.75);
        assert_eq!(dist(&[1.0, 2.0], &g), -0.75);
    }

    #[test]
    fn dist_euclidean_case() {
        let g = gen2([0.0, 0.0], [1.0, 0.0, 0.0, 1.0], 0.0);
        assert_eq!(dist(&[3.0, 4.0], &g), 25.0);
    }

    #[test]
    fn dist_hand_expanded() {
        // 2·1 + 2·1·1·2 + 3·4 − 0.5 = 17.5
        let g = gen2([0.0, 0.0], [2.0, 1.0, 1.0, 3.0], 0.5);
        assert_eq!(dist(&[1.0, 2.0], &g), 17.5);
    }

    #[test]
    fn dist_matches_naive_double_loop() {
        // independent scalar-loop oracle for the quadratic form
        let g = gen2([0.3, -0.7], [2.0, 1.0, 1.0, 3.0], 0.25);
        let x = [1.1, 0.4];
        let dx = [x[0] - 0.3, x[1] + 0.7];
        let m = [[2.0, 1.0], [1.0, 3.0]];
        let mut q = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                q += dx[i] * m[i][j] * dx[j];
            }
        }
        assert!((dist(&x, &g) - (q - 0.25)).abs() < 1e-14);
    }

    #[test]
    fn contains_matches_dist() {
        let g = gen2([0.0, 0.0], [1.0, 0.0, 0.0, 1.0], 0.0);
        assert!(ellipsoid_contains(&[0.0, 0.0], &g, 0.1).unwrap());
        assert!(!ellipsoid_contains(&[3.0, 4.0], &g, 24.9).unwrap());
        let g = gen2([0.0, 0.0], [2.0, 1.0, 1.0, 3.0], 0.5);
        // boundary point: dist = 17.5 exactly
        assert!(ellipsoid_contains(&[1.0, 2.0], &g, 17.5).unwrap());
        assert!(!ellipsoid_contains(&[1.0, 2.0], &g, 17.499999).unwrap());
    }

    #[test]
    fn contains_rejects_nonpositive_radius() {
        let g = gen2([0.0, 0.0], [1.0, 0.0, 0.0, 1.0], -1.0);
        assert!(matches!(
            ellipsoid_contains(&[0.0, 0.0], &g, 1.0),
            Err(Error::NonpositiveRadius(_))
        ));
    }

    #[test]
    fn bounding_box_ball() {
        let g = gen2([0.0, 0.0], [1.0, 0.0, 0.0, 1.0], 0.0);
        let b = bounding_box(&g, 4.0).unwrap();
        assert_eq!(b.lower(), &[-2.0, -2.0]);
        assert_eq!(b.upper(), &[2.0, 2.0]);
    }

    #[test]
    fn bounding_box_diagonal() {
        let g = gen2([0.0, 0.0], [4.0, 0.0, 0.0, 1.0], 0.0);
        let b = bounding_box(&g, 1.0).unwrap();
        assert!((b.upper()[0] - 0.5).abs() < 1e-15);
        assert!((b.upper()[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bounding_box_dense() {
        // M⁻¹ = (1/5)·[[3,−1],[−1,2]] ⇒ half-widths √(3/5), √(2/5)
        let g = gen2([0.0, 0.0], [2.0, 1.0, 1.0, 3.0], 0.0);
        let b = bounding_box(&g, 1.0).unwrap();
        assert!((b.upper()[0] - (3.0f64 / 5.0).sqrt()).abs() < 1e-15);
        assert!((b.upper()[1] - (2.0f64 / 5.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn ellipsoid_volume_cases() {
        let g = gen2([0.0, 0.0], [1.0, 0.0, 0.0, 1.0], 0.0);
        assert!((ellipsoid_volume(&g, 1.0).unwrap() - PI).abs() < 1e-15);

        let g = gen2([0.0, 0.0], [4.0, 0.0, 0.0, 1.0], 0.0);
        assert!((ellipsoid_volume(&g, 1.0).unwrap() - PI / 2.0).abs() < 1e-15);

        let g3 = Generator::new(&[0.0; 3], SpdMatrix::identity(3).unwrap(), 3.0).unwrap();
        let expect = 4.0 * PI / 3.0 * 8.0; // ball of radius 2
        assert!((ellipsoid_volume(&g3, 1.0).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn classify_breaks_ties_by_label() {
        let a = gen2([0.0, 0.0], [1.0, 0.0, 0.0, 1.0], 0.0);
        let b = gen2([1.0, 0.0], [1.0, 0.0, 0.0, 1.0], 0.0);
        let set = GeneratorSet::new(vec![a, b]).unwrap();
        // exactly equidistant
        let (label, d) = set.classify(&[0.5, 3.0]);
        assert_eq!(label, 0);
        assert_eq!(d, 0.25 + 9.0);
        // strictly closer to the second
        let (label, _) = set.classify(&[0.9, 0.0]);
        assert_eq!(label, 1);
    }

    #[test]
    fn set_requires_consistent_dims() {
        let a = gen2([0.0, 0.0], [1.0, 0.0, 0.0, 1.0], 0.0);
        let b = Generator::new(&[0.0; 3], SpdMatrix::identity(3).unwrap(), 0.0).unwrap();
        assert!(GeneratorSet::new(vec![]).is_err());
        assert!(GeneratorSet::new(vec![a, b]).is_err());
    }

    #[test]
    fn box_validation_and_dilation() {
        assert!(AxisBox::new(&[0.0, 1.0], &[1.0, 0.0]).is_err());
        let b = AxisBox::new(&[0.0, 0.0], &[1.0, 2.0]).unwrap();
        assert_eq!(b.volume(), 2.0);
        let d = b.dilated(0.5).unwrap();
        assert_eq!(d.lower(), &[-0.5, -0.5]);
        assert_eq!(d.upper(), &[1.5, 2.5]);
        // erosion beyond the box is rejected
        assert!(b.dilated(-0.75).is_err());
    }

    #[test]
    fn boundary_samples_stay_in_box_and_reach_it() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let g = gen2([0.4, -0.2], [2.0, 1.0, 1.0, 3.0], 0.3);
        let t = 0.9;
        let b = bounding_box(&g, t).unwrap();
        let radius_sq = t + g.weight();
        let mut max_dev = [0.0f64; 2];
        for _ in 0..10_000 {
            // random direction scaled to quadratic-form value exactly t+w
            let dir = [rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5];
            let q = g.aniso().quadratic_form(&dir);
            if q <= 0.0 {
                continue;
            }
            let scale = (radius_sq / q).sqrt();
            let x = [0.4 + scale * dir[0], -0.2 + scale * dir[1]];
            for i in 0..2 {
                assert!(x[i] >= b.lower()[i] - 1e-12 && x[i] <= b.upper()[i] + 1e-12);
                max_dev[i] = max_dev[i].max((x[i] - g.seed()[i]).abs());
            }
        }
        for i in 0..2 {
            let half = 0.5 * b.side(i);
            assert!(
                (half - max_dev[i]) / half < 1e-3,
                "box not tight on axis {i}: half-width {half}, seen {}",
                max_dev[i]
            );
        }
    }

    #[test]
    fn volume_agrees_with_monte_carlo() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let g = gen2([0.0, 0.0], [2.5, 0.8, 0.8, 1.2], 0.4);
        let t = 1.3;
        let b = bounding_box(&g, t).unwrap();
        let total = 1_000_000usize;
        let mut inside = 0usize;
        for _ in 0..total {
            let x = [
                b.lower()[0] + rng.random::<f64>() * b.side(0),
                b.lower()[1] + rng.random::<f64>() * b.side(1),
            ];
            if dist(&x, &g) <= t {
                inside += 1;
            }
        }
        let mc = b.volume() * inside as f64 / total as f64;
        let exact = ellipsoid_volume(&g, t).unwrap();
        assert!(
            (mc - exact).abs() / exact < 0.01,
            "MC {mc} vs exact {exact}"
        );
    }
}
