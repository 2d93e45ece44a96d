//! Flat sections of generator sets.
//!
//! Restricting the governing distance to an axis-aligned flat
//! `{x : x_k = h_k for k ∈ K}` yields again a distance of the same type in
//! the surviving coordinates. Writing `F` for the free axes and
//! `v = h_K − s_K`, completing the square in the free block gives the
//! reduced generator
//!
//! ```text
//! s̃ = s_F − M_FF⁻¹ M_FK v
//! M̃ = M_FF
//! w̃ = w − vᵀ (M_KK − M_FKᵀ M_FF⁻¹ M_FK) v
//! ```
//!
//! so `dist(x, g) = dist(x_F, g̃)` holds exactly for every `x` in the flat.
//! The subtracted form is the Schur complement of the free block — positive
//! semidefinite — hence `w̃ ≤ w`, with equality exactly when the seed lies in
//! the flat.
//!
//! Sections of arbitrary (non-axis-aligned) flats are handled by composing
//! [`crate::transform::rotate`] with these functions; the two steps are kept
//! separate on purpose.
//!
//! Reduced coordinates keep the relative order of the surviving axes: axis
//! `i` of the reduced generator is the `i`-th smallest free axis of the
//! original.

use crate::error::{Error, Result};
use crate::geometry::{Generator, GeneratorSet, MAX_DIM};

/// An axis-aligned flat: the fixed axes and their values.
///
/// Axes are 0-based and must be strictly increasing. The flat must leave at
/// least one axis free, which is checked against the generator dimension at
/// application time.
#[derive(Clone, Debug)]
pub struct FlatSpec {
    fixed: Vec<(usize, f64)>,
}

impl FlatSpec {
    pub fn new(fixed: &[(usize, f64)]) -> Result<Self> {
        if fixed.is_empty() {
            return Err(Error::InvalidFlat("no fixed axes given".into()));
        }
        for pair in fixed.windows(2) {
            if pair[0].0 >= pair[1].0 {
                return Err(Error::InvalidFlat(
                    "fixed axes must be strictly increasing".into(),
                ));
            }
        }
        for &(axis, h) in fixed {
            if axis >= MAX_DIM {
                return Err(Error::InvalidFlat(format!(
                    "axis {axis} outside supported range"
                )));
            }
            if !h.is_finite() {
                return Err(Error::InvalidFlat(format!(
                    "non-finite value on axis {axis}"
                )));
            }
        }
        Ok(Self {
            fixed: fixed.to_vec(),
        })
    }

    /// Single fixed axis, i.e. a hyperplane.
    pub fn hyperplane(axis: usize, h: f64) -> Result<Self> {
        Self::new(&[(axis, h)])
    }

    pub fn fixed(&self) -> &[(usize, f64)] {
        &self.fixed
    }

    /// Number of fixed axes.
    pub fn codim(&self) -> usize {
        self.fixed.len()
    }

    fn validate_for_dim(&self, dim: usize) -> Result<()> {
        let last = self.fixed.last().unwrap().0;
        if last >= dim {
            return Err(Error::InvalidFlat(format!(
                "axis {last} out of range for dimension {dim}"
            )));
        }
        if self.fixed.len() >= dim {
            return Err(Error::InvalidFlat(format!(
                "{} fixed axes leave no free axis in dimension {dim}",
                self.fixed.len()
            )));
        }
        Ok(())
    }
}

/// Reduce a generator onto the hyperplane `x_axis = h`.
pub fn section_hyperplane(g: &Generator, axis: usize, h: f64) -> Result<Generator> {
    section_affine(g, &FlatSpec::hyperplane(axis, h)?)
}

/// Reduce a generator onto an axis-aligned flat of any codimension.
pub fn section_affine(g: &Generator, flat: &FlatSpec) -> Result<Generator> {
    let d = g.dim();
    flat.validate_for_dim(d)?;

    let fixed_axes: Vec<usize> = flat.fixed.iter().map(|&(a, _)| a).collect();
    let free_axes: Vec<usize> = (0..d).filter(|i| !fixed_axes.contains(i)).collect();
    let q = free_axes.len();

    // v = h_K − s_K
    let mut v = [0.0; MAX_DIM];
    for (i, &(axis, h)) in flat.fixed.iter().enumerate() {
        v[i] = h - g.seed()[axis];
    }

    let m = g.aniso();

    // free-block inverse applied to the mixed block: X = M_FF⁻¹ M_FK,
    // obtained from the free principal submatrix's own factorization
    let m_free = m.submatrix(&free_axes)?;
    let mut correction = [0.0; MAX_DIM]; // (M_FF⁻¹ M_FK) · v per free axis
    if q > 0 {
        // rhs_r = Σ_k M[free_r, fixed_k] · v_k
        let mut rhs = [0.0; MAX_DIM];
        for (r, &fr) in free_axes.iter().enumerate() {
            let mut s = 0.0;
            for (k, &fk) in fixed_axes.iter().enumerate() {
                s += m.get(fr, fk) * v[k];
            }
            rhs[r] = s;
        }
        let solved = m_free.solve(&rhs[..q]);
        correction[..q].copy_from_slice(&solved[..q]);
    }

    let mut seed = [0.0; MAX_DIM];
    for (r, &fr) in free_axes.iter().enumerate() {
        seed[r] = g.seed()[fr] - correction[r];
    }

    // w̃ = w − vᵀ S v with S the Schur complement onto the fixed axes
    let schur = m.schur_complement(&fixed_axes)?;
    let weight = g.weight() - schur.quadratic_form(&v[..fixed_axes.len()]);

    Generator::new(&seed[..q], m_free, weight)
}

/// Section every generator of a set, preserving label order.
///
/// Generators whose reduced cell turns out empty are kept; their labels
/// simply never appear in a rendered image.
pub fn section_set(set: &GeneratorSet, flat: &FlatSpec) -> Result<GeneratorSet> {
    let items = set
        .iter()
        .map(|g| section_affine(g, flat))
        .collect::<Result<Vec<_>>>()?;
    GeneratorSet::new(items)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{dist, SpdMatrix};
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_spd(rng: &mut ChaCha8Rng, dim: usize) -> SpdMatrix {
        let a: Vec<f64> = (0..dim * dim).map(|_| rng.random::<f64>() - 0.5).collect();
        let mut m = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    m[i * dim + j] += a[k * dim + i] * a[k * dim + j];
                }
            }
            m[i * dim + i] += 0.25;
        }
        SpdMatrix::new(dim, &m).unwrap()
    }

    fn random_generator(rng: &mut ChaCha8Rng, dim: usize) -> Generator {
        let seed: Vec<f64> = (0..dim).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
        Generator::new(&seed, random_spd(rng, dim), rng.random::<f64>() * 0.8 - 0.2).unwrap()
    }

    #[test]
    fn identity_matrix_reduces_to_laguerre_shift() {
        // diagonal M: seed keeps its free components, w drops by (h−s_k)²
        let g = Generator::new(&[0.5, -1.0, 2.0], SpdMatrix::identity(3).unwrap(), 0.25).unwrap();
        let r = section_hyperplane(&g, 1, 0.5).unwrap();
        assert_eq!(r.dim(), 2);
        assert_eq!(r.seed(), &[0.5, 2.0]);
        assert_eq!(r.aniso().entries(), &[1.0, 0.0, 0.0, 1.0]);
        assert!((r.weight() - (0.25 - 1.5 * 1.5)).abs() < 1e-15);
    }

    #[test]
    fn hand_worked_2d_example() {
        // M = [[2,1],[1,3]], s = 0, w = 0, cut x₂ = 1:
        // s̃ = −0.5, M̃ = [2], w̃ = −2.5
        let g = Generator::new(
            &[0.0, 0.0],
            SpdMatrix::new(2, &[2.0, 1.0, 1.0, 3.0]).unwrap(),
            0.0,
        )
        .unwrap();
        let r = section_hyperplane(&g, 1, 1.0).unwrap();
        assert!((r.seed()[0] + 0.5).abs() < 1e-15);
        assert_eq!(r.aniso().entries(), &[2.0]);
        assert!((r.weight() + 2.5).abs() < 1e-15);

        // both sides evaluate to 2x₁² + 2x₁ + 3 on the plane
        for x1 in [-2.0, -0.5, 0.0, 0.7, 3.0] {
            let full = dist(&[x1, 1.0], &g);
            let reduced = dist(&[x1], &r);
            let poly = 2.0 * x1 * x1 + 2.0 * x1 + 3.0;
            assert!((full - poly).abs() < 1e-12);
            assert!((reduced - poly).abs() < 1e-12);
        }
    }

    #[test]
    fn seed_in_plane_keeps_weight() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let g = random_generator(&mut rng, 3);
            let r = section_hyperplane(&g, 2, g.seed()[2]).unwrap();
            assert_eq!(r.seed(), &g.seed()[..2]);
            assert_eq!(r.weight(), g.weight());
        }
    }

    #[test]
    fn diagonal_affine_case() {
        let g = Generator::new(&[0.0; 3], SpdMatrix::identity(3).unwrap(), 0.0).unwrap();
        let flat = FlatSpec::new(&[(1, 1.0), (2, 1.0)]).unwrap();
        let r = section_affine(&g, &flat).unwrap();
        assert_eq!(r.dim(), 1);
        assert_eq!(r.seed(), &[0.0]);
        assert_eq!(r.aniso().entries(), &[1.0]);
        assert!((r.weight() + 2.0).abs() < 1e-15);
    }

    #[test]
    fn iterated_hyperplanes_match_affine() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..30 {
            let g = random_generator(&mut rng, 3);
            let h2 = rng.random::<f64>() - 0.5;
            let h1 = rng.random::<f64>() - 0.5;
            // cut axis 2 at h2, then (in reduced coordinates) axis 1 at h1
            let step = section_hyperplane(&g, 2, h2).unwrap();
            let two_step = section_hyperplane(&step, 1, h1).unwrap();
            let flat = FlatSpec::new(&[(1, h1), (2, h2)]).unwrap();
            let direct = section_affine(&g, &flat).unwrap();
            assert!((two_step.seed()[0] - direct.seed()[0]).abs() < 1e-10);
            assert!((two_step.aniso().get(0, 0) - direct.aniso().get(0, 0)).abs() < 1e-10);
            assert!((two_step.weight() - direct.weight()).abs() < 1e-10);
        }
    }

    #[test]
    fn distance_restriction_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..30 {
            let g = random_generator(&mut rng, 3);
            let axes: &[usize] = if rng.random::<bool>() { &[1] } else { &[0, 2] };
            let fixed: Vec<(usize, f64)> = axes
                .iter()
                .map(|&a| (a, rng.random::<f64>() * 2.0 - 1.0))
                .collect();
            let flat = FlatSpec::new(&fixed).unwrap();
            let r = section_affine(&g, &flat).unwrap();
            for _ in 0..100 {
                // a random point inside the flat
                let mut x = [0.0; 3];
                for v in x.iter_mut() {
                    *v = rng.random::<f64>() * 4.0 - 2.0;
                }
                for &(a, h) in &fixed {
                    x[a] = h;
                }
                let free: Vec<f64> = (0..3).filter(|i| !axes.contains(i)).map(|i| x[i]).collect();
                let full = dist(&x, &g);
                let reduced = dist(&free, &r);
                assert!(
                    (full - reduced).abs() <= 1e-10 * full.abs().max(1.0),
                    "full {full} vs reduced {reduced}"
                );
            }
        }
    }

    #[test]
    fn weight_never_increases() {
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        for _ in 0..50 {
            let g = random_generator(&mut rng, 3);
            let h = rng.random::<f64>() * 2.0 - 1.0;
            let r = section_hyperplane(&g, 0, h).unwrap();
            assert!(r.weight() <= g.weight() + 1e-15);
        }
    }

    #[test]
    fn laguerre_sections_stay_laguerre() {
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        let items: Vec<Generator> = (0..10)
            .map(|_| {
                let seed: Vec<f64> = (0..3).map(|_| rng.random::<f64>()).collect();
                Generator::new(&seed, SpdMatrix::identity(3).unwrap(), rng.random::<f64>()).unwrap()
            })
            .collect();
        let set = GeneratorSet::new(items).unwrap();
        let flat = FlatSpec::new(&[(0, 0.3), (2, -0.4)]).unwrap();
        let reduced = section_set(&set, &flat).unwrap();
        assert_eq!(reduced.dim(), 1);
        assert_eq!(reduced.len(), set.len());
        for (g, r) in set.iter().zip(reduced.iter()) {
            assert_eq!(r.aniso().entries(), &[1.0]);
            let shift = (0.3 - g.seed()[0]).powi(2) + (-0.4 - g.seed()[2]).powi(2);
            assert!((r.weight() - (g.weight() - shift)).abs() < 1e-12);
        }
    }

    #[test]
    fn invalid_flats_rejected() {
        let g = Generator::new(&[0.0, 0.0], SpdMatrix::identity(2).unwrap(), 0.0).unwrap();
        assert!(FlatSpec::new(&[]).is_err());
        assert!(FlatSpec::new(&[(1, 0.0), (1, 0.0)]).is_err());
        assert!(FlatSpec::new(&[(2, 0.0), (1, 0.0)]).is_err());
        // axis out of range for this generator
        let flat = FlatSpec::hyperplane(2, 0.0).unwrap();
        assert!(section_affine(&g, &flat).is_err());
        // no free axis left
        let flat = FlatSpec::new(&[(0, 0.0), (1, 0.0)]).unwrap();
        assert!(section_affine(&g, &flat).is_err());
    }
}
