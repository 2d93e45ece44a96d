//! Affine transformations of generator sets.
//!
//! Each map below sends a generator set to a new set whose tessellation is
//! exactly the image of the original under the corresponding point map —
//! labels included, since every function preserves list order. The two
//! weight operations change the generator without changing the tessellation
//! at all, which is what makes generators non-unique.
//!
//! | operation          | point map   | generator map       |
//! |--------------------|-------------|---------------------|
//! | [`translate`]      | `x ↦ x + y` | `(s+y, M, w)`       |
//! | [`rotate`]         | `x ↦ Ux`    | `(Us, UMUᵀ, w)`     |
//! | [`scale`] (matrix) | `x ↦ ax`    | `(as, a⁻²M, w)`     |
//! | [`scale`] (weight) | `x ↦ ax`    | `(as, M, a²w)`      |
//! | [`distort`]        | `x ↦ Ax`    | `(As, A⁻ᵀMA⁻¹, w)`  |
//! | [`shift_weights`]  | identity    | `(s, M, w+v)`       |
//! | [`scale_weights`]  | identity    | `(s, aM, aw)`       |

use crate::error::{Error, Result};
use crate::geometry::{Generator, GeneratorSet, SpdMatrix, SquareMatrix, MAX_DIM};

/// Which of the two equivalent generator maps [`scale`] applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScaleMode {
    /// `(as, a⁻²M, w)`
    MatrixForm,
    /// `(as, M, a²w)`
    WeightForm,
}

/// Absolute tolerance on `max |UᵀU − I|` for accepting a rotation matrix.
pub const ORTHOGONALITY_TOL: f64 = 1e-10;

/// Shift every seed by `y`.
pub fn translate(set: &GeneratorSet, y: &[f64]) -> Result<GeneratorSet> {
    if y.len() != set.dim() {
        return Err(Error::DimensionMismatch {
            expected: set.dim(),
            got: y.len(),
        });
    }
    let items = set
        .iter()
        .map(|g| {
            let mut s = [0.0; MAX_DIM];
            for i in 0..set.dim() {
                s[i] = g.seed()[i] + y[i];
            }
            Generator::new(&s[..set.dim()], g.aniso().clone(), g.weight())
        })
        .collect::<Result<Vec<_>>>()?;
    GeneratorSet::new(items)
}

/// Map seeds to `Us` and matrices to `UMUᵀ`; weights are untouched.
///
/// `U` must be orthogonal within [`ORTHOGONALITY_TOL`].
pub fn rotate(set: &GeneratorSet, u: &SquareMatrix) -> Result<GeneratorSet> {
    if u.dim() != set.dim() {
        return Err(Error::DimensionMismatch {
            expected: set.dim(),
            got: u.dim(),
        });
    }
    let defect = u.orthogonality_defect();
    if defect > ORTHOGONALITY_TOL {
        return Err(Error::NotOrthogonal(defect));
    }
    let ut = u.transpose();
    map_matrices(set, |s| u.mul_vec(s), |m| u.mul(&m.as_square()).mul(&ut))
}

/// Scale the tessellation by `a > 0`, using either generator map.
pub fn scale(set: &GeneratorSet, a: f64, mode: ScaleMode) -> Result<GeneratorSet> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::NonpositiveScale(a));
    }
    let d = set.dim();
    let items = set
        .iter()
        .map(|g| {
            let mut s = [0.0; MAX_DIM];
            for i in 0..d {
                s[i] = a * g.seed()[i];
            }
            match mode {
                ScaleMode::MatrixForm => {
                    Generator::new(&s[..d], g.aniso().scaled(1.0 / (a * a))?, g.weight())
                }
                ScaleMode::WeightForm => {
                    Generator::new(&s[..d], g.aniso().clone(), a * a * g.weight())
                }
            }
        })
        .collect::<Result<Vec<_>>>()?;
    GeneratorSet::new(items)
}

/// Map seeds to `As` and matrices to `A⁻ᵀMA⁻¹` for invertible `A`.
///
/// Generalizes [`rotate`] and the matrix form of [`scale`]. The transformed
/// matrices are re-symmetrized and re-validated; a positive-definiteness
/// failure here signals numerical breakdown, not bad input.
pub fn distort(set: &GeneratorSet, a: &SquareMatrix) -> Result<GeneratorSet> {
    if a.dim() != set.dim() {
        return Err(Error::DimensionMismatch {
            expected: set.dim(),
            got: a.dim(),
        });
    }
    let a_inv = a.inverse()?;
    let a_inv_t = a_inv.transpose();
    map_matrices(
        set,
        |s| a.mul_vec(s),
        |m| a_inv_t.mul(&m.as_square()).mul(&a_inv),
    )
}

/// Add `v` to every weight. The tessellation is unchanged.
pub fn shift_weights(set: &GeneratorSet, v: f64) -> GeneratorSet {
    debug_assert!(v.is_finite());
    let items = set.iter().map(|g| g.with_weight(g.weight() + v)).collect();
    GeneratorSet::new(items).expect("shifting weights preserves set validity")
}

/// Replace every `(M, w)` by `(aM, aw)` for `a > 0`. The tessellation is
/// unchanged because every distance is scaled by the same factor.
pub fn scale_weights(set: &GeneratorSet, a: f64) -> Result<GeneratorSet> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::NonpositiveScale(a));
    }
    let items = set
        .iter()
        .map(|g| Generator::new(g.seed(), g.aniso().scaled(a)?, a * g.weight()))
        .collect::<Result<Vec<_>>>()?;
    GeneratorSet::new(items)
}

/// Shift weights so the minimum becomes exactly zero, if any are negative.
///
/// This is the canonical preparation step for the improved renderer, which
/// requires nonnegative weights.
pub fn normalize_nonnegative(set: &GeneratorSet) -> GeneratorSet {
    let min = set.min_weight();
    if min < 0.0 {
        shift_weights(set, -min)
    } else {
        set.clone()
    }
}

fn map_matrices(
    set: &GeneratorSet,
    seed_map: impl Fn(&[f64]) -> [f64; MAX_DIM],
    matrix_map: impl Fn(&SpdMatrix) -> SquareMatrix,
) -> Result<GeneratorSet> {
    let d = set.dim();
    let items = set
        .iter()
        .map(|g| {
            let s = seed_map(g.seed());
            let m = matrix_map(g.aniso()).into_spd()?;
            Generator::new(&s[..d], m, g.weight())
        })
        .collect::<Result<Vec<_>>>()?;
    GeneratorSet::new(items)
}
