//! Dense matrices of dimension 1 through 4, stored inline.
//!
//! Everything here is sized for the fixed small capacity [`MAX_DIM`]; there is
//! no general-purpose linear algebra. An [`SpdMatrix`] is factorized once at
//! construction (validating positive definiteness), and its determinant,
//! inverse and Schur complements are all derived from that one factorization.

use crate::error::{Error, Result};

/// Largest supported spatial dimension.
pub const MAX_DIM: usize = 4;

/// Relative tolerance below which asymmetric input is averaged instead of rejected.
pub const SYMMETRY_TOL: f64 = 1e-12;

const CAP: usize = MAX_DIM * MAX_DIM;

pub(crate) fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 || dim > MAX_DIM {
        return Err(Error::UnsupportedDim(dim));
    }
    Ok(())
}

/// Lower-triangular Cholesky factor of a symmetric matrix, or the first
/// nonpositive pivot encountered.
fn cholesky(dim: usize, m: &[f64; CAP]) -> Result<[f64; CAP]> {
    let mut l = [0.0; CAP];
    for i in 0..dim {
        for j in 0..=i {
            let mut s = m[i * dim + j];
            for k in 0..j {
                s -= l[i * dim + k] * l[j * dim + k];
            }
            if i == j {
                if s.is_nan() || s <= 0.0 {
                    return Err(Error::NotPositiveDefinite { index: i, pivot: s });
                }
                l[i * dim + j] = s.sqrt();
            } else {
                l[i * dim + j] = s / l[j * dim + j];
            }
        }
    }
    Ok(l)
}

fn validate_index_set(dim: usize, indices: &[usize], proper: bool) -> Result<()> {
    if indices.is_empty() {
        return Err(Error::InvalidIndexSet("index set must not be empty".into()));
    }
    if proper && indices.len() >= dim {
        return Err(Error::InvalidIndexSet(format!(
            "index set of size {} is not a proper subset of 0..{dim}",
            indices.len()
        )));
    }
    for pair in indices.windows(2) {
        if pair[0] >= pair[1] {
            return Err(Error::InvalidIndexSet(
                "indices must be strictly increasing".into(),
            ));
        }
    }
    if *indices.last().unwrap() >= dim {
        return Err(Error::InvalidIndexSet(format!(
            "index {} out of range for dimension {dim}",
            indices.last().unwrap()
        )));
    }
    Ok(())
}

/// Symmetric positive definite matrix of dimension 1..=4.
///
/// Construction symmetrizes the input (rejecting asymmetry beyond
/// [`SYMMETRY_TOL`] relative) and runs a Cholesky factorization; a matrix
/// whose factorization hits a nonpositive pivot is rejected. The factor is
/// kept, so determinant and inverse queries never re-factorize.
#[derive(Clone, Debug)]
pub struct SpdMatrix {
    dim: usize,
    entries: [f64; CAP], // row-major, stride = dim
    chol: [f64; CAP],    // lower-triangular factor L with M = L·Lᵀ
}

impl SpdMatrix {
    /// Validate `entries` (row-major, length `dim * dim`) as an SPD matrix.
    pub fn new(dim: usize, entries: &[f64]) -> Result<Self> {
        check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(Error::WrongEntryCount {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        if entries.iter().any(|e| !e.is_finite()) {
            return Err(Error::NonFinite("matrix entries"));
        }
        let scale = entries.iter().fold(0.0f64, |a, e| a.max(e.abs()));
        let mut sym = [0.0; CAP];
        let mut max_asym = 0.0f64;
        for i in 0..dim {
            for j in 0..dim {
                let a = entries[i * dim + j];
                let b = entries[j * dim + i];
                max_asym = max_asym.max((a - b).abs());
                sym[i * dim + j] = 0.5 * (a + b);
            }
        }
        if max_asym > SYMMETRY_TOL * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::NotSymmetric(max_asym / scale));
        }
        let chol = cholesky(dim, &sym)?;
        Ok(Self {
            dim,
            entries: sym,
            chol,
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        let mut e = [0.0; CAP];
        for i in 0..dim {
            e[i * dim + i] = 1.0;
        }
        Self::new(dim, &e[..dim * dim])
    }

    pub fn diagonal(diag: &[f64]) -> Result<Self> {
        let dim = diag.len();
        check_dim(dim)?;
        let mut e = [0.0; CAP];
        for i in 0..dim {
            e[i * dim + i] = diag[i];
        }
        Self::new(dim, &e[..dim * dim])
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(i < self.dim && j < self.dim, "matrix index out of range");
        self.entries[i * self.dim + j]
    }

    /// Row-major entries, length `dim * dim`.
    #[inline]
    pub fn entries(&self) -> &[f64] {
        &self.entries[..self.dim * self.dim]
    }

    /// Determinant, taken from the cached factorization.
    pub fn det(&self) -> f64 {
        let mut p = 1.0;
        for i in 0..self.dim {
            p *= self.chol[i * self.dim + i];
        }
        p * p
    }

    /// vᵀ·M·v, exploiting symmetry.
    #[inline]
    pub fn quadratic_form(&self, v: &[f64]) -> f64 {
        let d = self.dim;
        assert_eq!(v.len(), d, "vector length does not match matrix dimension");
        let mut acc = 0.0;
        for i in 0..d {
            let vi = v[i];
            acc += self.entries[i * d + i] * vi * vi;
            for j in (i + 1)..d {
                acc += 2.0 * self.entries[i * d + j] * vi * v[j];
            }
        }
        acc
    }

    /// Diagonal of M⁻¹, via forward solves against the cached factor:
    /// (M⁻¹)ᵢᵢ = ‖L⁻¹eᵢ‖².
    pub fn inv_diagonal(&self) -> [f64; MAX_DIM] {
        let d = self.dim;
        let mut out = [0.0; MAX_DIM];
        let mut y = [0.0; MAX_DIM];
        for col in 0..d {
            for i in 0..d {
                let mut s = if i == col { 1.0 } else { 0.0 };
                for k in 0..i {
                    s -= self.chol[i * d + k] * y[k];
                }
                y[i] = s / self.chol[i * d + i];
            }
            out[col] = y[..d].iter().map(|v| v * v).sum();
        }
        out
    }

    /// Solve `M·x = rhs` against the cached factorization.
    pub fn solve(&self, rhs: &[f64]) -> [f64; MAX_DIM] {
        let d = self.dim;
        assert_eq!(rhs.len(), d, "rhs length does not match matrix dimension");
        let mut y = [0.0; MAX_DIM];
        let mut x = [0.0; MAX_DIM];
        for i in 0..d {
            let mut s = rhs[i];
            for k in 0..i {
                s -= self.chol[i * d + k] * y[k];
            }
            y[i] = s / self.chol[i * d + i];
        }
        for i in (0..d).rev() {
            let mut s = y[i];
            for k in (i + 1)..d {
                s -= self.chol[k * d + i] * x[k];
            }
            x[i] = s / self.chol[i * d + i];
        }
        x
    }

    /// Full inverse as a validated SPD matrix.
    pub fn inverse(&self) -> Result<SpdMatrix> {
        let d = self.dim;
        let mut inv = [0.0; CAP];
        let mut y = [0.0; MAX_DIM];
        let mut x = [0.0; MAX_DIM];
        for col in 0..d {
            for i in 0..d {
                let mut s = if i == col { 1.0 } else { 0.0 };
                for k in 0..i {
                    s -= self.chol[i * d + k] * y[k];
                }
                y[i] = s / self.chol[i * d + i];
            }
            for i in (0..d).rev() {
                let mut s = y[i];
                for k in (i + 1)..d {
                    s -= self.chol[k * d + i] * x[k];
                }
                x[i] = s / self.chol[i * d + i];
            }
            for row in 0..d {
                inv[row * d + col] = x[row];
            }
        }
        // exact symmetry before validation
        for i in 0..d {
            for j in (i + 1)..d {
                let m = 0.5 * (inv[i * d + j] + inv[j * d + i]);
                inv[i * d + j] = m;
                inv[j * d + i] = m;
            }
        }
        Self::new(d, &inv[..d * d])
    }

    /// Entrywise scaling by `a > 0`; the factor scales by √a, so no
    /// re-factorization is needed.
    pub fn scaled(&self, a: f64) -> Result<SpdMatrix> {
        if !(a > 0.0) {
            return Err(Error::NonpositiveScale(a));
        }
        let mut out = self.clone();
        let sqrt_a = a.sqrt();
        for v in out.entries.iter_mut() {
            *v *= a;
        }
        for v in out.chol.iter_mut() {
            *v *= sqrt_a;
        }
        Ok(out)
    }

    /// Principal submatrix on the given strictly increasing index list.
    pub fn submatrix(&self, keep: &[usize]) -> Result<SpdMatrix> {
        validate_index_set(self.dim, keep, false)?;
        let q = keep.len();
        let mut e = [0.0; CAP];
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                e[a * q + b] = self.entries[i * self.dim + j];
            }
        }
        Self::new(q, &e[..q * q])
    }

    /// Schur complement onto the index set `on`:
    /// `M[on,on] − M[free,on]ᵀ · M[free,free]⁻¹ · M[free,on]`,
    /// where `free` is the complement of `on`. The result is SPD and its
    /// inverse equals the `on`-block of M⁻¹.
    pub fn schur_complement(&self, on: &[usize]) -> Result<SpdMatrix> {
        validate_index_set(self.dim, on, true)?;
        let d = self.dim;
        let free: Vec<usize> = (0..d).filter(|i| !on.contains(i)).collect();
        let nf = free.len();
        let nk = on.len();

        // block A = M[free,free], factorized locally
        let mut a = [0.0; CAP];
        for (r, &i) in free.iter().enumerate() {
            for (c, &j) in free.iter().enumerate() {
                a[r * nf + c] = self.entries[i * d + j];
            }
        }
        let la = cholesky(nf, &a)?;

        // X = A⁻¹ · M[free,on], one solve per column of the `on` block
        let mut x = [0.0; CAP]; // nf × nk, row-major
        let mut y = [0.0; MAX_DIM];
        let mut z = [0.0; MAX_DIM];
        for (c, &j) in on.iter().enumerate() {
            for (r, &i) in free.iter().enumerate() {
                let mut s = self.entries[i * d + j];
                for k in 0..r {
                    s -= la[r * nf + k] * y[k];
                }
                y[r] = s / la[r * nf + r];
            }
            for r in (0..nf).rev() {
                let mut s = y[r];
                for k in (r + 1)..nf {
                    s -= la[k * nf + r] * z[k];
                }
                z[r] = s / la[r * nf + r];
            }
            for r in 0..nf {
                x[r * nk + c] = z[r];
            }
        }

        // S = M[on,on] − Bᵀ·X with B = M[free,on]
        let mut s = [0.0; CAP];
        for (r, &i) in on.iter().enumerate() {
            for (c, &j) in on.iter().enumerate() {
                let mut acc = self.entries[i * d + j];
                for (f, &fi) in free.iter().enumerate() {
                    acc -= self.entries[fi * d + i] * x[f * nk + c];
                }
                s[r * nk + c] = acc;
            }
        }
        for i in 0..nk {
            for j in (i + 1)..nk {
                let m = 0.5 * (s[i * nk + j] + s[j * nk + i]);
                s[i * nk + j] = m;
                s[j * nk + i] = m;
            }
        }
        Self::new(nk, &s[..nk * nk])
    }

    pub fn as_square(&self) -> SquareMatrix {
        SquareMatrix {
            dim: self.dim,
            entries: self.entries,
        }
    }
}

/// General square matrix of dimension 1..=4, used for rotations and
/// linear distortions.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareMatrix {
    dim: usize,
    entries: [f64; CAP], // row-major, stride = dim
}

impl SquareMatrix {
    pub fn new(dim: usize, entries: &[f64]) -> Result<Self> {
        check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(Error::WrongEntryCount {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        if entries.iter().any(|e| !e.is_finite()) {
            return Err(Error::NonFinite("matrix entries"));
        }
        let mut e = [0.0; CAP];
        e[..dim * dim].copy_from_slice(entries);
        Ok(Self { dim, entries: e })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        let mut e = [0.0; CAP];
        for i in 0..dim {
            e[i * dim + i] = 1.0;
        }
        Ok(Self { dim, entries: e })
    }

    /// Counter-clockwise planar rotation by `angle` radians.
    pub fn rotation_2d(angle: f64) -> SquareMatrix {
        let (s, c) = angle.sin_cos();
        Self::new(2, &[c, -s, s, c]).expect("finite rotation entries")
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(i < self.dim && j < self.dim, "matrix index out of range");
        self.entries[i * self.dim + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries[..self.dim * self.dim]
    }

    pub fn transpose(&self) -> SquareMatrix {
        let d = self.dim;
        let mut e = [0.0; CAP];
        for i in 0..d {
            for j in 0..d {
                e[i * d + j] = self.entries[j * d + i];
            }
        }
        Self { dim: d, entries: e }
    }

    pub fn mul(&self, rhs: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimensions differ");
        let d = self.dim;
        let mut e = [0.0; CAP];
        for i in 0..d {
            for j in 0..d {
                let mut s = 0.0;
                for k in 0..d {
                    s += self.entries[i * d + k] * rhs.entries[k * d + j];
                }
                e[i * d + j] = s;
            }
        }
        Self { dim: d, entries: e }
    }

    pub fn mul_vec(&self, v: &[f64]) -> [f64; MAX_DIM] {
        let d = self.dim;
        assert_eq!(v.len(), d, "vector length does not match matrix dimension");
        let mut out = [0.0; MAX_DIM];
        for i in 0..d {
            let mut s = 0.0;
            for j in 0..d {
                s += self.entries[i * d + j] * v[j];
            }
            out[i] = s;
        }
        out
    }

    /// Determinant by LU elimination with partial pivoting.
    pub fn det(&self) -> f64 {
        let d = self.dim;
        let mut a = self.entries;
        let mut det = 1.0;
        for col in 0..d {
            let mut piv = col;
            for r in (col + 1)..d {
                if a[r * d + col].abs() > a[piv * d + col].abs() {
                    piv = r;
                }
            }
            if a[piv * d + col] == 0.0 {
                return 0.0;
            }
            if piv != col {
                for j in 0..d {
                    a.swap(col * d + j, piv * d + j);
                }
                det = -det;
            }
            det *= a[col * d + col];
            for r in (col + 1)..d {
                let f = a[r * d + col] / a[col * d + col];
                for j in col..d {
                    a[r * d + j] -= f * a[col * d + j];
                }
            }
        }
        det
    }

    /// Inverse by Gauss-Jordan elimination; rejects |det| ≤ 1e−12.
    pub fn inverse(&self) -> Result<SquareMatrix> {
        let det = self.det();
        if !(det.abs() > 1e-12) {
            return Err(Error::SingularMatrix(det.abs()));
        }
        let d = self.dim;
        let mut a = self.entries;
        let mut inv = [0.0; CAP];
        for i in 0..d {
            inv[i * d + i] = 1.0;
        }
        for col in 0..d {
            let mut piv = col;
            for r in (col + 1)..d {
                if a[r * d + col].abs() > a[piv * d + col].abs() {
                    piv = r;
                }
            }
            if piv != col {
                for j in 0..d {
                    a.swap(col * d + j, piv * d + j);
                    inv.swap(col * d + j, piv * d + j);
                }
            }
            let p = a[col * d + col];
            for j in 0..d {
                a[col * d + j] /= p;
                inv[col * d + j] /= p;
            }
            for r in 0..d {
                if r == col {
                    continue;
                }
                let f = a[r * d + col];
                if f == 0.0 {
                    continue;
                }
                for j in 0..d {
                    a[r * d + j] -= f * a[col * d + j];
                    inv[r * d + j] -= f * inv[col * d + j];
                }
            }
        }
        Ok(Self {
            dim: d,
            entries: inv,
        })
    }

    /// max |UᵀU − I|, the orthogonality defect.
    pub fn orthogonality_defect(&self) -> f64 {
        let p = self.transpose().mul(self);
        let d = self.dim;
        let mut defect = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                let target = if i == j { 1.0 } else { 0.0 };
                defect = defect.max((p.entries[i * d + j] - target).abs());
            }
        }
        defect
    }

    /// Symmetrize by averaging and validate as SPD.
    pub fn into_spd(self) -> Result<SpdMatrix> {
        let d = self.dim;
        let mut e = [0.0; CAP];
        for i in 0..d {
            for j in 0..d {
                e[i * d + j] = 0.5 * (self.entries[i * d + j] + self.entries[j * d + i]);
            }
        }
        SpdMatrix::new(d, &e[..d * d])
    }
}
