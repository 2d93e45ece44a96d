//! Marked Poisson process sampling and the renderer cost model.
//!
//! Seeds form a homogeneous Poisson point process of intensity `λ`; each
//! seed independently receives a mark `(M, w)`. For a scan threshold `t`,
//! the per-point work of the improved renderer's first step is the number of
//! sublevel ellipsoids covering the point, with mean
//!
//! ```text
//! n̄₁ = λ·E[V_d(E_t(M, w))]                   (Campbell)
//! ```
//!
//! A point missed by every ellipsoid (probability `e^{−n̄₁}`) falls through
//! to brute force over the `n̄_R = λ·V_d(W ⊕ R·Bᵈ)` generators kept near the
//! window, so the expected total per-point work is
//!
//! ```text
//! n̄ = n̄₁ + e^{−n̄₁}·(n̄_R − n̄₁)
//! ```
//!
//! which is minimized where `e^{n̄₁} + n̄₁ = n̄_R + 1`; the optimum satisfies
//! `n̄₁ ≤ log(n̄_R + 1)` and gives `n̄ ≤ log(n̄_R + 1) + 1`. Counting boxes
//! instead of ellipsoids multiplies step-1 work by at most the mean
//! box-to-ellipsoid volume ratio `c`, with minimizer
//! `c·e^{n̄₁} + n̄₁ = n̄_R + 1` and optimal step-1 mean at most
//! `log(n̄_R + 1) − log(c)`.
//!
//! [`verify_complexity`] measures all of this empirically on rendered
//! realizations and reports predictions next to observations.
//!
//! All randomness comes from ChaCha8, a counter-based stream cipher whose
//! output is platform-independent, so every sample is reproducible from the
//! 64-bit seed alone.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Poisson, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{
    bounding_box, dist, ellipsoid_volume, unit_ball_volume, AxisBox, Generator, GeneratorSet,
    SpdMatrix, SquareMatrix, MAX_DIM,
};
use crate::render::{grid_points_in_box, render_improved, GridSpec, RenderStats};

/// Distribution of the random mark `(M, w)`.
///
/// Ellipsoid semi-axes are log-uniform on `[r_min, r_max]`, the orientation
/// is a uniform random rotation, and the weight is uniform on `[0, w_max]`.
/// Every unit-level set `{x : xᵀMx ≤ 1}` then fits inside the ball of radius
/// `r_max`, which keeps all sublevel ellipsoids bounded.
#[derive(Clone, Debug)]
pub struct MarkModel {
    r_min: f64,
    r_max: f64,
    w_max: f64,
}

impl MarkModel {
    pub fn new(r_min: f64, r_max: f64, w_max: f64) -> Result<Self> {
        if !(r_min > 0.0) || !(r_max >= r_min) || !r_max.is_finite() {
            return Err(Error::InvalidModel(format!(
                "semi-axis bounds must satisfy 0 < r_min <= r_max; got [{r_min}, {r_max}]"
            )));
        }
        if !(w_max >= 0.0) || !w_max.is_finite() {
            return Err(Error::InvalidModel(format!(
                "weight bound must be nonnegative and finite, got {w_max}"
            )));
        }
        Ok(Self {
            r_min,
            r_max,
            w_max,
        })
    }

    /// Isotropic model: all ellipsoids are balls of radius `r`, weights zero.
    pub fn isotropic(r: f64) -> Result<Self> {
        Self::new(r, r, 0.0)
    }

    pub fn r_min(&self) -> f64 {
        self.r_min
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn w_max(&self) -> f64 {
        self.w_max
    }

    /// Radius that contains every sublevel ellipsoid at threshold `t`:
    /// `√(t + w_max)·r_max`.
    pub fn grain_radius(&self, threshold: f64) -> f64 {
        (threshold + self.w_max).max(0.0).sqrt() * self.r_max
    }

    fn sample_mark(&self, rng: &mut ChaCha8Rng, dim: usize) -> (SpdMatrix, f64) {
        let log_lo = self.r_min.ln();
        let log_hi = self.r_max.ln();
        let mut inv_r_sq = [0.0; MAX_DIM];
        for v in inv_r_sq.iter_mut().take(dim) {
            let r = if log_hi > log_lo {
                (log_lo + rng.random::<f64>() * (log_hi - log_lo)).exp()
            } else {
                self.r_min
            };
            *v = 1.0 / (r * r);
        }
        let q = sample_rotation(rng, dim);
        // M = Q·diag(1/rᵢ²)·Qᵀ
        let d = dim;
        let mut m = [0.0; MAX_DIM * MAX_DIM];
        for i in 0..d {
            for j in 0..d {
                let mut s = 0.0;
                for k in 0..d {
                    s += q.get(i, k) * inv_r_sq[k] * q.get(j, k);
                }
                m[i * d + j] = s;
            }
        }
        for i in 0..d {
            for j in (i + 1)..d {
                let avg = 0.5 * (m[i * d + j] + m[j * d + i]);
                m[i * d + j] = avg;
                m[j * d + i] = avg;
            }
        }
        let aniso = SpdMatrix::new(d, &m[..d * d]).expect("sampled mark matrix is SPD");
        let w = if self.w_max > 0.0 {
            rng.random::<f64>() * self.w_max
        } else {
            0.0
        };
        (aniso, w)
    }
}

/// Haar-like random rotation from QR of a Gaussian matrix (Gram-Schmidt
/// columns). The sign of the determinant is irrelevant for conjugation.
fn sample_rotation(rng: &mut ChaCha8Rng, dim: usize) -> SquareMatrix {
    loop {
        let mut cols = [[0.0f64; MAX_DIM]; MAX_DIM];
        for col in cols.iter_mut().take(dim) {
            for v in col.iter_mut().take(dim) {
                *v = rng.sample(StandardNormal);
            }
        }
        let mut ok = true;
        for c in 0..dim {
            for prev in 0..c {
                let dot: f64 = (0..dim).map(|r| cols[c][r] * cols[prev][r]).sum();
                for r in 0..dim {
                    cols[c][r] -= dot * cols[prev][r];
                }
            }
            let norm: f64 = (0..dim)
                .map(|r| cols[c][r] * cols[c][r])
                .sum::<f64>()
                .sqrt();
            if norm < 1e-8 {
                ok = false;
                break;
            }
            for r in 0..dim {
                cols[c][r] /= norm;
            }
        }
        if !ok {
            continue; // resample the (measure-zero) degenerate draw
        }
        let mut entries = [0.0; MAX_DIM * MAX_DIM];
        for r in 0..dim {
            for c in 0..dim {
                entries[r * dim + c] = cols[c][r];
            }
        }
        return SquareMatrix::new(dim, &entries[..dim * dim]).expect("finite rotation");
    }
}

/// Sampling window, intensity, halo and seed for one realization.
#[derive(Clone, Debug)]
pub struct PoissonConfig {
    intensity: f64,
    window: AxisBox,
    halo: f64,
    seed: u64,
}

impl PoissonConfig {
    pub fn new(intensity: f64, window: AxisBox, halo: f64, seed: u64) -> Result<Self> {
        if !(intensity > 0.0) || !intensity.is_finite() {
            return Err(Error::InvalidModel(format!(
                "intensity must be positive and finite, got {intensity}"
            )));
        }
        if !(halo >= 0.0) || !halo.is_finite() {
            return Err(Error::InvalidModel(format!(
                "halo radius must be nonnegative and finite, got {halo}"
            )));
        }
        if window.volume() <= 0.0 {
            return Err(Error::InvalidModel("window is degenerate".into()));
        }
        Ok(Self {
            intensity,
            window,
            halo,
            seed,
        })
    }

    pub fn intensity(&self) -> f64 {
        self.intensity
    }

    pub fn window(&self) -> &AxisBox {
        &self.window
    }

    pub fn halo(&self) -> f64 {
        self.halo
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn with_seed(&self, seed: u64) -> PoissonConfig {
        let mut c = self.clone();
        c.seed = seed;
        c
    }
}

/// Draw one realization: a Poisson number of seeds uniform in the
/// axis-dilated window `W ⊕ [−R, R]ᵈ`, each with an independent mark.
///
/// The axis-aligned dilation is a superset of the exact round-cornered
/// dilation `W ⊕ R·Bᵈ`; the extra corner generators are harmless, while
/// [`mean_relevant_generators`] deliberately uses the exact volume.
/// Deterministic given `cfg.seed`. A zero draw is clamped to one generator,
/// since an empty set is not representable.
pub fn sample_generators(cfg: &PoissonConfig, marks: &MarkModel) -> Result<GeneratorSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let region = cfg.window.dilated(cfg.halo)?;
    let dim = region.dim();
    let mean_count = cfg.intensity * region.volume();
    let poisson = Poisson::new(mean_count)
        .map_err(|e| Error::InvalidModel(format!("Poisson({mean_count}): {e}")))?;
    let count = (rng.sample(poisson) as u64).max(1) as usize;

    let mut items = Vec::with_capacity(count);
    for _ in 0..count {
        let mut seed = [0.0; MAX_DIM];
        for i in 0..dim {
            seed[i] = region.lower()[i] + rng.random::<f64>() * region.side(i);
        }
        let (aniso, weight) = marks.sample_mark(&mut rng, dim);
        items.push(Generator::new(&seed[..dim], aniso, weight)?);
    }
    GeneratorSet::new(items)
}

/// Mean step-1 hits per point: `λ` times the average sublevel-ellipsoid
/// volume over the set's realized marks (a plug-in estimate, not an
/// analytic mark expectation).
pub fn mean_step1_hits(set: &GeneratorSet, intensity: f64, threshold: f64) -> Result<f64> {
    let mut acc = 0.0;
    for g in set.iter() {
        acc += ellipsoid_volume(g, threshold)?;
    }
    Ok(intensity * acc / set.len() as f64)
}

/// `λ·V_d(W ⊕ R·Bᵈ)` by the Steiner formula: the dilated volume of a box is
/// `Σ_k κ_{d−k}·R^{d−k}·e_k(sides)` with `e_k` the elementary symmetric
/// polynomials and `κ_j` the unit-ball volumes.
pub fn mean_relevant_generators(intensity: f64, window: &AxisBox, halo: f64) -> Result<f64> {
    if !(halo >= 0.0) || !halo.is_finite() {
        return Err(Error::InvalidModel(format!(
            "halo radius must be nonnegative, got {halo}"
        )));
    }
    let d = window.dim();
    let sides: Vec<f64> = (0..d).map(|i| window.side(i)).collect();
    // elementary symmetric polynomials e_0..e_d
    let mut e = vec![0.0; d + 1];
    e[0] = 1.0;
    for &s in &sides {
        for k in (1..=d).rev() {
            e[k] += e[k - 1] * s;
        }
    }
    let mut volume = 0.0;
    for k in 0..=d {
        let j = d - k; // ball dimension
        let kappa = if j == 0 { 1.0 } else { unit_ball_volume(j) };
        volume += kappa * halo.powi(j as i32) * e[k];
    }
    Ok(intensity * volume)
}

/// Expected total distance evaluations per point:
/// `n̄₁ + e^{−n̄₁}·(n̄_R − n̄₁)`.
pub fn mean_total_evals(step1_mean: f64, relevant_mean: f64) -> f64 {
    step1_mean + (-step1_mean).exp() * (relevant_mean - step1_mean)
}

/// The unique root `x ≥ 0` of `eˣ + x = n̄_R + 1`, i.e. the step-1 mean that
/// minimizes [`mean_total_evals`]; satisfies `x ≤ log(n̄_R + 1)`.
///
/// Bisection brackets the root, then Newton steps polish it so the residual
/// stays below 1e−9 even where `eˣ` amplifies the x-space tolerance.
pub fn optimal_step1_mean(relevant_mean: f64) -> Result<f64> {
    if !(relevant_mean >= 0.0) || !relevant_mean.is_finite() {
        return Err(Error::InvalidModel(format!(
            "mean generator count must be nonnegative, got {relevant_mean}"
        )));
    }
    let target = relevant_mean + 1.0;
    let f = |x: f64| x.exp() + x - target;
    let x = bisect(f, 0.0, relevant_mean.ln_1p(), 1e-12);
    Ok(newton_polish(x, relevant_mean.ln_1p(), f, |x| {
        x.exp() + 1.0
    }))
}

/// A few damped Newton steps clamped to `[0, hi]`.
fn newton_polish(mut x: f64, hi: f64, f: impl Fn(f64) -> f64, df: impl Fn(f64) -> f64) -> f64 {
    for _ in 0..3 {
        let step = f(x) / df(x);
        if !step.is_finite() {
            break;
        }
        x = (x - step).clamp(0.0, hi);
    }
    x
}

/// Result of the box-counted ("completed") optimum.
#[derive(Clone, Copy, Debug)]
pub struct CompletedOptimum {
    /// Root of `c·eˣ + x = n̄_R + 1`, or 0 when infeasible.
    pub step1_mean: f64,
    /// False when `n̄_R + 1 < c`, where no nonnegative root exists.
    pub feasible: bool,
    /// Upper bound on the minimal per-point work:
    /// `c·(log(n̄_R + 1) + 1 − log c)`.
    pub bound: f64,
}

/// Minimizer of the box-counted cost `c·n̄₁ + e^{−n̄₁}(n̄_R − n̄₁)`:
/// the root of `c·eˣ + x = n̄_R + 1`, which satisfies
/// `x ≤ log(n̄_R + 1) − log(c)`.
pub fn optimal_step1_mean_completed(relevant_mean: f64, c: f64) -> Result<CompletedOptimum> {
    if !(relevant_mean >= 0.0) || !relevant_mean.is_finite() {
        return Err(Error::InvalidModel(format!(
            "mean generator count must be nonnegative, got {relevant_mean}"
        )));
    }
    if !(c >= 1.0) || !c.is_finite() {
        return Err(Error::InvalidModel(format!(
            "box-to-ellipsoid ratio must be >= 1, got {c}"
        )));
    }
    let bound = c * (relevant_mean.ln_1p() + 1.0 - c.ln());
    if relevant_mean + 1.0 < c {
        return Ok(CompletedOptimum {
            step1_mean: 0.0,
            feasible: false,
            bound,
        });
    }
    let target = relevant_mean + 1.0;
    let f = |x: f64| c * x.exp() + x - target;
    let hi = (target / c).ln().max(0.0);
    let x = bisect(f, 0.0, hi, 1e-12);
    Ok(CompletedOptimum {
        step1_mean: newton_polish(x, hi, f, |x| c * x.exp() + 1.0),
        feasible: true,
        bound,
    })
}

/// Invert [`mean_step1_hits`] in the threshold: the `t > 0` with
/// `mean_step1_hits(set, λ, t) = target`. The map is strictly increasing and
/// continuous in `t`, so bisection converges; tolerance is 1e−10 relative on
/// the achieved value.
pub fn solve_threshold(target: f64, set: &GeneratorSet, intensity: f64) -> Result<f64> {
    if !(target > 0.0) || !target.is_finite() {
        return Err(Error::InvalidModel(format!(
            "target step-1 mean must be positive, got {target}"
        )));
    }
    // the limit t → 0⁺ with clamped radius; positive when weights are positive
    let at = |t: f64| -> f64 {
        let mut acc = 0.0;
        for g in set.iter() {
            let radius_sq = (t + g.weight()).max(0.0);
            acc += unit_ball_volume(g.dim()) * crate::geometry::radius_power(radius_sq, g.dim())
                / g.aniso().det().sqrt();
        }
        intensity * acc / set.len() as f64
    };
    let floor = at(0.0);
    if floor >= target {
        return Err(Error::UnreachableTarget {
            target,
            reason: format!(
                "step-1 mean is already {floor} at threshold 0 (weights alone reach the target)"
            ),
        });
    }
    let mut hi = 1.0f64;
    while at(hi) < target {
        hi *= 2.0;
        if hi > 1e300 {
            return Err(Error::UnreachableTarget {
                target,
                reason: "threshold search overflowed".into(),
            });
        }
    }
    let mut lo = 0.0f64;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let v = at(mid);
        if (v - target).abs() <= 1e-10 * target {
            return Ok(mid);
        }
        if v < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Mean bounding-box volume over mean ellipsoid volume for the set's marks;
/// always ≥ 1. This is the practical box-counting constant `c`.
pub fn box_ellipsoid_ratio(set: &GeneratorSet, threshold: f64) -> Result<f64> {
    let mut box_acc = 0.0;
    let mut ell_acc = 0.0;
    for g in set.iter() {
        box_acc += bounding_box(g, threshold)?.volume();
        ell_acc += ellipsoid_volume(g, threshold)?;
    }
    Ok(box_acc / ell_acc)
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    debug_assert!(f(lo) <= 0.0 && f(hi) >= 0.0, "root not bracketed");
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if f(mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Per-realization measurements of one [`verify_complexity`] run.
#[derive(Clone, Copy, Debug)]
pub struct RepRecord {
    pub rep: usize,
    /// Realized generator count |Ψ^(R)|.
    pub generators: usize,
    /// Plug-in prediction λ·mean ellipsoid volume for this realization.
    pub predicted_step1: f64,
    /// Mean step-1 ellipsoid hits per measured point.
    pub mean_hits: f64,
    /// Fraction of measured points no ellipsoid reached.
    pub zero_fraction: f64,
    /// Mean total evaluations per measured point, ellipsoid-counted.
    pub total_ellipsoid: f64,
    /// Mean total evaluations per measured point, box-counted.
    pub total_box: f64,
    /// Counters from the actual [`render_improved`] run.
    pub render: RenderStats,
}

/// Predictions and pooled empirical means of a complexity experiment.
#[derive(Clone, Debug)]
pub struct ComplexityReport {
    pub threshold: f64,
    pub reps: usize,
    pub intensity: f64,
    /// Points per realization inside the eroded measurement window.
    pub measured_points: usize,
    pub predicted_relevant: f64,
    pub predicted_step1: f64,
    pub predicted_step2: f64,
    pub predicted_total: f64,
    pub predicted_zero_fraction: f64,
    pub empirical_step1: f64,
    pub empirical_step1_se: f64,
    pub empirical_zero_fraction: f64,
    pub empirical_zero_fraction_se: f64,
    pub empirical_total_ellipsoid: f64,
    pub empirical_total_ellipsoid_se: f64,
    pub empirical_total_box: f64,
    pub mean_generators: f64,
    /// Empirical box-to-ellipsoid volume ratio (the practical `c`).
    pub box_ratio: f64,
    /// Optimum of the box-counted model at this `c`.
    pub completed: CompletedOptimum,
    pub per_rep: Vec<RepRecord>,
}

impl ComplexityReport {
    /// Mean brute-force cost per point, for comparison: the realized
    /// generator count.
    pub fn brute_force_per_point(&self) -> f64 {
        self.mean_generators
    }
}

fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Run `reps` independent realizations, render each with the improved
/// algorithm, and measure per-point step-1 hits (ellipsoid-counted), box
/// visits, and fallback work against the model's predictions.
///
/// Measurements are restricted to grid points in the window eroded by the
/// grain radius `√(t + w_max)·r_max`, where the stationary-process formulas
/// apply without edge effects. Realization `i` uses seed `cfg.seed + i`;
/// realizations run in parallel and aggregation is order-independent.
pub fn verify_complexity(
    cfg: &PoissonConfig,
    marks: &MarkModel,
    grid: &GridSpec,
    threshold: f64,
    reps: usize,
) -> Result<ComplexityReport> {
    if reps == 0 {
        return Err(Error::InvalidModel(
            "at least one repetition required".into(),
        ));
    }
    if !(threshold > 0.0) || !threshold.is_finite() {
        return Err(Error::NonpositiveThreshold(threshold));
    }
    let dim = cfg.window.dim();
    if grid.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: grid.dim(),
        });
    }

    // eroded measurement window
    let erosion = marks.grain_radius(threshold);
    let eroded = cfg.window.dilated(-erosion).map_err(|_| {
        Error::InvalidModel(format!(
            "erosion by grain radius {erosion} leaves no measurement window"
        ))
    })?;
    let measured: Vec<usize> = (0..grid.num_points())
        .filter(|&flat| {
            let idx = grid.decompose(flat);
            let x = grid.point(&idx[..dim]);
            eroded.contains(&x[..dim])
        })
        .collect();
    if measured.is_empty() {
        return Err(Error::InvalidModel(
            "no grid points inside the eroded measurement window".into(),
        ));
    }

    let records: Vec<RepRecord> = (0..reps)
        .into_par_iter()
        .map(|rep| -> Result<RepRecord> {
            let rep_cfg = cfg.with_seed(cfg.seed.wrapping_add(rep as u64));
            let set = sample_generators(&rep_cfg, marks)?;
            let n = set.len();

            // per-point ellipsoid hits and box visits
            let total = grid.num_points();
            let mut hits = vec![0u32; total];
            let mut covers = vec![0u32; total];
            for g in set.iter() {
                let b = bounding_box(g, threshold)?;
                let ranges = grid_points_in_box(grid, &b);
                if ranges.iter().any(|r| r.is_empty()) {
                    continue;
                }
                let mut idx = [0usize; MAX_DIM];
                for (a, r) in ranges.iter().enumerate() {
                    idx[a] = r.start;
                }
                'scan: loop {
                    let flat = grid.linear_index(&idx[..dim]);
                    let x = grid.point(&idx[..dim]);
                    covers[flat] += 1;
                    if dist(&x[..dim], g) <= threshold {
                        hits[flat] += 1;
                    }
                    let mut a = dim - 1;
                    loop {
                        idx[a] += 1;
                        if idx[a] < ranges[a].end {
                            break;
                        }
                        if a == 0 {
                            break 'scan;
                        }
                        idx[a] = ranges[a].start;
                        a -= 1;
                    }
                }
            }

            let m = measured.len() as f64;
            let mut hit_sum = 0u64;
            let mut cover_sum = 0u64;
            let mut zero_count = 0u64;
            for &flat in &measured {
                hit_sum += hits[flat] as u64;
                cover_sum += covers[flat] as u64;
                if hits[flat] == 0 {
                    zero_count += 1;
                }
            }
            let mean_hits = hit_sum as f64 / m;
            let zero_fraction = zero_count as f64 / m;
            let fallback = zero_fraction * n as f64;

            let (_, render) = render_improved(grid, &set, threshold)?;

            Ok(RepRecord {
                rep,
                generators: n,
                predicted_step1: mean_step1_hits(&set, cfg.intensity, threshold)?,
                mean_hits,
                zero_fraction,
                total_ellipsoid: mean_hits + fallback,
                total_box: cover_sum as f64 / m + fallback,
                render,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let step1_values: Vec<f64> = records.iter().map(|r| r.mean_hits).collect();
    let zero_values: Vec<f64> = records.iter().map(|r| r.zero_fraction).collect();
    let total_ell_values: Vec<f64> = records.iter().map(|r| r.total_ellipsoid).collect();
    let (empirical_step1, empirical_step1_se) = mean_and_se(&step1_values);
    let (empirical_zero, empirical_zero_se) = mean_and_se(&zero_values);
    let (empirical_total_ell, empirical_total_ell_se) = mean_and_se(&total_ell_values);
    let empirical_total_box = records.iter().map(|r| r.total_box).sum::<f64>() / reps as f64;
    let predicted_step1 = records.iter().map(|r| r.predicted_step1).sum::<f64>() / reps as f64;
    let mean_generators = records.iter().map(|r| r.generators as f64).sum::<f64>() / reps as f64;
    let predicted_relevant = mean_relevant_generators(cfg.intensity, &cfg.window, cfg.halo)?;
    let predicted_step2 = (-predicted_step1).exp() * (predicted_relevant - predicted_step1);

    // pooled c estimate from the first realization's marks (identically
    // distributed across reps)
    let first_set = sample_generators(&cfg.with_seed(cfg.seed), marks)?;
    let box_ratio = box_ellipsoid_ratio(&first_set, threshold)?;
    let completed = optimal_step1_mean_completed(predicted_relevant, box_ratio.max(1.0))?;

    Ok(ComplexityReport {
        threshold,
        reps,
        intensity: cfg.intensity,
        measured_points: measured.len(),
        predicted_relevant,
        predicted_step1,
        predicted_step2,
        predicted_total: mean_total_evals(predicted_step1, predicted_relevant),
        predicted_zero_fraction: (-predicted_step1).exp(),
        empirical_step1,
        empirical_step1_se,
        empirical_zero_fraction: empirical_zero,
        empirical_zero_fraction_se: empirical_zero_se,
        empirical_total_ellipsoid: empirical_total_ell,
        empirical_total_ellipsoid_se: empirical_total_ell_se,
        empirical_total_box,
        mean_generators,
        box_ratio,
        completed,
        per_rep: records,
    })
}

impl std::fmt::Display for ComplexityReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "complexity report: t = {}, reps = {}, measured points = {}",
            self.threshold, self.reps, self.measured_points
        )?;
        writeln!(
            f,
            "  {:<28} {:>12} {:>12}",
            "quantity (per point)", "predicted", "empirical"
        )?;
        writeln!(
            f,
            "  {:<28} {:>12.4} {:>12.4}",
            "step-1 hits", self.predicted_step1, self.empirical_step1
        )?;
        writeln!(
            f,
            "  {:<28} {:>12.4} {:>12.4}",
            "uncovered fraction", self.predicted_zero_fraction, self.empirical_zero_fraction
        )?;
        writeln!(
            f,
            "  {:<28} {:>12.4} {:>12.4}",
            "total evals (ellipsoid)", self.predicted_total, self.empirical_total_ellipsoid
        )?;
        writeln!(
            f,
            "  {:<28} {:>12} {:>12.4}",
            "total evals (box)", "-", self.empirical_total_box
        )?;
        writeln!(
            f,
            "  relevant generators: predicted {:.2}, realized {:.2}",
            self.predicted_relevant, self.mean_generators
        )?;
        writeln!(
            f,
            "  box/ellipsoid ratio c = {:.4}; completed optimum n1 = {:.4} (bound {:.4})",
            self.box_ratio, self.completed.step1_mean, self.completed.bound
        )?;
        write!(
            f,
            "  brute force would cost {:.2} evals per point",
            self.brute_force_per_point()
        )
    }
}
