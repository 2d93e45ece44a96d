//! Shared helpers for the integration suites: independent random-input
//! builders and a test-side matrix inverse used as an oracle.

// each test binary compiles this module and uses its own subset
#![allow(dead_code)]
#![allow(clippy::needless_range_loop)]

use std::path::Path;
use std::process::Command;

use gbpd::geometry::{Generator, GeneratorSet, SpdMatrix, SquareMatrix};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// Random SPD matrix via AᵀA + 0.3·I (bounded conditioning).
pub fn random_spd(rng: &mut ChaCha8Rng, dim: usize) -> SpdMatrix {
    let a: Vec<f64> = (0..dim * dim)
        .map(|_| rng.random::<f64>() * 2.0 - 1.0)
        .collect();
    let mut m = vec![0.0; dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            for k in 0..dim {
                m[i * dim + j] += a[k * dim + i] * a[k * dim + j];
            }
        }
        m[i * dim + i] += 0.3;
    }
    SpdMatrix::new(dim, &m).unwrap()
}

/// Haar-like random rotation: Gram-Schmidt on Gaussian-ish columns.
/// Built here independently of the library's sampler.
pub fn random_rotation(rng: &mut ChaCha8Rng, dim: usize) -> SquareMatrix {
    loop {
        let mut cols = vec![vec![0.0f64; dim]; dim];
        for col in cols.iter_mut() {
            for v in col.iter_mut() {
                // sum of uniforms is gaussian enough for a direction draw
                *v = (0..6).map(|_| rng.random::<f64>() - 0.5).sum();
            }
        }
        let mut ok = true;
        for c in 0..dim {
            for p in 0..c {
                let dot: f64 = (0..dim).map(|r| cols[c][r] * cols[p][r]).sum();
                for r in 0..dim {
                    cols[c][r] -= dot * cols[p][r];
                }
            }
            let norm: f64 = cols[c].iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm < 1e-6 {
                ok = false;
                break;
            }
            for v in cols[c].iter_mut() {
                *v /= norm;
            }
        }
        if !ok {
            continue;
        }
        let mut entries = vec![0.0; dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                entries[r * dim + c] = cols[c][r];
            }
        }
        return SquareMatrix::new(dim, &entries).unwrap();
    }
}

/// Random invertible matrix with |det| bounded away from zero.
pub fn random_invertible(rng: &mut ChaCha8Rng, dim: usize) -> SquareMatrix {
    loop {
        let entries: Vec<f64> = (0..dim * dim)
            .map(|_| rng.random::<f64>() * 2.0 - 1.0)
            .collect();
        let m = SquareMatrix::new(dim, &entries).unwrap();
        if m.det().abs() > 0.1 {
            return m;
        }
    }
}

/// Random generator set: seeds uniform in the unit cube, ellipsoid
/// semi-axes log-uniform around `radius_scale`, weights uniform in
/// `[0, w_max]`.
pub fn random_set(
    rng: &mut ChaCha8Rng,
    dim: usize,
    n: usize,
    w_max: f64,
    radius_scale: f64,
) -> GeneratorSet {
    let items = (0..n)
        .map(|_| {
            let q = random_rotation(rng, dim);
            let mut m = vec![0.0; dim * dim];
            let radii: Vec<f64> = (0..dim)
                .map(|_| radius_scale * (rng.random::<f64>() * 2.0 - 1.0).exp())
                .collect();
            for i in 0..dim {
                for j in 0..dim {
                    let mut s = 0.0;
                    for k in 0..dim {
                        s += q.get(i, k) * q.get(j, k) / (radii[k] * radii[k]);
                    }
                    m[i * dim + j] = s;
                }
            }
            for i in 0..dim {
                for j in (i + 1)..dim {
                    let avg = 0.5 * (m[i * dim + j] + m[j * dim + i]);
                    m[i * dim + j] = avg;
                    m[j * dim + i] = avg;
                }
            }
            let seed: Vec<f64> = (0..dim).map(|_| rng.random::<f64>()).collect();
            Generator::new(
                &seed,
                SpdMatrix::new(dim, &m).unwrap(),
                if w_max > 0.0 {
                    rng.random::<f64>() * w_max
                } else {
                    0.0
                },
            )
            .unwrap()
        })
        .collect();
    GeneratorSet::new(items).unwrap()
}

/// Mean distance from each seed to its nearest neighbor.
pub fn mean_nearest_seed_spacing(set: &GeneratorSet) -> f64 {
    let n = set.len();
    if n < 2 {
        return 1.0;
    }
    let mut acc = 0.0;
    for i in 0..n {
        let mut best = f64::INFINITY;
        for j in 0..n {
            if i == j {
                continue;
            }
            let d: f64 = set
                .get(i)
                .seed()
                .iter()
                .zip(set.get(j).seed())
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            best = best.min(d);
        }
        acc += best.sqrt();
    }
    acc / n as f64
}

/// Rough seed spacing for n uniform points in the unit d-cube.
pub fn mean_seed_spacing_estimate(n: usize, dim: usize) -> f64 {
    (1.0 / n as f64).powf(1.0 / dim as f64)
}

/// Test-side Gauss-Jordan inverse, independent of the library's
/// factorization path.
pub fn gauss_jordan_inverse(dim: usize, entries: &[f64]) -> Vec<f64> {
    let mut a = entries.to_vec();
    let mut inv = vec![0.0; dim * dim];
    for i in 0..dim {
        inv[i * dim + i] = 1.0;
    }
    for col in 0..dim {
        let mut piv = col;
        for r in (col + 1)..dim {
            if a[r * dim + col].abs() > a[piv * dim + col].abs() {
                piv = r;
            }
        }
        for j in 0..dim {
            a.swap(col * dim + j, piv * dim + j);
            inv.swap(col * dim + j, piv * dim + j);
        }
        let p = a[col * dim + col];
        for j in 0..dim {
            a[col * dim + j] /= p;
            inv[col * dim + j] /= p;
        }
        for r in 0..dim {
            if r == col {
                continue;
            }
            let f = a[r * dim + col];
            for j in 0..dim {
                a[r * dim + j] -= f * a[col * dim + j];
                inv[r * dim + j] -= f * inv[col * dim + j];
            }
        }
    }
    inv
}

/// Run the CLI binary with `--out <dir>` appended; panics on failure.
pub fn run_cli(bin: &str, args: &[String], out: &Path, envs: &[(&str, &str)]) {
    let mut cmd = Command::new(bin);
    cmd.args(args).arg("--out").arg(out);
    for (k, v) in envs {
        cmd.env(k, v);
    }
    let output = cmd.output().expect("failed to launch the gbpd binary");
    assert!(
        output.status.success(),
        "command {:?} failed:\n{}",
        args,
        String::from_utf8_lossy(&output.stderr)
    );
}

/// Both directories contain the same file names with the same bytes.
pub fn assert_dirs_identical(a: &Path, b: &Path) {
    let list = |dir: &Path| -> Vec<String> {
        let mut names: Vec<String> = std::fs::read_dir(dir)
            .unwrap()
            .map(|e| e.unwrap().file_name().into_string().unwrap())
            .collect();
        names.sort();
        names
    };
    let names_a = list(a);
    assert_eq!(names_a, list(b), "different file sets in {a:?} vs {b:?}");
    for name in names_a {
        let bytes_a = std::fs::read(a.join(&name)).unwrap();
        let bytes_b = std::fs::read(b.join(&name)).unwrap();
        assert_eq!(bytes_a, bytes_b, "file {name} differs between runs");
    }
}
