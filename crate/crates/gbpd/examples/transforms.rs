//! Every affine transform maps the tessellation exactly: the label of a
//! mapped point under the transformed set equals the label of the original
//! point under the original set. Weight shifts and scalings change nothing
//! at all.
//!
//! ```bash
//! cargo run --release --example transforms
//! ```

use gbpd::geometry::{AxisBox, SquareMatrix};
use gbpd::poisson::{sample_generators, MarkModel, PoissonConfig};
use gbpd::render::GridSpec;
use gbpd::transform::{
    distort, normalize_nonnegative, rotate, scale, scale_weights, shift_weights, translate,
    ScaleMode,
};

fn main() -> gbpd::Result<()> {
    let window = AxisBox::new(&[0.0, 0.0], &[1.0, 1.0])?;
    let marks = MarkModel::new(0.05, 0.15, 0.02)?;
    let cfg = PoissonConfig::new(40.0, window, 0.1, 99)?;
    let set = sample_generators(&cfg, &marks)?;
    let grid = GridSpec::uniform(&[0.0, 0.0], 1.0 / 64.0, &[64, 64])?;

    // check label invariance on every grid point
    let check = |name: &str,
                 mapped_set: &gbpd::geometry::GeneratorSet,
                 map: &dyn Fn(&[f64]) -> Vec<f64>| {
        let mut mismatches = 0usize;
        for i in 0..grid.counts()[0] {
            for j in 0..grid.counts()[1] {
                let x = [grid.axis_coord(0, i), grid.axis_coord(1, j)];
                let y = map(&x);
                if set.classify(&x).0 != mapped_set.classify(&y).0 {
                    mismatches += 1;
                }
            }
        }
        println!("{name:<22} {} mismatched labels", mismatches);
        assert_eq!(mismatches, 0);
    };

    let shift = [0.3, -0.8];
    check("translate", &translate(&set, &shift)?, &|x| {
        vec![x[0] + shift[0], x[1] + shift[1]]
    });

    let u = SquareMatrix::rotation_2d(0.6);
    let rotated = rotate(&set, &u)?;
    check("rotate", &rotated, &|x| u.mul_vec(x)[..2].to_vec());

    let a = 2.5;
    check(
        "scale (matrix form)",
        &scale(&set, a, ScaleMode::MatrixForm)?,
        &|x| vec![a * x[0], a * x[1]],
    );
    check(
        "scale (weight form)",
        &scale(&set, a, ScaleMode::WeightForm)?,
        &|x| vec![a * x[0], a * x[1]],
    );

    let m = SquareMatrix::new(2, &[1.4, 0.5, -0.2, 0.9])?;
    check("distort", &distort(&set, &m)?, &|x| {
        m.mul_vec(x)[..2].to_vec()
    });

    let identity = |x: &[f64]| x.to_vec();
    check("shift weights", &shift_weights(&set, 4.2), &identity);
    check("scale weights", &scale_weights(&set, 0.37)?, &identity);
    check("normalize weights", &normalize_nonnegative(&set), &identity);

    println!("all transforms preserve the tessellation");
    Ok(())
}
