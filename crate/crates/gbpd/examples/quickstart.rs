//! Build a small generator set by hand, render it, and write the image
//! files.
//!
//! ```bash
//! cargo run --release --example quickstart
//! ```

use gbpd::geometry::{Generator, GeneratorSet, SpdMatrix};
use gbpd::io;
use gbpd::render::{render_improved, GridSpec};

fn main() -> gbpd::Result<()> {
    // Three generators on the unit square. The anisotropy matrix shapes each
    // cell's metric: strong anisotropy stretches cells, weights enlarge them.
    let set = GeneratorSet::new(vec![
        Generator::new(&[0.3, 0.3], SpdMatrix::new(2, &[8.0, 3.0, 3.0, 4.0])?, 0.0)?,
        Generator::new(&[0.7, 0.4], SpdMatrix::diagonal(&[1.0, 12.0])?, 0.02)?,
        Generator::new(&[0.5, 0.8], SpdMatrix::identity(2)?, 0.05)?,
    ])?;

    // 512 x 512 pixels covering [0, 1]^2, pixel-center convention.
    let grid = GridSpec::uniform(&[0.0, 0.0], 1.0 / 512.0, &[512, 512])?;
    let (image, stats) = render_improved(&grid, &set, 0.2)?;

    println!(
        "rendered {} pixels; step 1 evaluated {} distances, step 2 resolved {} pixels",
        grid.num_points(),
        stats.step1_evals,
        stats.step2_points
    );

    let dir = std::env::temp_dir().join("gbpd-quickstart");
    std::fs::create_dir_all(&dir)?;
    io::write_label_image(&dir.join("image.gbpdimg"), &image)?;
    io::write_ppm_preview(&dir.join("preview.ppm"), image.grid(), image.labels())?;
    io::write_generator_set(&dir.join("generators.txt"), &set, &[])?;
    println!(
        "wrote image.gbpdimg, preview.ppm, generators.txt to {}",
        dir.display()
    );
    Ok(())
}
