//! Visualize step 1 of the improved renderer: each generator colors the
//! grid points inside its sublevel ellipsoid, and the colored region grows
//! with the scan threshold until only slivers are left for step 2.
//!
//! Writes one preview per threshold; uncovered points are black.
//!
//! ```bash
//! cargo run --release --example coverage_growth
//! ```

use gbpd::geometry::AxisBox;
use gbpd::io;
use gbpd::poisson::{sample_generators, MarkModel, PoissonConfig};
use gbpd::render::{step1_coverage, GridSpec};

fn main() -> gbpd::Result<()> {
    let window = AxisBox::new(&[0.0, 0.0], &[1.0, 1.0])?;
    let marks = MarkModel::new(0.05, 0.12, 0.0)?;
    let cfg = PoissonConfig::new(80.0, window, 0.12, 7)?;
    let set = sample_generators(&cfg, &marks)?;
    let grid = GridSpec::uniform(&[0.0, 0.0], 1.0 / 512.0, &[512, 512])?;

    let dir = std::env::temp_dir().join("gbpd-coverage");
    std::fs::create_dir_all(&dir)?;

    let mut last = 0usize;
    for (i, t) in [0.05, 0.25, 1.0].into_iter().enumerate() {
        let (coverage, stats) = step1_coverage(&grid, &set, t)?;
        let path = dir.join(format!("coverage_{i}.ppm"));
        io::write_coverage_preview(&path, &coverage)?;
        println!(
            "t = {t:<5} covered {:>6} / {} points ({} box evals) -> {}",
            coverage.covered,
            grid.num_points(),
            stats.step1_evals,
            path.display()
        );
        assert!(coverage.covered >= last, "coverage must grow with t");
        last = coverage.covered;
    }
    Ok(())
}
