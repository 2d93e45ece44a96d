//! Compare the improved renderer against the brute-force baseline: the
//! images are identical pixel for pixel, the work is not.
//!
//! ```bash
//! cargo run --release --example improved_vs_brute
//! ```

use std::time::Instant;

use gbpd::geometry::AxisBox;
use gbpd::poisson::{sample_generators, MarkModel, PoissonConfig};
use gbpd::render::{render_brute_force, render_improved, GridSpec};

fn main() -> gbpd::Result<()> {
    let window = AxisBox::new(&[0.0, 0.0], &[1.0, 1.0])?;
    let marks = MarkModel::new(0.03, 0.09, 0.01)?;
    let cfg = PoissonConfig::new(400.0, window, 0.1, 2024)?;
    let set = sample_generators(&cfg, &marks)?;
    let grid = GridSpec::uniform(&[0.0, 0.0], 1.0 / 512.0, &[512, 512])?;

    let start = Instant::now();
    let (brute, brute_stats) = render_brute_force(&grid, &set)?;
    let brute_time = start.elapsed();

    println!(
        "{} generators on a {}x{} grid",
        set.len(),
        grid.counts()[0],
        grid.counts()[1]
    );
    println!(
        "brute force:  {:>12} distance evals   {:>8.1?}",
        brute_stats.step2_evals, brute_time
    );

    for t in [0.05, 0.2, 1.0] {
        let start = Instant::now();
        let (fast, stats) = render_improved(&grid, &set, t)?;
        let time = start.elapsed();
        assert_eq!(brute.labels(), fast.labels(), "renderers disagree");
        println!(
            "improved t={t:<5} {:>12} distance evals   {:>8.1?}   ({} pixels fell through, images identical)",
            stats.total_evals(),
            time,
            stats.step2_points
        );
    }
    Ok(())
}
