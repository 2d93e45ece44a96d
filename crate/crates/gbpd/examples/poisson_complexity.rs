//! Run the full complexity experiment: sample Poisson realizations, render
//! them, and compare measured per-point work against the model.
//!
//! ```bash
//! cargo run --release --example poisson_complexity
//! ```

use gbpd::geometry::AxisBox;
use gbpd::io;
use gbpd::poisson::{verify_complexity, MarkModel, PoissonConfig};
use gbpd::render::GridSpec;

fn main() -> gbpd::Result<()> {
    let window = AxisBox::new(&[0.0, 0.0], &[1.0, 1.0])?;
    let marks = MarkModel::isotropic(0.05)?;
    let grid = GridSpec::uniform(&[0.0, 0.0], 1.0 / 256.0, &[256, 256])?;
    let reps = 20;

    let dir = std::env::temp_dir().join("gbpd-complexity");
    std::fs::create_dir_all(&dir)?;

    let mut reports = Vec::new();
    for t in [0.25, 1.0, 4.0] {
        // halo sized so every ellipsoid overlapping the window is sampled
        let halo = marks.grain_radius(t);
        let cfg = PoissonConfig::new(200.0, window.clone(), halo, 404)?;
        let report = verify_complexity(&cfg, &marks, &grid, t, reps)?;
        println!("{report}\n");
        reports.push(report);
    }

    let csv = dir.join("report.csv");
    io::write_complexity_csv(&csv, &reports)?;
    println!("per-realization rows written to {}", csv.display());
    Ok(())
}
