//! Cut a 3-d tessellation with a plane. The section of a generator set is
//! again a generator set, one dimension down, and rendering it directly
//! gives exactly the same pixels as slicing a full 3-d rendering.
//!
//! ```bash
//! cargo run --release --example sections
//! ```

use gbpd::geometry::AxisBox;
use gbpd::io;
use gbpd::poisson::{sample_generators, MarkModel, PoissonConfig};
use gbpd::render::{render_brute_force, render_section_improved, GridSpec};
use gbpd::section::{section_set, FlatSpec};

fn main() -> gbpd::Result<()> {
    let window = AxisBox::new(&[0.0; 3], &[1.0; 3])?;
    let marks = MarkModel::new(0.08, 0.2, 0.01)?;
    let cfg = PoissonConfig::new(120.0, window, 0.2, 5)?;
    let set = sample_generators(&cfg, &marks)?;
    println!("3-d set with {} generators", set.len());

    // a full 3-d rendering and the slab at z = h
    let n = 96usize;
    let grid3 = GridSpec::uniform(&[0.0; 3], 1.0 / n as f64, &[n, n, n])?;
    let slab_index = n / 2;
    let h = grid3.axis_coord(2, slab_index); // plane through voxel centers
    let (volume, _) = render_brute_force(&grid3, &set)?;

    // the same plane rendered through the section machinery
    let grid2 = grid3.drop_axis(2)?;
    let (slice, stats) = render_section_improved(&grid2, &set, 2, h, 0.3)?;
    println!(
        "section render: {} step-1 evals, {} fall-through pixels",
        stats.step1_evals, stats.step2_points
    );

    let mut mismatches = 0usize;
    for i in 0..n {
        for j in 0..n {
            if volume.label_at(&[i, j, slab_index]) != slice.label_at(&[i, j]) {
                mismatches += 1;
            }
        }
    }
    println!("slab vs section: {mismatches} mismatched pixels");
    assert_eq!(mismatches, 0);

    // the reduced set is an ordinary generator set: inspect and save it
    let reduced = section_set(&set, &FlatSpec::hyperplane(2, h)?)?;
    let shrunk = reduced
        .iter()
        .zip(set.iter())
        .filter(|(r, g)| r.weight() < g.weight())
        .count();
    println!(
        "{} of {} reduced generators lost weight (their seed is off-plane)",
        shrunk,
        reduced.len()
    );

    let dir = std::env::temp_dir().join("gbpd-sections");
    std::fs::create_dir_all(&dir)?;
    io::write_ppm_preview(&dir.join("slice.ppm"), slice.grid(), slice.labels())?;
    io::write_generator_set(&dir.join("section.txt"), &reduced, &[format!("z = {h}")])?;
    println!("wrote slice.ppm and section.txt to {}", dir.display());
    Ok(())
}
