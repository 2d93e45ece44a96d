//! Pick the scan threshold from the cost model instead of guessing.
//!
//! For a set of `n` relevant generators, the model says the expected
//! per-point work `n̄₁ + e^{−n̄₁}(n̄_R − n̄₁)` is minimized where
//! `e^{n̄₁} + n̄₁ = n̄_R + 1`, and the minimum is at most `log(n̄_R + 1) + 1`
//! — exponentially better than the brute-force `n̄_R`. This example solves
//! that equation, inverts the step-1 mean to a threshold, and confirms the
//! measured work lands where predicted.
//!
//! ```bash
//! cargo run --release --example optimal_threshold
//! ```

use gbpd::geometry::AxisBox;
use gbpd::poisson::{
    mean_step1_hits, mean_total_evals, optimal_step1_mean, sample_generators, solve_threshold,
    MarkModel, PoissonConfig,
};
use gbpd::render::{render_improved, GridSpec};

fn main() -> gbpd::Result<()> {
    let window = AxisBox::new(&[0.0, 0.0], &[1.0, 1.0])?;
    let marks = MarkModel::new(0.02, 0.06, 0.0)?;
    let cfg = PoissonConfig::new(600.0, window, 0.05, 31)?;
    let set = sample_generators(&cfg, &marks)?;
    let grid = GridSpec::uniform(&[0.0, 0.0], 1.0 / 512.0, &[512, 512])?;

    let n = set.len() as f64;
    let target = optimal_step1_mean(n)?;
    let intensity = n / grid.window().volume();
    let t = solve_threshold(target, &set, intensity)?;
    println!(
        "{} generators; optimal step-1 mean {target:.4}, threshold t = {t:.6}",
        set.len()
    );

    // round trip: the solved threshold reproduces the target mean
    let achieved = mean_step1_hits(&set, intensity, t)?;
    println!("step-1 mean at solved t: {achieved:.4}");

    let predicted = mean_total_evals(target, n);
    println!(
        "predicted work: {predicted:.2} evals/point (brute force: {n:.0}, bound log(n+1)+1 = {:.2})",
        (n + 1.0).ln() + 1.0
    );

    for (name, t_run) in [("t/10", t / 10.0), ("optimal t", t), ("10t", t * 10.0)] {
        let (_, stats) = render_improved(&grid, &set, t_run)?;
        let per_point = stats.total_evals() as f64 / grid.num_points() as f64;
        println!(
            "measured at {name:<9} {per_point:>8.2} evals/point (step1 {:>9}, step2 {:>9})",
            stats.step1_evals, stats.step2_evals
        );
    }
    Ok(())
}
