//! The `gbpd` command line: generate, transform, section, render, benchmark.
//!
//! Every command is deterministic given its inputs and seed; outputs carry
//! no timestamps, so reruns are byte-identical. Exit codes: 0 on success,
//! 2 for configuration problems (bad flags, unreadable or malformed files),
//! 3 for numeric or domain failures inside the computation.
//!
//! Axis indices on the command line (`--flat "k=3,h=0.5"`) are 1-based,
//! matching the usual coordinate names x₁..x_d; the library API is 0-based.

mod config;

pub use config::{Config, Section};

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::geometry::{AxisBox, Generator, GeneratorSet, SpdMatrix, SquareMatrix};
use crate::io;
use crate::poisson::{
    mean_relevant_generators, optimal_step1_mean, sample_generators, solve_threshold, MarkModel,
    PoissonConfig,
};
use crate::render::{
    render_brute_force, render_improved, step1_coverage, GridSpec, LabelImage, RenderStats,
};
use crate::section::{section_set, FlatSpec};
use crate::transform;

#[derive(Parser)]
#[command(
    name = "gbpd",
    version,
    about = "Generalised balanced power diagrams: generate, transform, section, render, benchmark"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a generator set from a Poisson model, or materialize an
    /// explicit list, and write it to a generator-set file.
    Generate {
        /// Config file with [poisson]+[marks] or [generators].
        #[arg(long)]
        config: PathBuf,
        /// Output directory (created if missing).
        #[arg(long)]
        out: PathBuf,
        /// Override the seed from the config file.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Apply one affine or weight transform to a generator-set file.
    Transform {
        /// Input generator-set file.
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        op: TransformOp,
    },
    /// Cut a generator set with an axis-aligned flat, optionally after a
    /// rotation, and write the reduced set.
    Section {
        /// Input generator-set file.
        input: PathBuf,
        /// Fixed axes, 1-based: "k=3,h=0.5" or "k=2,h=0.1;k=3,h=0.5".
        #[arg(long)]
        flat: String,
        /// Rotation applied before sectioning, row-major rows:
        /// "r11,r12;r21,r22".
        #[arg(long)]
        rotation: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Rasterize a generator set and write the label image, a preview and
    /// eval-count stats.
    Render {
        /// Input generator-set file.
        input: PathBuf,
        /// Grid as "N1xN2[xN3]@spacing", e.g. "256x256@0.00390625".
        #[arg(long)]
        grid: String,
        /// Window corner, comma-separated; defaults to the origin.
        #[arg(long)]
        origin: Option<String>,
        #[arg(long, value_enum, default_value_t = Algorithm::Improved)]
        algorithm: Algorithm,
        /// Scan threshold for the improved algorithm: "auto" solves the
        /// cost-model optimum for the realized set.
        #[arg(long, default_value = "auto")]
        t: String,
        /// Worker threads (default: all cores; GBPD_THREADS also works).
        #[arg(long)]
        threads: Option<usize>,
        /// Additionally write the step-1 coverage preview (improved only).
        #[arg(long)]
        coverage: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the Poisson complexity experiment and write its report.
    Benchmark {
        /// Config file with [poisson], [marks], [grid], [benchmark].
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Override the seed from the config file.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        threads: Option<usize>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct TransformOp {
    /// Shift all seeds: "dy1,dy2[,dy3]".
    #[arg(long)]
    translate: Option<String>,
    /// Rotate by an orthogonal matrix, row-major rows: "r11,r12;r21,r22".
    #[arg(long)]
    rotate: Option<String>,
    /// Scale the tessellation by a positive factor.
    #[arg(long)]
    scale: Option<f64>,
    /// Distort by an invertible matrix, row-major rows.
    #[arg(long)]
    distort: Option<String>,
    /// Add a constant to every weight (tessellation unchanged).
    #[arg(long)]
    shift_weights: Option<f64>,
    /// Scale every (M, w) by a positive factor (tessellation unchanged).
    #[arg(long)]
    scale_weights: Option<f64>,
    /// Shift weights so the minimum becomes zero.
    #[arg(long)]
    normalize: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algorithm {
    Brute,
    Improved,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScaleModeArg {
    Matrix,
    Weight,
}

/// Entry point for the `gbpd` binary.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

type CliResult<T> = std::result::Result<T, Failure>;

trait Classify<T> {
    /// Treat any error as a configuration problem (exit 2).
    fn usage(self) -> CliResult<T>;
    /// Exit 3 for numeric/domain errors, 2 for I/O and parse errors.
    fn domain(self) -> CliResult<T>;
}

impl<T> Classify<T> for Result<T> {
    fn usage(self) -> CliResult<T> {
        self.map_err(|e| Failure {
            code: 2,
            message: e.to_string(),
        })
    }

    fn domain(self) -> CliResult<T> {
        self.map_err(|e| {
            let code = match &e {
                Error::Io(_) | Error::Parse { .. } => 2,
                _ => 3,
            };
            Failure {
                code,
                message: e.to_string(),
            }
        })
    }
}

fn usage_err<T>(message: impl Into<String>) -> CliResult<T> {
    Err(Failure {
        code: 2,
        message: message.into(),
    })
}

fn run(command: Command) -> CliResult<()> {
    match command {
        Command::Generate { config, out, seed } => cmd_generate(&config, &out, seed),
        Command::Transform { input, out, op } => cmd_transform(&input, &out, &op),
        Command::Section {
            input,
            flat,
            rotation,
            out,
        } => cmd_section(&input, &flat, rotation.as_deref(), &out),
        Command::Render {
            input,
            grid,
            origin,
            algorithm,
            t,
            threads,
            coverage,
            out,
        } => in_pool(threads, || {
            cmd_render(
                &input,
                &grid,
                origin.as_deref(),
                algorithm,
                &t,
                coverage,
                &out,
            )
        }),
        Command::Benchmark {
            config,
            out,
            seed,
            threads,
        } => in_pool(threads, || cmd_benchmark(&config, &out, seed)),
    }
}

/// Run `f` in a rayon pool of the requested size; `--threads` wins over the
/// GBPD_THREADS variable, otherwise rayon's default (all cores) is used.
fn in_pool<T: Send>(flag: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    let threads = flag.or_else(|| {
        std::env::var("GBPD_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    match threads {
        None | Some(0) => f(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("failed to build worker pool")
            .install(f),
    }
}

fn ensure_out_dir(out: &Path) -> CliResult<()> {
    std::fs::create_dir_all(out).map_err(Error::from).usage()
}

// ---------------------------------------------------------------- generate

fn cmd_generate(config_path: &Path, out: &Path, seed_override: Option<u64>) -> CliResult<()> {
    let text = std::fs::read_to_string(config_path)
        .map_err(Error::from)
        .usage()?;
    let cfg = Config::parse(&text, &config_path.display().to_string()).usage()?;
    ensure_out_dir(out)?;

    let (set, provenance) = if cfg.has_section("generators") {
        let set = explicit_generators(cfg.require_section("generators").usage()?)?;
        (set, vec!["explicit generator list".to_string()])
    } else {
        let (pcfg, marks) = poisson_model_from(&cfg, seed_override)?;
        let set = sample_generators(&pcfg, &marks).domain()?;
        let window = pcfg.window();
        let prov = vec![
            format!(
                "poisson model: intensity={} halo={} seed={}",
                pcfg.intensity(),
                pcfg.halo(),
                pcfg.seed()
            ),
            format!(
                "window: lower={:?} upper={:?}",
                window.lower(),
                window.upper()
            ),
            format!(
                "marks: r_min={} r_max={} w_max={}",
                marks.r_min(),
                marks.r_max(),
                marks.w_max()
            ),
        ];
        (set, prov)
    };

    let path = out.join("generators.txt");
    io::write_generator_set(&path, &set, &provenance).domain()?;
    println!(
        "wrote {} generators (dim {}) to {}",
        set.len(),
        set.dim(),
        path.display()
    );
    Ok(())
}

fn explicit_generators(section: &Section) -> CliResult<GeneratorSet> {
    let dim = section.usize("dim").usage()?;
    let mut items = Vec::new();
    for (value, _line) in section.values("generator") {
        let parts: Vec<&str> = value.split('|').collect();
        if parts.len() != 3 {
            return usage_err(format!(
                "generator record `{value}` must have three `|`-separated parts: seed | matrix upper triangle | weight"
            ));
        }
        let seed = parse_floats(parts[0])?;
        let tri = parse_floats(parts[1])?;
        let weight: f64 = match parts[2].trim().parse() {
            Ok(w) => w,
            Err(_) => return usage_err(format!("bad weight `{}`", parts[2].trim())),
        };
        if seed.len() != dim {
            return usage_err(format!(
                "generator seed has {} coordinates, dim is {dim}",
                seed.len()
            ));
        }
        if tri.len() != dim * (dim + 1) / 2 {
            return usage_err(format!(
                "matrix upper triangle needs {} values for dim {dim}, got {}",
                dim * (dim + 1) / 2,
                tri.len()
            ));
        }
        let mut entries = vec![0.0; dim * dim];
        let mut it = tri.iter();
        for i in 0..dim {
            for j in i..dim {
                let v = *it.next().unwrap();
                entries[i * dim + j] = v;
                entries[j * dim + i] = v;
            }
        }
        let aniso = SpdMatrix::new(dim, &entries).usage()?;
        items.push(Generator::new(&seed, aniso, weight).usage()?);
    }
    if items.is_empty() {
        return usage_err("[generators] section has no generator entries");
    }
    GeneratorSet::new(items).usage()
}

fn poisson_model_from(
    cfg: &Config,
    seed_override: Option<u64>,
) -> CliResult<(PoissonConfig, MarkModel)> {
    let poisson = cfg.require_section("poisson").usage()?;
    let marks = cfg.require_section("marks").usage()?;
    let intensity = poisson.f64("intensity").usage()?;
    let lower = poisson.f64_list("window_lower").usage()?;
    let upper = poisson.f64_list("window_upper").usage()?;
    let window = AxisBox::new(&lower, &upper).usage()?;
    let halo = poisson.f64_or("halo", 0.0).usage()?;
    let seed = seed_override.unwrap_or(poisson.u64_or("seed", 0).usage()?);
    let model = MarkModel::new(
        marks.f64("r_min").usage()?,
        marks.f64("r_max").usage()?,
        marks.f64_or("w_max", 0.0).usage()?,
    )
    .usage()?;
    let pcfg = PoissonConfig::new(intensity, window, halo, seed).usage()?;
    Ok((pcfg, model))
}

// --------------------------------------------------------------- transform

fn cmd_transform(input: &Path, out: &Path, op: &TransformOp) -> CliResult<()> {
    let set = io::read_generator_set(input).usage()?;
    ensure_out_dir(out)?;

    let (result, description) = if let Some(v) = &op.translate {
        let y = parse_floats(v)?;
        (
            transform::translate(&set, &y).domain()?,
            format!("translate {v}"),
        )
    } else if let Some(m) = &op.rotate {
        let u = parse_matrix(m)?;
        (transform::rotate(&set, &u).domain()?, format!("rotate {m}"))
    } else if let Some(a) = op.scale {
        // both generator maps produce the same tessellation; matrix form is
        // the canonical choice here
        (
            transform::scale(&set, a, transform::ScaleMode::MatrixForm).domain()?,
            format!("scale {a} (matrix form)"),
        )
    } else if let Some(m) = &op.distort {
        let a = parse_matrix(m)?;
        (
            transform::distort(&set, &a).domain()?,
            format!("distort {m}"),
        )
    } else if let Some(v) = op.shift_weights {
        (
            transform::shift_weights(&set, v),
            format!("shift-weights {v}"),
        )
    } else if let Some(a) = op.scale_weights {
        (
            transform::scale_weights(&set, a).domain()?,
            format!("scale-weights {a}"),
        )
    } else if op.normalize {
        (
            transform::normalize_nonnegative(&set),
            "normalize-nonnegative".to_string(),
        )
    } else {
        return usage_err("no transform given");
    };

    let path = out.join("transformed.txt");
    io::write_generator_set(
        &path,
        &result,
        &[
            format!("transform: {description}"),
            format!("source: {}", input.display()),
        ],
    )
    .domain()?;
    println!("wrote transformed set to {}", path.display());
    Ok(())
}

// ----------------------------------------------------------------- section

fn cmd_section(input: &Path, flat_arg: &str, rotation: Option<&str>, out: &Path) -> CliResult<()> {
    let set = io::read_generator_set(input).usage()?;
    ensure_out_dir(out)?;

    let mut provenance = vec![format!(
        "sectioned-from: dim={} {}",
        set.dim(),
        input.display()
    )];
    let set = match rotation {
        Some(m) => {
            provenance.push(format!("rotation: {m}"));
            let u = parse_matrix(m)?;
            transform::rotate(&set, &u).domain()?
        }
        None => set,
    };

    let pairs = parse_flat(flat_arg)?;
    provenance.push(format!("flat: {flat_arg}"));
    let flat = FlatSpec::new(&pairs).usage()?;
    let reduced = section_set(&set, &flat).domain()?;

    let path = out.join("section.txt");
    io::write_generator_set(&path, &reduced, &provenance).domain()?;
    println!(
        "wrote {}-dimensional section ({} generators) to {}",
        reduced.dim(),
        reduced.len(),
        path.display()
    );
    Ok(())
}

// ------------------------------------------------------------------ render

fn cmd_render(
    input: &Path,
    grid_arg: &str,
    origin: Option<&str>,
    algorithm: Algorithm,
    t_arg: &str,
    coverage: bool,
    out: &Path,
) -> CliResult<()> {
    let raw_set = io::read_generator_set(input).usage()?;
    let (counts, spacing) = parse_grid(grid_arg)?;
    let origin = match origin {
        Some(o) => {
            let v = parse_floats(o)?;
            if v.len() != counts.len() {
                return usage_err(format!(
                    "origin has {} coordinates, grid has {} axes",
                    v.len(),
                    counts.len()
                ));
            }
            v
        }
        None => vec![0.0; counts.len()],
    };
    let grid = GridSpec::uniform(&origin, spacing, &counts).usage()?;
    ensure_out_dir(out)?;

    // canonical weight normalization; labels are unaffected, and both
    // algorithms then see identical generators
    let set = transform::normalize_nonnegative(&raw_set);

    let (image, stats, used_t): (LabelImage, RenderStats, Option<f64>) = match algorithm {
        Algorithm::Brute => {
            let (image, stats) = render_brute_force(&grid, &set).domain()?;
            (image, stats, None)
        }
        Algorithm::Improved => {
            let t = resolve_threshold(t_arg, &set, &grid)?;
            let (image, stats) = render_improved(&grid, &set, t).domain()?;
            if coverage {
                let (cov, _) = step1_coverage(&grid, &set, t).domain()?;
                let path = out.join("coverage.ppm");
                io::write_coverage_preview(&path, &cov).domain()?;
                println!(
                    "step-1 coverage: {} of {} points ({})",
                    cov.covered,
                    grid.num_points(),
                    path.display()
                );
            }
            (image, stats, Some(t))
        }
    };
    if coverage && matches!(algorithm, Algorithm::Brute) {
        return usage_err("--coverage requires --algorithm improved");
    }

    io::write_label_image(&out.join("image.gbpdimg"), &image).domain()?;
    io::write_ppm_preview(&out.join("preview.ppm"), image.grid(), image.labels()).domain()?;
    io::write_stats_csv(
        &out.join("stats.csv"),
        &[io::StatsRow {
            generators: set.len(),
            points: grid.num_points(),
            threshold: used_t,
            stats,
        }],
    )
    .domain()?;
    println!(
        "rendered {} points x {} generators: step1_evals={} step2_evals={} step2_points={}",
        grid.num_points(),
        set.len(),
        stats.step1_evals,
        stats.step2_evals,
        stats.step2_points
    );
    Ok(())
}

/// `--t auto`: treat the realized generator count as the relevant-generator
/// mean, find the cost-model optimum, and invert the step-1 mean in `t`
/// using the plug-in intensity (count over window volume).
fn resolve_threshold(t_arg: &str, set: &GeneratorSet, grid: &GridSpec) -> CliResult<f64> {
    if t_arg != "auto" {
        return match t_arg.parse::<f64>() {
            Ok(v) if v > 0.0 => Ok(v),
            _ => usage_err(format!(
                "--t must be `auto` or a positive number, got `{t_arg}`"
            )),
        };
    }
    let relevant = set.len() as f64;
    let target = optimal_step1_mean(relevant).domain()?;
    let intensity = relevant / grid.window().volume();
    let t = solve_threshold(target, set, intensity).domain()?;
    println!("auto threshold: step-1 mean {target:.6}, t = {t:.6e}");
    Ok(t)
}

// --------------------------------------------------------------- benchmark

fn cmd_benchmark(config_path: &Path, out: &Path, seed_override: Option<u64>) -> CliResult<()> {
    let text = std::fs::read_to_string(config_path)
        .map_err(Error::from)
        .usage()?;
    let cfg = Config::parse(&text, &config_path.display().to_string()).usage()?;
    ensure_out_dir(out)?;

    let poisson = cfg.require_section("poisson").usage()?;
    let marks_sec = cfg.require_section("marks").usage()?;
    let grid_sec = cfg.require_section("grid").usage()?;
    let bench = cfg.require_section("benchmark").usage()?;

    let intensity = poisson.f64("intensity").usage()?;
    let lower = poisson.f64_list("window_lower").usage()?;
    let upper = poisson.f64_list("window_upper").usage()?;
    let window = AxisBox::new(&lower, &upper).usage()?;
    let seed = seed_override.unwrap_or(poisson.u64_or("seed", 0).usage()?);
    let marks = MarkModel::new(
        marks_sec.f64("r_min").usage()?,
        marks_sec.f64("r_max").usage()?,
        marks_sec.f64_or("w_max", 0.0).usage()?,
    )
    .usage()?;

    let counts = grid_sec.usize_list("counts").usage()?;
    let spacing = grid_sec.f64("spacing").usage()?;
    let origin = match grid_sec.get("origin") {
        Some(_) => grid_sec.f64_list("origin").usage()?,
        None => lower.clone(),
    };
    let grid = GridSpec::uniform(&origin, spacing, &counts).usage()?;

    let reps = bench.usize("reps").usage()?;
    let t_raw = bench.require("t").usage()?;
    let t_entries: Vec<&str> = t_raw.split(',').map(str::trim).collect();
    let numeric_ts: Vec<f64> = t_entries
        .iter()
        .filter_map(|e| e.parse::<f64>().ok())
        .collect();

    // halo: numeric, or "auto" = grain radius at the largest swept t
    let halo = match poisson.get("halo") {
        None => 0.0,
        Some("auto") => {
            let t_max = numeric_ts
                .iter()
                .fold(f64::NAN, |a, &b| if a.is_nan() || b > a { b } else { a });
            if t_max.is_nan() {
                return usage_err(
                    "halo = auto needs at least one numeric t in the sweep to size the grain radius",
                );
            }
            marks.grain_radius(t_max)
        }
        Some(_) => poisson.f64("halo").usage()?,
    };
    let pcfg = PoissonConfig::new(intensity, window, halo, seed).usage()?;

    // resolve the sweep, solving "auto" entries from the cost model on a
    // pilot realization
    let mut thresholds = Vec::with_capacity(t_entries.len());
    for entry in &t_entries {
        if *entry == "auto" {
            let relevant = mean_relevant_generators(intensity, pcfg.window(), halo).domain()?;
            let target = optimal_step1_mean(relevant).domain()?;
            let pilot = sample_generators(&pcfg, &marks).domain()?;
            let t = solve_threshold(target, &pilot, intensity).domain()?;
            println!("auto threshold: step-1 mean {target:.6}, t = {t:.6e}");
            thresholds.push(t);
        } else {
            match entry.parse::<f64>() {
                Ok(v) if v > 0.0 => thresholds.push(v),
                _ => return usage_err(format!("bad t entry `{entry}` in sweep")),
            }
        }
    }

    let mut reports = Vec::with_capacity(thresholds.len());
    let mut table = String::new();
    for &t in &thresholds {
        let report = crate::poisson::verify_complexity(&pcfg, &marks, &grid, t, reps).domain()?;
        table.push_str(&format!("{report}\n\n"));
        reports.push(report);
    }

    io::write_complexity_csv(&out.join("report.csv"), &reports).domain()?;
    std::fs::write(out.join("report.txt"), &table)
        .map_err(Error::from)
        .domain()?;
    print!("{table}");
    println!("wrote report.csv and report.txt to {}", out.display());
    Ok(())
}

// ------------------------------------------------------------ flag parsing

fn parse_floats(arg: &str) -> CliResult<Vec<f64>> {
    arg.split(',')
        .map(|v| v.trim().parse::<f64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| Failure {
            code: 2,
            message: format!("`{arg}` is not a comma-separated list of numbers"),
        })
}

/// Row-major matrix with `;` between rows: "1,0;0,1".
fn parse_matrix(arg: &str) -> CliResult<SquareMatrix> {
    let rows: Vec<Vec<f64>> = arg.split(';').map(parse_floats).collect::<CliResult<_>>()?;
    let dim = rows.len();
    if rows.iter().any(|r| r.len() != dim) {
        return usage_err(format!("matrix `{arg}` is not square"));
    }
    let entries: Vec<f64> = rows.into_iter().flatten().collect();
    SquareMatrix::new(dim, &entries).usage()
}

/// "N1xN2[xN3]@spacing".
fn parse_grid(arg: &str) -> CliResult<(Vec<usize>, f64)> {
    let (counts_part, spacing_part) = arg.split_once('@').ok_or_else(|| Failure {
        code: 2,
        message: format!("grid `{arg}` lacks `@spacing`"),
    })?;
    let counts: Vec<usize> = counts_part
        .split('x')
        .map(|v| v.trim().parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Failure {
            code: 2,
            message: format!("bad grid counts in `{arg}`"),
        })?;
    if counts.is_empty() || counts.len() > 3 {
        return usage_err("grid must have 1 to 3 axes");
    }
    let spacing: f64 = spacing_part.trim().parse().map_err(|_| Failure {
        code: 2,
        message: format!("bad grid spacing in `{arg}`"),
    })?;
    Ok((counts, spacing))
}

/// "k=3,h=0.5;k=1,h=0.2" with 1-based axes; returns sorted 0-based pairs.
fn parse_flat(arg: &str) -> CliResult<Vec<(usize, f64)>> {
    let mut pairs = Vec::new();
    for item in arg.split(';') {
        let mut axis = None;
        let mut value = None;
        for field in item.split(',') {
            let (key, v) = field.trim().split_once('=').ok_or_else(|| Failure {
                code: 2,
                message: format!("flat component `{item}` must look like k=INDEX,h=VALUE"),
            })?;
            match key.trim() {
                "k" => axis = v.trim().parse::<usize>().ok(),
                "h" => value = v.trim().parse::<f64>().ok(),
                other => {
                    return usage_err(format!("unknown flat field `{other}`"));
                }
            }
        }
        match (axis, value) {
            (Some(k), Some(h)) if k >= 1 => pairs.push((k - 1, h)),
            _ => {
                return usage_err(format!(
                    "flat component `{item}` needs a 1-based k and a numeric h"
                ))
            }
        }
    }
    pairs.sort_by_key(|&(k, _)| k);
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_flag_parses() {
        let (counts, spacing) = parse_grid("256x128@0.5").unwrap();
        assert_eq!(counts, vec![256, 128]);
        assert_eq!(spacing, 0.5);
        let (counts, _) = parse_grid("8x8x8@1").unwrap();
        assert_eq!(counts.len(), 3);
        assert!(parse_grid("256x256").is_err());
        assert!(parse_grid("axb@1").is_err());
        assert!(parse_grid("2x2x2x2@1").is_err());
    }

    #[test]
    fn flat_flag_parses_one_based() {
        let pairs = parse_flat("k=3,h=0.5").unwrap();
        assert_eq!(pairs, vec![(2, 0.5)]);
        let pairs = parse_flat("k=3,h=0.5;k=1,h=-1").unwrap();
        assert_eq!(pairs, vec![(0, -1.0), (2, 0.5)]);
        assert!(parse_flat("k=0,h=1").is_err());
        assert!(parse_flat("h=1").is_err());
        assert!(parse_flat("k=1").is_err());
    }

    #[test]
    fn matrix_flag_parses() {
        let m = parse_matrix("0,-1;1,0").unwrap();
        assert_eq!(m.dim(), 2);
        assert_eq!(m.get(0, 1), -1.0);
        assert!(parse_matrix("1,2;3").is_err());
        assert!(parse_matrix("1,x;3,4").is_err());
    }
}
