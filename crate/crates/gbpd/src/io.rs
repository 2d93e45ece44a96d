//! File formats: generator-set text files, the GBPDIMG1 label-image
//! container, PPM previews and CSV stats.
//!
//! # Generator-set file
//!
//! Plain text. A header line `GBPDSET dim=<d> count=<n>`, then `#` comment
//! lines (used for provenance), then one record per line:
//!
//! ```text
//! d  s_1 … s_d  m_11 m_12 … m_1d m_22 … m_dd  w
//! ```
//!
//! i.e. the dimension, the seed, the upper triangle of `M` row by row
//! (`d(d+1)/2` values), and the weight, whitespace-separated. Floats are
//! written with 17 significant digits, so a write–read round trip is
//! lossless to the last bit.
//!
//! # Label image (GBPDIMG1)
//!
//! A fixed 64-byte little-endian header followed by row-major `u32` labels
//! (last axis fastest):
//!
//! ```text
//! offset  0: magic "GBPDIMG1" (8 bytes)
//! offset  8: u8 dim (1..=3), 3 reserved bytes
//! offset 12: u32 counts[3]   (axes beyond dim are 0)
//! offset 24: f64 origin[3]   (axes beyond dim are 0)
//! offset 48: f64 spacing     (uniform across axes)
//! offset 56: 8 reserved bytes
//! ```
//!
//! The label `0xFFFF_FFFF` is reserved for "unassigned" and never appears in
//! a fully rendered image. The header stores one spacing value, so only
//! uniform-spacing grids can be serialized; everything the CLI produces is
//! uniform.
//!
//! # Previews
//!
//! Binary PPM (P6), one pixel per grid point for 2-d images; 3-d images get
//! their central slab along the last axis. Labels map through a fixed
//! golden-ratio hue palette, unassigned points are black.

use std::fs;
use std::io::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::{Generator, GeneratorSet, SpdMatrix};
use crate::render::{CoverageImage, GridSpec, LabelImage, RenderStats, NONE_LABEL};

const IMG_MAGIC: &[u8; 8] = b"GBPDIMG1";
const IMG_HEADER_LEN: usize = 64;

/// Serialize one float with 17 significant digits (lossless for f64).
fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Write a generator set; `provenance` lines are embedded as `#` comments.
pub fn write_generator_set(path: &Path, set: &GeneratorSet, provenance: &[String]) -> Result<()> {
    let mut out = String::new();
    out.push_str(&format!("GBPDSET dim={} count={}\n", set.dim(), set.len()));
    for line in provenance {
        out.push_str(&format!("# {line}\n"));
    }
    let d = set.dim();
    for g in set.iter() {
        let mut fields = Vec::with_capacity(1 + d + d * (d + 1) / 2 + 1);
        fields.push(d.to_string());
        for v in g.seed() {
            fields.push(fmt_f64(*v));
        }
        for i in 0..d {
            for j in i..d {
                fields.push(fmt_f64(g.aniso().get(i, j)));
            }
        }
        fields.push(fmt_f64(g.weight()));
        out.push_str(&fields.join(" "));
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        line,
        message: message.into(),
    }
}

/// Read a generator-set file written by [`write_generator_set`].
pub fn read_generator_set(path: &Path) -> Result<GeneratorSet> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();

    let (_, header) = lines
        .next()
        .ok_or_else(|| parse_err(path, 1, "empty file"))?;
    let mut dim = None;
    let mut count = None;
    let mut tokens = header.split_whitespace();
    if tokens.next() != Some("GBPDSET") {
        return Err(parse_err(path, 1, "missing GBPDSET header"));
    }
    for tok in tokens {
        if let Some(v) = tok.strip_prefix("dim=") {
            dim = v.parse::<usize>().ok();
        } else if let Some(v) = tok.strip_prefix("count=") {
            count = v.parse::<usize>().ok();
        }
    }
    let dim = dim.ok_or_else(|| parse_err(path, 1, "header lacks dim="))?;
    let count = count.ok_or_else(|| parse_err(path, 1, "header lacks count="))?;

    let mut items = Vec::with_capacity(count);
    for (lineno, line) in lines {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let expect = 1 + dim + dim * (dim + 1) / 2 + 1;
        if fields.len() != expect {
            return Err(parse_err(
                path,
                lineno + 1,
                format!("expected {expect} fields, got {}", fields.len()),
            ));
        }
        let rec_dim: usize = fields[0]
            .parse()
            .map_err(|_| parse_err(path, lineno + 1, "bad record dimension"))?;
        if rec_dim != dim {
            return Err(parse_err(
                path,
                lineno + 1,
                format!("record dimension {rec_dim} differs from header {dim}"),
            ));
        }
        let mut floats = fields[1..].iter().enumerate().map(|(i, f)| {
            f.parse::<f64>()
                .map_err(|_| parse_err(path, lineno + 1, format!("bad float in field {}", i + 2)))
        });
        let mut next = || floats.next().unwrap();
        let mut seed = vec![0.0; dim];
        for v in seed.iter_mut() {
            *v = next()?;
        }
        let mut entries = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in i..dim {
                let v = next()?;
                entries[i * dim + j] = v;
                entries[j * dim + i] = v;
            }
        }
        let weight = next()?;
        let aniso = SpdMatrix::new(dim, &entries)?;
        items.push(Generator::new(&seed, aniso, weight)?);
    }
    if items.len() != count {
        return Err(parse_err(
            path,
            1,
            format!("header promises {count} records, found {}", items.len()),
        ));
    }
    GeneratorSet::new(items)
}

fn uniform_spacing(grid: &GridSpec) -> Result<f64> {
    let s0 = grid.spacing()[0];
    if grid.spacing().iter().any(|&s| s != s0) {
        return Err(Error::ImageFormat(
            "label-image container requires uniform grid spacing".into(),
        ));
    }
    Ok(s0)
}

fn encode_image(grid: &GridSpec, labels: &[u32]) -> Result<Vec<u8>> {
    if grid.dim() > 3 {
        return Err(Error::ImageFormat(format!(
            "label-image container supports dim 1..=3, got {}",
            grid.dim()
        )));
    }
    let spacing = uniform_spacing(grid)?;
    let mut bytes = Vec::with_capacity(IMG_HEADER_LEN + 4 * labels.len());
    bytes.extend_from_slice(IMG_MAGIC);
    bytes.push(grid.dim() as u8);
    bytes.extend_from_slice(&[0u8; 3]);
    for a in 0..3 {
        let c = if a < grid.dim() {
            grid.counts()[a] as u32
        } else {
            0
        };
        bytes.extend_from_slice(&c.to_le_bytes());
    }
    for a in 0..3 {
        let o = if a < grid.dim() {
            grid.origin()[a]
        } else {
            0.0
        };
        bytes.extend_from_slice(&o.to_le_bytes());
    }
    bytes.extend_from_slice(&spacing.to_le_bytes());
    bytes.extend_from_slice(&[0u8; 8]);
    debug_assert_eq!(bytes.len(), IMG_HEADER_LEN);
    for &l in labels {
        bytes.extend_from_slice(&l.to_le_bytes());
    }
    Ok(bytes)
}

/// Write a rendered image to the GBPDIMG1 container.
pub fn write_label_image(path: &Path, image: &LabelImage) -> Result<()> {
    let bytes = encode_image(image.grid(), image.labels())?;
    fs::write(path, bytes)?;
    Ok(())
}

/// Read a GBPDIMG1 file back as its grid and labels. Distance values are not
/// stored in the container.
pub fn read_label_image(path: &Path) -> Result<(GridSpec, Vec<u32>)> {
    let bytes = fs::read(path)?;
    if bytes.len() < IMG_HEADER_LEN || &bytes[..8] != IMG_MAGIC {
        return Err(Error::ImageFormat("missing GBPDIMG1 magic".into()));
    }
    let dim = bytes[8] as usize;
    if !(1..=3).contains(&dim) {
        return Err(Error::ImageFormat(format!("bad dimension {dim}")));
    }
    let mut counts = [0usize; 3];
    for (a, c) in counts.iter_mut().enumerate() {
        let off = 12 + 4 * a;
        *c = u32::from_le_bytes(bytes[off..off + 4].try_into().unwrap()) as usize;
    }
    let mut origin = [0.0f64; 3];
    for (a, o) in origin.iter_mut().enumerate() {
        let off = 24 + 8 * a;
        *o = f64::from_le_bytes(bytes[off..off + 8].try_into().unwrap());
    }
    let spacing = f64::from_le_bytes(bytes[48..56].try_into().unwrap());
    let grid = GridSpec::uniform(&origin[..dim], spacing, &counts[..dim])?;
    let total = grid.num_points();
    if bytes.len() != IMG_HEADER_LEN + 4 * total {
        return Err(Error::ImageFormat(format!(
            "payload holds {} bytes, grid needs {}",
            bytes.len() - IMG_HEADER_LEN,
            4 * total
        )));
    }
    let labels = bytes[IMG_HEADER_LEN..]
        .chunks_exact(4)
        .map(|c| u32::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok((grid, labels))
}

/// Deterministic palette: label `i` gets hue `(i·0.618034) mod 1`.
pub fn palette_rgb(label: u32) -> [u8; 3] {
    if label == NONE_LABEL {
        return [0, 0, 0];
    }
    let hue = (label as f64 * 0.618034).fract();
    hsv_to_rgb(hue, 0.65, 0.95)
}

fn hsv_to_rgb(h: f64, s: f64, v: f64) -> [u8; 3] {
    let h6 = (h * 6.0).rem_euclid(6.0);
    let i = h6.floor() as usize % 6;
    let f = h6 - h6.floor();
    let p = v * (1.0 - s);
    let q = v * (1.0 - s * f);
    let t = v * (1.0 - s * (1.0 - f));
    let (r, g, b) = match i {
        0 => (v, t, p),
        1 => (q, v, p),
        2 => (p, v, t),
        3 => (p, q, v),
        4 => (t, p, v),
        _ => (v, p, q),
    };
    let to8 = |c: f64| (c * 255.0 + 0.5).floor().clamp(0.0, 255.0) as u8;
    [to8(r), to8(g), to8(b)]
}

/// Write a color preview of a label array.
///
/// 2-d grids map axis 0 to columns and axis 1 to rows. For 3-d grids the
/// central slab along the last axis is shown. 1-d grids become a one-row
/// strip.
pub fn write_ppm_preview(path: &Path, grid: &GridSpec, labels: &[u32]) -> Result<()> {
    type Pick = Box<dyn Fn(usize, usize) -> u32>;
    let (width, height, pick): (usize, usize, Pick) = match grid.dim() {
        1 => {
            let n = grid.counts()[0];
            let labels = labels.to_vec();
            (n, 1, Box::new(move |col, _| labels[col]))
        }
        2 => {
            let (nx, ny) = (grid.counts()[0], grid.counts()[1]);
            let labels = labels.to_vec();
            let stride = grid.counts()[1];
            (nx, ny, Box::new(move |col, row| labels[col * stride + row]))
        }
        3 => {
            let (nx, ny, nz) = (grid.counts()[0], grid.counts()[1], grid.counts()[2]);
            let mid = nz / 2;
            let labels = labels.to_vec();
            (
                nx,
                ny,
                Box::new(move |col, row| labels[(col * ny + row) * nz + mid]),
            )
        }
        d => {
            return Err(Error::ImageFormat(format!(
                "preview supports dim 1..=3, got {d}"
            )))
        }
    };
    let mut bytes = Vec::with_capacity(32 + 3 * width * height);
    bytes.extend_from_slice(format!("P6\n{width} {height}\n255\n").as_bytes());
    for row in 0..height {
        for col in 0..width {
            bytes.extend_from_slice(&palette_rgb(pick(col, row)));
        }
    }
    fs::write(path, bytes)?;
    Ok(())
}

/// Preview of a step-1 coverage image; unreached points render black.
pub fn write_coverage_preview(path: &Path, coverage: &CoverageImage) -> Result<()> {
    write_ppm_preview(path, &coverage.grid, &coverage.labels)
}

/// One row of the render stats CSV.
#[derive(Clone, Copy, Debug)]
pub struct StatsRow {
    /// Generator count.
    pub generators: usize,
    /// Grid point count.
    pub points: usize,
    /// Scan threshold; `None` for the brute-force renderer.
    pub threshold: Option<f64>,
    pub stats: RenderStats,
}

/// Write render stats as CSV with columns
/// `n,N,t,step1_evals,step2_evals,step2_points`.
pub fn write_stats_csv(path: &Path, rows: &[StatsRow]) -> Result<()> {
    let mut out = String::from("n,N,t,step1_evals,step2_evals,step2_points\n");
    for r in rows {
        let t = r.threshold.map(|t| t.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.generators,
            r.points,
            t,
            r.stats.step1_evals,
            r.stats.step2_evals,
            r.stats.step2_points
        ));
    }
    fs::write(path, out)?;
    Ok(())
}

/// Write complexity reports (one per swept threshold) as CSV: a summary row
/// per report, then one row per realization.
pub fn write_complexity_csv(
    path: &Path,
    reports: &[crate::poisson::ComplexityReport],
) -> Result<()> {
    let mut f = fs::File::create(path)?;
    writeln!(
        f,
        "kind,rep,t,generators,predicted_step1,mean_hits,zero_fraction,total_ellipsoid,total_box,step1_evals,step2_evals,step2_points"
    )?;
    for report in reports {
        writeln!(
            f,
            "summary,,{},{},{},{},{},{},{},,,",
            report.threshold,
            report.mean_generators,
            report.predicted_step1,
            report.empirical_step1,
            report.empirical_zero_fraction,
            report.empirical_total_ellipsoid,
            report.empirical_total_box,
        )?;
        for r in &report.per_rep {
            writeln!(
                f,
                "rep,{},{},{},{},{},{},{},{},{},{},{}",
                r.rep,
                report.threshold,
                r.generators,
                r.predicted_step1,
                r.mean_hits,
                r.zero_fraction,
                r.total_ellipsoid,
                r.total_box,
                r.render.step1_evals,
                r.render.step2_evals,
                r.render.step2_points
            )?;
        }
    }
    Ok(())
}
