//! The `obia` command-line tool.
//!
//! ```text
//! obia synth    [SPEC] [--preset urban] --out DIR [--seed N]
//! obia segment  MANIFEST --out DIR [segmentation flags]
//! obia features MANIFEST --out DIR [segmentation flags]
//! obia classify MANIFEST --rules RULES --out DIR [--truth TRUTH] [segmentation flags]
//! obia sweep    MANIFEST --out DIR [--scales 30,50,70,100] [segmentation flags]
//! ```
//!
//! Exit codes: 0 success, 2 bad arguments or invalid inputs, 3 I/O or
//! format failure, 4 segmentation did not converge.

pub mod presets;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::classify::{accuracy_report, classify, export_classes_csv, parse_rules, AccuracyReport};
use crate::error::Error;
use crate::features::{compute_features, export_features_csv};
use crate::io::{
    load_raster, read_class_image, render_ppm, synth_scene, write_class_image, write_label_map,
    write_manifest, Dtype, Palette, SceneSpec,
};
use crate::par::Execution;
use crate::raster::Raster;
use crate::seg::{segment, segment_with, Segmentation, SegmentationParams};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_NON_CONVERGENCE: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "obia", version, about = "Object-based image analysis: segment, describe and classify multi-band rasters")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct SegArgs {
    /// Scale parameter; a merge is admissible iff its cost < scale².
    #[arg(long, default_value_t = 50.0)]
    pub scale: f64,
    /// Weight of the shape term against the color term.
    #[arg(long, default_value_t = 0.1)]
    pub shape: f64,
    /// Weight of compactness against smoothness inside the shape term.
    #[arg(long, default_value_t = 0.5)]
    pub compactness: f64,
    /// Per-band color weights (default: 1 for every band).
    #[arg(long, value_delimiter = ',')]
    pub band_weights: Option<Vec<f64>>,
    #[arg(long, default_value_t = 10_000)]
    pub max_passes: usize,
}

impl SegArgs {
    fn params(&self, scale: f64) -> SegmentationParams {
        SegmentationParams {
            scale,
            shape_weight: self.shape,
            compactness_weight: self.compactness,
            band_weights: self.band_weights.clone(),
            max_passes: self.max_passes,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Segment a raster and write labels, a rendering and a run summary.
    Segment {
        manifest: PathBuf,
        #[command(flatten)]
        seg: SegArgs,
        #[arg(long)]
        out: PathBuf,
        /// Recorded in the summary; segmentation itself is deterministic.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Segment and export the per-segment features table.
    Features {
        manifest: PathBuf,
        #[command(flatten)]
        seg: SegArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Segment, compute features and classify with a rule file.
    Classify {
        manifest: PathBuf,
        #[command(flatten)]
        seg: SegArgs,
        #[arg(long)]
        rules: Option<PathBuf>,
        /// Ground-truth class image; defaults to `truth.bin` next to the manifest when present.
        #[arg(long)]
        truth: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Segment from scratch at each scale and tabulate the results.
    Sweep {
        manifest: PathBuf,
        #[command(flatten)]
        seg: SegArgs,
        #[arg(long, value_delimiter = ',', default_values_t = [30.0, 50.0, 70.0, 100.0])]
        scales: Vec<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Render a synthetic scene to a manifest, band files and ground truth.
    Synth {
        /// Scene spec (JSON). Mutually exclusive with --preset.
        spec: Option<PathBuf>,
        /// Bundled scene name (`urban`).
        #[arg(long, conflicts_with = "spec")]
        preset: Option<String>,
        #[arg(long)]
        out: PathBuf,
        /// Overrides the spec's seed.
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        let code = match &err {
            Error::InvalidParams(_)
            | Error::InvalidScene(_)
            | Error::InvalidRules(_)
            | Error::UnknownFeature(_)
            | Error::Empty(_) => EXIT_USAGE,
            Error::NonConvergence(_) => EXIT_NON_CONVERGENCE,
            Error::NotAdjacent(..) => 1,
            _ => EXIT_IO,
        };
        CliError {
            code,
            message: err.to_string(),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `args` and runs the command, returning the process exit code.
pub fn main_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

pub fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Segment {
            manifest,
            seg,
            out,
            seed,
        } => cmd_segment(&manifest, &seg, &out, seed).map(|_| ()),
        Command::Features { manifest, seg, out } => cmd_features(&manifest, &seg, &out),
        Command::Classify {
            manifest,
            seg,
            rules,
            truth,
            out,
        } => cmd_classify(&manifest, &seg, rules.as_deref(), truth.as_deref(), &out).map(|_| ()),
        Command::Sweep {
            manifest,
            seg,
            scales,
            out,
        } => cmd_sweep(&manifest, &seg, &scales, &out).map(|_| ()),
        Command::Synth {
            spec,
            preset,
            out,
            seed,
        } => cmd_synth(spec.as_deref(), preset.as_deref(), seed, &out),
    }
}

fn create_out(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e).into())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::json(path, e))?;
    fs::write(path, text + "\n").map_err(|e| Error::io(path, e).into())
}

fn load_and_segment(manifest: &Path, params: &SegmentationParams) -> CliResult<(Raster, Segmentation, SegmentationParams, f64)> {
    let raster = load_raster(manifest)?;
    let resolved = params.resolved(raster.band_count())?;
    let start = Instant::now();
    let seg = segment(&raster, &resolved)?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok((raster, seg, resolved, wall_ms))
}

#[derive(Debug, Serialize)]
pub struct RunSummary {
    pub command: String,
    pub input: String,
    pub params: SegmentationParams,
    pub seed: u64,
    pub width: usize,
    pub height: usize,
    pub bands: usize,
    pub segment_count: usize,
    pub passes: usize,
    pub merges: usize,
    pub wall_ms: f64,
}

/// Writes `labels.bin` (+ `labels.json`), `segments.ppm` and `summary.json`.
pub fn cmd_segment(manifest: &Path, args: &SegArgs, out: &Path, seed: u64) -> CliResult<RunSummary> {
    let (raster, seg, params, wall_ms) = load_and_segment(manifest, &args.params(args.scale))?;
    create_out(out)?;
    write_label_map(&seg.labels, &out.join("labels.bin"))?;
    render_ppm(
        seg.labels.labels(),
        raster.width(),
        raster.height(),
        &Palette::new(),
        &out.join("segments.ppm"),
    )?;
    let summary = RunSummary {
        command: "segment".into(),
        input: manifest.display().to_string(),
        params,
        seed,
        width: raster.width(),
        height: raster.height(),
        bands: raster.band_count(),
        segment_count: seg.segment_count(),
        passes: seg.passes,
        merges: seg.merges,
        wall_ms,
    };
    write_json(&out.join("summary.json"), &summary)?;
    println!(
        "{} segments in {} passes ({:.1} ms)",
        summary.segment_count, summary.passes, summary.wall_ms
    );
    Ok(summary)
}

/// Writes `features.csv`.
pub fn cmd_features(manifest: &Path, args: &SegArgs, out: &Path) -> CliResult<()> {
    let (raster, seg, _, _) = load_and_segment(manifest, &args.params(args.scale))?;
    let features = compute_features(&seg.labels, &seg.stats, &seg.graph, &raster)?;
    create_out(out)?;
    export_features_csv(&features, &out.join("features.csv"))?;
    println!("{} segments", features.len());
    Ok(())
}

/// Writes `features.csv`, `classes.csv`, `classes.ppm` and, when ground truth
/// is available, `report.json`.
pub fn cmd_classify(
    manifest: &Path,
    args: &SegArgs,
    rules: Option<&Path>,
    truth: Option<&Path>,
    out: &Path,
) -> CliResult<Option<AccuracyReport>> {
    let rules_path = rules.ok_or_else(|| CliError::usage("classify requires --rules <path>"))?;
    let text = fs::read_to_string(rules_path).map_err(|e| Error::io(rules_path, e))?;
    let rules = parse_rules(&text)?;

    let (raster, seg, _, _) = load_and_segment(manifest, &args.params(args.scale))?;
    if let Some(b) = rules.iter().filter_map(|r| r.max_band()).max() {
        if b >= raster.band_count() {
            return Err(CliError::usage(format!(
                "rules reference band {b} but the raster has {} bands",
                raster.band_count()
            )));
        }
    }
    let features = compute_features(&seg.labels, &seg.stats, &seg.graph, &raster)?;
    let map = classify(&features, &rules);

    create_out(out)?;
    export_features_csv(&features, &out.join("features.csv"))?;
    export_classes_csv(&map, &out.join("classes.csv"))?;
    render_ppm(
        &map.class_image(&seg.labels)?,
        raster.width(),
        raster.height(),
        &map.palette(),
        &out.join("classes.ppm"),
    )?;

    let default_truth = manifest.parent().map(|d| d.join("truth.bin"));
    let truth_path = match truth {
        Some(p) => Some(p.to_path_buf()),
        None => default_truth.filter(|p| p.exists()),
    };
    let report = match truth_path {
        Some(p) => {
            let truth = read_class_image(&p)?;
            let report = accuracy_report(&map, &truth, &seg.labels)?;
            write_json(&out.join("report.json"), &report)?;
            println!(
                "{} segments classified, accuracy {:.4} against {}",
                report.segments,
                report.accuracy,
                p.display()
            );
            Some(report)
        }
        None => {
            println!("{} segments classified", features.len());
            None
        }
    };
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub scale: f64,
    pub segment_count: usize,
    pub mean_area: f64,
    pub passes: usize,
    pub wall_ms: f64,
}

/// Runs an independent segmentation per scale (concurrently when built with
/// `parallel`) and writes `sweep.csv` in the given scale order.
pub fn cmd_sweep(manifest: &Path, args: &SegArgs, scales: &[f64], out: &Path) -> CliResult<Vec<SweepRow>> {
    if scales.is_empty() {
        return Err(CliError::usage("--scales must list at least one scale"));
    }
    let raster = load_raster(manifest)?;
    let all_params: Vec<SegmentationParams> = scales
        .iter()
        .map(|&s| args.params(s).resolved(raster.band_count()))
        .collect::<Result<_, _>>()?;

    let runs = Execution::default().map(&all_params, |p| {
        let start = Instant::now();
        let seg = segment_with(&raster, p, Execution::Sequential)?;
        Ok::<_, Error>(SweepRow {
            scale: p.scale,
            segment_count: seg.segment_count(),
            mean_area: raster.len() as f64 / seg.segment_count() as f64,
            passes: seg.passes,
            wall_ms: start.elapsed().as_secs_f64() * 1e3,
        })
    });
    let rows = runs.into_iter().collect::<Result<Vec<_>, _>>()?;

    create_out(out)?;
    let path = out.join("sweep.csv");
    let file = fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
    let mut wtr = csv::Writer::from_writer(file);
    let csv_err = |e: csv::Error| CliError::from(Error::Csv(e));
    wtr.write_record(["scale", "segment_count", "mean_area", "passes", "wall_ms"])
        .map_err(csv_err)?;
    for r in &rows {
        wtr.write_record([
            r.scale.to_string(),
            r.segment_count.to_string(),
            format!("{:.6}", r.mean_area),
            r.passes.to_string(),
            format!("{:.3}", r.wall_ms),
        ])
        .map_err(csv_err)?;
        println!("scale {:>6}: {:>6} segments", r.scale, r.segment_count);
    }
    wtr.flush().map_err(|e| Error::io(&path, e))?;
    Ok(rows)
}

/// Writes `manifest.json` + 8-bit band files, `truth.bin` (+ `truth.json`),
/// `truth.ppm` and the effective `scene.json`. Presets also write their
/// shipped `rules.json`.
pub fn cmd_synth(spec: Option<&Path>, preset: Option<&str>, seed: Option<u64>, out: &Path) -> CliResult<()> {
    let (mut scene, rules): (SceneSpec, Option<&str>) = match (spec, preset) {
        (Some(path), None) => {
            let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            let scene = serde_json::from_str(&text)
                .map_err(|e| CliError::usage(format!("{}: invalid scene spec: {e}", path.display())))?;
            (scene, None)
        }
        (None, Some(name)) => {
            let p = presets::preset(name).ok_or_else(|| {
                CliError::usage(format!(
                    "unknown preset {name:?} (available: {})",
                    presets::NAMES.join(", ")
                ))
            })?;
            (p.scene(), Some(p.rules))
        }
        _ => return Err(CliError::usage("synth needs a spec path or --preset")),
    };
    if let Some(seed) = seed {
        scene.seed = seed;
    }
    let (raster, truth) = synth_scene(&scene)?;

    create_out(out)?;
    write_manifest(&raster, out, Dtype::U8)?;
    write_class_image(&truth, &out.join("truth.bin"))?;
    let palette: Palette = truth
        .classes
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let color = if c == crate::classify::UNCLASSIFIED {
                crate::classify::UNCLASSIFIED_COLOR
            } else {
                crate::classify::default_color(c)
            };
            (i as u32, color)
        })
        .collect();
    render_ppm(&truth.pixels, truth.width, truth.height, &palette, &out.join("truth.ppm"))?;
    write_json(&out.join("scene.json"), &scene)?;
    if let Some(rules) = rules {
        let path = out.join("rules.json");
        fs::write(&path, rules).map_err(|e| Error::io(&path, e))?;
    }
    println!(
        "{}x{} scene with {} bands written to {}",
        raster.width(),
        raster.height(),
        raster.band_count(),
        out.display()
    );
    Ok(())
}
