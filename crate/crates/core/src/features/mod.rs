//! Per-segment features: size, geometry, shape index, brightness and band
//! statistics.
//!
//! Lengths are in pixels. The longest axis is measured between pixel
//! *corners*, so a single pixel has `L = √2` and every square has shape index
//! `1.27 * s² / 2s² = 0.635`. The shape index `1.27 * A / L²` is close to 1
//! for a disk (`1.27 * π / 4 ≈ 0.9975`) and drops as shapes elongate.

pub mod geometry;

use std::collections::HashSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::par::Execution;
use crate::raster::Raster;
use crate::seg::{AdjacencyGraph, LabelMap, SegmentStats};
use geometry::Point;

const SHAPE_INDEX_FACTOR: f64 = 1.27;

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub id: u32,
    pub area: usize,
    pub perimeter: usize,
    pub longest_axis: f64,
    pub shape_index: f64,
    pub brightness: f64,
    pub band_means: Vec<f64>,
    pub band_stds: Vec<f64>,
    pub bbox_w: usize,
    pub bbox_h: usize,
    pub neighbor_count: usize,
}

/// Feature names usable in classification rules; they match the CSV header.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Feature {
    Area,
    Perimeter,
    LongestAxis,
    ShapeIndex,
    Brightness,
    BboxW,
    BboxH,
    Neighbors,
    Mean(usize),
    Std(usize),
}

impl FromStr for Feature {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let band = |prefix: &str| -> Option<usize> {
            let digits = s.strip_prefix(prefix)?;
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            digits.parse().ok()
        };
        Ok(match s {
            "area" => Feature::Area,
            "perimeter" => Feature::Perimeter,
            "longest_axis" => Feature::LongestAxis,
            "shape_index" => Feature::ShapeIndex,
            "brightness" => Feature::Brightness,
            "bbox_w" => Feature::BboxW,
            "bbox_h" => Feature::BboxH,
            "neighbors" => Feature::Neighbors,
            _ => {
                if let Some(b) = band("mean_b") {
                    Feature::Mean(b)
                } else if let Some(b) = band("std_b") {
                    Feature::Std(b)
                } else {
                    return Err(Error::UnknownFeature(s.to_string()));
                }
            }
        })
    }
}

impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Feature::Area => f.write_str("area"),
            Feature::Perimeter => f.write_str("perimeter"),
            Feature::LongestAxis => f.write_str("longest_axis"),
            Feature::ShapeIndex => f.write_str("shape_index"),
            Feature::Brightness => f.write_str("brightness"),
            Feature::BboxW => f.write_str("bbox_w"),
            Feature::BboxH => f.write_str("bbox_h"),
            Feature::Neighbors => f.write_str("neighbors"),
            Feature::Mean(b) => write!(f, "mean_b{b}"),
            Feature::Std(b) => write!(f, "std_b{b}"),
        }
    }
}

impl FeatureVector {
    /// Value of `feature`, or `None` for a band this vector does not have.
    pub fn get(&self, feature: Feature) -> Option<f64> {
        Some(match feature {
            Feature::Area => self.area as f64,
            Feature::Perimeter => self.perimeter as f64,
            Feature::LongestAxis => self.longest_axis,
            Feature::ShapeIndex => self.shape_index,
            Feature::Brightness => self.brightness,
            Feature::BboxW => self.bbox_w as f64,
            Feature::BboxH => self.bbox_h as f64,
            Feature::Neighbors => self.neighbor_count as f64,
            Feature::Mean(b) => *self.band_means.get(b)?,
            Feature::Std(b) => *self.band_stds.get(b)?,
        })
    }
}

fn pixel_corners(row: usize, col: usize) -> [Point; 4] {
    let (x, y) = (col as i64, row as i64);
    [(x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1)]
}

/// Longest axis of a pixel set given as `(row, col)` pairs: the diameter of
/// the convex hull of the corners of its boundary pixels.
pub fn longest_axis(pixels: &[(usize, usize)]) -> f64 {
    let members: HashSet<(usize, usize)> = pixels.iter().copied().collect();
    let inside = |r: Option<usize>, c: Option<usize>| match (r, c) {
        (Some(r), Some(c)) => members.contains(&(r, c)),
        _ => false,
    };
    let corners: Vec<Point> = members
        .iter()
        .filter(|&&(r, c)| {
            !(inside(r.checked_sub(1), Some(c))
                && inside(Some(r + 1), Some(c))
                && inside(Some(r), c.checked_sub(1))
                && inside(Some(r), Some(c + 1)))
        })
        .flat_map(|&(r, c)| pixel_corners(r, c))
        .collect();
    (geometry::diameter_sq(&corners) as f64).sqrt()
}

/// `1.27 * area / longest_axis²`.
pub fn shape_index(area: f64, longest_axis: f64) -> Result<f64> {
    if !(area > 0.0 && longest_axis > 0.0) {
        return Err(Error::InvalidParams(format!(
            "shape index needs positive area and axis, got {area} and {longest_axis}"
        )));
    }
    Ok(SHAPE_INDEX_FACTOR * area / (longest_axis * longest_axis))
}

/// Mean of the per-band means.
pub fn brightness(stats: &SegmentStats) -> f64 {
    let k = stats.band_count();
    (0..k).map(|b| stats.mean(b)).sum::<f64>() / k as f64
}

pub fn compute_features(
    labels: &LabelMap,
    stats: &[SegmentStats],
    graph: &AdjacencyGraph,
    raster: &Raster,
) -> Result<Vec<FeatureVector>> {
    compute_features_with(labels, stats, graph, raster, Execution::default())
}

/// Computes one [`FeatureVector`] per segment, ordered by id.
///
/// Fails when labels, stats, graph and raster disagree (dimensions, segment
/// count, ids or pixel counts).
pub fn compute_features_with(
    labels: &LabelMap,
    stats: &[SegmentStats],
    graph: &AdjacencyGraph,
    raster: &Raster,
    exec: Execution,
) -> Result<Vec<FeatureVector>> {
    let (w, h) = (labels.width(), labels.height());
    if (w, h) != (raster.width(), raster.height()) {
        return Err(Error::Inconsistent(format!(
            "label map is {w}x{h}, raster is {}x{}",
            raster.width(),
            raster.height()
        )));
    }
    if !labels.is_compact() {
        return Err(Error::Inconsistent("label ids are not compact".into()));
    }
    let k = labels.segment_count();
    if stats.len() != k || graph.node_count() != k {
        return Err(Error::Inconsistent(format!(
            "{k} segments in labels, {} stats records, {} graph nodes",
            stats.len(),
            graph.node_count()
        )));
    }

    let mut counts = vec![0usize; k];
    let mut corners: Vec<Vec<Point>> = vec![Vec::new(); k];
    for r in 0..h {
        for c in 0..w {
            let l = labels.get(r, c);
            counts[l as usize] += 1;
            let boundary = r == 0
                || c == 0
                || r + 1 == h
                || c + 1 == w
                || labels.get(r - 1, c) != l
                || labels.get(r + 1, c) != l
                || labels.get(r, c - 1) != l
                || labels.get(r, c + 1) != l;
            if boundary {
                corners[l as usize].extend(pixel_corners(r, c));
            }
        }
    }
    for (i, s) in stats.iter().enumerate() {
        if s.id as usize != i || s.n != counts[i] || s.band_count() != raster.band_count() {
            return Err(Error::Inconsistent(format!(
                "segment {i}: stats id {} with {} pixels and {} bands, label map has {} pixels",
                s.id,
                s.n,
                s.band_count(),
                counts[i]
            )));
        }
    }

    let ids: Vec<usize> = (0..k).collect();
    Ok(exec.map(&ids, |&i| {
        let s = &stats[i];
        let longest_axis = (geometry::diameter_sq(&corners[i]) as f64).sqrt();
        let band_means: Vec<f64> = (0..s.band_count()).map(|b| s.mean(b)).collect();
        FeatureVector {
            id: s.id,
            area: s.n,
            perimeter: s.perimeter,
            longest_axis,
            shape_index: SHAPE_INDEX_FACTOR * s.n as f64 / (longest_axis * longest_axis),
            brightness: brightness(s),
            band_stds: (0..s.band_count()).map(|b| s.sigma(b)).collect(),
            band_means,
            bbox_w: s.bbox.width(),
            bbox_h: s.bbox.height(),
            neighbor_count: graph.degree(s.id),
        }
    }))
}

/// Writes the features table, rows sorted by id, reals with 6 decimals.
pub fn export_features_csv(vectors: &[FeatureVector], path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_features_csv(vectors, file)
}

pub fn write_features_csv<W: std::io::Write>(vectors: &[FeatureVector], out: W) -> Result<()> {
    let first = vectors
        .first()
        .ok_or_else(|| Error::Empty("no feature vectors".into()))?;
    let bands = first.band_means.len();
    let mut header: Vec<String> = [
        "id",
        "area",
        "perimeter",
        "longest_axis",
        "shape_index",
        "brightness",
        "bbox_w",
        "bbox_h",
        "neighbors",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    header.extend((0..bands).map(|b| format!("mean_b{b}")));
    header.extend((0..bands).map(|b| format!("std_b{b}")));

    let mut sorted: Vec<&FeatureVector> = vectors.iter().collect();
    sorted.sort_by_key(|v| v.id);

    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(&header)?;
    for v in sorted {
        if v.band_means.len() != bands {
            return Err(Error::Inconsistent(format!(
                "segment {} has {} bands, expected {bands}",
                v.id,
                v.band_means.len()
            )));
        }
        let mut row = vec![
            v.id.to_string(),
            v.area.to_string(),
            v.perimeter.to_string(),
            format!("{:.6}", v.longest_axis),
            format!("{:.6}", v.shape_index),
            format!("{:.6}", v.brightness),
            v.bbox_w.to_string(),
            v.bbox_h.to_string(),
            v.neighbor_count.to_string(),
        ];
        row.extend(v.band_means.iter().map(|m| format!("{m:.6}")));
        row.extend(v.band_stds.iter().map(|s| format!("{s:.6}")));
        wtr.write_record(&row)?;
    }
    wtr.flush().map_err(csv::Error::from)?;
    Ok(())
}
