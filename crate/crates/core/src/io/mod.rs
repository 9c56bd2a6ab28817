//! Raster ingestion, label/class file output, rendering and synthetic scenes.

mod labels;
mod manifest;
mod pnm;
pub mod synth;

pub use labels::{
    read_class_image, read_label_map, write_class_image, write_label_map, ClassImage,
    ClassImageSidecar, LabelSidecar,
};
pub use manifest::{load_manifest, write_manifest, Dtype, Manifest, ManifestBand};
pub use pnm::{encode_ppm, fallback_color, load_pgm, render_ppm, Palette, Rgb};
pub use synth::{random_scene_spec, synth_scene, SceneSpec, Shape, ShapeKind};

use std::path::Path;

use crate::error::Result;
use crate::raster::Raster;

/// Loads a raster from either a JSON manifest or a binary PGM, chosen by
/// file extension (`.pgm` → PGM, anything else → manifest).
pub fn load_raster(path: &Path) -> Result<Raster> {
    match path.extension().and_then(|e| e.to_str()) {
        Some(ext) if ext.eq_ignore_ascii_case("pgm") => load_pgm(path),
        _ => load_manifest(path),
    }
}

pub(crate) fn sidecar_path(path: &Path) -> std::path::PathBuf {
    path.with_extension("json")
}
