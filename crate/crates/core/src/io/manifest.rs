//! JSON manifest + raw band-sequential files.
//!
//! ```json
//! {"width": 2, "height": 2, "dtype": "u8", "byte_order": "little",
//!  "bands": [{"name": "red", "path": "red.raw"}]}
//! ```
//!
//! Band paths are resolved relative to the manifest's directory. Each band
//! file holds `width * height` little-endian samples in row-major order.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raster::Raster;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dtype {
    U8,
    U16,
    F32,
}

impl Dtype {
    pub fn size(self) -> usize {
        match self {
            Dtype::U8 => 1,
            Dtype::U16 => 2,
            Dtype::F32 => 4,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Dtype::U8 => "u8",
            Dtype::U16 => "u16",
            Dtype::F32 => "f32",
        }
    }

    fn decode(self, bytes: &[u8]) -> Vec<f64> {
        match self {
            Dtype::U8 => bytes.iter().map(|&b| f64::from(b)).collect(),
            Dtype::U16 => bytes
                .chunks_exact(2)
                .map(|c| f64::from(u16::from_le_bytes([c[0], c[1]])))
                .collect(),
            Dtype::F32 => bytes
                .chunks_exact(4)
                .map(|c| f64::from(f32::from_le_bytes([c[0], c[1], c[2], c[3]])))
                .collect(),
        }
    }

    fn encode(self, values: &[f64], band: usize) -> Result<Vec<u8>> {
        let mut out = Vec::with_capacity(values.len() * self.size());
        for (i, &v) in values.iter().enumerate() {
            let unrepresentable = || {
                Error::InvalidRaster(format!(
                    "band {band} pixel {i}: {v} is not representable as {}",
                    self.as_str()
                ))
            };
            match self {
                Dtype::U8 => {
                    if v.fract() != 0.0 || !(0.0..=255.0).contains(&v) {
                        return Err(unrepresentable());
                    }
                    out.push(v as u8);
                }
                Dtype::U16 => {
                    if v.fract() != 0.0 || !(0.0..=65535.0).contains(&v) {
                        return Err(unrepresentable());
                    }
                    out.extend_from_slice(&(v as u16).to_le_bytes());
                }
                Dtype::F32 => {
                    let f = v as f32;
                    if f64::from(f) != v {
                        return Err(unrepresentable());
                    }
                    out.extend_from_slice(&f.to_le_bytes());
                }
            }
        }
        Ok(out)
    }
}

impl FromStr for Dtype {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "u8" => Ok(Dtype::U8),
            "u16" => Ok(Dtype::U16),
            "f32" => Ok(Dtype::F32),
            other => Err(Error::UnknownDtype(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestBand {
    pub name: String,
    pub path: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub width: usize,
    pub height: usize,
    pub dtype: String,
    #[serde(default = "little")]
    pub byte_order: String,
    pub bands: Vec<ManifestBand>,
}

fn little() -> String {
    "little".to_string()
}

pub fn load_manifest(path: &Path) -> Result<Raster> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let manifest: Manifest = serde_json::from_str(&text).map_err(|e| Error::json(path, e))?;
    let dtype: Dtype = manifest.dtype.parse()?;
    if manifest.byte_order != "little" {
        return Err(Error::UnsupportedByteOrder(manifest.byte_order));
    }
    if manifest.bands.is_empty() {
        return Err(Error::format(path, "manifest lists no bands"));
    }
    let pixels = manifest
        .width
        .checked_mul(manifest.height)
        .filter(|&n| n > 0)
        .ok_or_else(|| {
            Error::format(
                path,
                format!("bad dimensions {}x{}", manifest.width, manifest.height),
            )
        })?;
    let base = path.parent().unwrap_or_else(|| Path::new(""));

    let mut bands = Vec::with_capacity(manifest.bands.len());
    let mut names = Vec::with_capacity(manifest.bands.len());
    for band in &manifest.bands {
        let band_path: PathBuf = base.join(&band.path);
        let bytes = fs::read(&band_path).map_err(|e| Error::io(&band_path, e))?;
        let expected = pixels * dtype.size();
        if bytes.len() != expected {
            return Err(Error::SizeMismatch {
                path: band_path,
                expected,
                found: bytes.len(),
            });
        }
        bands.push(dtype.decode(&bytes));
        names.push(band.name.clone());
    }
    Raster::with_names(manifest.width, manifest.height, bands, names)
}

/// Writes `raster` as `<dir>/manifest.json` plus one `<dir>/band_<i>.raw`
/// per band, returning the manifest path. Integer dtypes require integral
/// in-range values; `f32` requires values exactly representable in `f32`.
pub fn write_manifest(raster: &Raster, dir: &Path, dtype: Dtype) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut entries = Vec::with_capacity(raster.band_count());
    for (b, plane) in raster.bands().iter().enumerate() {
        let file = format!("band_{b}.raw");
        let bytes = dtype.encode(plane, b)?;
        let band_path = dir.join(&file);
        fs::write(&band_path, bytes).map_err(|e| Error::io(&band_path, e))?;
        entries.push(ManifestBand {
            name: raster.band_names()[b].clone(),
            path: file,
        });
    }
    let manifest = Manifest {
        width: raster.width(),
        height: raster.height(),
        dtype: dtype.as_str().to_string(),
        byte_order: little(),
        bands: entries,
    };
    let path = dir.join("manifest.json");
    let text = serde_json::to_string_pretty(&manifest).map_err(|e| Error::json(&path, e))?;
    fs::write(&path, text + "\n").map_err(|e| Error::io(&path, e))?;
    Ok(path)
}
