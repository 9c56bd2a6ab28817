//! Raw u32 label files and ground-truth class images, each with a JSON sidecar.
//!
//! The payload is row-major `u32` little-endian. The sidecar sits next to the
//! payload with the extension replaced by `.json`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::sidecar_path;
use crate::error::{Error, Result};
use crate::seg::LabelMap;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelSidecar {
    pub width: usize,
    pub height: usize,
    pub segment_count: usize,
}

fn encode_u32(values: &[u32]) -> Vec<u8> {
    values.iter().flat_map(|v| v.to_le_bytes()).collect()
}

fn decode_u32(path: &Path, expected: usize) -> Result<Vec<u32>> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    if bytes.len() != expected * 4 {
        return Err(Error::SizeMismatch {
            path: path.to_path_buf(),
            expected: expected * 4,
            found: bytes.len(),
        });
    }
    Ok(bytes
        .chunks_exact(4)
        .map(|c| u32::from_le_bytes([c[0], c[1], c[2], c[3]]))
        .collect())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::json(path, e))?;
    fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::json(path, e))
}

pub fn write_label_map(labels: &LabelMap, path: &Path) -> Result<LabelSidecar> {
    fs::write(path, encode_u32(labels.labels())).map_err(|e| Error::io(path, e))?;
    let sidecar = LabelSidecar {
        width: labels.width(),
        height: labels.height(),
        segment_count: labels.segment_count(),
    };
    write_json(&sidecar_path(path), &sidecar)?;
    Ok(sidecar)
}

pub fn read_label_map(path: &Path) -> Result<LabelMap> {
    let sidecar: LabelSidecar = read_json(&sidecar_path(path))?;
    let labels = decode_u32(path, sidecar.width * sidecar.height)?;
    let map = LabelMap::new(sidecar.width, sidecar.height, labels)?;
    if map.segment_count() != sidecar.segment_count {
        return Err(Error::format(
            path,
            format!(
                "sidecar declares {} segments, payload has {}",
                sidecar.segment_count,
                map.segment_count()
            ),
        ));
    }
    Ok(map)
}

/// Per-pixel ground-truth classes: `pixels[i]` indexes into `classes`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassImage {
    pub width: usize,
    pub height: usize,
    pub classes: Vec<String>,
    pub pixels: Vec<u32>,
}

impl ClassImage {
    pub fn class_name(&self, pixel: usize) -> &str {
        &self.classes[self.pixels[pixel] as usize]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassImageSidecar {
    pub width: usize,
    pub height: usize,
    pub classes: Vec<String>,
}

pub fn write_class_image(image: &ClassImage, path: &Path) -> Result<()> {
    fs::write(path, encode_u32(&image.pixels)).map_err(|e| Error::io(path, e))?;
    write_json(
        &sidecar_path(path),
        &ClassImageSidecar {
            width: image.width,
            height: image.height,
            classes: image.classes.clone(),
        },
    )
}

pub fn read_class_image(path: &Path) -> Result<ClassImage> {
    let sidecar: ClassImageSidecar = read_json(&sidecar_path(path))?;
    let pixels = decode_u32(path, sidecar.width * sidecar.height)?;
    if let Some(bad) = pixels.iter().find(|&&p| p as usize >= sidecar.classes.len()) {
        return Err(Error::format(path, format!("class index {bad} out of range")));
    }
    Ok(ClassImage {
        width: sidecar.width,
        height: sidecar.height,
        classes: sidecar.classes,
        pixels,
    })
}
