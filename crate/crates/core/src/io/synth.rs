//! Deterministic synthetic scenes with per-pixel ground truth.
//!
//! A scene is a background plus an ordered list of shapes painted with the
//! painter's algorithm (later shapes win). Pixel values are the fill value
//! plus optional uniform noise in `[-noise, noise]`, rounded and clamped to
//! `0..=255` so the scene is exactly representable as 8-bit bands.
//!
//! Noise is drawn from a ChaCha8 stream seeded by `seed`, background first
//! (row-major, bands innermost), then each shape's covered pixels in the
//! same order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::labels::ClassImage;
use crate::error::{Error, Result};
use crate::raster::Raster;

fn unclassified() -> String {
    crate::classify::UNCLASSIFIED.to_string()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneSpec {
    pub width: usize,
    pub height: usize,
    #[serde(default)]
    pub seed: u64,
    /// Background value per band; its length fixes the band count.
    pub background: Vec<f64>,
    #[serde(default)]
    pub background_noise: f64,
    #[serde(default = "unclassified")]
    pub background_class: String,
    #[serde(default)]
    pub band_names: Vec<String>,
    #[serde(default)]
    pub shapes: Vec<Shape>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Shape {
    #[serde(flatten)]
    pub kind: ShapeKind,
    pub fill: Vec<f64>,
    #[serde(default)]
    pub noise: f64,
    pub class: String,
}

/// Pixel `(x, y)` is covered when its center `(x + 0.5, y + 0.5)` lies
/// inside the primitive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ShapeKind {
    /// Axis-aligned rectangle covering columns `x..x+w` and rows `y..y+h`.
    Rect { x: i64, y: i64, w: i64, h: i64 },
    Disk { cx: f64, cy: f64, r: f64 },
    /// Polyline through `points`, `thickness` pixels wide.
    Ribbon { points: Vec<[f64; 2]>, thickness: f64 },
}

impl ShapeKind {
    fn covers(&self, x: usize, y: usize) -> bool {
        let (px, py) = (x as f64 + 0.5, y as f64 + 0.5);
        match *self {
            ShapeKind::Rect { x: rx, y: ry, w, h } => {
                let (x, y) = (x as i64, y as i64);
                x >= rx && x < rx + w && y >= ry && y < ry + h
            }
            ShapeKind::Disk { cx, cy, r } => (px - cx).powi(2) + (py - cy).powi(2) <= r * r,
            ShapeKind::Ribbon {
                ref points,
                thickness,
            } => {
                let half = thickness / 2.0;
                match points.len() {
                    0 => false,
                    1 => dist_sq(px, py, points[0], points[0]) <= half * half,
                    _ => points
                        .windows(2)
                        .any(|w| dist_sq(px, py, w[0], w[1]) <= half * half),
                }
            }
        }
    }
}

/// Squared distance from `(px, py)` to the segment `a`–`b`.
fn dist_sq(px: f64, py: f64, a: [f64; 2], b: [f64; 2]) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len_sq = dx * dx + dy * dy;
    let t = if len_sq == 0.0 {
        0.0
    } else {
        (((px - a[0]) * dx + (py - a[1]) * dy) / len_sq).clamp(0.0, 1.0)
    };
    let (qx, qy) = (a[0] + t * dx, a[1] + t * dy);
    (px - qx).powi(2) + (py - qy).powi(2)
}

impl SceneSpec {
    pub fn validate(&self) -> Result<()> {
        if self.width == 0 || self.height == 0 {
            return Err(Error::InvalidScene(format!(
                "zero dimension {}x{}",
                self.width, self.height
            )));
        }
        let bands = self.background.len();
        if bands == 0 {
            return Err(Error::InvalidScene("background has no bands".into()));
        }
        if !self.band_names.is_empty() && self.band_names.len() != bands {
            return Err(Error::InvalidScene(format!(
                "{} band names for {bands} bands",
                self.band_names.len()
            )));
        }
        let check_noise = |what: &str, noise: f64| {
            if noise.is_finite() && noise >= 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidScene(format!("{what}: bad noise {noise}")))
            }
        };
        check_noise("background", self.background_noise)?;
        if self.background.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidScene("non-finite background".into()));
        }
        for (i, shape) in self.shapes.iter().enumerate() {
            if shape.fill.len() != bands {
                return Err(Error::InvalidScene(format!(
                    "shape {i}: {} fill values for {bands} bands",
                    shape.fill.len()
                )));
            }
            if shape.fill.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidScene(format!("shape {i}: non-finite fill")));
            }
            check_noise(&format!("shape {i}"), shape.noise)?;
        }
        Ok(())
    }
}

fn sample(rng: &mut ChaCha8Rng, fill: f64, noise: f64) -> f64 {
    let v = if noise > 0.0 {
        fill + rng.random_range(-noise..=noise)
    } else {
        fill
    };
    v.round().clamp(0.0, 255.0)
}

/// Renders `spec` into a raster and its ground-truth class image.
///
/// Class index 0 is the background class; shape classes follow in order of
/// first appearance.
pub fn synth_scene(spec: &SceneSpec) -> Result<(Raster, ClassImage)> {
    spec.validate()?;
    let (w, h) = (spec.width, spec.height);
    let nb = spec.background.len();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let mut classes = vec![spec.background_class.clone()];
    let mut class_of = |name: &str| -> u32 {
        match classes.iter().position(|c| c == name) {
            Some(i) => i as u32,
            None => {
                classes.push(name.to_string());
                (classes.len() - 1) as u32
            }
        }
    };

    let mut bands = vec![vec![0.0; w * h]; nb];
    for i in 0..w * h {
        for (b, plane) in bands.iter_mut().enumerate() {
            plane[i] = sample(&mut rng, spec.background[b], spec.background_noise);
        }
    }
    let mut truth = vec![0u32; w * h];

    for shape in &spec.shapes {
        let class = class_of(&shape.class);
        for y in 0..h {
            for x in 0..w {
                if !shape.kind.covers(x, y) {
                    continue;
                }
                let i = y * w + x;
                for (b, plane) in bands.iter_mut().enumerate() {
                    plane[i] = sample(&mut rng, shape.fill[b], shape.noise);
                }
                truth[i] = class;
            }
        }
    }

    let names = if spec.band_names.is_empty() {
        (0..nb).map(|b| format!("band_{b}")).collect()
    } else {
        spec.band_names.clone()
    };
    let raster = Raster::with_names(w, h, bands, names)?;
    let truth = ClassImage {
        width: w,
        height: h,
        classes,
        pixels: truth,
    };
    Ok((raster, truth))
}

/// A random scene of rectangles, disks and ribbons over a noisy background,
/// used for property tests and benchmarks.
pub fn random_scene_spec(seed: u64, width: usize, height: usize, bands: usize) -> SceneSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_5ce9e);
    let (wf, hf) = (width as f64, height as f64);
    let fill = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        (0..bands).map(|_| f64::from(rng.random_range(0u8..=255))).collect()
    };
    let background = fill(&mut rng);
    let count = rng.random_range(4..16);
    let mut shapes = Vec::with_capacity(count);
    for _ in 0..count {
        let kind = match rng.random_range(0..3) {
            0 => ShapeKind::Rect {
                x: rng.random_range(-4..width as i64),
                y: rng.random_range(-4..height as i64),
                w: rng.random_range(2..=(width as i64 / 3).max(2)),
                h: rng.random_range(2..=(height as i64 / 3).max(2)),
            },
            1 => ShapeKind::Disk {
                cx: rng.random_range(0.0..wf),
                cy: rng.random_range(0.0..hf),
                r: rng.random_range(1.5..(wf.min(hf) / 4.0).max(2.0)),
            },
            _ => ShapeKind::Ribbon {
                points: (0..rng.random_range(2..5))
                    .map(|_| [rng.random_range(0.0..wf), rng.random_range(0.0..hf)])
                    .collect(),
                thickness: rng.random_range(1.0..6.0),
            },
        };
        let class = format!("class_{}", rng.random_range(0..4));
        shapes.push(Shape {
            kind,
            fill: fill(&mut rng),
            noise: [0.0, 2.0, 8.0, 20.0][rng.random_range(0..4)],
            class,
        });
    }
    SceneSpec {
        width,
        height,
        seed,
        background,
        background_noise: [0.0, 3.0, 10.0][rng.random_range(0..3)],
        background_class: unclassified(),
        band_names: Vec::new(),
        shapes,
    }
}
