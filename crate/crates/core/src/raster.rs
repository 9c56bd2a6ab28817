//! In-memory multi-band raster.

use crate::error::{Error, Result};

/// A multi-band grid of real values, one row-major plane per band.
///
/// All values are promoted to `f64` regardless of the on-disk sample type.
#[derive(Debug, Clone, PartialEq)]
pub struct Raster {
    width: usize,
    height: usize,
    bands: Vec<Vec<f64>>,
    band_names: Vec<String>,
}

impl Raster {
    /// Builds a raster, checking that every plane has `width * height`
    /// finite values and that at least one band is present.
    pub fn new(width: usize, height: usize, bands: Vec<Vec<f64>>) -> Result<Self> {
        let names = (0..bands.len()).map(|b| format!("band_{b}")).collect();
        Self::with_names(width, height, bands, names)
    }

    pub fn with_names(
        width: usize,
        height: usize,
        bands: Vec<Vec<f64>>,
        band_names: Vec<String>,
    ) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidRaster(format!(
                "zero dimension {width}x{height}"
            )));
        }
        if bands.is_empty() {
            return Err(Error::InvalidRaster("no bands".into()));
        }
        if band_names.len() != bands.len() {
            return Err(Error::InvalidRaster(format!(
                "{} band names for {} bands",
                band_names.len(),
                bands.len()
            )));
        }
        let len = width
            .checked_mul(height)
            .ok_or_else(|| Error::InvalidRaster("dimensions overflow".into()))?;
        for (b, plane) in bands.iter().enumerate() {
            if plane.len() != len {
                return Err(Error::InvalidRaster(format!(
                    "band {b} has {} values, expected {len}",
                    plane.len()
                )));
            }
            if let Some(index) = plane.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite { band: b, index });
            }
        }
        Ok(Raster {
            width,
            height,
            bands,
            band_names,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.width * self.height
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn band_count(&self) -> usize {
        self.bands.len()
    }

    pub fn band(&self, b: usize) -> &[f64] {
        &self.bands[b]
    }

    pub fn bands(&self) -> &[Vec<f64>] {
        &self.bands
    }

    pub fn band_names(&self) -> &[String] {
        &self.band_names
    }

    /// Value of band `b` at pixel index `i` (row-major).
    #[inline]
    pub fn value(&self, b: usize, i: usize) -> f64 {
        self.bands[b][i]
    }

    /// Largest absolute value over all bands.
    pub fn max_abs(&self) -> f64 {
        self.bands
            .iter()
            .flat_map(|p| p.iter())
            .fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_planes() {
        assert!(Raster::new(2, 2, vec![vec![0.0; 3]]).is_err());
        assert!(Raster::new(2, 2, vec![]).is_err());
        assert!(Raster::new(0, 2, vec![vec![]]).is_err());
        assert!(matches!(
            Raster::new(1, 2, vec![vec![0.0, f64::NAN]]),
            Err(Error::NonFinite { band: 0, index: 1 })
        ));
    }

    #[test]
    fn max_abs_spans_bands() {
        let r = Raster::new(1, 2, vec![vec![1.0, -3.0], vec![2.0, 2.5]]).unwrap();
        assert_eq!(r.max_abs(), 3.0);
    }
}
