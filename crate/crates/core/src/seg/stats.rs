//! Incremental segment statistics and the heterogeneity terms of the fusion cost.

use serde::Serialize;

/// Inclusive pixel bounding box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BBox {
    pub min_row: usize,
    pub max_row: usize,
    pub min_col: usize,
    pub max_col: usize,
}

impl BBox {
    pub fn pixel(row: usize, col: usize) -> Self {
        BBox {
            min_row: row,
            max_row: row,
            min_col: col,
            max_col: col,
        }
    }

    pub fn width(&self) -> usize {
        self.max_col - self.min_col + 1
    }

    pub fn height(&self) -> usize {
        self.max_row - self.min_row + 1
    }

    /// Perimeter of the box in pixel edge units.
    pub fn perimeter(&self) -> usize {
        2 * (self.width() + self.height())
    }

    pub fn union(&self, other: &BBox) -> BBox {
        BBox {
            min_row: self.min_row.min(other.min_row),
            max_row: self.max_row.max(other.max_row),
            min_col: self.min_col.min(other.min_col),
            max_col: self.max_col.max(other.max_col),
        }
    }

    pub fn contains(&self, row: usize, col: usize) -> bool {
        (self.min_row..=self.max_row).contains(&row) && (self.min_col..=self.max_col).contains(&col)
    }
}

/// Running statistics of one segment.
///
/// `perimeter` counts exposed pixel edges, image-border edges included.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentStats {
    pub id: u32,
    pub n: usize,
    pub sum: Vec<f64>,
    pub ssq: Vec<f64>,
    pub perimeter: usize,
    pub bbox: BBox,
}

impl SegmentStats {
    /// Statistics of a single pixel.
    pub fn pixel(id: u32, row: usize, col: usize, values: impl IntoIterator<Item = f64>) -> Self {
        let (sum, ssq): (Vec<f64>, Vec<f64>) = values.into_iter().map(|v| (v, v * v)).unzip();
        SegmentStats {
            id,
            n: 1,
            sum,
            ssq,
            perimeter: 4,
            bbox: BBox::pixel(row, col),
        }
    }

    pub fn band_count(&self) -> usize {
        self.sum.len()
    }

    pub fn mean(&self, band: usize) -> f64 {
        self.sum[band] / self.n as f64
    }

    pub fn sigma(&self, band: usize) -> f64 {
        sigma_from(self.n as f64, self.sum[band], self.ssq[band])
    }

    /// Combines two adjacent segments sharing `shared_edges` pixel edges.
    /// The result keeps the smaller id.
    pub fn merged(&self, other: &SegmentStats, shared_edges: usize) -> SegmentStats {
        SegmentStats {
            id: self.id.min(other.id),
            n: self.n + other.n,
            sum: self.sum.iter().zip(&other.sum).map(|(a, b)| a + b).collect(),
            ssq: self.ssq.iter().zip(&other.ssq).map(|(a, b)| a + b).collect(),
            perimeter: merged_perimeter(self.perimeter, other.perimeter, shared_edges),
            bbox: self.bbox.union(&other.bbox),
        }
    }

    /// Compactness term `sqrt(n) * l`.
    fn compactness_term(n: usize, perimeter: usize) -> f64 {
        (n as f64).sqrt() * perimeter as f64
    }

    /// Smoothness term `n * l / bbox_perimeter`.
    fn smoothness_term(n: usize, perimeter: usize, bbox: &BBox) -> f64 {
        n as f64 * perimeter as f64 / bbox.perimeter() as f64
    }
}

#[inline]
fn sigma_from(n: f64, sum: f64, ssq: f64) -> f64 {
    let mean = sum / n;
    (ssq / n - mean * mean).max(0.0).sqrt()
}

/// Population standard deviation of `band`, with a negative radicand from
/// rounding clamped to zero.
pub fn sigma(stats: &SegmentStats, band: usize) -> f64 {
    stats.sigma(band)
}

/// Perimeter of the union of two segments sharing `shared_edges` edges.
pub fn merged_perimeter(l_a: usize, l_b: usize, shared_edges: usize) -> usize {
    l_a + l_b - 2 * shared_edges
}

/// Weighted increase of size-weighted standard deviation caused by merging.
///
/// Bands beyond the end of `band_weights` get weight 1.
pub fn delta_color(a: &SegmentStats, b: &SegmentStats, band_weights: &[f64]) -> f64 {
    let (na, nb) = (a.n as f64, b.n as f64);
    let nm = na + nb;
    let mut total = 0.0;
    for band in 0..a.sum.len() {
        let w = band_weights.get(band).copied().unwrap_or(1.0);
        if w == 0.0 {
            continue;
        }
        let merged = sigma_from(nm, a.sum[band] + b.sum[band], a.ssq[band] + b.ssq[band]);
        let parts = na * a.sigma(band) + nb * b.sigma(band);
        total += w * (nm * merged - parts);
    }
    total
}

/// Shape heterogeneity increase: `w_c * Δcompactness + (1 - w_c) * Δsmoothness`.
/// May be negative.
pub fn delta_shape(
    a: &SegmentStats,
    b: &SegmentStats,
    merged_perimeter: usize,
    merged_bbox: &BBox,
    compactness_weight: f64,
) -> f64 {
    let n = a.n + b.n;
    let cmpct = SegmentStats::compactness_term(n, merged_perimeter)
        - (SegmentStats::compactness_term(a.n, a.perimeter)
            + SegmentStats::compactness_term(b.n, b.perimeter));
    let smooth = SegmentStats::smoothness_term(n, merged_perimeter, merged_bbox)
        - (SegmentStats::smoothness_term(a.n, a.perimeter, &a.bbox)
            + SegmentStats::smoothness_term(b.n, b.perimeter, &b.bbox));
    compactness_weight * cmpct + (1.0 - compactness_weight) * smooth
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Population σ straight from a value list.
    fn raw_sigma(values: &[f64]) -> f64 {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt()
    }

    fn from_values(id: u32, values: &[f64]) -> SegmentStats {
        let mut s = SegmentStats::pixel(id, 0, 0, [values[0]]);
        for (i, &v) in values.iter().enumerate().skip(1) {
            s = s.merged(&SegmentStats::pixel(id + i as u32, 0, i, [v]), 1);
        }
        s
    }

    #[test]
    fn sigma_constant_is_zero() {
        assert_eq!(sigma(&from_values(0, &[5.0, 5.0, 5.0]), 0), 0.0);
    }

    #[test]
    fn sigma_of_zero_two() {
        assert_eq!(raw_sigma(&[0.0, 2.0]), 1.0);
        assert_eq!(sigma(&from_values(0, &[0.0, 2.0]), 0), 1.0);
    }

    #[test]
    fn sigma_clamps_negative_radicand() {
        // ssq/n - mean^2 = 0.01 - 0.010000000000000002 < 0
        assert!(std::hint::black_box(0.01) - 0.1f64 * 0.1 < 0.0);
        let s = SegmentStats {
            id: 0,
            n: 1,
            sum: vec![0.1],
            ssq: vec![0.01],
            perimeter: 4,
            bbox: BBox::pixel(0, 0),
        };
        assert_eq!(sigma(&s, 0), 0.0);
    }

    #[test]
    fn delta_color_examples() {
        let a = from_values(0, &[7.0, 7.0]);
        let b = from_values(5, &[7.0]);
        assert_eq!(delta_color(&a, &b, &[1.0]), 0.0);

        let zero = SegmentStats::pixel(0, 0, 0, [0.0]);
        let two = SegmentStats::pixel(1, 0, 1, [2.0]);
        // oracle: n_m * σ([0, 2]) - (1*σ([0]) + 1*σ([2]))
        let expected = 2.0 * raw_sigma(&[0.0, 2.0]) - (raw_sigma(&[0.0]) + raw_sigma(&[2.0]));
        assert_eq!(expected, 2.0);
        assert_eq!(delta_color(&zero, &two, &[1.0]), expected);
        assert_eq!(delta_color(&zero, &two, &[0.0]), 0.0);
    }

    #[test]
    fn delta_color_is_symmetric_bitwise() {
        let a = from_values(0, &[1.0, 9.0, 3.5]);
        let b = from_values(10, &[100.0, 4.25]);
        assert_eq!(
            delta_color(&a, &b, &[0.7]).to_bits(),
            delta_color(&b, &a, &[0.7]).to_bits()
        );
    }

    #[test]
    fn merged_perimeter_examples() {
        assert_eq!(merged_perimeter(4, 4, 1), 6);
        assert_eq!(merged_perimeter(6, 6, 2), 8);
    }

    #[test]
    fn delta_shape_two_pixels() {
        let a = SegmentStats::pixel(0, 0, 0, [0.0]);
        let b = SegmentStats::pixel(1, 0, 1, [0.0]);
        let bbox = a.bbox.union(&b.bbox);
        assert_eq!(bbox.perimeter(), 6);
        let cmpct = 2f64.sqrt() * 6.0 - 8.0;
        assert!((cmpct - 0.4853).abs() < 1e-4);
        let smooth = 2.0 * 6.0 / 6.0 - 2.0;
        assert_eq!(smooth, 0.0);
        let d = delta_shape(&a, &b, 6, &bbox, 0.5);
        assert!((d - 0.2426).abs() < 1e-4, "{d}");
        assert_eq!(delta_shape(&a, &b, 6, &bbox, 1.0), cmpct);
    }

    #[test]
    fn delta_shape_dominoes_to_square() {
        // rows 0 and 1 of a 2x2 square, each a horizontal domino
        let top = SegmentStats::pixel(0, 0, 0, [0.0]).merged(&SegmentStats::pixel(1, 0, 1, [0.0]), 1);
        let bottom =
            SegmentStats::pixel(2, 1, 0, [0.0]).merged(&SegmentStats::pixel(3, 1, 1, [0.0]), 1);
        assert_eq!(top.perimeter, 6);
        let l = merged_perimeter(6, 6, 2);
        let bbox = top.bbox.union(&bottom.bbox);
        let cmpct = delta_shape(&top, &bottom, l, &bbox, 1.0);
        let expected = 2.0 * 8.0 - 2.0 * (2f64.sqrt() * 6.0);
        assert!((cmpct - expected).abs() < 1e-12);
        assert!((cmpct + 0.9706).abs() < 1e-4);
        assert!(delta_shape(&top, &bottom, l, &bbox, 0.0).abs() < 1e-12);
    }
}
