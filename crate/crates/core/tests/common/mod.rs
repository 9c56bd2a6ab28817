//! Brute-force oracles shared by the integration tests. Nothing here calls
//! into the code paths it checks.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

use obia::seg::{LabelMap, Segmentation};
use obia::Raster;

/// Population σ from a raw value list, two-pass.
pub fn raw_sigma(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt()
}

pub fn close_rel(a: f64, b: f64, rel: f64) -> bool {
    // absolute floor for σ values that are zero up to rounding
    (a - b).abs() <= rel * a.abs().max(b.abs()) + 1e-9
}

/// Exposed pixel edges per label, image border included.
pub fn brute_perimeters(labels: &LabelMap) -> BTreeMap<u32, usize> {
    let (w, h) = (labels.width() as i64, labels.height() as i64);
    let at = |r: i64, c: i64| -> Option<u32> {
        (r >= 0 && c >= 0 && r < h && c < w).then(|| labels.get(r as usize, c as usize))
    };
    let mut out = BTreeMap::new();
    for r in 0..h {
        for c in 0..w {
            let l = at(r, c).unwrap();
            let exposed = [(-1, 0), (1, 0), (0, -1), (0, 1)]
                .iter()
                .filter(|(dr, dc)| at(r + dr, c + dc) != Some(l))
                .count();
            *out.entry(l).or_insert(0) += exposed;
        }
    }
    out
}

/// Adjacent label pairs `(a < b)` with shared edge counts.
pub fn brute_adjacency(labels: &LabelMap) -> BTreeMap<(u32, u32), usize> {
    let mut out = BTreeMap::new();
    let (w, h) = (labels.width(), labels.height());
    for r in 0..h {
        for c in 0..w {
            let a = labels.get(r, c);
            for (rr, cc) in [(r + 1, c), (r, c + 1)] {
                if rr < h && cc < w {
                    let b = labels.get(rr, cc);
                    if a != b {
                        *out.entry((a.min(b), a.max(b))).or_insert(0) += 1;
                    }
                }
            }
        }
    }
    out
}

/// Number of 4-connected components per label.
pub fn components_per_label(labels: &LabelMap) -> HashMap<u32, usize> {
    let (w, h) = (labels.width(), labels.height());
    let mut seen = vec![false; w * h];
    let mut out = HashMap::new();
    for start in 0..w * h {
        if seen[start] {
            continue;
        }
        let l = labels.labels()[start];
        *out.entry(l).or_insert(0) += 1;
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(p) = stack.pop() {
            let (r, c) = (p / w, p % w);
            let mut next = Vec::with_capacity(4);
            if r > 0 {
                next.push(p - w);
            }
            if r + 1 < h {
                next.push(p + w);
            }
            if c > 0 {
                next.push(p - 1);
            }
            if c + 1 < w {
                next.push(p + 1);
            }
            for q in next {
                if !seen[q] && labels.labels()[q] == l {
                    seen[q] = true;
                    stack.push(q);
                }
            }
        }
    }
    out
}

/// Maximum squared distance over all corners of all pixels `(row, col)`.
pub fn brute_diameter_sq(pixels: &[(usize, usize)]) -> i64 {
    let corners: BTreeSet<(i64, i64)> = pixels
        .iter()
        .flat_map(|&(r, c)| {
            let (x, y) = (c as i64, r as i64);
            [(x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1)]
        })
        .collect();
    let pts: Vec<(i64, i64)> = corners.into_iter().collect();
    let mut best = 0;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let d = (pts[i].0 - pts[j].0).pow(2) + (pts[i].1 - pts[j].1).pow(2);
            best = best.max(d);
        }
    }
    best
}

/// Checks a segmentation against from-scratch recomputation. Returns a
/// description of the first violation.
pub fn check_segmentation(raster: &Raster, seg: &Segmentation) -> Result<(), String> {
    let labels = &seg.labels;
    let k = seg.stats.len();
    if labels.labels().len() != raster.len() {
        return Err("label map does not cover the raster".into());
    }
    if labels.labels().iter().any(|&l| l as usize >= k) {
        return Err("label outside 0..K".into());
    }
    let total: usize = seg.stats.iter().map(|s| s.n).sum();
    if total != raster.len() {
        return Err(format!("segment sizes sum to {total}, not {}", raster.len()));
    }
    for (l, count) in components_per_label(labels) {
        if count != 1 {
            return Err(format!("segment {l} has {count} 4-connected components"));
        }
    }

    let mut pixels: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (i, &l) in labels.labels().iter().enumerate() {
        pixels[l as usize].push(i);
    }
    let perims = brute_perimeters(labels);
    for (id, s) in seg.stats.iter().enumerate() {
        if s.id as usize != id || s.n != pixels[id].len() {
            return Err(format!("segment {id}: id/count mismatch"));
        }
        if s.perimeter != perims[&(id as u32)] {
            return Err(format!(
                "segment {id}: perimeter {} vs brute force {}",
                s.perimeter,
                perims[&(id as u32)]
            ));
        }
        if s.perimeter < 4 || s.perimeter % 2 != 0 {
            return Err(format!("segment {id}: bad perimeter {}", s.perimeter));
        }
        let w = raster.width();
        let rows = pixels[id].iter().map(|p| p / w);
        let cols = pixels[id].iter().map(|p| p % w);
        let bbox = (
            rows.clone().min().unwrap(),
            rows.max().unwrap(),
            cols.clone().min().unwrap(),
            cols.max().unwrap(),
        );
        if bbox != (s.bbox.min_row, s.bbox.max_row, s.bbox.min_col, s.bbox.max_col) {
            return Err(format!("segment {id}: bbox mismatch"));
        }
        for b in 0..raster.band_count() {
            let values: Vec<f64> = pixels[id].iter().map(|&p| raster.value(b, p)).collect();
            let (inc, raw) = (s.sigma(b), raw_sigma(&values));
            if !close_rel(inc, raw, 1e-6) {
                return Err(format!("segment {id} band {b}: σ {inc} vs raw {raw}"));
            }
        }
    }

    let brute = brute_adjacency(labels);
    let graph: BTreeMap<(u32, u32), usize> = seg
        .graph
        .edges()
        .into_iter()
        .map(|(a, b, c)| ((a, b), c))
        .collect();
    if graph != brute {
        return Err(format!(
            "adjacency differs from recomputation ({} vs {} edges)",
            graph.len(),
            brute.len()
        ));
    }
    for id in 0..k as u32 {
        for (n, c) in seg.graph.neighbors(id) {
            if seg.graph.shared_edges(n, id) != Some(c) || n == id {
                return Err(format!("graph not symmetric/irreflexive at {id}-{n}"));
            }
        }
    }
    Ok(())
}

/// 4-connected components of the pixels whose truth class is `class`.
pub fn truth_blobs(truth: &obia::io::ClassImage, class: &str) -> Vec<Vec<usize>> {
    let target = truth.classes.iter().position(|c| c == class).expect("class present") as u32;
    let mask: Vec<u32> = truth
        .pixels
        .iter()
        .enumerate()
        .map(|(i, &p)| if p == target { 0 } else { i as u32 + 1 })
        .collect();
    let lm = LabelMap::new(truth.width, truth.height, mask).unwrap();
    // components of the zero label are the blobs
    let (w, h) = (truth.width, truth.height);
    let mut seen = vec![false; w * h];
    let mut blobs = Vec::new();
    for s in 0..w * h {
        if seen[s] || lm.labels()[s] != 0 {
            continue;
        }
        let mut blob = vec![];
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(p) = stack.pop() {
            blob.push(p);
            let (r, c) = (p / w, p % w);
            for (rr, cc) in [(r.wrapping_sub(1), c), (r + 1, c), (r, c.wrapping_sub(1)), (r, c + 1)] {
                if rr < h && cc < w {
                    let q = rr * w + cc;
                    if !seen[q] && lm.labels()[q] == 0 {
                        seen[q] = true;
                        stack.push(q);
                    }
                }
            }
        }
        blobs.push(blob);
    }
    blobs
}
