//! Multiresolution region-merge segmentation.
//!
//! Segmentation starts with one segment per pixel and repeatedly merges
//! 4-adjacent segment pairs. The fusion cost of a pair is
//!
//! ```text
//! cost = (1 - w_s) * Δcolor + w_s * Δshape
//! ```
//!
//! where Δcolor is the weighted increase of `n * σ` summed over bands and
//! Δshape mixes the increase of the compactness term `sqrt(n) * l` and the
//! smoothness term `n * l / bbox_perimeter` by the compactness weight. A merge
//! is admissible iff `cost < scale²`.
//!
//! Passes visit live segments in ascending id order. Segment `A` merges with
//! its cheapest neighbor `B` only if `A` is also `B`'s cheapest neighbor
//! (local mutual best fitting) and the pair is admissible. The merged segment
//! keeps the smaller id. Ties go to the smallest neighbor id. Iteration stops
//! after a pass without merges.

mod graph;
mod labels;
mod stats;

pub use graph::AdjacencyGraph;
pub use labels::{compact_labels, LabelMap};
pub use stats::{delta_color, delta_shape, merged_perimeter, sigma, BBox, SegmentStats};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::par::Execution;
use crate::raster::Raster;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SegmentationParams {
    pub scale: f64,
    pub shape_weight: f64,
    pub compactness_weight: f64,
    /// Per-band weights of the color term; `None` weights every band 1.
    pub band_weights: Option<Vec<f64>>,
    pub max_passes: usize,
}

impl Default for SegmentationParams {
    fn default() -> Self {
        SegmentationParams {
            scale: 50.0,
            shape_weight: 0.1,
            compactness_weight: 0.5,
            band_weights: None,
            max_passes: 10_000,
        }
    }
}

impl SegmentationParams {
    pub fn new(scale: f64, shape_weight: f64) -> Self {
        SegmentationParams {
            scale,
            shape_weight,
            ..Default::default()
        }
    }

    pub fn with_compactness(mut self, compactness_weight: f64) -> Self {
        self.compactness_weight = compactness_weight;
        self
    }

    pub fn with_band_weights(mut self, weights: Vec<f64>) -> Self {
        self.band_weights = Some(weights);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let unit = 0.0..=1.0;
        if !(self.scale.is_finite() && self.scale > 0.0) {
            return Err(Error::InvalidParams(format!(
                "scale must be positive, got {}",
                self.scale
            )));
        }
        if !unit.contains(&self.shape_weight) {
            return Err(Error::InvalidParams(format!(
                "shape weight must lie in [0, 1], got {}",
                self.shape_weight
            )));
        }
        if !unit.contains(&self.compactness_weight) {
            return Err(Error::InvalidParams(format!(
                "compactness weight must lie in [0, 1], got {}",
                self.compactness_weight
            )));
        }
        if let Some(w) = &self.band_weights {
            if w.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
                return Err(Error::InvalidParams(format!(
                    "band weights must be non-negative, got {w:?}"
                )));
            }
            if w.iter().sum::<f64>() <= 0.0 {
                return Err(Error::InvalidParams(
                    "at least one band weight must be positive".into(),
                ));
            }
        }
        if self.max_passes == 0 {
            return Err(Error::InvalidParams("max_passes must be positive".into()));
        }
        Ok(())
    }

    /// Validates against `band_count` and expands default band weights.
    pub fn resolved(&self, band_count: usize) -> Result<SegmentationParams> {
        self.validate()?;
        let weights = match &self.band_weights {
            Some(w) if w.len() != band_count => {
                return Err(Error::InvalidParams(format!(
                    "{} band weights for {band_count} bands",
                    w.len()
                )))
            }
            Some(w) => w.clone(),
            None => vec![1.0; band_count],
        };
        Ok(SegmentationParams {
            band_weights: Some(weights),
            ..self.clone()
        })
    }

    fn threshold(&self) -> f64 {
        self.scale * self.scale
    }
}

/// Result of [`segment`]. Ids in `labels`, `stats` and `graph` are dense
/// `0..K` in row-major first-appearance order.
#[derive(Debug, Clone)]
pub struct Segmentation {
    pub labels: LabelMap,
    pub stats: Vec<SegmentStats>,
    pub graph: AdjacencyGraph,
    pub passes: usize,
    pub merges: usize,
}

impl Segmentation {
    pub fn segment_count(&self) -> usize {
        self.stats.len()
    }
}

/// One segment per pixel, with the 4-neighbor grid as adjacency graph.
pub fn init_segments(raster: &Raster) -> (LabelMap, Vec<SegmentStats>, AdjacencyGraph) {
    let (w, h) = (raster.width(), raster.height());
    let labels = LabelMap::new(w, h, (0..(w * h) as u32).collect())
        .expect("raster dimensions are non-zero");
    let stats = (0..w * h)
        .map(|i| {
            SegmentStats::pixel(
                i as u32,
                i / w,
                i % w,
                (0..raster.band_count()).map(|b| raster.value(b, i)),
            )
        })
        .collect();
    let graph = AdjacencyGraph::from_labels(&labels);
    (labels, stats, graph)
}

#[inline]
fn fusion_cost(a: &SegmentStats, b: &SegmentStats, shared: usize, params: &SegmentationParams) -> f64 {
    let weights = params.band_weights.as_deref().unwrap_or(&[]);
    let color = delta_color(a, b, weights);
    if params.shape_weight == 0.0 {
        return color;
    }
    let perimeter = merged_perimeter(a.perimeter, b.perimeter, shared);
    let bbox = a.bbox.union(&b.bbox);
    let shape = delta_shape(a, b, perimeter, &bbox, params.compactness_weight);
    (1.0 - params.shape_weight) * color + params.shape_weight * shape
}

/// Fusion cost of merging adjacent segments `a` and `b`.
pub fn merge_cost(
    a: &SegmentStats,
    b: &SegmentStats,
    params: &SegmentationParams,
    graph: &AdjacencyGraph,
) -> Result<f64> {
    let shared = graph
        .shared_edges(a.id, b.id)
        .ok_or(Error::NotAdjacent(a.id, b.id))?;
    Ok(fusion_cost(a, b, shared, params))
}

/// Cheapest neighbor of `seg` and its cost; ties go to the smallest id.
/// `stats` is indexed by segment id.
pub fn best_neighbor(
    seg: u32,
    stats: &[SegmentStats],
    params: &SegmentationParams,
    graph: &AdjacencyGraph,
) -> Option<(u32, f64)> {
    let a = &stats[seg as usize];
    let mut best: Option<(u32, f64)> = None;
    // neighbors arrive in ascending id order, so strict < keeps the smallest id on ties
    for (n, shared) in graph.neighbors(seg) {
        let cost = fusion_cost(a, &stats[n as usize], shared, params);
        if best.is_none_or(|(_, c)| cost < c) {
            best = Some((n, cost));
        }
    }
    best
}

/// Segments `raster` using the build's default execution strategy.
pub fn segment(raster: &Raster, params: &SegmentationParams) -> Result<Segmentation> {
    segment_with(raster, params, Execution::default())
}

/// Segments `raster`, evaluating best-neighbor snapshots with `exec`.
///
/// At the start of every pass the best neighbor of each segment whose
/// cached answer is stale is computed (in parallel under
/// [`Execution::Parallel`]). The merge walk itself is sequential; a merge
/// invalidates the cache of the merged segment and its neighbors, which are
/// then recomputed on demand. The cache only ever holds values equal to what
/// an on-the-fly evaluation would return, so both strategies give identical
/// results.
pub fn segment_with(raster: &Raster, params: &SegmentationParams, exec: Execution) -> Result<Segmentation> {
    let params = params.resolved(raster.band_count())?;
    let threshold = params.threshold();
    let (_, mut stats, mut graph) = init_segments(raster);
    let n = stats.len();

    let mut alive = vec![true; n];
    let mut parent: Vec<u32> = (0..n as u32).collect();
    let mut cache: Vec<Option<Option<(u32, f64)>>> = vec![None; n];
    let mut live: Vec<u32> = (0..n as u32).collect();
    let mut passes = 0;
    let mut merges = 0;

    loop {
        passes += 1;
        if passes > params.max_passes {
            return Err(Error::NonConvergence(params.max_passes));
        }

        let stale: Vec<u32> = live
            .iter()
            .copied()
            .filter(|&id| cache[id as usize].is_none())
            .collect();
        let fresh = exec.map(&stale, |&id| best_neighbor(id, &stats, &params, &graph));
        for (id, best) in stale.into_iter().zip(fresh) {
            cache[id as usize] = Some(best);
        }

        let mut merged_this_pass = 0;
        for &a in &live {
            if !alive[a as usize] {
                continue;
            }
            let Some((b, cost)) = cached_best(a, &mut cache, &stats, &params, &graph) else {
                continue;
            };
            let back = cached_best(b, &mut cache, &stats, &params, &graph);
            if back.map(|(id, _)| id) != Some(a) || cost >= threshold {
                continue;
            }

            let (keep, gone) = (a.min(b), a.max(b));
            let shared = graph.shared_edges(keep, gone).expect("best neighbor is adjacent");
            let merged = stats[keep as usize].merged(&stats[gone as usize], shared);
            stats[keep as usize] = merged;
            alive[gone as usize] = false;
            parent[gone as usize] = keep;
            graph.merge_into(keep, gone);

            cache[keep as usize] = None;
            cache[gone as usize] = None;
            for (nb, _) in graph.neighbors(keep) {
                cache[nb as usize] = None;
            }
            merged_this_pass += 1;
        }

        merges += merged_this_pass;
        if merged_this_pass == 0 {
            break;
        }
        live.retain(|&id| alive[id as usize]);
    }

    // Survivor ids are the smallest pixel index of their segment, so
    // ascending survivor order is row-major first-appearance order.
    let mut remap: Vec<Option<u32>> = vec![None; n];
    for (new, &old) in live.iter().enumerate() {
        remap[old as usize] = Some(new as u32);
    }
    let labels: Vec<u32> = (0..n)
        .map(|p| {
            let root = find(&mut parent, p as u32);
            remap[root as usize].expect("root is alive")
        })
        .collect();
    let out_stats = live
        .iter()
        .enumerate()
        .map(|(new, &old)| SegmentStats {
            id: new as u32,
            ..stats[old as usize].clone()
        })
        .collect();
    let graph = graph.remap(&remap, live.len());
    Ok(Segmentation {
        labels: LabelMap::new(raster.width(), raster.height(), labels)?,
        stats: out_stats,
        graph,
        passes,
        merges,
    })
}

fn cached_best(
    id: u32,
    cache: &mut [Option<Option<(u32, f64)>>],
    stats: &[SegmentStats],
    params: &SegmentationParams,
    graph: &AdjacencyGraph,
) -> Option<(u32, f64)> {
    *cache[id as usize].get_or_insert_with(|| best_neighbor(id, stats, params, graph))
}

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    let mut root = x;
    while parent[root as usize] != root {
        root = parent[root as usize];
    }
    while parent[x as usize] != root {
        let next = parent[x as usize];
        parent[x as usize] = root;
        x = next;
    }
    root
}
