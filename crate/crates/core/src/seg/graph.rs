use std::collections::BTreeMap;

use super::labels::LabelMap;

/// Region adjacency graph under 4-connectivity, with the number of shared
/// pixel edges stored per neighbor pair.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AdjacencyGraph {
    neighbors: Vec<BTreeMap<u32, usize>>,
}

impl AdjacencyGraph {
    pub fn with_nodes(count: usize) -> Self {
        AdjacencyGraph {
            neighbors: vec![BTreeMap::new(); count],
        }
    }

    /// Builds the graph of a label map whose ids are `0..K`.
    pub fn from_labels(labels: &LabelMap) -> Self {
        let mut g = Self::with_nodes(labels.segment_count());
        let (w, h) = (labels.width(), labels.height());
        for r in 0..h {
            for c in 0..w {
                let a = labels.get(r, c);
                if c + 1 < w {
                    let b = labels.get(r, c + 1);
                    if a != b {
                        g.add_shared_edges(a, b, 1);
                    }
                }
                if r + 1 < h {
                    let b = labels.get(r + 1, c);
                    if a != b {
                        g.add_shared_edges(a, b, 1);
                    }
                }
            }
        }
        g
    }

    pub fn node_count(&self) -> usize {
        self.neighbors.len()
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.neighbors.iter().map(BTreeMap::len).sum::<usize>() / 2
    }

    /// Neighbors of `id` in ascending id order, with shared-edge counts.
    pub fn neighbors(&self, id: u32) -> impl Iterator<Item = (u32, usize)> + '_ {
        self.neighbors[id as usize].iter().map(|(&n, &c)| (n, c))
    }

    pub fn degree(&self, id: u32) -> usize {
        self.neighbors[id as usize].len()
    }

    pub fn shared_edges(&self, a: u32, b: u32) -> Option<usize> {
        self.neighbors.get(a as usize)?.get(&b).copied()
    }

    /// Sorted `(a, b, shared)` triples with `a < b`.
    pub fn edges(&self) -> Vec<(u32, u32, usize)> {
        self.neighbors
            .iter()
            .enumerate()
            .flat_map(|(a, m)| {
                m.iter()
                    .filter(move |(&b, _)| b > a as u32)
                    .map(move |(&b, &c)| (a as u32, b, c))
            })
            .collect()
    }

    pub(crate) fn add_shared_edges(&mut self, a: u32, b: u32, count: usize) {
        *self.neighbors[a as usize].entry(b).or_insert(0) += count;
        *self.neighbors[b as usize].entry(a).or_insert(0) += count;
    }

    /// Folds node `gone` into `keep`: every edge of `gone` is re-wired to
    /// `keep` with shared counts summed, and the `keep`–`gone` edge vanishes.
    pub(crate) fn merge_into(&mut self, keep: u32, gone: u32) {
        let edges = std::mem::take(&mut self.neighbors[gone as usize]);
        self.neighbors[keep as usize].remove(&gone);
        for (n, count) in edges {
            if n == keep {
                continue;
            }
            let theirs = &mut self.neighbors[n as usize];
            theirs.remove(&gone);
            *theirs.entry(keep).or_insert(0) += count;
            *self.neighbors[keep as usize].entry(n).or_insert(0) += count;
        }
    }

    /// Relabels nodes through `map` (old id → new id) keeping only mapped nodes.
    pub(crate) fn remap(&self, map: &[Option<u32>], count: usize) -> AdjacencyGraph {
        let mut out = Self::with_nodes(count);
        for (old, m) in self.neighbors.iter().enumerate() {
            let Some(new) = map[old] else { continue };
            out.neighbors[new as usize] = m
                .iter()
                .map(|(&n, &c)| (map[n as usize].expect("edge to a dead segment"), c))
                .collect();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_2x2() {
        let m = LabelMap::new(2, 2, vec![0, 1, 2, 3]).unwrap();
        let g = AdjacencyGraph::from_labels(&m);
        assert_eq!(
            g.edges(),
            vec![(0, 1, 1), (0, 2, 1), (1, 3, 1), (2, 3, 1)]
        );
    }

    #[test]
    fn merge_rewires_and_sums() {
        // 0 1
        // 2 3
        let m = LabelMap::new(2, 2, vec![0, 1, 2, 3]).unwrap();
        let mut g = AdjacencyGraph::from_labels(&m);
        g.merge_into(0, 1);
        assert_eq!(g.edges(), vec![(0, 2, 1), (0, 3, 1), (2, 3, 1)]);
        g.merge_into(2, 3);
        assert_eq!(g.edges(), vec![(0, 2, 2)]);
        assert_eq!(g.degree(1), 0);
    }
}
