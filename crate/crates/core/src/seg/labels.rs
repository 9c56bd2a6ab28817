use std::collections::HashMap;

use crate::error::{Error, Result};

/// Per-pixel segment ids, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMap {
    width: usize,
    height: usize,
    labels: Vec<u32>,
}

impl LabelMap {
    pub fn new(width: usize, height: usize, labels: Vec<u32>) -> Result<Self> {
        if width == 0 || height == 0 || labels.len() != width * height {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for a {width}x{height} map",
                labels.len()
            )));
        }
        Ok(LabelMap {
            width,
            height,
            labels,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u32 {
        self.labels[row * self.width + col]
    }

    /// Number of distinct ids.
    pub fn segment_count(&self) -> usize {
        if self.is_compact() {
            return self.labels.iter().max().map_or(0, |&m| m as usize + 1);
        }
        let mut seen: Vec<u32> = self.labels.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }

    /// True when ids are `0..K` in first-appearance order.
    pub fn is_compact(&self) -> bool {
        let mut next = 0u32;
        for &l in &self.labels {
            if l == next {
                next += 1;
            } else if l > next {
                return false;
            }
        }
        true
    }

    /// Renumbers ids densely in row-major first-appearance order.
    pub fn compact(&self) -> LabelMap {
        let mut map: HashMap<u32, u32> = HashMap::new();
        let labels = self
            .labels
            .iter()
            .map(|&l| {
                let next = map.len() as u32;
                *map.entry(l).or_insert(next)
            })
            .collect();
        LabelMap {
            width: self.width,
            height: self.height,
            labels,
        }
    }

    /// Pixel indices of every segment; requires compact ids.
    pub fn pixels_by_segment(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.segment_count()];
        for (i, &l) in self.labels.iter().enumerate() {
            out[l as usize].push(i);
        }
        out
    }
}

/// Free-function form of [`LabelMap::compact`].
pub fn compact_labels(labels: &LabelMap) -> LabelMap {
    labels.compact()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn compacts_in_first_appearance_order() {
        let m = LabelMap::new(3, 1, vec![5, 5, 9]).unwrap();
        assert_eq!(compact_labels(&m).labels(), &[0, 0, 1]);
        let m = LabelMap::new(4, 1, vec![9, 2, 9, 0]).unwrap();
        assert_eq!(m.compact().labels(), &[0, 1, 0, 2]);
        assert_eq!(m.segment_count(), 3);
    }

    #[test]
    fn dense_map_unchanged() {
        let m = LabelMap::new(2, 2, vec![0, 1, 1, 2]).unwrap();
        assert!(m.is_compact());
        assert_eq!(m.compact(), m);
    }

    #[test]
    fn rejects_bad_length() {
        assert!(LabelMap::new(2, 2, vec![0; 3]).is_err());
    }

    proptest! {
        #[test]
        fn compaction_is_idempotent_and_keeps_partition(labels in proptest::collection::vec(0u32..6, 12)) {
            let m = LabelMap::new(4, 3, labels).unwrap();
            let once = m.compact();
            prop_assert_eq!(once.compact(), once.clone());
            prop_assert!(once.is_compact());
            for i in 0..12 {
                for j in 0..12 {
                    prop_assert_eq!(m.labels()[i] == m.labels()[j], once.labels()[i] == once.labels()[j]);
                }
            }
        }
    }
}
