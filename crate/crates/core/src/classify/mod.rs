//! Rule-based land-cover classification of segments.
//!
//! Every segment receives the class of the first rule, in ascending priority,
//! whose predicates all hold, or [`UNCLASSIFIED`] when none does.

mod rules;

pub use rules::{default_color, parse_rules, ClassRule, Predicate};

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::features::FeatureVector;
use crate::io::{ClassImage, Palette, Rgb};
use crate::seg::LabelMap;

pub const UNCLASSIFIED: &str = "Unclassified";
pub const UNCLASSIFIED_COLOR: Rgb = [0, 0, 0];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LegendEntry {
    pub class: String,
    pub color: Rgb,
}

/// Class assignment per segment. `assignment[id]` indexes `legend`; the
/// legend lists rule classes in priority order followed by [`UNCLASSIFIED`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassMap {
    pub assignment: Vec<u32>,
    pub legend: Vec<LegendEntry>,
}

impl ClassMap {
    pub fn class_of(&self, segment: u32) -> &str {
        &self.legend[self.assignment[segment as usize] as usize].class
    }

    pub fn palette(&self) -> Palette {
        self.legend
            .iter()
            .enumerate()
            .map(|(i, e)| (i as u32, e.color))
            .collect()
    }

    /// Per-pixel legend indices through `labels`.
    pub fn class_image(&self, labels: &LabelMap) -> Result<Vec<u32>> {
        labels
            .labels()
            .iter()
            .map(|&l| {
                self.assignment.get(l as usize).copied().ok_or_else(|| {
                    Error::Inconsistent(format!("label {l} has no class assignment"))
                })
            })
            .collect()
    }
}

/// Assigns classes to `vectors` (indexed by segment id).
pub fn classify(vectors: &[FeatureVector], rules: &[ClassRule]) -> ClassMap {
    let mut ordered: Vec<&ClassRule> = rules.iter().collect();
    ordered.sort_by_key(|r| r.priority);

    let mut legend: Vec<LegendEntry> = Vec::new();
    let mut rule_slot = Vec::with_capacity(ordered.len());
    for r in &ordered {
        let slot = match legend.iter().position(|e| e.class == r.class) {
            Some(i) => i,
            None => {
                legend.push(LegendEntry {
                    class: r.class.clone(),
                    color: r.color,
                });
                legend.len() - 1
            }
        };
        rule_slot.push(slot as u32);
    }
    let unclassified = legend.len() as u32;
    legend.push(LegendEntry {
        class: UNCLASSIFIED.to_string(),
        color: UNCLASSIFIED_COLOR,
    });

    let mut assignment = vec![unclassified; vectors.len()];
    for v in vectors {
        let class = ordered
            .iter()
            .position(|r| r.matches(v))
            .map_or(unclassified, |i| rule_slot[i]);
        assignment[v.id as usize] = class;
    }
    ClassMap { assignment, legend }
}

/// Writes `id,class` rows in id order.
pub fn write_classes_csv<W: std::io::Write>(map: &ClassMap, out: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(["id", "class"])?;
    for id in 0..map.assignment.len() {
        wtr.write_record([id.to_string().as_str(), map.class_of(id as u32)])?;
    }
    wtr.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn export_classes_csv(map: &ClassMap, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_classes_csv(map, file)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfusionEntry {
    pub truth: String,
    pub assigned: String,
    pub segments: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AccuracyReport {
    pub segments: usize,
    pub correct: usize,
    pub accuracy: f64,
    pub confusion: Vec<ConfusionEntry>,
}

/// Segment-level accuracy: each segment's majority ground-truth class (ties
/// to the lower class index) against its assigned class.
pub fn accuracy_report(map: &ClassMap, truth: &ClassImage, labels: &LabelMap) -> Result<AccuracyReport> {
    if (truth.width, truth.height) != (labels.width(), labels.height()) {
        return Err(Error::DimensionMismatch(format!(
            "truth is {}x{}, labels are {}x{}",
            truth.width,
            truth.height,
            labels.width(),
            labels.height()
        )));
    }
    let k = map.assignment.len();
    let mut votes = vec![vec![0usize; truth.classes.len()]; k];
    for (&l, &t) in labels.labels().iter().zip(&truth.pixels) {
        let row = votes
            .get_mut(l as usize)
            .ok_or_else(|| Error::Inconsistent(format!("label {l} has no class assignment")))?;
        row[t as usize] += 1;
    }

    let mut confusion: BTreeMap<(String, String), usize> = BTreeMap::new();
    let mut correct = 0;
    let mut segments = 0;
    for (id, v) in votes.iter().enumerate() {
        let total: usize = v.iter().sum();
        if total == 0 {
            continue;
        }
        segments += 1;
        let majority = v
            .iter()
            .enumerate()
            .fold(0, |best, (i, &c)| if c > v[best] { i } else { best });
        let truth_class = truth.classes[majority].clone();
        let assigned = map.class_of(id as u32).to_string();
        if truth_class == assigned {
            correct += 1;
        }
        *confusion.entry((truth_class, assigned)).or_insert(0) += 1;
    }
    Ok(AccuracyReport {
        segments,
        correct,
        accuracy: if segments == 0 {
            0.0
        } else {
            correct as f64 / segments as f64
        },
        confusion: confusion
            .into_iter()
            .map(|((truth, assigned), segments)| ConfusionEntry {
                truth,
                assigned,
                segments,
            })
            .collect(),
    })
}
