//! Rule files.
//!
//! ```json
//! {"rules": [
//!   {"class": "building", "priority": 1, "color": [255, 0, 0],
//!    "where": [{"feature": "shape_index", "min": 0.07, "max": 0.55},
//!              {"feature": "brightness", "min": 180}]}
//! ]}
//! ```
//!
//! Bounds are inclusive and either may be omitted. `color` is optional; known
//! land-cover names get a default (see [`default_color`]).

use std::collections::HashSet;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::features::{Feature, FeatureVector};
use crate::io::{fallback_color, Rgb};

#[derive(Debug, Clone, PartialEq)]
pub struct Predicate {
    pub feature: Feature,
    pub min: Option<f64>,
    pub max: Option<f64>,
}

impl Predicate {
    /// Interval containment; a feature the vector lacks never matches.
    pub fn holds(&self, v: &FeatureVector) -> bool {
        let Some(x) = v.get(self.feature) else {
            return false;
        };
        self.min.is_none_or(|lo| x >= lo) && self.max.is_none_or(|hi| x <= hi)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassRule {
    pub class: String,
    pub priority: i64,
    pub predicates: Vec<Predicate>,
    pub color: Rgb,
}

impl ClassRule {
    pub fn matches(&self, v: &FeatureVector) -> bool {
        self.predicates.iter().all(|p| p.holds(v))
    }

    /// Largest band index referenced by a `mean_bK`/`std_bK` predicate.
    pub fn max_band(&self) -> Option<usize> {
        self.predicates
            .iter()
            .filter_map(|p| match p.feature {
                Feature::Mean(b) | Feature::Std(b) => Some(b),
                _ => None,
            })
            .max()
    }
}

/// Default rendering color for a class name: buildings red, roads and
/// streets blue, vegetation and parks green, water cyan. Other names get a
/// hashed color.
pub fn default_color(class: &str) -> Rgb {
    let name = class.to_ascii_lowercase();
    match name.strip_suffix('s').unwrap_or(&name) {
        "building" => [255, 0, 0],
        "road" | "street" => [0, 0, 255],
        "vegetation" | "park" => [0, 255, 0],
        "water" => [0, 255, 255],
        _ => {
            // FNV-1a over the name, folded into the fallback palette
            let hash = class
                .bytes()
                .fold(0x811c_9dc5u32, |h, b| (h ^ u32::from(b)).wrapping_mul(0x0100_0193));
            fallback_color(hash)
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RuleFile {
    rules: Vec<RawRule>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRule {
    class: String,
    priority: i64,
    #[serde(default)]
    color: Option<Rgb>,
    #[serde(rename = "where")]
    predicates: Vec<RawPredicate>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPredicate {
    feature: String,
    #[serde(default)]
    min: Option<f64>,
    #[serde(default)]
    max: Option<f64>,
}

/// Parses a rule file, returning rules sorted by ascending priority.
pub fn parse_rules(text: &str) -> Result<Vec<ClassRule>> {
    let file: RuleFile =
        serde_json::from_str(text).map_err(|e| Error::InvalidRules(e.to_string()))?;
    if file.rules.is_empty() {
        return Err(Error::InvalidRules("no rules".into()));
    }
    let mut seen = HashSet::new();
    let mut rules = Vec::with_capacity(file.rules.len());
    for raw in file.rules {
        if raw.class.is_empty() || raw.class == super::UNCLASSIFIED {
            return Err(Error::InvalidRules(format!(
                "invalid class name {:?}",
                raw.class
            )));
        }
        if !seen.insert(raw.priority) {
            return Err(Error::InvalidRules(format!(
                "duplicate priority {}",
                raw.priority
            )));
        }
        if raw.predicates.is_empty() {
            return Err(Error::InvalidRules(format!(
                "rule {:?} has no predicates",
                raw.class
            )));
        }
        let mut predicates = Vec::with_capacity(raw.predicates.len());
        for p in raw.predicates {
            let feature: Feature = p.feature.parse()?;
            let finite = |b: Option<f64>| b.is_none_or(f64::is_finite);
            if !finite(p.min) || !finite(p.max) {
                return Err(Error::InvalidRules(format!(
                    "rule {:?}: non-finite bound on {feature}",
                    raw.class
                )));
            }
            if let (Some(lo), Some(hi)) = (p.min, p.max) {
                if lo > hi {
                    return Err(Error::InvalidRules(format!(
                        "rule {:?}: {feature} bounds [{lo}, {hi}] are reversed",
                        raw.class
                    )));
                }
            }
            predicates.push(Predicate {
                feature,
                min: p.min,
                max: p.max,
            });
        }
        rules.push(ClassRule {
            color: raw.color.unwrap_or_else(|| default_color(&raw.class)),
            class: raw.class,
            priority: raw.priority,
            predicates,
        });
    }
    rules.sort_by_key(|r| r.priority);
    Ok(rules)
}
