//! Bundled scenes and their rule files.

use crate::io::SceneSpec;

pub const NAMES: &[&str] = &["urban"];

pub struct Preset {
    pub name: &'static str,
    pub scene: &'static str,
    pub rules: &'static str,
}

impl Preset {
    pub fn scene(&self) -> SceneSpec {
        serde_json::from_str(self.scene).expect("bundled scene spec is valid")
    }
}

pub const URBAN: Preset = Preset {
    name: "urban",
    scene: include_str!("../../scenes/urban.json"),
    rules: include_str!("../../scenes/urban_rules.json"),
};

pub fn preset(name: &str) -> Option<Preset> {
    match name {
        "urban" => Some(URBAN),
        _ => None,
    }
}
