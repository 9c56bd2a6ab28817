//! Object-based image analysis for multi-band rasters.
//!
//! The pipeline has four stages, each in its own module:
//!
//! * [`io`]: manifest/PGM ingestion, label and class-image files, PPM rendering
//!   and deterministic synthetic scenes.
//! * [`seg`]: multiresolution segmentation. Every pixel starts as its own
//!   segment; adjacent segments are merged greedily (local mutual best fitting)
//!   while the weighted color + shape heterogeneity increase stays below the
//!   squared scale parameter.
//! * [`features`]: per-segment area, perimeter, longest axis, shape index,
//!   brightness and band statistics.
//! * [`classify`]: declarative threshold rules over those features.
//!
//! The [`cli`] module wires the stages into the `obia` command-line tool.
//!
//! Data-parallel inner loops (best-neighbor snapshots, per-segment features,
//! scale sweeps) run on rayon when the `parallel` feature is enabled and fall
//! back to plain iterators otherwise. Both paths produce bit-identical output.

pub mod classify;
pub mod cli;
pub mod error;
pub mod features;
pub mod io;
pub mod par;
pub mod raster;
pub mod seg;

pub use error::{Error, Result};
pub use raster::Raster;
