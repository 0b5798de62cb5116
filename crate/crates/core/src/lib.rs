//! Edge detection benchmark for number-plate preprocessing.
//!
//! The crate covers the whole chain used to compare edge detectors on
//! plate images: seeded noise injection, reconstruction and enhancement
//! filters, flat morphology, six detectors, Pratt Figure of Merit scoring,
//! synthetic plates with exact ground truth, and a sweep runner with CSV
//! and markdown reports.

pub mod bench;
pub mod detectors;
pub mod error;
pub mod filters;
pub mod font;
pub mod image;
pub mod metrics;
pub mod morphology;
pub mod noise;
pub mod plate;
pub mod pnm;
pub mod rng;

pub use error::{Error, PnmError, Result};
pub use image::{quantize, rgb_to_gray, ColorImage, EdgeMap, GrayImage};
pub use metrics::{pfom, PfomResult, PRATT_SCALE};
