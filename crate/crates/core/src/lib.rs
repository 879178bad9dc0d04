//! Synthetic lecture-slide dataset generation.

pub mod annotate;
pub mod assets;
pub mod config;
pub mod content;
pub mod deck;
pub mod error;
pub mod geometry;
pub mod layout;
pub mod pipeline;
pub mod raster;
pub mod render;
pub mod rng;
pub mod scalar;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Slide-unit rectangle in double precision.
pub type Rect = geometry::Rect<f64>;
pub type PerturbationParams = layout::perturb::PerturbationParams<f64>;
pub type SizeLaw = layout::perturb::SizeLaw<f64>;
pub type PerturbationDraw = layout::perturb::PerturbationDraw<f64>;
