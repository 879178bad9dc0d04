//! Layout and style assignment.

pub mod catalog;
pub mod meta;
pub mod perturb;
pub mod phase;
pub mod style;

pub use phase::{run_layout_phase, CaptionProbabilities, LayoutOptions};
