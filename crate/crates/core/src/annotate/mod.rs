//! Ground truth, summaries, splits, packaging and dataset statistics.

pub mod coco;
pub mod package;
pub mod split;
pub mod stats;
pub mod summary;

pub use coco::{emit_coco, validate_coco, CocoDataset, RenderedSlide};
pub use package::{package_dataset, DatasetManifest, DeckOutput, PackageOptions, SlideOutput};
pub use split::{split_by_presentation, Split};
pub use stats::{compute_spatial_heatmap, compute_stats, Heatmap, StatsReport};
pub use summary::{emit_summaries, LiveSummaries, SummaryRecord, SummaryStyle};
