//! Native slide rendering.

pub mod augment;
pub mod fonts;
pub mod pptx;
pub mod slide;
pub mod text;

pub use augment::{augment_image, AugmentSpec, BoxTransform};
pub use pptx::export_pptx;
pub use slide::{render_element_mask, render_slide, ElementMask, RenderOptions, SlideRender};
