//! COCO detection ground truth.

use crate::deck::model::{DeckLayout, ElementKind};
use crate::error::AnnotateError;
use crate::geometry::PixelBox;
use crate::render::BoxTransform;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CocoImage {
    pub id: u64,
    pub file_name: String,
    pub width: u32,
    pub height: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CocoAnnotation {
    pub id: u64,
    pub image_id: u64,
    pub category_id: u32,
    /// `[x, y, w, h]` in output pixels.
    pub bbox: [f64; 4],
    pub area: f64,
    pub iscrowd: u8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CocoCategory {
    pub id: u32,
    pub name: String,
    pub supercategory: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CocoDataset {
    pub images: Vec<CocoImage>,
    pub annotations: Vec<CocoAnnotation>,
    pub categories: Vec<CocoCategory>,
}

pub fn categories() -> Vec<CocoCategory> {
    ElementKind::ALL
        .iter()
        .map(|k| CocoCategory {
            id: k.id(),
            name: k.name().to_string(),
            supercategory: "slide-element".into(),
        })
        .collect()
}

/// What the renderer reports about one output image.
#[derive(Debug, Clone, PartialEq)]
pub struct RenderedSlide {
    pub image_id: u64,
    pub file_name: String,
    /// Output size, after augmentation.
    pub width: u32,
    pub height: u32,
    /// Ink extent per element in render pixels, in `all_elements` order.
    pub ink: Vec<Option<PixelBox>>,
    pub transform: BoxTransform,
}

/// One image per rendered slide and one annotation per element with ink.
/// `renders[d][s]` belongs to slide `s` of deck `d`.
pub fn emit_coco(decks: &[DeckLayout], renders: &[Vec<RenderedSlide>]) -> Result<CocoDataset, AnnotateError> {
    let mut out = CocoDataset {
        categories: categories(),
        ..CocoDataset::default()
    };
    let mut next_id = 1;
    for (d, deck) in decks.iter().enumerate() {
        for (s, slide) in deck.slides.iter().enumerate() {
            let r = renders.get(d).and_then(|v| v.get(s)).ok_or_else(|| AnnotateError::MissingRender {
                deck: deck.deck_id.clone(),
                slide: s,
            })?;
            if r.ink.len() != slide.element_count() {
                return Err(AnnotateError::MissingRender {
                    deck: deck.deck_id.clone(),
                    slide: s,
                });
            }
            out.images.push(CocoImage {
                id: r.image_id,
                file_name: r.file_name.clone(),
                width: r.width,
                height: r.height,
            });
            for (e, ink) in slide.all_elements().zip(&r.ink) {
                let Some(b) = ink else { continue };
                let bbox = r.transform.apply(b);
                out.annotations.push(CocoAnnotation {
                    id: next_id,
                    image_id: r.image_id,
                    category_id: e.content.kind.id(),
                    bbox,
                    area: bbox[2] * bbox[3],
                    iscrowd: 0,
                });
                next_id += 1;
            }
        }
    }
    Ok(out)
}

/// Referential integrity, id uniqueness, bounds and area checks. Returns
/// every violation found.
pub fn validate_coco(ds: &CocoDataset) -> Vec<String> {
    let mut errors = Vec::new();
    let mut image_ids = BTreeSet::new();
    for img in &ds.images {
        if !image_ids.insert(img.id) {
            errors.push(format!("duplicate image id {}", img.id));
        }
        if img.width == 0 || img.height == 0 {
            errors.push(format!("image {} has zero size", img.id));
        }
    }
    let cat_ids: BTreeSet<u32> = ds.categories.iter().map(|c| c.id).collect();
    if cat_ids.len() != ds.categories.len() {
        errors.push("duplicate category id".into());
    }
    let mut ann_ids = BTreeSet::new();
    for a in &ds.annotations {
        if !ann_ids.insert(a.id) {
            errors.push(format!("duplicate annotation id {}", a.id));
        }
        if !cat_ids.contains(&a.category_id) {
            errors.push(format!("annotation {} has unknown category {}", a.id, a.category_id));
        }
        let Some(img) = ds.images.iter().find(|i| i.id == a.image_id) else {
            errors.push(format!("annotation {} references missing image {}", a.id, a.image_id));
            continue;
        };
        let [x, y, w, h] = a.bbox;
        let eps = 1e-6;
        if !(x >= -eps && y >= -eps && w > 0.0 && h > 0.0 && x + w <= img.width as f64 + eps && y + h <= img.height as f64 + eps) {
            errors.push(format!(
                "annotation {} bbox {:?} outside {}x{}",
                a.id, a.bbox, img.width, img.height
            ));
        }
        if (a.area - w * h).abs() > 1e-6 * (1.0 + a.area.abs()) {
            errors.push(format!("annotation {} area {} != w*h {}", a.id, a.area, w * h));
        }
        if a.iscrowd != 0 {
            errors.push(format!("annotation {} has iscrowd {}", a.id, a.iscrowd));
        }
    }
    errors
}

/// Keeps only the images in `keep` and their annotations.
pub fn subset(ds: &CocoDataset, keep: &BTreeSet<u64>) -> CocoDataset {
    CocoDataset {
        images: ds.images.iter().filter(|i| keep.contains(&i.id)).cloned().collect(),
        annotations: ds.annotations.iter().filter(|a| keep.contains(&a.image_id)).cloned().collect(),
        categories: ds.categories.clone(),
    }
}
