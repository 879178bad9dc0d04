//! Dataset statistics and spatial heatmaps over packaged COCO files.

use super::coco::CocoDataset;
use crate::deck::model::ElementKind;
use crate::error::AnnotateError;
use image::{GrayImage, Luma};
use serde::{Deserialize, Serialize};
use std::path::Path;

pub const HEATMAP_W: usize = 64;
pub const HEATMAP_H: usize = 36;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassStats {
    pub id: u32,
    pub name: String,
    pub count: u64,
    /// Share of all annotations.
    pub share: f64,
    /// Mean instances per slide.
    pub per_slide: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub slide_count: u64,
    pub annotation_count: u64,
    pub avg_elements_per_slide: f64,
    pub classes: Vec<ClassStats>,
}

impl StatsReport {
    pub fn class(&self, kind: ElementKind) -> &ClassStats {
        &self.classes[kind.id() as usize - 1]
    }

    /// Fixed-width text table.
    pub fn table(&self) -> String {
        let mut s = format!("{:<4} {:<16} {:>8} {:>8} {:>10}\n", "id", "class", "count", "share", "per slide");
        for c in &self.classes {
            s += &format!(
                "{:<4} {:<16} {:>8} {:>7.2}% {:>10.3}\n",
                c.id,
                c.name,
                c.count,
                c.share * 100.0,
                c.per_slide
            );
        }
        s += &format!(
            "slides {}  annotations {}  avg elements/slide {:.2}\n",
            self.slide_count, self.annotation_count, self.avg_elements_per_slide
        );
        s
    }
}

pub fn stats_from_coco(sets: &[CocoDataset]) -> Result<StatsReport, AnnotateError> {
    let slide_count: u64 = sets.iter().map(|d| d.images.len() as u64).sum();
    if slide_count == 0 {
        return Err(AnnotateError::Dataset("empty dataset".into()));
    }
    let mut counts = [0u64; 16];
    for a in sets.iter().flat_map(|d| &d.annotations) {
        if let Some(k) = ElementKind::from_id(a.category_id) {
            counts[k.id() as usize - 1] += 1;
        }
    }
    let annotation_count: u64 = counts.iter().sum();
    let classes = ElementKind::ALL
        .iter()
        .map(|k| {
            let count = counts[k.id() as usize - 1];
            ClassStats {
                id: k.id(),
                name: k.name().to_string(),
                count,
                share: if annotation_count == 0 {
                    0.0
                } else {
                    count as f64 / annotation_count as f64
                },
                per_slide: count as f64 / slide_count as f64,
            }
        })
        .collect();
    Ok(StatsReport {
        slide_count,
        annotation_count,
        avg_elements_per_slide: annotation_count as f64 / slide_count as f64,
        classes,
    })
}

pub const SPLITS: [&str; 2] = ["train", "val"];

/// Reads `annotations/{train,val}.json` of a packaged dataset.
pub fn load_coco_sets(dir: &Path) -> Result<Vec<CocoDataset>, AnnotateError> {
    SPLITS
        .iter()
        .map(|split| {
            let path = dir.join("annotations").join(format!("{split}.json"));
            let bytes = std::fs::read(&path).map_err(|e| AnnotateError::Dataset(format!("{}: {e}", path.display())))?;
            Ok(serde_json::from_slice(&bytes)?)
        })
        .collect()
}

pub fn compute_stats(dir: &Path) -> Result<StatsReport, AnnotateError> {
    stats_from_coco(&load_coco_sets(dir)?)
}

/// Per-cell hit counts, row-major, `HEATMAP_W x HEATMAP_H`.
#[derive(Debug, Clone, PartialEq)]
pub struct Heatmap {
    pub hits: Vec<u64>,
}

impl Heatmap {
    pub fn total(&self) -> u64 {
        self.hits.iter().sum()
    }

    /// Share of hits in rows `0..rows`.
    pub fn top_rows_share(&self, rows: usize) -> f64 {
        let total = self.total();
        if total == 0 {
            return 0.0;
        }
        self.hits[..rows * HEATMAP_W].iter().sum::<u64>() as f64 / total as f64
    }

    /// Grayscale raster scaled so the busiest cell is white.
    pub fn to_image(&self, scale: u32) -> GrayImage {
        let max = self.hits.iter().copied().max().unwrap_or(0).max(1) as f64;
        let scale = scale.max(1);
        GrayImage::from_fn(HEATMAP_W as u32 * scale, HEATMAP_H as u32 * scale, |x, y| {
            let v = self.hits[(y / scale) as usize * HEATMAP_W + (x / scale) as usize] as f64;
            Luma([(v / max * 255.0).round() as u8])
        })
    }
}

/// Each box hits every cell whose center it covers, in image-normalized
/// coordinates; a box too small to cover any center hits the cell holding
/// its own center.
pub fn heatmap_from_coco(sets: &[CocoDataset], kind: ElementKind) -> Heatmap {
    let mut hits = vec![0u64; HEATMAP_W * HEATMAP_H];
    for d in sets {
        for a in d.annotations.iter().filter(|a| a.category_id == kind.id()) {
            let Some(img) = d.images.iter().find(|i| i.id == a.image_id) else {
                continue;
            };
            let [x, y, w, h] = a.bbox;
            let (x0, x1) = (
                x / img.width as f64 * HEATMAP_W as f64,
                (x + w) / img.width as f64 * HEATMAP_W as f64,
            );
            let (y0, y1) = (
                y / img.height as f64 * HEATMAP_H as f64,
                (y + h) / img.height as f64 * HEATMAP_H as f64,
            );
            // Cells c with x0 <= c + 0.5 < x1.
            let span = |lo: f64, hi: f64, n: usize| -> (usize, usize) {
                let a = (lo - 0.5).ceil().max(0.0) as usize;
                let b = ((hi - 0.5).ceil().max(0.0) as usize).min(n);
                (a, b)
            };
            let (cx0, cx1) = span(x0, x1, HEATMAP_W);
            let (cy0, cy1) = span(y0, y1, HEATMAP_H);
            if cx0 < cx1 && cy0 < cy1 {
                for cy in cy0..cy1 {
                    for cx in cx0..cx1 {
                        hits[cy * HEATMAP_W + cx] += 1;
                    }
                }
            } else {
                let cx = (((x0 + x1) / 2.0) as usize).min(HEATMAP_W - 1);
                let cy = (((y0 + y1) / 2.0) as usize).min(HEATMAP_H - 1);
                hits[cy * HEATMAP_W + cx] += 1;
            }
        }
    }
    Heatmap { hits }
}

pub fn compute_spatial_heatmap(dir: &Path, kind: ElementKind) -> Result<Heatmap, AnnotateError> {
    Ok(heatmap_from_coco(&load_coco_sets(dir)?, kind))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::annotate::coco::{categories, CocoAnnotation, CocoImage};

    fn ds(boxes: &[(u32, [f64; 4])]) -> CocoDataset {
        CocoDataset {
            images: vec![CocoImage {
                id: 1,
                file_name: "a.png".into(),
                width: 640,
                height: 360,
            }],
            annotations: boxes
                .iter()
                .enumerate()
                .map(|(i, (c, b))| CocoAnnotation {
                    id: i as u64 + 1,
                    image_id: 1,
                    category_id: *c,
                    bbox: *b,
                    area: b[2] * b[3],
                    iscrowd: 0,
                })
                .collect(),
            categories: categories(),
        }
    }

    #[test]
    fn counts_sum_to_annotations() {
        let d = ds(&[(1, [0.0, 0.0, 10.0, 10.0]), (1, [5.0, 5.0, 10.0, 10.0]), (3, [0.0, 0.0, 1.0, 1.0])]);
        let r = stats_from_coco(&[d]).unwrap();
        assert_eq!(r.classes.iter().map(|c| c.count).sum::<u64>(), r.annotation_count);
        assert_eq!(r.class(ElementKind::Title).count, 2);
        assert_eq!(r.avg_elements_per_slide, 3.0);
        assert_eq!(r.classes.len(), 16);
        assert!(r.table().contains("Natural-Image"));
    }

    #[test]
    fn empty_dataset_is_an_error() {
        assert!(stats_from_coco(&[CocoDataset::default()]).is_err());
    }

    #[test]
    fn heatmap_counts_cell_hits() {
        // 640x360 maps to 64x36 cells of 10 px: a 30x20 box at (100, 50)
        // covers cells x 10..13, y 5..7.
        let h = heatmap_from_coco(&[ds(&[(1, [100.0, 50.0, 30.0, 20.0])])], ElementKind::Title);
        assert_eq!(h.total(), 6);
        assert_eq!(h.hits[5 * HEATMAP_W + 10], 1);
        assert_eq!(h.hits[6 * HEATMAP_W + 12], 1);
        assert_eq!(h.hits[7 * HEATMAP_W + 10], 0);
    }

    #[test]
    fn tiny_box_hits_one_cell_and_absent_class_is_zero() {
        let d = ds(&[(1, [101.0, 51.0, 2.0, 2.0])]);
        assert_eq!(heatmap_from_coco(std::slice::from_ref(&d), ElementKind::Title).total(), 1);
        let z = heatmap_from_coco(&[d], ElementKind::Chart);
        assert_eq!(z.total(), 0);
        assert!(z.to_image(1).pixels().all(|p| p[0] == 0));
    }
}
