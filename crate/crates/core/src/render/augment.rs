//! Post-render image augmentation with box remapping.

use crate::geometry::PixelBox;
use image::imageops::{self, FilterType};
use image::{Rgba, RgbaImage};
use serde::{Deserialize, Serialize};

/// Applied in order: blur, pixelation, resize.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AugmentSpec {
    /// Gaussian sigma in pixels; 0 disables.
    pub blur_sigma: f32,
    /// Block edge in pixels; 1 disables.
    pub pixelation_block: u32,
    /// Output size; `None` keeps the input size.
    pub resize: Option<(u32, u32)>,
}

impl Default for AugmentSpec {
    fn default() -> Self {
        Self {
            blur_sigma: 0.0,
            pixelation_block: 1,
            resize: None,
        }
    }
}

impl AugmentSpec {
    pub fn is_identity(&self) -> bool {
        self.blur_sigma <= 0.0 && self.pixelation_block <= 1 && self.resize.is_none()
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(self.blur_sigma >= 0.0 && self.blur_sigma.is_finite()) {
            return Err(format!("blur sigma {} must be finite and >= 0", self.blur_sigma));
        }
        if self.pixelation_block == 0 {
            return Err("pixelation block must be >= 1".into());
        }
        if matches!(self.resize, Some((0, _)) | Some((_, 0))) {
            return Err("resize dimensions must be positive".into());
        }
        Ok(())
    }
}

/// Axis-aligned scale mapping input pixel coordinates to output ones.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxTransform {
    pub sx: f64,
    pub sy: f64,
}

impl BoxTransform {
    pub const IDENTITY: Self = Self { sx: 1.0, sy: 1.0 };

    /// COCO `[x, y, w, h]` of `b` after the transform.
    pub fn apply(&self, b: &PixelBox) -> [f64; 4] {
        [
            b.x0 as f64 * self.sx,
            b.y0 as f64 * self.sy,
            b.width() as f64 * self.sx,
            b.height() as f64 * self.sy,
        ]
    }
}

fn pixelate(img: &mut RgbaImage, block: u32) {
    let (w, h) = img.dimensions();
    for by in (0..h).step_by(block as usize) {
        for bx in (0..w).step_by(block as usize) {
            let (x1, y1) = ((bx + block).min(w), (by + block).min(h));
            let mut sum = [0u64; 4];
            for y in by..y1 {
                for x in bx..x1 {
                    for (s, v) in sum.iter_mut().zip(img.get_pixel(x, y).0) {
                        *s += v as u64;
                    }
                }
            }
            let n = ((x1 - bx) * (y1 - by)) as u64;
            let avg = Rgba(sum.map(|s| ((s + n / 2) / n) as u8));
            for y in by..y1 {
                for x in bx..x1 {
                    img.put_pixel(x, y, avg);
                }
            }
        }
    }
}

/// Deterministic: the spec alone fixes the output.
pub fn augment_image(img: &RgbaImage, spec: &AugmentSpec) -> (RgbaImage, BoxTransform) {
    let mut out = if spec.blur_sigma > 0.0 {
        imageops::blur(img, spec.blur_sigma)
    } else {
        img.clone()
    };
    if spec.pixelation_block > 1 {
        pixelate(&mut out, spec.pixelation_block);
    }
    let mut t = BoxTransform::IDENTITY;
    if let Some((w, h)) = spec.resize {
        if (w, h) != out.dimensions() {
            t = BoxTransform {
                sx: w as f64 / out.width() as f64,
                sy: h as f64 / out.height() as f64,
            };
            out = imageops::resize(&out, w, h, FilterType::Triangle);
        }
    }
    (out, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raster::{diff_bounds, SENTINEL};

    fn with_block(b: PixelBox) -> RgbaImage {
        let mut img = RgbaImage::from_pixel(1280, 720, SENTINEL);
        for y in b.y0..b.y1 {
            for x in b.x0..b.x1 {
                img.put_pixel(x as u32, y as u32, Rgba([250, 40, 40, 255]));
            }
        }
        img
    }

    #[test]
    fn identity_spec_is_a_no_op() {
        let img = with_block(PixelBox::new(10, 10, 50, 60));
        let (out, t) = augment_image(&img, &AugmentSpec::default());
        assert_eq!(out, img);
        assert_eq!(t, BoxTransform::IDENTITY);
    }

    #[test]
    fn halving_halves_boxes_exactly() {
        let spec = AugmentSpec {
            resize: Some((640, 360)),
            ..AugmentSpec::default()
        };
        let (out, t) = augment_image(&with_block(PixelBox::new(100, 60, 300, 200)), &spec);
        assert_eq!(out.dimensions(), (640, 360));
        assert_eq!(t.apply(&PixelBox::new(100, 60, 300, 200)), [50.0, 30.0, 100.0, 70.0]);
    }

    #[test]
    fn remapped_box_tracks_resized_mask() {
        let b = PixelBox::new(123, 77, 611, 402);
        let spec = AugmentSpec {
            resize: Some((640, 360)),
            ..AugmentSpec::default()
        };
        let (out, t) = augment_image(&with_block(b), &spec);
        let got = diff_bounds(&out, SENTINEL).unwrap();
        let [x, y, w, h] = t.apply(&b);
        let want = PixelBox::new(x.floor() as i64, y.floor() as i64, (x + w).ceil() as i64, (y + h).ceil() as i64);
        assert!(got.max_edge_diff(&want) <= 1, "{got:?} {want:?}");
    }

    #[test]
    fn pixelation_averages_blocks() {
        let mut img = RgbaImage::from_pixel(4, 4, Rgba([0, 0, 0, 255]));
        img.put_pixel(0, 0, Rgba([200, 0, 0, 255]));
        pixelate(&mut img, 2);
        assert_eq!(img.get_pixel(1, 1), &Rgba([50, 0, 0, 255]));
        assert_eq!(img.get_pixel(3, 3), &Rgba([0, 0, 0, 255]));
    }

    #[test]
    fn block_eight_is_constant_per_tile() {
        let img = crate::assets::procedural::photo(5, 64, 48);
        let spec = AugmentSpec {
            pixelation_block: 8,
            ..AugmentSpec::default()
        };
        let (out, _) = augment_image(&img, &spec);
        for (x, y, p) in out.enumerate_pixels() {
            assert_eq!(p, out.get_pixel(x / 8 * 8, y / 8 * 8));
        }
        assert!(spec.validate().is_ok());
        assert!(AugmentSpec {
            pixelation_block: 0,
            ..spec
        }
        .validate()
        .is_err());
    }

    #[test]
    fn blur_changes_edges_but_not_size() {
        let img = with_block(PixelBox::new(100, 100, 200, 200));
        let spec = AugmentSpec {
            blur_sigma: 2.0,
            ..AugmentSpec::default()
        };
        let (out, t) = augment_image(&img, &spec);
        assert_eq!(out.dimensions(), img.dimensions());
        assert_eq!(t, BoxTransform::IDENTITY);
        assert_ne!(out, img);
    }
}
