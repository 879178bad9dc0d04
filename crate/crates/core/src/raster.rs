//! Clipped, ink-tracking drawing primitives.
//!
//! All drawing is opaque: no anti-aliasing and no alpha blending, so a
//! pixel is either untouched or fully replaced. That keeps the recorded ink
//! extent identical to the set of pixels that differ from the background.

use crate::geometry::{InkBounds, PixelBox};
use image::{Rgba, RgbaImage};

/// Background color of the mask oracle canvas. Drawing never produces it.
pub const SENTINEL: Rgba<u8> = Rgba([1, 2, 3, 255]);
const SENTINEL_SUBSTITUTE: Rgba<u8> = Rgba([1, 2, 4, 255]);

pub fn rgba(c: [u8; 3]) -> Rgba<u8> {
    Rgba([c[0], c[1], c[2], 255])
}

pub struct Painter<'a> {
    img: &'a mut RgbaImage,
    clip: PixelBox,
    ink: InkBounds,
}

impl<'a> Painter<'a> {
    pub fn new(img: &'a mut RgbaImage, clip: PixelBox) -> Self {
        let full = PixelBox::of_image(img.width(), img.height());
        Self {
            clip: clip.intersect(&full),
            img,
            ink: InkBounds::default(),
        }
    }

    pub fn full(img: &'a mut RgbaImage) -> Self {
        let clip = PixelBox::of_image(img.width(), img.height());
        Self::new(img, clip)
    }

    pub fn clip(&self) -> PixelBox {
        self.clip
    }

    pub fn ink(&self) -> InkBounds {
        self.ink
    }

    /// Runs `f` with the clip narrowed to `clip`; ink keeps accumulating.
    pub fn with_clip<T>(&mut self, clip: PixelBox, f: impl FnOnce(&mut Self) -> T) -> T {
        let saved = self.clip;
        self.clip = saved.intersect(&clip);
        let out = f(self);
        self.clip = saved;
        out
    }

    #[inline]
    pub fn put(&mut self, x: i64, y: i64, color: Rgba<u8>) {
        if !self.clip.contains(x, y) {
            return;
        }
        let color = if color == SENTINEL { SENTINEL_SUBSTITUTE } else { color };
        self.img.put_pixel(x as u32, y as u32, color);
        self.ink.add(x, y);
    }

    pub fn fill_box(&mut self, b: PixelBox, color: Rgba<u8>) {
        let b = b.intersect(&self.clip);
        for y in b.y0..b.y1 {
            for x in b.x0..b.x1 {
                self.put(x, y, color);
            }
        }
    }

    pub fn stroke_box(&mut self, b: PixelBox, thickness: i64, color: Rgba<u8>) {
        let t = thickness.max(1).min(b.width() / 2 + 1).min(b.height() / 2 + 1);
        self.fill_box(PixelBox { y1: b.y0 + t, ..b }, color);
        self.fill_box(PixelBox { y0: b.y1 - t, ..b }, color);
        self.fill_box(PixelBox { x1: b.x0 + t, ..b }, color);
        self.fill_box(PixelBox { x0: b.x1 - t, ..b }, color);
    }

    /// Square-brush line.
    pub fn line(&mut self, x0: f64, y0: f64, x1: f64, y1: f64, thickness: f64, color: Rgba<u8>) {
        let len = (x1 - x0).hypot(y1 - y0);
        let steps = (len.ceil() as i64).max(1);
        let r = ((thickness - 1.0) / 2.0).max(0.0);
        for i in 0..=steps {
            let t = i as f64 / steps as f64;
            let x = x0 + (x1 - x0) * t;
            let y = y0 + (y1 - y0) * t;
            let b = PixelBox {
                x0: (x - r).round() as i64,
                y0: (y - r).round() as i64,
                x1: (x + r).round() as i64 + 1,
                y1: (y + r).round() as i64 + 1,
            };
            self.fill_box(b, color);
        }
    }

    pub fn fill_ellipse(&mut self, cx: f64, cy: f64, rx: f64, ry: f64, color: Rgba<u8>) {
        if rx <= 0.0 || ry <= 0.0 {
            return;
        }
        let y0 = (cy - ry).floor() as i64;
        let y1 = (cy + ry).ceil() as i64;
        for y in y0..=y1 {
            let dy = (y as f64 + 0.5 - cy) / ry;
            if dy.abs() > 1.0 {
                continue;
            }
            let half = rx * (1.0 - dy * dy).sqrt();
            let xa = (cx - half).round() as i64;
            let xb = (cx + half).round() as i64;
            for x in xa..xb {
                self.put(x, y, color);
            }
        }
    }

    pub fn stroke_ellipse(&mut self, cx: f64, cy: f64, rx: f64, ry: f64, thickness: f64, color: Rgba<u8>) {
        let n = ((rx + ry) * 4.0).ceil().max(16.0) as usize;
        let mut prev = (cx + rx, cy);
        for i in 1..=n {
            let a = i as f64 / n as f64 * std::f64::consts::TAU;
            let p = (cx + rx * a.cos(), cy + ry * a.sin());
            self.line(prev.0, prev.1, p.0, p.1, thickness, color);
            prev = p;
        }
    }

    /// Even-odd scanline fill.
    pub fn fill_polygon(&mut self, pts: &[(f64, f64)], color: Rgba<u8>) {
        if pts.len() < 3 {
            return;
        }
        let ymin = pts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min).floor() as i64;
        let ymax = pts.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max).ceil() as i64;
        let mut xs = Vec::new();
        for y in ymin..=ymax {
            let sy = y as f64 + 0.5;
            xs.clear();
            for i in 0..pts.len() {
                let (a, b) = (pts[i], pts[(i + 1) % pts.len()]);
                if (a.1 <= sy && b.1 > sy) || (b.1 <= sy && a.1 > sy) {
                    xs.push(a.0 + (sy - a.1) / (b.1 - a.1) * (b.0 - a.0));
                }
            }
            xs.sort_by(|a, b| a.total_cmp(b));
            for pair in xs.chunks(2) {
                if let [xa, xb] = pair {
                    for x in xa.round() as i64..xb.round() as i64 {
                        self.put(x, y, color);
                    }
                }
            }
        }
    }

    pub fn fill_rounded(&mut self, b: PixelBox, radius: i64, color: Rgba<u8>) {
        let r = radius.min(b.width() / 2).min(b.height() / 2).max(0);
        for y in b.y0..b.y1 {
            for x in b.x0..b.x1 {
                let dx = if x < b.x0 + r {
                    b.x0 + r - x
                } else if x >= b.x1 - r {
                    x - (b.x1 - r - 1)
                } else {
                    0
                };
                let dy = if y < b.y0 + r {
                    b.y0 + r - y
                } else if y >= b.y1 - r {
                    y - (b.y1 - r - 1)
                } else {
                    0
                };
                if dx * dx + dy * dy <= r * r {
                    self.put(x, y, color);
                }
            }
        }
    }

    /// Nearest-neighbour scaled copy of `src` into `dest`. Pixels with
    /// alpha below 128 are skipped; the rest are written opaque.
    pub fn blit(&mut self, src: &RgbaImage, dest: PixelBox) {
        if dest.is_empty() || src.width() == 0 || src.height() == 0 {
            return;
        }
        let (sw, sh) = (src.width() as i64, src.height() as i64);
        let (dw, dh) = (dest.width(), dest.height());
        let vis = dest.intersect(&self.clip);
        for y in vis.y0..vis.y1 {
            let sy = ((y - dest.y0) * sh / dh).min(sh - 1);
            for x in vis.x0..vis.x1 {
                let sx = ((x - dest.x0) * sw / dw).min(sw - 1);
                let p = src.get_pixel(sx as u32, sy as u32);
                if p[3] >= 128 {
                    self.put(x, y, Rgba([p[0], p[1], p[2], 255]));
                }
            }
        }
    }
}

/// Largest box with the source aspect ratio centered in `outer`.
pub fn fit_box(src_w: u32, src_h: u32, outer: PixelBox) -> PixelBox {
    if src_w == 0 || src_h == 0 || outer.is_empty() {
        return PixelBox {
            x1: outer.x0,
            y1: outer.y0,
            ..outer
        };
    }
    let (ow, oh) = (outer.width() as f64, outer.height() as f64);
    let s = (ow / src_w as f64).min(oh / src_h as f64);
    let w = ((src_w as f64 * s).round() as i64).clamp(1, outer.width());
    let h = ((src_h as f64 * s).round() as i64).clamp(1, outer.height());
    let x0 = outer.x0 + (outer.width() - w) / 2;
    let y0 = outer.y0 + (outer.height() - h) / 2;
    PixelBox {
        x0,
        y0,
        x1: x0 + w,
        y1: y0 + h,
    }
}

/// Tight box of pixels that differ from `bg`.
pub fn diff_bounds(img: &RgbaImage, bg: Rgba<u8>) -> Option<PixelBox> {
    let mut ink = InkBounds::default();
    for (x, y, p) in img.enumerate_pixels() {
        if *p != bg {
            ink.add(x as i64, y as i64);
        }
    }
    ink.get()
}

/// Tight box of pixels with alpha at least 128.
pub fn opaque_bounds(img: &RgbaImage) -> Option<PixelBox> {
    let mut ink = InkBounds::default();
    for (x, y, p) in img.enumerate_pixels() {
        if p[3] >= 128 {
            ink.add(x as i64, y as i64);
        }
    }
    ink.get()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clip_limits_ink() {
        let mut img = RgbaImage::new(20, 20);
        let clip = PixelBox {
            x0: 5,
            y0: 5,
            x1: 10,
            y1: 10,
        };
        let mut p = Painter::new(&mut img, clip);
        p.line(0.0, 0.0, 19.0, 19.0, 3.0, Rgba([9, 9, 9, 255]));
        let ink = p.ink().get().unwrap();
        assert!(ink.x0 >= 5 && ink.x1 <= 10 && ink.y0 >= 5 && ink.y1 <= 10);
        assert_eq!(diff_bounds(&img, Rgba([0, 0, 0, 0])), Some(ink));
    }

    #[test]
    fn sentinel_never_written() {
        let mut img = RgbaImage::from_pixel(4, 4, SENTINEL);
        let mut p = Painter::full(&mut img);
        p.put(1, 1, SENTINEL);
        assert_ne!(*img.get_pixel(1, 1), SENTINEL);
    }

    #[test]
    fn fit_keeps_aspect() {
        let b = fit_box(
            200,
            100,
            PixelBox {
                x0: 0,
                y0: 0,
                x1: 100,
                y1: 100,
            },
        );
        assert_eq!((b.width(), b.height()), (100, 50));
        assert_eq!(b.y0, 25);
    }
}
