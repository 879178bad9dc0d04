//! Slide-unit geometry.
//!
//! The slide canvas is 16:9, `CANVAS_WIDTH` x `CANVAS_HEIGHT` abstract units
//! (inches in presentation terms). All layout math happens in these units;
//! conversion to pixels is done once at render time through [`PixelBox`].

use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};

/// Canvas width in slide units (40/3, the usual 13.333 in widescreen decks).
pub const CANVAS_WIDTH: f64 = 40.0 / 3.0;
/// Canvas height in slide units.
pub const CANVAS_HEIGHT: f64 = 7.5;

/// Axis-aligned rectangle in slide units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect<T = f64> {
    pub left: T,
    pub top: T,
    pub width: T,
    pub height: T,
}

impl<T: Scalar> Rect<T> {
    pub fn new(left: T, top: T, width: T, height: T) -> Self {
        Self { left, top, width, height }
    }

    /// The whole slide.
    pub fn canvas() -> Self {
        Self::new(T::zero(), T::zero(), T::lit(CANVAS_WIDTH), T::lit(CANVAS_HEIGHT))
    }

    pub fn right(&self) -> T {
        self.left + self.width
    }

    pub fn bottom(&self) -> T {
        self.top + self.height
    }

    pub fn center(&self) -> (T, T) {
        let two = T::lit(2.0);
        (self.left + self.width / two, self.top + self.height / two)
    }

    pub fn area(&self) -> T {
        self.width * self.height
    }

    pub fn has_positive_size(&self) -> bool {
        self.width > T::zero() && self.height > T::zero()
    }

    /// `other` lies inside `self`, allowing [`Scalar::containment_eps`] of
    /// rounding on each edge.
    pub fn contains_rect(&self, other: &Rect<T>) -> bool {
        let eps = T::containment_eps();
        other.left >= self.left - eps
            && other.top >= self.top - eps
            && other.right() <= self.right() + eps
            && other.bottom() <= self.bottom() + eps
    }

    pub fn inside_canvas(&self) -> bool {
        Self::canvas().contains_rect(self)
    }

    /// Interiors intersect (touching edges do not count).
    pub fn overlaps(&self, other: &Rect<T>) -> bool {
        let eps = T::containment_eps();
        self.left < other.right() - eps
            && other.left < self.right() - eps
            && self.top < other.bottom() - eps
            && other.top < self.bottom() - eps
    }

    /// Shrinks every edge by `d` (clamped so the rect never inverts).
    pub fn inset(&self, d: T) -> Self {
        let two = T::lit(2.0);
        let dx = d.min(self.width / two);
        let dy = d.min(self.height / two);
        Self::new(self.left + dx, self.top + dy, self.width - two * dx, self.height - two * dy)
    }

    /// Splits a strip of height `strip` off the bottom.
    /// Returns `(upper, lower)` with `gap` between them.
    pub fn split_bottom(&self, strip: T, gap: T) -> (Self, Self) {
        let upper_h = (self.height - strip - gap).max(T::zero());
        let upper = Self::new(self.left, self.top, self.width, upper_h);
        let lower = Self::new(self.left, self.bottom() - strip, self.width, strip);
        (upper, lower)
    }

    pub fn cast<U: Scalar>(&self) -> Rect<U> {
        Rect::new(
            U::lit(self.left.to_f64_lossy()),
            U::lit(self.top.to_f64_lossy()),
            U::lit(self.width.to_f64_lossy()),
            U::lit(self.height.to_f64_lossy()),
        )
    }
}

/// Pixel-space box, half-open: `[x0, x1) x [y0, y1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PixelBox {
    pub x0: i64,
    pub y0: i64,
    pub x1: i64,
    pub y1: i64,
}

impl PixelBox {
    pub fn new(x0: i64, y0: i64, x1: i64, y1: i64) -> Self {
        Self { x0, y0, x1, y1 }
    }

    pub fn of_image(width: u32, height: u32) -> Self {
        Self::new(0, 0, width as i64, height as i64)
    }

    /// Maps a slide-unit rect onto an image of `width` x `height` pixels by
    /// rounding each edge to the nearest pixel boundary.
    pub fn from_rect(rect: &Rect<f64>, width: u32, height: u32) -> Self {
        let sx = width as f64 / CANVAS_WIDTH;
        let sy = height as f64 / CANVAS_HEIGHT;
        let px = |v: f64, s: f64, max: u32| ((v * s).round().max(0.0) as i64).min(max as i64);
        Self {
            x0: px(rect.left, sx, width),
            y0: px(rect.top, sy, height),
            x1: px(rect.right(), sx, width),
            y1: px(rect.bottom(), sy, height),
        }
    }

    pub fn width(&self) -> i64 {
        (self.x1 - self.x0).max(0)
    }

    pub fn height(&self) -> i64 {
        (self.y1 - self.y0).max(0)
    }

    pub fn area(&self) -> i64 {
        self.width() * self.height()
    }

    pub fn is_empty(&self) -> bool {
        self.width() == 0 || self.height() == 0
    }

    pub fn contains(&self, x: i64, y: i64) -> bool {
        x >= self.x0 && x < self.x1 && y >= self.y0 && y < self.y1
    }

    pub fn contains_box(&self, other: &PixelBox) -> bool {
        other.x0 >= self.x0 && other.y0 >= self.y0 && other.x1 <= self.x1 && other.y1 <= self.y1
    }

    pub fn inset(&self, d: i64) -> Self {
        let dx = d.min(self.width() / 2);
        let dy = d.min(self.height() / 2);
        Self::new(self.x0 + dx, self.y0 + dy, self.x1 - dx, self.y1 - dy)
    }

    pub fn intersect(&self, other: &PixelBox) -> Self {
        let x0 = self.x0.max(other.x0);
        let y0 = self.y0.max(other.y0);
        Self::new(x0, y0, self.x1.min(other.x1).max(x0), self.y1.min(other.y1).max(y0))
    }

    /// Largest per-edge distance to `other`.
    pub fn max_edge_diff(&self, other: &PixelBox) -> i64 {
        [
            (self.x0 - other.x0).abs(),
            (self.y0 - other.y0).abs(),
            (self.x1 - other.x1).abs(),
            (self.y1 - other.y1).abs(),
        ]
        .into_iter()
        .max()
        .unwrap_or(0)
    }
}

/// Growing tight bounding box over individual pixels.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct InkBounds(Option<PixelBox>);

impl InkBounds {
    #[inline]
    pub fn add(&mut self, x: i64, y: i64) {
        self.0 = Some(match self.0 {
            None => PixelBox::new(x, y, x + 1, y + 1),
            Some(b) => PixelBox::new(b.x0.min(x), b.y0.min(y), b.x1.max(x + 1), b.y1.max(y + 1)),
        });
    }

    pub fn merge(&mut self, other: InkBounds) {
        if let Some(b) = other.0 {
            self.add(b.x0, b.y0);
            self.add(b.x1 - 1, b.y1 - 1);
        }
    }

    pub fn get(&self) -> Option<PixelBox> {
        self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canvas_is_sixteen_by_nine() {
        let c = Rect::<f64>::canvas();
        assert!((c.width / c.height - 16.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn containment_and_overlap() {
        let outer = Rect::<f64>::new(1.0, 1.0, 4.0, 2.0);
        assert!(outer.contains_rect(&Rect::new(1.5, 1.5, 1.0, 1.0)));
        assert!(!outer.contains_rect(&Rect::new(4.5, 1.5, 1.0, 1.0)));
        let a = Rect::<f64>::new(0.0, 0.0, 1.0, 1.0);
        let b = Rect::<f64>::new(1.0, 0.0, 1.0, 1.0);
        assert!(!a.overlaps(&b));
        assert!(a.overlaps(&Rect::new(0.5, 0.5, 1.0, 1.0)));
    }

    #[test]
    fn pixel_box_of_canvas_covers_image() {
        let b = PixelBox::from_rect(&Rect::canvas(), 1280, 720);
        assert_eq!(b, PixelBox::new(0, 0, 1280, 720));
        let half = PixelBox::from_rect(&Rect::new(0.0, 0.0, CANVAS_WIDTH / 2.0, 3.75), 1280, 720);
        assert_eq!(half, PixelBox::new(0, 0, 640, 360));
    }

    #[test]
    fn ink_bounds_grow() {
        let mut ink = InkBounds::default();
        assert!(ink.get().is_none());
        ink.add(5, 7);
        ink.add(2, 9);
        assert_eq!(ink.get(), Some(PixelBox::new(2, 7, 6, 10)));
    }
}
