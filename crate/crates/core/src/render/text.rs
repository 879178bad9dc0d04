//! Line measurement, wrapping and glyph drawing.

use super::fonts::{self, Face};
use crate::deck::model::Align;
use crate::geometry::PixelBox;
use crate::raster::Painter;
use ab_glyph::{point, Font, FontRef, ScaleFont};
use image::Rgba;

/// Binary coverage threshold; no anti-aliasing.
pub const COVERAGE_THRESHOLD: f32 = 0.5;
/// Font shrink factor per fitting step, applied at most twice.
pub const SHRINK_STEP: f64 = 0.85;
pub const SHRINK_STEPS: usize = 2;
pub const LINE_SPACING: f64 = 1.2;
const ELLIPSIS: &str = "\u{2026}";
pub const BULLET: &str = "\u{2022} ";

fn glyph_char(font: &FontRef<'static>, c: char) -> char {
    if font.glyph_id(c).0 == 0 && !c.is_whitespace() {
        '?'
    } else {
        c
    }
}

pub fn measure(face: Face, px: f64, text: &str) -> f64 {
    let font = fonts::face(face);
    let scaled = font.as_scaled(px as f32);
    let mut w = 0.0f32;
    let mut prev = None;
    for c in text.chars() {
        let id = font.glyph_id(glyph_char(font, c));
        if let Some(p) = prev {
            w += scaled.kern(p, id);
        }
        w += scaled.h_advance(id);
        prev = Some(id);
    }
    w as f64
}

pub fn ascent(face: Face, px: f64) -> f64 {
    fonts::face(face).as_scaled(px as f32).ascent() as f64
}

pub fn descent(face: Face, px: f64) -> f64 {
    fonts::face(face).as_scaled(px as f32).descent() as f64
}

/// Draws one line with its baseline at `baseline`; returns the advance.
pub fn draw_line(painter: &mut Painter<'_>, face: Face, px: f64, x: f64, baseline: f64, text: &str, color: Rgba<u8>) -> f64 {
    let font = fonts::face(face);
    let scaled = font.as_scaled(px as f32);
    let mut caret = x as f32;
    let mut prev = None;
    for c in text.chars() {
        let id = font.glyph_id(glyph_char(font, c));
        if let Some(p) = prev {
            caret += scaled.kern(p, id);
        }
        let glyph = id.with_scale_and_position(px as f32, point(caret, baseline as f32));
        if let Some(outline) = font.outline_glyph(glyph) {
            let b = outline.px_bounds();
            let (ox, oy) = (b.min.x as i64, b.min.y as i64);
            outline.draw(|gx, gy, cov| {
                if cov >= COVERAGE_THRESHOLD {
                    painter.put(ox + gx as i64, oy + gy as i64, color);
                }
            });
        }
        caret += scaled.h_advance(id);
        prev = Some(id);
    }
    caret as f64 - x
}

/// A paragraph: text plus an optional first-line prefix (bullet).
#[derive(Debug, Clone, PartialEq)]
pub struct Paragraph {
    pub prefix: String,
    pub text: String,
}

impl Paragraph {
    pub fn plain(text: impl Into<String>) -> Self {
        Self {
            prefix: String::new(),
            text: text.into(),
        }
    }

    pub fn bullet(text: impl Into<String>) -> Self {
        Self {
            prefix: BULLET.to_string(),
            text: text.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Line {
    pub text: String,
    /// Horizontal indent in pixels (hanging indent under a bullet).
    pub indent: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TextBlock {
    pub face: Face,
    pub px: f64,
    pub lines: Vec<Line>,
    pub line_height: f64,
}

fn break_word(face: Face, px: f64, word: &str, width: f64) -> Vec<String> {
    let mut parts = Vec::new();
    let mut cur = String::new();
    for c in word.chars() {
        cur.push(c);
        if measure(face, px, &cur) > width && cur.chars().count() > 1 {
            cur.pop();
            parts.push(std::mem::take(&mut cur));
            cur.push(c);
        }
    }
    if !cur.is_empty() {
        parts.push(cur);
    }
    parts
}

/// Greedy word wrap; words wider than the line are split by character.
pub fn wrap(face: Face, px: f64, paragraphs: &[Paragraph], width: f64) -> Vec<Line> {
    let mut lines = Vec::new();
    for p in paragraphs {
        let indent = if p.prefix.is_empty() { 0.0 } else { measure(face, px, &p.prefix) };
        let avail = (width - indent).max(1.0);
        let mut cur = String::new();
        let mut first = true;
        let push = |cur: &mut String, first: &mut bool, lines: &mut Vec<Line>| {
            let text = if *first { format!("{}{}", p.prefix, cur) } else { cur.clone() };
            lines.push(Line {
                text,
                indent: if *first { 0.0 } else { indent },
            });
            *first = false;
            cur.clear();
        };
        for source_line in p.text.split('\n') {
            for word in source_line.split_whitespace() {
                let candidate = if cur.is_empty() {
                    word.to_string()
                } else {
                    format!("{cur} {word}")
                };
                if measure(face, px, &candidate) <= avail {
                    cur = candidate;
                    continue;
                }
                if !cur.is_empty() {
                    push(&mut cur, &mut first, &mut lines);
                }
                if measure(face, px, word) <= avail {
                    cur = word.to_string();
                } else {
                    let mut pieces = break_word(face, px, word, avail);
                    let last = pieces.pop().unwrap_or_default();
                    for piece in pieces {
                        cur = piece;
                        push(&mut cur, &mut first, &mut lines);
                    }
                    cur = last;
                }
            }
            if !cur.is_empty() || first {
                push(&mut cur, &mut first, &mut lines);
            }
        }
    }
    lines
}

fn with_ellipsis(face: Face, px: f64, line: &str, width: f64) -> String {
    let mut s: String = line.trim_end().to_string();
    loop {
        let candidate = format!("{s}{ELLIPSIS}");
        if measure(face, px, &candidate) <= width || s.is_empty() {
            return candidate;
        }
        s.pop();
    }
}

/// Wraps at `px`, shrinking by [`SHRINK_STEP`] up to [`SHRINK_STEPS`] times
/// until the block fits `area`; otherwise truncates with an ellipsis.
pub fn fit_block(face: Face, px: f64, paragraphs: &[Paragraph], area: PixelBox) -> TextBlock {
    let (w, h) = (area.width() as f64, area.height() as f64);
    let mut size = px;
    for step in 0..=SHRINK_STEPS {
        let lines = wrap(face, size, paragraphs, w);
        let lh = size * LINE_SPACING;
        let fits_w = lines.iter().all(|l| l.indent + measure(face, size, &l.text) <= w);
        if fits_w && lines.len() as f64 * lh <= h + 1e-9 {
            return TextBlock {
                face,
                px: size,
                lines,
                line_height: lh,
            };
        }
        if step < SHRINK_STEPS {
            size *= SHRINK_STEP;
        }
    }
    let lh = size * LINE_SPACING;
    let max_lines = ((h / lh).floor() as usize).max(1);
    let mut lines = wrap(face, size, paragraphs, w);
    if lines.len() > max_lines {
        lines.truncate(max_lines);
        if let Some(last) = lines.last_mut() {
            last.text = with_ellipsis(face, size, &last.text, w - last.indent);
        }
    }
    TextBlock {
        face,
        px: size,
        lines,
        line_height: lh,
    }
}

/// Draws a fitted block top-aligned (or vertically centered) in `area`.
pub fn draw_block(painter: &mut Painter<'_>, block: &TextBlock, area: PixelBox, align: Align, center_v: bool, color: Rgba<u8>) {
    let total = block.lines.len() as f64 * block.line_height;
    let top = if center_v {
        area.y0 as f64 + ((area.height() as f64 - total) / 2.0).max(0.0)
    } else {
        area.y0 as f64
    };
    let asc = ascent(block.face, block.px);
    let leading = (block.line_height - (asc - descent(block.face, block.px))) / 2.0;
    for (i, line) in block.lines.iter().enumerate() {
        let lw = measure(block.face, block.px, &line.text) + line.indent;
        let x = match align {
            Align::Left => area.x0 as f64,
            Align::Center => area.x0 as f64 + (area.width() as f64 - lw) / 2.0,
            Align::Right => area.x1 as f64 - lw,
        } + line.indent;
        let baseline = top + i as f64 * block.line_height + leading + asc;
        draw_line(painter, block.face, block.px, x.round(), baseline.round(), &line.text, color);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use image::RgbaImage;

    #[test]
    fn wrap_respects_width() {
        let paras = [Paragraph::plain("the quick brown fox jumps over the lazy dog again and again")];
        let lines = wrap(Face::Sans, 20.0, &paras, 150.0);
        assert!(lines.len() > 2);
        for l in &lines {
            assert!(measure(Face::Sans, 20.0, &l.text) <= 150.0);
        }
    }

    #[test]
    fn fit_shrinks_then_ellipsizes() {
        let long = "word ".repeat(200);
        let area = PixelBox::new(0, 0, 200, 60);
        let b = fit_block(Face::Sans, 24.0, &[Paragraph::plain(long)], area);
        assert!((b.px - 24.0 * 0.85 * 0.85).abs() < 1e-9);
        assert!(b.lines.last().unwrap().text.ends_with(ELLIPSIS));
        assert!(b.lines.len() as f64 * b.line_height <= 60.0 + b.line_height);
    }

    #[test]
    fn drawn_text_stays_in_area() {
        let mut img = RgbaImage::from_pixel(300, 120, Rgba([255, 255, 255, 255]));
        let area = PixelBox::new(10, 10, 290, 110);
        let block = fit_block(
            Face::Serif,
            28.0,
            &[Paragraph::bullet("Hello world, a bulleted line of text")],
            area,
        );
        let mut p = Painter::new(&mut img, area);
        draw_block(&mut p, &block, area, Align::Left, false, Rgba([0, 0, 0, 255]));
        let ink = p.ink().get().unwrap();
        assert!(area.contains_box(&ink));
    }
}
