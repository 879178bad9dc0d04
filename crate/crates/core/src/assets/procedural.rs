//! Seeded procedural rasters: photo-like scenes, logos and placeholders.

use crate::deck::model::Align;
use crate::geometry::PixelBox;
use crate::raster::Painter;
use crate::render::fonts::Face;
use crate::render::text;
use crate::rng;
use image::{Rgba, RgbaImage};
use rand::Rng;

fn hsv(h: f64, s: f64, v: f64) -> Rgba<u8> {
    let h = h.rem_euclid(360.0) / 60.0;
    let c = v * s;
    let x = c * (1.0 - (h % 2.0 - 1.0).abs());
    let (r, g, b) = match h as u32 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    let m = v - c;
    let q = |t: f64| ((t + m) * 255.0).round().clamp(0.0, 255.0) as u8;
    Rgba([q(r), q(g), q(b), 255])
}

fn jitter(c: Rgba<u8>, amount: i32, r: &mut impl Rng) -> Rgba<u8> {
    let mut out = c;
    for ch in out.0.iter_mut().take(3) {
        *ch = (*ch as i32 + r.gen_range(-amount..=amount)).clamp(0, 255) as u8;
    }
    out
}

/// Landscape-like opaque scene: graded sky, sun, layered hills and trees,
/// with per-pixel grain so it reads as a photograph rather than a chart.
pub fn photo(key: u64, w: u32, h: u32) -> RgbaImage {
    let mut r = rng::rng_from_seed(key);
    let (wf, hf) = (w as f64, h as f64);
    let sky_hue = r.gen_range(180.0..240.0);
    let dusk = rng::chance(&mut r, 0.3);
    let mut img = RgbaImage::new(w.max(1), h.max(1));
    for y in 0..img.height() {
        let t = y as f64 / hf;
        let c = if dusk {
            hsv(20.0 + 30.0 * t, 0.6, 0.95 - 0.3 * t)
        } else {
            hsv(sky_hue, 0.55 - 0.35 * t, 0.95)
        };
        for x in 0..img.width() {
            img.put_pixel(x, y, c);
        }
    }
    let mut p = Painter::full(&mut img);
    let sun_r = hf * r.gen_range(0.06..0.12);
    p.fill_ellipse(
        wf * r.gen_range(0.15..0.85),
        hf * r.gen_range(0.12..0.35),
        sun_r,
        sun_r,
        hsv(48.0, 0.5, 1.0),
    );

    let layers = r.gen_range(2..=4);
    let ground_hue = r.gen_range(70.0..140.0);
    for l in 0..layers {
        let base = hf * (0.45 + 0.15 * l as f64);
        let amp = hf * r.gen_range(0.04..0.12);
        let freq = r.gen_range(1.0..3.5);
        let phase = r.gen_range(0.0..std::f64::consts::TAU);
        let mut pts = vec![(0.0, hf)];
        let steps = 24;
        for i in 0..=steps {
            let x = wf * i as f64 / steps as f64;
            let y = base + amp * (freq * x / wf * std::f64::consts::TAU + phase).sin();
            pts.push((x, y));
        }
        pts.push((wf, hf));
        let v = 0.75 - 0.15 * l as f64;
        p.fill_polygon(&pts, hsv(ground_hue + 10.0 * l as f64, 0.5, v));
    }
    for _ in 0..r.gen_range(0..6) {
        let x = wf * r.gen_range(0.05..0.95);
        let base = hf * r.gen_range(0.7..0.95);
        let th = hf * r.gen_range(0.08..0.2);
        let tw = th * 0.45;
        p.fill_box(
            PixelBox::new(
                (x - tw * 0.08) as i64,
                (base - th * 0.25) as i64,
                (x + tw * 0.08) as i64 + 1,
                base as i64,
            ),
            Rgba([92, 64, 40, 255]),
        );
        p.fill_polygon(
            &[(x, base - th), (x - tw / 2.0, base - th * 0.2), (x + tw / 2.0, base - th * 0.2)],
            hsv(ground_hue + 20.0, 0.6, 0.35),
        );
    }
    for px in img.pixels_mut() {
        *px = jitter(*px, 6, &mut r);
    }
    img
}

const LOGO_WORDS: &[&str] = &["UNIV", "TECH", "LAB", "INST", "ACAD", "SCI"];

/// Logo on a transparent background: a badge shape with initials.
pub fn logo(key: u64, w: u32, h: u32) -> RgbaImage {
    let mut r = rng::rng_from_seed(key);
    let mut img = RgbaImage::new(w.max(1), h.max(1));
    let color = hsv(r.gen_range(0.0..360.0), 0.7, 0.6);
    let side = w.min(h) as f64;
    let (cx, cy) = (w as f64 / 2.0, h as f64 / 2.0);
    let rad = side * 0.45;
    let mut p = Painter::full(&mut img);
    match rng::index(&mut r, 3) {
        0 => p.fill_ellipse(cx, cy, rad, rad, color),
        1 => {
            let b = PixelBox::new((cx - rad) as i64, (cy - rad) as i64, (cx + rad) as i64, (cy + rad) as i64);
            p.fill_rounded(b, (rad * 0.3) as i64, color);
        }
        _ => {
            let pts: Vec<(f64, f64)> = (0..6)
                .map(|i| {
                    let a = std::f64::consts::PI / 3.0 * i as f64 + std::f64::consts::PI / 6.0;
                    (cx + rad * a.cos(), cy + rad * a.sin())
                })
                .collect();
            p.fill_polygon(&pts, color);
        }
    }
    let word = rng::pick(&mut r, LOGO_WORDS);
    let inner = PixelBox::new(
        (cx - rad * 0.7) as i64,
        (cy - rad * 0.5) as i64,
        (cx + rad * 0.7) as i64,
        (cy + rad * 0.5) as i64,
    );
    let block = text::fit_block(Face::SansBold, rad * 0.5, &[text::Paragraph::plain(*word)], inner);
    p.with_clip(inner, |p| {
        text::draw_block(p, &block, inner, Align::Center, true, Rgba([255, 255, 255, 255]))
    });
    img
}

/// Neutral opaque stand-in: light card, border and a diagonal cross.
pub fn placeholder(w: u32, h: u32) -> RgbaImage {
    let mut img = RgbaImage::from_pixel(w.max(1), h.max(1), Rgba([236, 236, 240, 255]));
    let full = PixelBox::of_image(img.width(), img.height());
    let mut p = Painter::full(&mut img);
    let ink = Rgba([160, 160, 170, 255]);
    p.stroke_box(full, 2, ink);
    let (wf, hf) = (w as f64 - 1.0, h as f64 - 1.0);
    p.line(0.0, 0.0, wf, hf, 1.0, ink);
    p.line(0.0, hf, wf, 0.0, 1.0, ink);
    img
}
