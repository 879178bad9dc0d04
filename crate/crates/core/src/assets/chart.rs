//! Bar and line charts from a declarative spec.

use crate::deck::model::{Align, ChartKind, ChartSeries, ChartSpec};
use crate::geometry::PixelBox;
use crate::raster::Painter;
use crate::render::fonts::Face;
use crate::render::text;
use crate::rng;
use image::{Rgba, RgbaImage};

const AXIS: Rgba<u8> = Rgba([60, 60, 70, 255]);
const GRID: Rgba<u8> = Rgba([215, 215, 222, 255]);
const PALETTE: [Rgba<u8>; 6] = [
    Rgba([31, 119, 180, 255]),
    Rgba([255, 127, 14, 255]),
    Rgba([44, 160, 44, 255]),
    Rgba([214, 39, 40, 255]),
    Rgba([148, 103, 189, 255]),
    Rgba([140, 86, 75, 255]),
];

/// Rounds the data maximum up to 1, 2 or 5 times a power of ten.
fn nice_ceiling(v: f64) -> f64 {
    if v <= 0.0 {
        return 1.0;
    }
    let mag = 10f64.powf(v.log10().floor());
    for m in [1.0, 2.0, 5.0, 10.0] {
        if v <= m * mag + 1e-12 {
            return m * mag;
        }
    }
    10.0 * mag
}

fn tick_label(v: f64) -> String {
    if v.fract().abs() < 1e-9 {
        format!("{}", v as i64)
    } else {
        format!("{v:.1}")
    }
}

/// Draws the chart on a transparent canvas; `seed` rotates the palette.
pub fn render_chart(spec: &ChartSpec, w: u32, h: u32, seed: u64) -> RgbaImage {
    let mut img = RgbaImage::new(w.max(1), h.max(1));
    let (wf, hf) = (w as f64, h as f64);
    let px = (hf / 22.0).clamp(7.0, 18.0);
    let shift = (seed % PALETTE.len() as u64) as usize;
    let color = |i: usize| PALETTE[(i + shift) % PALETTE.len()];

    let lo = spec.series.iter().flat_map(|s| s.values.iter().copied()).fold(0.0f64, f64::min);
    let hi = spec.series.iter().flat_map(|s| s.values.iter().copied()).fold(0.0f64, f64::max);
    let top = nice_ceiling(hi);
    let bottom = if lo < 0.0 { -nice_ceiling(-lo) } else { 0.0 };

    let label_w = [bottom, top]
        .iter()
        .map(|v| text::measure(Face::Sans, px, &tick_label(*v)))
        .fold(0.0, f64::max);
    let legend_h = px * 1.6;
    let y_title = if spec.y_label.is_empty() { 0.0 } else { px * 1.4 };
    let x_title = if spec.x_label.is_empty() { 0.0 } else { px * 1.4 };
    let plot = PixelBox::new(
        (y_title + label_w + px * 0.8).round() as i64,
        (legend_h + px * 0.4).round() as i64,
        (wf - px).round() as i64,
        (hf - px * 1.6 - x_title).round() as i64,
    );
    if plot.width() < 8 || plot.height() < 8 {
        return img;
    }
    let span = (top - bottom).max(1e-9);
    let y_of = |v: f64| plot.y1 as f64 - (v - bottom) / span * plot.height() as f64;

    let mut p = Painter::full(&mut img);
    let ticks = 4;
    for t in 0..=ticks {
        let v = bottom + span * t as f64 / ticks as f64;
        let y = y_of(v).round();
        if t > 0 {
            p.line(plot.x0 as f64, y, plot.x1 as f64 - 1.0, y, 1.0, GRID);
        }
        let label = tick_label(v);
        let lw = text::measure(Face::Sans, px, &label);
        let base = y + text::ascent(Face::Sans, px) / 2.5;
        text::draw_line(
            &mut p,
            Face::Sans,
            px,
            (plot.x0 as f64 - lw - px * 0.4).round(),
            base.round(),
            &label,
            AXIS,
        );
    }

    let n = spec.categories.len().max(1);
    let slot = plot.width() as f64 / n as f64;
    match spec.kind {
        ChartKind::Bar => draw_bars(&mut p, &spec.series, plot, slot, &y_of, &color),
        ChartKind::Line => draw_lines(&mut p, &spec.series, plot, slot, &y_of, &color, px),
    }
    p.line(plot.x0 as f64, plot.y0 as f64, plot.x0 as f64, plot.y1 as f64, 2.0, AXIS);
    let zero = y_of(0.0).round();
    p.line(plot.x0 as f64, zero, plot.x1 as f64 - 1.0, zero, 2.0, AXIS);

    let cat_px = px * 0.9;
    for (i, c) in spec.categories.iter().enumerate() {
        let cell = PixelBox::new(
            (plot.x0 as f64 + slot * i as f64).round() as i64,
            plot.y1 + 3,
            (plot.x0 as f64 + slot * (i + 1) as f64).round() as i64,
            plot.y1 + 3 + (cat_px * 1.3).ceil() as i64,
        );
        let block = text::fit_block(Face::Sans, cat_px, &[text::Paragraph::plain(c.clone())], cell);
        let first = block.lines.first().cloned();
        let block = text::TextBlock {
            lines: first.into_iter().collect(),
            ..block
        };
        p.with_clip(cell, |p| text::draw_block(p, &block, cell, Align::Center, false, AXIS));
    }
    if !spec.x_label.is_empty() {
        let area = PixelBox::new(plot.x0, (hf - x_title - px * 0.2).round() as i64, plot.x1, h as i64);
        let block = text::fit_block(Face::Sans, px, &[text::Paragraph::plain(spec.x_label.clone())], area);
        p.with_clip(area, |p| text::draw_block(p, &block, area, Align::Center, false, AXIS));
    }
    if !spec.y_label.is_empty() {
        let tw = text::measure(Face::Sans, px, &spec.y_label).ceil() as u32 + 2;
        let th = (px * 1.3).ceil() as u32;
        let mut strip = RgbaImage::new(tw, th);
        text::draw_line(
            &mut Painter::full(&mut strip),
            Face::Sans,
            px,
            1.0,
            (px).round(),
            &spec.y_label,
            AXIS,
        );
        let rotated = image::imageops::rotate270(&strip);
        let mid = (plot.y0 + plot.y1) / 2;
        let dest = PixelBox::new(0, mid - tw as i64 / 2, th as i64, mid - tw as i64 / 2 + tw as i64);
        p.blit(&rotated, dest);
    }

    // Legend along the top.
    let mut x = plot.x0 as f64;
    let sw = px * 0.9;
    for (i, s) in spec.series.iter().enumerate() {
        let lw = text::measure(Face::Sans, px, &s.name);
        if x + sw + px * 0.4 + lw > wf {
            break;
        }
        let y = px * 0.3;
        p.fill_box(
            PixelBox::new(x.round() as i64, y.round() as i64, (x + sw).round() as i64, (y + sw).round() as i64),
            color(i),
        );
        x += sw + px * 0.4;
        text::draw_line(&mut p, Face::Sans, px, x.round(), (y + sw * 0.85).round(), &s.name, AXIS);
        x += lw + px;
    }
    img
}

fn draw_bars(
    p: &mut Painter<'_>,
    series: &[ChartSeries],
    plot: PixelBox,
    slot: f64,
    y_of: &dyn Fn(f64) -> f64,
    color: &dyn Fn(usize) -> Rgba<u8>,
) {
    let k = series.len().max(1) as f64;
    let group = slot * 0.75;
    let bar = group / k;
    for (si, s) in series.iter().enumerate() {
        for (ci, v) in s.values.iter().enumerate() {
            let x0 = plot.x0 as f64 + slot * ci as f64 + (slot - group) / 2.0 + bar * si as f64;
            let (ya, yb) = (y_of(*v), y_of(0.0));
            let b = PixelBox::new(
                x0.round() as i64,
                ya.min(yb).round() as i64,
                (x0 + bar).round() as i64 - 1,
                ya.max(yb).round() as i64,
            );
            p.fill_box(b, color(si));
        }
    }
}

fn draw_lines(
    p: &mut Painter<'_>,
    series: &[ChartSeries],
    plot: PixelBox,
    slot: f64,
    y_of: &dyn Fn(f64) -> f64,
    color: &dyn Fn(usize) -> Rgba<u8>,
    px: f64,
) {
    let thick = (px / 6.0).max(2.0).round();
    for (si, s) in series.iter().enumerate() {
        let pts: Vec<(f64, f64)> = s
            .values
            .iter()
            .enumerate()
            .map(|(ci, v)| (plot.x0 as f64 + slot * (ci as f64 + 0.5), y_of(*v)))
            .collect();
        for w in pts.windows(2) {
            p.line(w[0].0, w[0].1, w[1].0, w[1].1, thick, color(si));
        }
        for (x, y) in &pts {
            p.fill_ellipse(*x, *y, thick * 1.5, thick * 1.5, color(si));
        }
    }
}

/// Stand-in drawn when a chart cannot be compiled: four bars and axes, so
/// the element still looks like a chart.
pub fn placeholder_chart(key: u64, w: u32, h: u32) -> RgbaImage {
    let mut r = rng::rng_from_seed(key);
    let spec = ChartSpec {
        kind: ChartKind::Bar,
        x_label: String::new(),
        y_label: String::new(),
        categories: (1..=4).map(|i| i.to_string()).collect(),
        series: vec![ChartSeries {
            name: "n/a".into(),
            values: (0..4).map(|_| (rng::unit::<f64, _>(&mut r) * 9.0 + 1.0).round()).collect(),
        }],
    };
    render_chart(&spec, w, h, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raster::opaque_bounds;

    fn spec(kind: ChartKind) -> ChartSpec {
        ChartSpec {
            kind,
            x_label: "Year".into(),
            y_label: "Count".into(),
            categories: ["A", "B", "C", "D", "E"].iter().map(|s| s.to_string()).collect(),
            series: (0..3)
                .map(|i| ChartSeries {
                    name: format!("S{i}"),
                    values: (0..5).map(|j| (i * 5 + j) as f64).collect(),
                })
                .collect(),
        }
    }

    #[test]
    fn nice_ceilings() {
        assert_eq!(nice_ceiling(7.0), 10.0);
        assert_eq!(nice_ceiling(14.0), 20.0);
        assert_eq!(nice_ceiling(0.3), 0.5);
        assert_eq!(nice_ceiling(0.0), 1.0);
    }

    #[test]
    fn both_kinds_draw_deterministically() {
        for kind in [ChartKind::Bar, ChartKind::Line] {
            let a = render_chart(&spec(kind), 480, 320, 3);
            assert_eq!(a, render_chart(&spec(kind), 480, 320, 3));
            let b = opaque_bounds(&a).unwrap();
            assert!(b.width() > 300 && b.height() > 200, "{kind:?} {b:?}");
        }
    }

    #[test]
    fn bars_use_series_colors() {
        let img = render_chart(&spec(ChartKind::Bar), 480, 320, 0);
        for c in &PALETTE[..3] {
            assert!(img.pixels().any(|p| p == c));
        }
    }

    #[test]
    fn tiny_canvas_does_not_panic() {
        render_chart(&spec(ChartKind::Line), 5, 5, 0);
        placeholder_chart(1, 3, 2);
    }
}
