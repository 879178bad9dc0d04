//! Native grid rendering for table payloads.

use crate::deck::model::Align;
use crate::geometry::PixelBox;
use crate::raster::Painter;
use crate::render::fonts::Face;
use crate::render::text;
use image::{Rgba, RgbaImage};

const RULE: Rgba<u8> = Rgba([70, 70, 80, 255]);
const HEADER_FILL: Rgba<u8> = Rgba([225, 230, 240, 255]);
const BODY_FILL: Rgba<u8> = Rgba([255, 255, 255, 255]);
const CELL_TEXT: Rgba<u8> = Rgba([30, 30, 35, 255]);

pub type Grid = Vec<Vec<String>>;

/// Strips one-argument formatting commands, keeping their argument.
fn strip_formatting(cell: &str) -> String {
    let mut s = cell.to_string();
    for cmd in ["\\textbf{", "\\textit{", "\\emph{", "\\texttt{", "\\mathbf{", "\\text{"] {
        while let Some(start) = s.find(cmd) {
            let open = start + cmd.len();
            let mut depth = 1;
            let mut end = None;
            for (i, c) in s[open..].char_indices() {
                match c {
                    '{' => depth += 1,
                    '}' => {
                        depth -= 1;
                        if depth == 0 {
                            end = Some(open + i);
                            break;
                        }
                    }
                    _ => {}
                }
            }
            let Some(end) = end else { break };
            s = format!("{}{}{}", &s[..start], &s[open..end], &s[end + 1..]);
        }
    }
    s.replace("\\&", "&").replace("\\%", "%").replace('$', "").trim().to_string()
}

/// Splits on `sep` unless it is escaped with a backslash.
fn split_unescaped<'a>(s: &'a str, sep: &str) -> Vec<&'a str> {
    let mut out = Vec::new();
    let mut last = 0;
    let mut i = 0;
    let bytes = s.as_bytes();
    while i + sep.len() <= s.len() {
        if bytes[i..].starts_with(sep.as_bytes()) && (i == 0 || bytes[i - 1] != b'\\' || sep == "\\\\") {
            out.push(&s[last..i]);
            i += sep.len();
            last = i;
        } else {
            i += 1;
        }
    }
    out.push(&s[last..]);
    out
}

/// Cell texts from a tabular body: rows split on `\\`, cells on `&`.
/// Rule commands and the environment wrapper are dropped.
pub fn parse_table_markup(src: &str) -> Option<Grid> {
    let mut body = src.to_string();
    if let Some(pos) = body.find("\\begin{tabular}") {
        body = body[pos + "\\begin{tabular}".len()..].to_string();
        // Column spec.
        if body.trim_start().starts_with('{') {
            let start = body.find('{').expect("checked");
            let mut depth = 0;
            for (i, c) in body[start..].char_indices() {
                match c {
                    '{' => depth += 1,
                    '}' => {
                        depth -= 1;
                        if depth == 0 {
                            body = body[start + i + 1..].to_string();
                            break;
                        }
                    }
                    _ => {}
                }
            }
        }
    }
    if let Some(pos) = body.find("\\end{tabular}") {
        body.truncate(pos);
    }
    for rule in ["\\hline", "\\toprule", "\\midrule", "\\bottomrule", "\\centering"] {
        body = body.replace(rule, "");
    }
    let mut grid: Grid = Vec::new();
    for row in split_unescaped(&body, "\\\\") {
        let row = row.trim();
        if row.is_empty() || row.starts_with("\\cline") {
            continue;
        }
        let cells: Vec<String> = split_unescaped(row, "&").into_iter().map(strip_formatting).collect();
        if cells.iter().all(String::is_empty) {
            continue;
        }
        grid.push(cells);
    }
    if grid.is_empty() {
        return None;
    }
    let cols = grid.iter().map(Vec::len).max().unwrap_or(0);
    for row in &mut grid {
        row.resize(cols, String::new());
    }
    Some(grid)
}

/// A JSON array of rows is accepted as a declarative grid; anything else
/// is read as tabular markup.
pub fn parse_table(src: &str) -> Option<Grid> {
    let t = src.trim();
    if t.starts_with('[') {
        let rows: Vec<Vec<serde_json::Value>> = serde_json::from_str(t).ok()?;
        let grid: Grid = rows
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|v| match v {
                        serde_json::Value::String(s) => s,
                        other => other.to_string(),
                    })
                    .collect()
            })
            .collect();
        let cols = grid.iter().map(Vec::len).max().unwrap_or(0);
        if grid.is_empty() || cols == 0 {
            return None;
        }
        return Some(
            grid.into_iter()
                .map(|mut r| {
                    r.resize(cols, String::new());
                    r
                })
                .collect(),
        );
    }
    parse_table_markup(t)
}

#[derive(Debug, Clone)]
pub struct TableRender {
    pub image: RgbaImage,
    pub grid: Grid,
    pub warning: Option<String>,
}

/// Ruled grid with an emphasized header row; unparsable bodies become a
/// 2x2 placeholder grid and a warning.
pub fn fallback_table_render(src: &str, w: u32, h: u32) -> TableRender {
    let (grid, warning) = match parse_table(src) {
        Some(g) => (g, None),
        None => (
            vec![vec![String::new(); 2]; 2],
            Some("table body could not be parsed; placeholder grid drawn".to_string()),
        ),
    };
    TableRender {
        image: draw_grid(&grid, w, h),
        grid,
        warning,
    }
}

pub fn draw_grid(grid: &Grid, w: u32, h: u32) -> RgbaImage {
    let mut img = RgbaImage::new(w.max(1), h.max(1));
    let rows = grid.len().max(1);
    let cols = grid.iter().map(Vec::len).max().unwrap_or(1).max(1);
    let full = PixelBox::of_image(img.width(), img.height());
    let row_h = full.height() as f64 / rows as f64;
    let col_w = full.width() as f64 / cols as f64;
    let px = (row_h * 0.5).min(col_w * 0.3).clamp(6.0, 32.0);
    let edge = |i: usize, step: f64, origin: i64| origin + (step * i as f64).round() as i64;
    let mut p = Painter::full(&mut img);
    for r in 0..rows {
        let y0 = edge(r, row_h, 0);
        let y1 = edge(r + 1, row_h, 0);
        let fill = if r == 0 { HEADER_FILL } else { BODY_FILL };
        p.fill_box(PixelBox::new(0, y0, full.x1, y1), fill);
        for c in 0..cols {
            let cell = PixelBox::new(edge(c, col_w, 0), y0, edge(c + 1, col_w, 0), y1);
            let inner = cell.inset(((px * 0.3) as i64).max(2));
            let txt = grid.get(r).and_then(|row| row.get(c)).cloned().unwrap_or_default();
            if txt.is_empty() || inner.is_empty() {
                continue;
            }
            let face = if r == 0 { Face::SansBold } else { Face::Sans };
            let block = text::fit_block(face, px, &[text::Paragraph::plain(txt)], inner);
            p.with_clip(inner, |p| text::draw_block(p, &block, inner, Align::Center, true, CELL_TEXT));
        }
    }
    let thick = if px > 14.0 { 2 } else { 1 };
    for r in 0..=rows {
        let y = edge(r, row_h, 0).min(full.y1 - thick);
        let t = if r == 1 { thick + 1 } else { thick };
        p.fill_box(PixelBox::new(0, y, full.x1, y + t), RULE);
    }
    for c in 0..=cols {
        let x = edge(c, col_w, 0).min(full.x1 - thick);
        p.fill_box(PixelBox::new(x, 0, x + thick, full.y1), RULE);
    }
    img
}
