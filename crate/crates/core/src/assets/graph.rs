//! DOT subset (nodes, edges, labels) and a layered drawing of it.

use crate::geometry::PixelBox;
use crate::raster::Painter;
use crate::render::fonts::Face;
use crate::render::text;
use crate::rng;
use image::{Rgba, RgbaImage};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Graph {
    pub directed: bool,
    pub left_to_right: bool,
    /// Node id and label, in first-appearance order.
    pub nodes: Vec<(String, String)>,
    pub edges: Vec<Edge>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub label: Option<String>,
}

impl Graph {
    fn node(&mut self, id: &str) -> usize {
        match self.nodes.iter().position(|(n, _)| n == id) {
            Some(i) => i,
            None => {
                self.nodes.push((id.to_string(), id.to_string()));
                self.nodes.len() - 1
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Id(String),
    Arrow,
    Sym(char),
}

fn tokenize(src: &str) -> Vec<Tok> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '/' && chars.get(i + 1) == Some(&'/') || c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
        } else if c == '/' && chars.get(i + 1) == Some(&'*') {
            i += 2;
            while i + 1 < chars.len() && !(chars[i] == '*' && chars[i + 1] == '/') {
                i += 1;
            }
            i += 2;
        } else if c == '-' && matches!(chars.get(i + 1), Some('>') | Some('-')) {
            out.push(Tok::Arrow);
            i += 2;
        } else if c == '"' {
            let mut s = String::new();
            i += 1;
            while i < chars.len() && chars[i] != '"' {
                if chars[i] == '\\' && i + 1 < chars.len() {
                    i += 1;
                    s.push(match chars[i] {
                        'n' => ' ',
                        other => other,
                    });
                } else {
                    s.push(chars[i]);
                }
                i += 1;
            }
            i += 1;
            out.push(Tok::Id(s));
        } else if c.is_alphanumeric() || c == '_' || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '.') {
                i += 1;
            }
            out.push(Tok::Id(chars[start..i].iter().collect()));
        } else {
            out.push(Tok::Sym(c));
            i += 1;
        }
    }
    out
}

fn attrs(toks: &[Tok], i: &mut usize) -> BTreeMap<String, String> {
    let mut map = BTreeMap::new();
    while toks.get(*i) == Some(&Tok::Sym('[')) {
        *i += 1;
        while *i < toks.len() && toks[*i] != Tok::Sym(']') {
            if let (Some(Tok::Id(k)), Some(Tok::Sym('=')), Some(Tok::Id(v))) = (toks.get(*i), toks.get(*i + 1), toks.get(*i + 2)) {
                map.insert(k.to_lowercase(), v.clone());
                *i += 3;
            } else {
                *i += 1;
            }
        }
        *i += 1;
    }
    map
}

/// Parses the supported subset; anything else is skipped.
pub fn parse_dot(src: &str) -> Result<Graph, String> {
    let toks = tokenize(src);
    let mut g = Graph::default();
    let mut i = 0;
    while i < toks.len() && toks[i] != Tok::Sym('{') {
        if let Tok::Id(w) = &toks[i] {
            if w.eq_ignore_ascii_case("digraph") {
                g.directed = true;
            }
        }
        i += 1;
    }
    if i == toks.len() {
        return Err("no graph body".into());
    }
    i += 1;
    while i < toks.len() {
        match &toks[i] {
            Tok::Sym('}') => break,
            Tok::Sym(_) | Tok::Arrow => i += 1,
            Tok::Id(id) => {
                let lower = id.to_lowercase();
                if matches!(lower.as_str(), "graph" | "node" | "edge") && toks.get(i + 1) == Some(&Tok::Sym('[')) {
                    i += 1;
                    let a = attrs(&toks, &mut i);
                    if lower == "graph" && a.get("rankdir").is_some_and(|d| d.eq_ignore_ascii_case("LR")) {
                        g.left_to_right = true;
                    }
                    continue;
                }
                if toks.get(i + 1) == Some(&Tok::Sym('=')) {
                    if lower == "rankdir" && matches!(toks.get(i + 2), Some(Tok::Id(d)) if d.eq_ignore_ascii_case("LR")) {
                        g.left_to_right = true;
                    }
                    i += 3;
                    continue;
                }
                let mut chain = vec![g.node(id)];
                i += 1;
                while toks.get(i) == Some(&Tok::Arrow) {
                    match toks.get(i + 1) {
                        Some(Tok::Id(next)) => {
                            chain.push(g.node(next));
                            i += 2;
                        }
                        _ => return Err("edge without target".into()),
                    }
                }
                let a = attrs(&toks, &mut i);
                if chain.len() == 1 {
                    if let Some(label) = a.get("label") {
                        g.nodes[chain[0]].1 = label.clone();
                    }
                } else {
                    for w in chain.windows(2) {
                        g.edges.push(Edge {
                            from: w[0],
                            to: w[1],
                            label: a.get("label").cloned(),
                        });
                    }
                }
            }
        }
    }
    if g.nodes.is_empty() {
        return Err("graph has no nodes".into());
    }
    Ok(g)
}

/// Layer index per node by longest path from the sources, ignoring edges
/// that close a cycle.
pub fn layers(g: &Graph) -> Vec<usize> {
    let n = g.nodes.len();
    let mut layer = vec![0usize; n];
    // Bellman-Ford style relaxation bounded by n rounds keeps cycles finite.
    for _ in 0..n {
        let mut changed = false;
        for e in &g.edges {
            if e.from != e.to && layer[e.to] < layer[e.from] + 1 && layer[e.from] + 1 < n {
                layer[e.to] = layer[e.from] + 1;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    layer
}

const INK: Rgba<u8> = Rgba([45, 45, 55, 255]);
const NODE_FILL: [Rgba<u8>; 4] = [
    Rgba([214, 230, 245, 255]),
    Rgba([226, 240, 217, 255]),
    Rgba([252, 228, 214, 255]),
    Rgba([235, 224, 245, 255]),
];

/// Draws the graph onto a transparent canvas.
pub fn render_graph(g: &Graph, w: u32, h: u32) -> RgbaImage {
    let mut img = RgbaImage::new(w.max(1), h.max(1));
    let layer = layers(g);
    let n_layers = layer.iter().max().map_or(1, |m| m + 1);
    let mut rows: Vec<Vec<usize>> = vec![Vec::new(); n_layers];
    for (i, l) in layer.iter().enumerate() {
        rows[*l].push(i);
    }
    let widest = rows.iter().map(Vec::len).max().unwrap_or(1).max(1);
    let (wf, hf) = (w as f64, h as f64);
    let (along, across) = if g.left_to_right { (wf, hf) } else { (hf, wf) };
    let slot_along = along / n_layers as f64;
    let slot_across = across / widest as f64;
    let box_along = (slot_along * 0.5).min(across * 0.3);
    let box_across = slot_across * 0.8;
    let (bw, bh) = if g.left_to_right {
        (box_along, box_across.min(box_along))
    } else {
        (box_across, box_along)
    };
    let px = (bh * 0.38).clamp(6.0, 28.0);

    let mut centers = vec![(0.0, 0.0); g.nodes.len()];
    for (l, row) in rows.iter().enumerate() {
        let offset = (widest - row.len()) as f64 * slot_across / 2.0;
        for (k, &node) in row.iter().enumerate() {
            let a = (l as f64 + 0.5) * slot_along;
            let c = offset + (k as f64 + 0.5) * slot_across;
            centers[node] = if g.left_to_right { (a, c) } else { (c, a) };
        }
    }
    let mut p = Painter::full(&mut img);
    let thick = (px / 8.0).max(1.0).round();
    for e in &g.edges {
        if e.from == e.to {
            continue;
        }
        let (x0, y0) = centers[e.from];
        let (x1, y1) = centers[e.to];
        let (dx, dy) = (x1 - x0, y1 - y0);
        let len = dx.hypot(dy).max(1e-9);
        let (ux, uy) = (dx / len, dy / len);
        // Clip the segment to the node boxes.
        let t_box = |ux: f64, uy: f64| {
            let tx = if ux.abs() > 1e-9 { bw / 2.0 / ux.abs() } else { f64::INFINITY };
            let ty = if uy.abs() > 1e-9 { bh / 2.0 / uy.abs() } else { f64::INFINITY };
            tx.min(ty)
        };
        let t = t_box(ux, uy);
        let (sx, sy) = (x0 + ux * t, y0 + uy * t);
        let (ex, ey) = (x1 - ux * t, y1 - uy * t);
        p.line(sx, sy, ex, ey, thick, INK);
        if g.directed {
            let head = (px * 0.6).max(4.0);
            let (nx, ny) = (-uy, ux);
            p.fill_polygon(
                &[
                    (ex, ey),
                    (ex - ux * head + nx * head * 0.5, ey - uy * head + ny * head * 0.5),
                    (ex - ux * head - nx * head * 0.5, ey - uy * head - ny * head * 0.5),
                ],
                INK,
            );
        }
        if let Some(label) = &e.label {
            let lpx = px * 0.7;
            let (mx, my) = ((sx + ex) / 2.0, (sy + ey) / 2.0);
            text::draw_line(&mut p, Face::Sans, lpx, (mx + 4.0).round(), (my - 2.0).round(), label, INK);
        }
    }
    for (i, (_, label)) in g.nodes.iter().enumerate() {
        let (cx, cy) = centers[i];
        let b = PixelBox::new(
            (cx - bw / 2.0).round() as i64,
            (cy - bh / 2.0).round() as i64,
            (cx + bw / 2.0).round() as i64,
            (cy + bh / 2.0).round() as i64,
        );
        let r = (bh / 4.0) as i64;
        p.fill_rounded(b, r, INK);
        p.fill_rounded(b.inset(thick as i64), (r - thick as i64).max(0), NODE_FILL[i % NODE_FILL.len()]);
        let inner = b.inset((thick as i64) + 2);
        let block = text::fit_block(Face::Sans, px, &[text::Paragraph::plain(label.clone())], inner);
        p.with_clip(inner, |p| {
            text::draw_block(p, &block, inner, crate::deck::model::Align::Center, true, INK)
        });
    }
    img
}

pub fn render_dot(src: &str, w: u32, h: u32) -> Result<RgbaImage, String> {
    parse_dot(src).map(|g| render_graph(&g, w, h))
}

const STUB_LABELS: &[&str] = &[
    "Input",
    "Preprocess",
    "Features",
    "Model",
    "Loss",
    "Update",
    "Output",
    "Store",
    "Query",
    "Cache",
    "Split",
    "Merge",
    "Encoder",
    "Decoder",
    "Root",
    "Leaf",
];

/// Random layered diagram on an opaque white card, keyed by `key`.
pub fn stub_diagram(key: u64, w: u32, h: u32) -> RgbaImage {
    let mut r = rng::rng_from_seed(key);
    let n = 4 + rng::index(&mut r, 4);
    let mut pool: Vec<&str> = STUB_LABELS.to_vec();
    let mut g = Graph {
        directed: true,
        left_to_right: rng::chance(&mut r, 0.4),
        ..Graph::default()
    };
    for i in 0..n {
        let label = pool.remove(rng::index(&mut r, pool.len()));
        g.nodes.push((format!("n{i}"), label.to_string()));
    }
    for to in 1..n {
        let from = rng::index(&mut r, to);
        g.edges.push(Edge { from, to, label: None });
    }
    let mut card = RgbaImage::from_pixel(w, h, Rgba([255, 255, 255, 255]));
    let drawn = render_graph(&g, w.saturating_sub(16).max(1), h.saturating_sub(16).max(1));
    image::imageops::overlay(&mut card, &drawn, 8, 8);
    let mut p = Painter::full(&mut card);
    p.stroke_box(PixelBox::of_image(w, h), 2, Rgba([200, 200, 205, 255]));
    card
}
