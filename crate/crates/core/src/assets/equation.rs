//! Typesetting for a small math-markup subset: symbols, scripts, fractions
//! and square roots. Letters are italic serif, everything else upright.

use crate::raster::Painter;
use crate::render::fonts::{self, Face};
use crate::render::text;
use ab_glyph::Font;
use image::{Rgba, RgbaImage};

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Char(char),
    /// Upright run, e.g. `\text{...}` or an operator name.
    Word(String),
    /// Large operator such as a sum sign.
    Big(char),
    Row(Vec<Node>),
    Scripts {
        base: Box<Node>,
        sup: Option<Box<Node>>,
        sub: Option<Box<Node>>,
    },
    Frac(Box<Node>, Box<Node>),
    Sqrt(Box<Node>),
    Space(f64),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Cmd(String),
    Open,
    Close,
    Sup,
    Sub,
    Ch(char),
}

fn tokenize(src: &str) -> Vec<Tok> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        i += 1;
        match c {
            '\\' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_alphabetic() {
                    i += 1;
                }
                if i == start && i < chars.len() {
                    i += 1;
                }
                out.push(Tok::Cmd(chars[start..i].iter().collect()));
            }
            '{' => out.push(Tok::Open),
            '}' => out.push(Tok::Close),
            '^' => out.push(Tok::Sup),
            '_' => out.push(Tok::Sub),
            c if c.is_whitespace() => {}
            c => out.push(Tok::Ch(c)),
        }
    }
    out
}

fn symbol(name: &str) -> Option<char> {
    Some(match name {
        "alpha" => 'α',
        "beta" => 'β',
        "gamma" => 'γ',
        "delta" => 'δ',
        "epsilon" | "varepsilon" => 'ε',
        "zeta" => 'ζ',
        "eta" => 'η',
        "theta" => 'θ',
        "kappa" => 'κ',
        "lambda" => 'λ',
        "mu" => 'μ',
        "nu" => 'ν',
        "xi" => 'ξ',
        "pi" => 'π',
        "rho" => 'ρ',
        "sigma" => 'σ',
        "tau" => 'τ',
        "phi" | "varphi" => 'φ',
        "chi" => 'χ',
        "psi" => 'ψ',
        "omega" => 'ω',
        "Gamma" => 'Γ',
        "Delta" => 'Δ',
        "Theta" => 'Θ',
        "Lambda" => 'Λ',
        "Pi" => 'Π',
        "Sigma" => 'Σ',
        "Phi" => 'Φ',
        "Omega" => 'Ω',
        "cdot" => '·',
        "times" => '×',
        "div" => '÷',
        "pm" => '±',
        "leq" | "le" => '≤',
        "geq" | "ge" => '≥',
        "neq" | "ne" => '≠',
        "approx" => '≈',
        "sim" => '∼',
        "equiv" => '≡',
        "propto" => '∝',
        "infty" => '∞',
        "partial" => '∂',
        "nabla" => '∇',
        "ell" => 'ℓ',
        "subset" => '⊂',
        "cup" => '∪',
        "cap" => '∩',
        "langle" => '⟨',
        "rangle" => '⟩',
        "in" => '∈',
        "forall" => '∀',
        "exists" => '∃',
        "to" | "rightarrow" => '→',
        "leftarrow" => '←',
        "Rightarrow" | "implies" => '⇒',
        "mid" => '|',
        "ldots" | "dots" | "cdots" => '…',
        "{" => '{',
        "}" => '}',
        "%" => '%',
        "&" => '&',
        "_" => '_',
        "#" => '#',
        "|" => '‖',
        _ => return None,
    })
}

fn big(name: &str) -> Option<char> {
    Some(match name {
        "sum" => '∑',
        "prod" => '∏',
        "int" => '∫',
        "oint" => '∮',
        _ => return None,
    })
}

struct Parser {
    toks: Vec<Tok>,
    i: usize,
}

impl Parser {
    fn row(&mut self) -> Node {
        let mut items = Vec::new();
        while let Some(t) = self.toks.get(self.i) {
            if *t == Tok::Close {
                break;
            }
            match t {
                Tok::Sup | Tok::Sub => {
                    let base = items.pop().unwrap_or(Node::Row(Vec::new()));
                    items.push(self.scripts(base));
                }
                _ => {
                    if let Some(atom) = self.atom() {
                        items.push(atom);
                    }
                }
            }
        }
        Node::Row(items)
    }

    fn scripts(&mut self, base: Node) -> Node {
        let (mut sup, mut sub) = (None, None);
        loop {
            match self.toks.get(self.i) {
                Some(Tok::Sup) => {
                    self.i += 1;
                    sup = self.atom().map(Box::new);
                }
                Some(Tok::Sub) => {
                    self.i += 1;
                    sub = self.atom().map(Box::new);
                }
                _ => break,
            }
        }
        Node::Scripts {
            base: Box::new(base),
            sup,
            sub,
        }
    }

    /// Braced group or a single token as one node.
    fn arg(&mut self) -> Node {
        self.atom().unwrap_or(Node::Row(Vec::new()))
    }

    fn raw_group(&mut self) -> String {
        let mut s = String::new();
        if self.toks.get(self.i) != Some(&Tok::Open) {
            return s;
        }
        self.i += 1;
        let mut depth = 1;
        while let Some(t) = self.toks.get(self.i) {
            self.i += 1;
            match t {
                Tok::Open => depth += 1,
                Tok::Close => {
                    depth -= 1;
                    if depth == 0 {
                        break;
                    }
                }
                Tok::Ch(c) => s.push(*c),
                Tok::Cmd(c) if c == " " || c == "," => s.push(' '),
                Tok::Cmd(c) => s.push_str(c),
                Tok::Sup => s.push('^'),
                Tok::Sub => s.push('_'),
            }
        }
        s
    }

    fn atom(&mut self) -> Option<Node> {
        let t = self.toks.get(self.i)?.clone();
        self.i += 1;
        Some(match t {
            Tok::Open => {
                let r = self.row();
                if self.toks.get(self.i) == Some(&Tok::Close) {
                    self.i += 1;
                }
                r
            }
            Tok::Close => return None,
            Tok::Sup | Tok::Sub => Node::Row(Vec::new()),
            Tok::Ch('&') => Node::Space(0.3),
            Tok::Ch(c) => Node::Char(c),
            Tok::Cmd(name) => match name.as_str() {
                "frac" | "dfrac" | "tfrac" => {
                    let num = self.arg();
                    let den = self.arg();
                    Node::Frac(Box::new(num), Box::new(den))
                }
                "sqrt" => {
                    if self.toks.get(self.i) == Some(&Tok::Ch('[')) {
                        while let Some(t) = self.toks.get(self.i) {
                            self.i += 1;
                            if *t == Tok::Ch(']') {
                                break;
                            }
                        }
                    }
                    Node::Sqrt(Box::new(self.arg()))
                }
                "text" | "mathrm" | "textrm" | "operatorname" | "mbox" => Node::Word(self.raw_group()),
                "mathbf" | "mathit" | "boldsymbol" | "mathcal" | "mathbb" | "hat" | "bar" | "vec" | "tilde" | "overline" => self.arg(),
                "left" | "right" | "big" | "Big" | "bigl" | "bigr" | "displaystyle" | "limits" | "nonumber" => {
                    if self.toks.get(self.i) == Some(&Tok::Ch('.')) {
                        self.i += 1;
                    }
                    Node::Row(Vec::new())
                }
                "," | ":" | ";" | " " => Node::Space(0.2),
                "quad" => Node::Space(1.0),
                "qquad" => Node::Space(2.0),
                "!" => Node::Space(-0.1),
                "\\" => Node::Space(0.6),
                "sin" | "cos" | "tan" | "log" | "ln" | "exp" | "max" | "min" | "arg" | "lim" | "det" | "Pr" | "var" | "argmax"
                | "argmin" => Node::Word(name),
                n => {
                    if let Some(c) = big(n) {
                        Node::Big(c)
                    } else if let Some(c) = symbol(n) {
                        Node::Char(c)
                    } else {
                        Node::Word(n.to_string())
                    }
                }
            },
        })
    }
}

pub fn parse_math(src: &str) -> Node {
    let mut p = Parser { toks: tokenize(src), i: 0 };
    let mut items = Vec::new();
    while p.i < p.toks.len() {
        match p.row() {
            Node::Row(mut r) => items.append(&mut r),
            other => items.push(other),
        }
        // Stray closing brace.
        p.i += 1;
    }
    Node::Row(items)
}

#[derive(Debug, Clone)]
enum Item {
    Glyphs { x: f64, y: f64, text: String, face: Face, px: f64 },
    Rule { x0: f64, y0: f64, x1: f64, y1: f64, thick: f64 },
}

/// Laid-out box; origin on the baseline at the left edge, y grows down.
#[derive(Debug, Clone, Default)]
struct Laid {
    w: f64,
    asc: f64,
    desc: f64,
    items: Vec<Item>,
}

impl Laid {
    fn append(&mut self, other: Laid, dx: f64, dy: f64) {
        for it in other.items {
            self.items.push(match it {
                Item::Glyphs { x, y, text, face, px } => Item::Glyphs {
                    x: x + dx,
                    y: y + dy,
                    text,
                    face,
                    px,
                },
                Item::Rule { x0, y0, x1, y1, thick } => Item::Rule {
                    x0: x0 + dx,
                    y0: y0 + dy,
                    x1: x1 + dx,
                    y1: y1 + dy,
                    thick,
                },
            });
        }
        self.asc = self.asc.max(other.asc - dy);
        self.desc = self.desc.max(other.desc + dy);
    }
}

fn face_for_char(c: char) -> Face {
    let preferred = if c.is_alphabetic() { Face::SerifItalic } else { Face::Serif };
    if fonts::face(preferred).glyph_id(c).0 != 0 {
        preferred
    } else {
        Face::Stix
    }
}

fn glyphs(text: &str, face: Face, px: f64, scale: f64) -> Laid {
    let size = px * scale;
    Laid {
        w: text::measure(face, size, text),
        asc: size * 0.75,
        desc: size * 0.25,
        items: vec![Item::Glyphs {
            x: 0.0,
            y: 0.0,
            text: text.to_string(),
            face,
            px: size,
        }],
    }
}

fn layout(node: &Node, px: f64) -> Laid {
    match node {
        Node::Char(c) => {
            let mut l = glyphs(&c.to_string(), face_for_char(*c), px, 1.0);
            if "=+-<>≤≥≠≈±×÷→⇒∈≡∝∼·".contains(*c) {
                let pad = px * 0.22;
                if let Some(Item::Glyphs { x, .. }) = l.items.first_mut() {
                    *x += pad;
                }
                l.w += 2.0 * pad;
            }
            l
        }
        Node::Word(s) => glyphs(s, Face::Serif, px, 1.0),
        Node::Big(c) => {
            let mut l = glyphs(&c.to_string(), Face::Stix, px, 1.4);
            // Sit the enlarged sign on the math axis.
            if let Some(Item::Glyphs { y, .. }) = l.items.first_mut() {
                *y += px * 0.15;
            }
            l.asc = px * 1.4 * 0.75 - px * 0.15;
            l.desc = px * 1.4 * 0.25 + px * 0.15;
            l
        }
        Node::Space(em) => Laid {
            w: em * px,
            ..Laid::default()
        },
        Node::Row(items) => {
            let mut out = Laid {
                asc: px * 0.75,
                desc: px * 0.25,
                ..Laid::default()
            };
            for it in items {
                let l = layout(it, px);
                let dx = out.w;
                out.w += l.w;
                out.append(l, dx, 0.0);
            }
            out.w = out.w.max(0.0);
            out
        }
        Node::Scripts { base, sup, sub } => {
            let mut out = layout(base, px);
            let sp = px * 0.7;
            let x = out.w + px * 0.04;
            let mut extra: f64 = 0.0;
            if let Some(s) = sup {
                let l = layout(s, sp);
                let raise = (out.asc - sp * 0.45).max(px * 0.38);
                extra = extra.max(l.w);
                out.append(l, x, -raise);
            }
            if let Some(s) = sub {
                let l = layout(s, sp);
                let drop = (out.desc + sp * 0.1).max(px * 0.2);
                extra = extra.max(l.w);
                out.append(l, x, drop);
            }
            out.w = x + extra;
            out
        }
        Node::Frac(num, den) => {
            let sp = px * 0.85;
            let n = layout(num, sp);
            let d = layout(den, sp);
            let pad = px * 0.12;
            let w = n.w.max(d.w) + 2.0 * pad;
            let axis = -px * 0.28;
            let thick = (px * 0.06).max(1.0);
            let gap = px * 0.12;
            let mut out = Laid { w, ..Laid::default() };
            let n_dy = axis - gap - n.desc;
            let d_dy = axis + gap + d.asc;
            out.append(n.clone(), (w - n.w) / 2.0, n_dy);
            out.append(d.clone(), (w - d.w) / 2.0, d_dy);
            out.items.push(Item::Rule {
                x0: 0.0,
                y0: axis,
                x1: w,
                y1: axis,
                thick,
            });
            out
        }
        Node::Sqrt(inner) => {
            let l = layout(inner, px);
            let thick = (px * 0.06).max(1.0);
            let hook = px * 0.5;
            let top = -l.asc - px * 0.12;
            let mut out = Laid {
                w: hook + l.w + px * 0.1,
                ..Laid::default()
            };
            out.append(l.clone(), hook, 0.0);
            let bottom = l.desc;
            let rules = [
                (0.0, -px * 0.2, hook * 0.35, -px * 0.3),
                (hook * 0.35, -px * 0.3, hook * 0.6, bottom),
                (hook * 0.6, bottom, hook * 0.9, top),
                (hook * 0.9, top, out.w, top),
            ];
            for (x0, y0, x1, y1) in rules {
                out.items.push(Item::Rule { x0, y0, x1, y1, thick });
            }
            out.asc = out.asc.max(-top + thick);
            out
        }
    }
}

/// Renders `markup` on a transparent canvas, scaled to fit with the math
/// axis on the vertical center where the box allows it.
pub fn render_equation(markup: &str, w: u32, h: u32, color: Rgba<u8>) -> RgbaImage {
    let mut img = RgbaImage::new(w.max(1), h.max(1));
    let node = parse_math(markup);
    let probe = layout(&node, 100.0);
    let (wf, hf) = (w as f64, h as f64);
    if probe.w <= 0.0 {
        return img;
    }
    let scale = (wf * 0.94 / probe.w).min(hf * 0.9 / (probe.asc + probe.desc));
    let px = (100.0 * scale).min(hf * 0.45).max(4.0);
    let laid = layout(&node, px);
    let x0 = ((wf - laid.w) / 2.0).max(0.0);
    let axis = -px * 0.28;
    let mut baseline = hf / 2.0 - axis;
    baseline = baseline.max(laid.asc).min(hf - laid.desc);
    let mut p = Painter::full(&mut img);
    for it in &laid.items {
        match it {
            Item::Glyphs { x, y, text: t, face, px } => {
                text::draw_line(&mut p, *face, *px, (x0 + x).round(), (baseline + y).round(), t, color);
            }
            Item::Rule {
                x0: a,
                y0: b,
                x1: c,
                y1: d,
                thick,
            } => {
                p.line(x0 + a, baseline + b, x0 + c, baseline + d, *thick, color);
            }
        }
    }
    img
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raster::opaque_bounds;

    const INK: Rgba<u8> = Rgba([0, 0, 0, 255]);

    #[test]
    fn parses_scripts_and_commands() {
        let n = parse_math(r"w_1x_1 + \dots");
        let Node::Row(items) = n else { panic!() };
        assert!(matches!(items[0], Node::Scripts { .. }));
        assert!(items.contains(&Node::Char('…')));
    }

    #[test]
    fn fraction_is_taller_than_a_line() {
        let flat = layout(&parse_math("a + b"), 50.0);
        let frac = layout(&parse_math(r"\frac{a}{b}"), 50.0);
        assert!(frac.asc + frac.desc > flat.asc + flat.desc);
    }

    #[test]
    fn renders_centered_and_deterministic() {
        let a = render_equation("y = mx + b", 400, 120, INK);
        assert_eq!(a, render_equation("y = mx + b", 400, 120, INK));
        let b = opaque_bounds(&a).unwrap();
        let cx = (b.x0 + b.x1) / 2;
        assert!((cx - 200).abs() <= 4, "{b:?}");
        assert!(b.width() > 200);
    }

    #[test]
    fn regression_equation_and_garbage_do_not_panic() {
        let img = render_equation(r"y = w_1x_1 + w_2x_2 + \dots + w_nx_n + b", 600, 100, INK);
        assert!(opaque_bounds(&img).is_some());
        for junk in ["", "}}}{{", r"\frac", "^_^", r"\sqrt[3]{x}", r"\left( \sum_{i=1}^{n} x_i \right)"] {
            render_equation(junk, 120, 60, INK);
        }
    }
}
