//! Slide compositing and the per-element mask oracle.

use super::fonts::face_for;
use super::text::{self, Paragraph};
use crate::assets::AssetStore;
use crate::deck::model::{Background, Color, ElementKind, Payload, PlacedElement, PlacedSlide, Role};
use crate::error::RenderError;
use crate::geometry::{PixelBox, CANVAS_HEIGHT, CANVAS_WIDTH};
use crate::layout::style::{background_base, template, Decoration};
use crate::raster::{diff_bounds, fit_box, rgba, Painter, SENTINEL};
use image::{GrayImage, Luma, Rgba, RgbaImage};

#[derive(Debug, Clone, PartialEq)]
pub struct RenderOptions {
    pub width: u32,
    pub height: u32,
    /// Replaces the slide's own background fill.
    pub background: Option<Color>,
    /// Overlays placement rects and category ids.
    pub debug: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self {
            width: 1280,
            height: 720,
            background: None,
            debug: false,
        }
    }
}

impl RenderOptions {
    pub fn validate(&self) -> Result<(), RenderError> {
        if self.width == 0 || self.height == 0 {
            return Err(RenderError::Options("width and height must be positive".into()));
        }
        // 16:9 within one pixel of rounding.
        if (self.width as i64 * 9 - self.height as i64 * 16).abs() > 16 {
            return Err(RenderError::Options(format!("{}x{} is not 16:9", self.width, self.height)));
        }
        Ok(())
    }

    /// Pixels per slide unit.
    pub fn scale(&self) -> f64 {
        self.width as f64 / CANVAS_WIDTH
    }
}

/// A rendered slide and the ink extent of each element, in
/// [`PlacedSlide::all_elements`] order.
#[derive(Debug, Clone)]
pub struct SlideRender {
    pub image: RgbaImage,
    pub ink: Vec<Option<PixelBox>>,
}

const SHADOW: Rgba<u8> = Rgba([120, 120, 130, 255]);

/// Fixed per-category overlay colors, indexed by category id - 1.
pub const CATEGORY_COLORS: [[u8; 3]; 16] = [
    [230, 25, 75],
    [60, 180, 75],
    [255, 225, 25],
    [0, 130, 200],
    [245, 130, 48],
    [145, 30, 180],
    [70, 240, 240],
    [240, 50, 230],
    [210, 245, 60],
    [250, 190, 212],
    [0, 128, 128],
    [220, 190, 255],
    [170, 110, 40],
    [128, 0, 0],
    [128, 128, 0],
    [0, 0, 128],
];

pub fn category_color(kind: ElementKind) -> Rgba<u8> {
    rgba(CATEGORY_COLORS[kind.id() as usize - 1])
}

fn draw_background(img: &mut RgbaImage, bg: &Background, fill: Color) {
    let (w, h) = (img.width() as f64, img.height() as f64);
    let u = w / CANVAS_WIDTH;
    let mut p = Painter::full(img);
    p.fill_box(PixelBox::of_image(w as u32, h as u32), rgba(fill.0));
    let Background::Template(id) = bg else { return };
    let t = template(*id);
    let band = rgba(t.band.0);
    let px = |v: f64| (v * u).round() as i64;
    let (wi, hi) = (w as i64, h as i64);
    match t.decoration {
        Decoration::Plain => {}
        Decoration::TopBar => p.fill_box(PixelBox::new(0, 0, wi, px(0.18)), band),
        Decoration::BottomBar => p.fill_box(PixelBox::new(0, hi - px(0.12), wi, hi), band),
        Decoration::LeftStripe => p.fill_box(PixelBox::new(0, 0, px(0.07), hi), band),
        Decoration::CornerTriangle => {
            let (x0, y0) = (px(CANVAS_WIDTH - 0.4) as f64, px(CANVAS_HEIGHT - 0.6) as f64);
            p.fill_polygon(&[(w, h), (w, y0), (x0, h)], band);
        }
        Decoration::DoubleRule => {
            p.fill_box(PixelBox::new(0, px(0.12), wi, px(0.16)), band);
            p.fill_box(PixelBox::new(0, px(0.2), wi, px(0.22)), band);
        }
        Decoration::Frame => p.stroke_box(
            PixelBox::new(px(0.03), px(0.03), wi - px(0.03), hi - px(0.03)),
            px(0.03).max(1),
            band,
        ),
        Decoration::Dots => {
            let step = px(0.25).max(4);
            let r = (u * 0.02).max(1.0);
            let mut x = step / 2;
            while x < wi {
                p.fill_ellipse(x as f64, (u * 0.1).round(), r, r, band);
                x += step;
            }
        }
    }
}

pub(crate) fn paragraphs_of(e: &PlacedElement) -> Vec<Paragraph> {
    match &e.content.payload {
        Payload::EnumerationItems(items) => items
            .iter()
            .filter(|s| !s.trim().is_empty())
            .map(|s| Paragraph::bullet(s.trim()))
            .collect(),
        Payload::PlainText(t) if e.content.kind == ElementKind::Enumeration => t
            .lines()
            .filter(|s| !s.trim().is_empty())
            .map(|s| Paragraph::bullet(s.trim()))
            .collect(),
        Payload::PlainText(t) if e.content.kind == ElementKind::Code => t.lines().map(Paragraph::plain).collect(),
        Payload::PlainText(t) if !t.trim().is_empty() => vec![Paragraph::plain(t.trim())],
        _ => Vec::new(),
    }
}

/// Draws one element into `p`, whose clip must be the element box. `fill`
/// is the slide base color (used under shadows).
fn draw_element(p: &mut Painter<'_>, e: &PlacedElement, assets: &AssetStore, scale: f64, fill: Color) -> Result<(), RenderError> {
    let outer = p.clip();
    if outer.is_empty() {
        return Ok(());
    }
    let mut content = outer;
    let has_visible = e.drawn_asset().is_some() || !paragraphs_of(e).is_empty();
    if !has_visible {
        return Ok(());
    }
    if e.style.shadow {
        let s = ((scale * 0.06).round() as i64).max(2);
        p.fill_box(PixelBox::new(outer.x0 + s, outer.y0 + s, outer.x1, outer.y1), SHADOW);
        content = PixelBox::new(outer.x0, outer.y0, outer.x1 - s, outer.y1 - s);
        p.fill_box(content, rgba(fill.0));
    }
    if e.style.border {
        let t = ((scale * 0.025).round() as i64).max(1);
        p.stroke_box(content, t, rgba(e.style.accent.0));
        content = content.inset(t + (scale * 0.05).round() as i64);
    }
    if let Some(id) = e.drawn_asset() {
        let img = assets.image(id).ok_or_else(|| RenderError::MissingAsset {
            asset: id.to_string(),
            element: format!("{} '{}'", e.content.kind, e.content.caption),
        })?;
        p.blit(img, fit_box(img.width(), img.height(), content));
        return Ok(());
    }
    let style = &e.style.text;
    let face = face_for(style.family, style.bold);
    let px = style.size_pt / 72.0 * scale;
    let block = text::fit_block(face, px, &paragraphs_of(e), content);
    let center_v = matches!(e.role, Role::Title | Role::Meta | Role::Caption);
    text::draw_block(p, &block, content, style.align, center_v, rgba(style.color.0));
    Ok(())
}

fn element_box(e: &PlacedElement, opts: &RenderOptions) -> PixelBox {
    PixelBox::from_rect(&e.rect, opts.width, opts.height)
}

/// Paint order: body and caption assets, then text, then meta elements.
fn paint_order(slide: &PlacedSlide) -> Vec<usize> {
    let all: Vec<&PlacedElement> = slide.all_elements().collect();
    let n_placed = slide.placed.len();
    let mut order: Vec<usize> = (0..n_placed).filter(|&i| all[i].drawn_asset().is_some()).collect();
    order.extend((0..n_placed).filter(|&i| all[i].drawn_asset().is_none()));
    order.extend(n_placed..all.len());
    order
}

pub fn render_slide(slide: &PlacedSlide, assets: &AssetStore, opts: &RenderOptions) -> Result<SlideRender, RenderError> {
    opts.validate()?;
    let fill = opts.background.unwrap_or_else(|| background_base(&slide.style.background));
    let mut img = RgbaImage::new(opts.width, opts.height);
    draw_background(&mut img, &slide.style.background, fill);
    let all: Vec<&PlacedElement> = slide.all_elements().collect();
    let mut ink = vec![None; all.len()];
    for i in paint_order(slide) {
        let e = all[i];
        let mut p = Painter::new(&mut img, element_box(e, opts));
        draw_element(&mut p, e, assets, opts.scale(), fill)?;
        ink[i] = p.ink().get();
    }
    if opts.debug {
        let mut p = Painter::full(&mut img);
        for e in &all {
            let b = element_box(e, opts);
            let c = category_color(e.content.kind);
            p.stroke_box(b, 2, c);
            let label = e.content.kind.id().to_string();
            text::draw_line(
                &mut p,
                super::fonts::Face::SansBold,
                14.0,
                (b.x0 + 3) as f64,
                (b.y0 + 14) as f64,
                &label,
                c,
            );
        }
    }
    Ok(SlideRender { image: img, ink })
}

#[derive(Debug, Clone)]
pub struct ElementMask {
    pub mask: GrayImage,
    pub bbox: Option<PixelBox>,
}

/// Renders element `index` alone on a sentinel canvas; the mask is every
/// pixel that differs from the sentinel.
pub fn render_element_mask(
    slide: &PlacedSlide,
    index: usize,
    assets: &AssetStore,
    opts: &RenderOptions,
) -> Result<ElementMask, RenderError> {
    opts.validate()?;
    let e = slide.element(index).ok_or(RenderError::NoSuchElement(index))?;
    let fill = opts.background.unwrap_or_else(|| background_base(&slide.style.background));
    let mut img = RgbaImage::from_pixel(opts.width, opts.height, SENTINEL);
    let mut p = Painter::new(&mut img, element_box(e, opts));
    draw_element(&mut p, e, assets, opts.scale(), fill)?;
    let bbox = diff_bounds(&img, SENTINEL);
    let mask = GrayImage::from_fn(opts.width, opts.height, |x, y| {
        Luma([if *img.get_pixel(x, y) != SENTINEL { 255 } else { 0 }])
    });
    Ok(ElementMask { mask, bbox })
}

/// Grid montage of slide images, `cols` per row, each scaled to `cell_w`.
pub fn contact_sheet(images: &[RgbaImage], cols: u32, cell_w: u32) -> RgbaImage {
    let cols = cols.max(1);
    let rows = (images.len() as u32).div_ceil(cols).max(1);
    let cell_h = cell_w * 9 / 16;
    let gap = 8;
    let mut sheet = RgbaImage::from_pixel(cols * (cell_w + gap) + gap, rows * (cell_h + gap) + gap, Rgba([60, 60, 66, 255]));
    for (i, img) in images.iter().enumerate() {
        let (c, r) = (i as u32 % cols, i as u32 / cols);
        let thumb = image::imageops::resize(img, cell_w, cell_h, image::imageops::FilterType::Triangle);
        image::imageops::replace(
            &mut sheet,
            &thumb,
            (gap + c * (cell_w + gap)) as i64,
            (gap + r * (cell_h + gap)) as i64,
        );
    }
    sheet
}

/// Number of columns for a montage of `n` slides (12 slides: 4 x 3).
pub fn montage_columns(n: usize) -> u32 {
    match n {
        0..=1 => 1,
        2..=4 => 2,
        5..=9 => 3,
        _ => 4,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deck::model::{ElementContent, StyleSpec};
    use crate::testutil::{element_style, style_spec};
    use crate::Rect;

    fn slide_with(elements: Vec<PlacedElement>) -> PlacedSlide {
        PlacedSlide {
            layout_id: "L02".into(),
            style: StyleSpec {
                background: Background::Solid(Color::WHITE),
                ..style_spec()
            },
            placed: elements,
            meta_elements: vec![],
        }
    }

    fn title(text: &str) -> PlacedElement {
        let rect = Rect::new(1.5, 0.5, 8.0, 1.0);
        PlacedElement {
            role: Role::Title,
            content: ElementContent::text(ElementKind::Title, text),
            region: rect,
            rect,
            style: element_style(32.0),
            asset: None,
        }
    }

    #[test]
    fn empty_white_slide_is_uniform() {
        let r = render_slide(&slide_with(vec![]), &AssetStore::default(), &RenderOptions::default()).unwrap();
        assert!(r.image.pixels().all(|p| *p == Rgba([255, 255, 255, 255])));
    }

    #[test]
    fn title_ink_matches_oracle_and_stays_in_rect() {
        let s = slide_with(vec![title("Hello")]);
        let opts = RenderOptions::default();
        let r = render_slide(&s, &AssetStore::default(), &opts).unwrap();
        let m = render_element_mask(&s, 0, &AssetStore::default(), &opts).unwrap();
        let ink = r.ink[0].unwrap();
        assert_eq!(Some(ink), m.bbox);
        let rect = PixelBox::from_rect(&s.placed[0].rect, opts.width, opts.height);
        assert!(rect.contains_box(&ink));
        assert_eq!(diff_bounds(&r.image, Rgba([255, 255, 255, 255])), Some(ink));
    }

    #[test]
    fn empty_text_has_empty_mask() {
        let s = slide_with(vec![title("   ")]);
        let m = render_element_mask(&s, 0, &AssetStore::default(), &RenderOptions::default()).unwrap();
        assert!(m.bbox.is_none());
        assert!(m.mask.pixels().all(|p| p[0] == 0));
    }

    #[test]
    fn asset_mask_is_opaque_extent() {
        let mut store = AssetStore::default();
        let mut img = RgbaImage::new(40, 40);
        for y in 10..30 {
            for x in 5..35 {
                img.put_pixel(x, y, Rgba([200, 10, 10, 255]));
            }
        }
        store.insert_if_absent("a1", img, "test");
        let rect = Rect::new(2.0, 2.0, 4.0, 4.0);
        let e = PlacedElement {
            role: Role::Body,
            content: ElementContent {
                kind: ElementKind::Diagram,
                caption: "d".into(),
                payload: Payload::AssetRef("a1".into()),
            },
            region: rect,
            rect,
            style: element_style(20.0),
            asset: None,
        };
        let opts = RenderOptions::default();
        let m = render_element_mask(&slide_with(vec![e]), 0, &store, &opts).unwrap();
        // The 40x40 source fills a 384x384 box; opaque rows 10..30 and
        // columns 5..35 scale by 9.6.
        let b = m.bbox.unwrap();
        let origin = PixelBox::from_rect(&rect, 1280, 720);
        assert_eq!(b.x0 - origin.x0, 48);
        assert_eq!(b.y0 - origin.y0, 96);
        assert_eq!(b.x1 - origin.x0, 336);
        assert_eq!(b.y1 - origin.y0, 288);
    }

    #[test]
    fn missing_asset_is_an_error() {
        let mut e = title("x");
        e.content = ElementContent {
            kind: ElementKind::Logo,
            caption: "logo".into(),
            payload: Payload::AssetRef("nope".into()),
        };
        let err = render_slide(&slide_with(vec![e]), &AssetStore::default(), &RenderOptions::default()).unwrap_err();
        assert!(matches!(err, RenderError::MissingAsset { .. }));
    }

    #[test]
    fn rendering_is_deterministic() {
        let s = slide_with(vec![title("Determinism")]);
        let a = render_slide(&s, &AssetStore::default(), &RenderOptions::default()).unwrap();
        let b = render_slide(&s, &AssetStore::default(), &RenderOptions::default()).unwrap();
        assert_eq!(a.image, b.image);
    }

    #[test]
    fn twelve_slides_make_four_by_three() {
        assert_eq!(montage_columns(12), 4);
        let imgs = vec![RgbaImage::new(16, 9); 12];
        let sheet = contact_sheet(&imgs, montage_columns(12), 64);
        assert_eq!(sheet.width(), 4 * 72 + 8);
        assert_eq!(sheet.height(), 3 * (36 + 8) + 8);
    }

    #[test]
    fn bad_options_are_rejected() {
        let opts = RenderOptions {
            width: 100,
            height: 100,
            ..RenderOptions::default()
        };
        assert!(opts.validate().is_err());
    }
}
