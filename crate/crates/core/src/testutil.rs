//! Hand-built fixtures for unit tests.

use crate::deck::*;
use crate::geometry::Rect;
use crate::layout::catalog::{get_layout_dimensions, LOGO_CORNER};
use std::collections::BTreeMap;

pub fn text_style(size_pt: f64) -> TextStyle {
    TextStyle {
        family: FontFamily::Sans,
        size_pt,
        color: Color([20, 20, 40]),
        bold: false,
        align: Align::Left,
    }
}

pub fn style_spec() -> StyleSpec {
    StyleSpec {
        background: Background::Solid(Color::WHITE),
        title: TextStyle {
            bold: true,
            ..text_style(32.0)
        },
        body: text_style(20.0),
        meta: text_style(12.0),
        accent: Color([30, 90, 160]),
        border: false,
        shadow: false,
    }
}

pub fn element_style(size_pt: f64) -> ElementStyle {
    ElementStyle {
        text: text_style(size_pt),
        border: false,
        shadow: false,
        accent: Color([30, 90, 160]),
    }
}

fn shrink(r: Rect) -> Rect {
    Rect::new(r.left + 0.05 * r.width, r.top + 0.05 * r.height, r.width * 0.9, r.height * 0.9)
}

/// A valid deck of `n` slides (title, one description, one logo each).
/// `n > 15` yields a deck that violates the slide limit only.
pub fn sample_deck(n: usize) -> DeckLayout {
    let regions = get_layout_dimensions("L02").unwrap();
    let mut content_slides = Vec::new();
    let mut slides = Vec::new();
    for i in 0..n {
        let title = format!("Slide {}", i + 1);
        let desc = ElementContent::text(ElementKind::Description, format!("Body text of slide {}", i + 1));
        content_slides.push(SlideContent {
            title: title.clone(),
            slide_type: SlideType::Example,
            elements: vec![desc.clone()],
        });
        let title_region = regions.title.unwrap();
        slides.push(PlacedSlide {
            layout_id: "L02".into(),
            style: style_spec(),
            placed: vec![
                PlacedElement {
                    role: Role::Title,
                    content: ElementContent::text(ElementKind::Title, title),
                    region: title_region,
                    rect: shrink(title_region),
                    style: element_style(32.0),
                    asset: None,
                },
                PlacedElement {
                    role: Role::Body,
                    content: desc,
                    region: regions.body[0],
                    rect: shrink(regions.body[0]),
                    style: element_style(20.0),
                    asset: None,
                },
            ],
            meta_elements: vec![PlacedElement {
                role: Role::Meta,
                content: ElementContent {
                    kind: ElementKind::Logo,
                    caption: "logo".into(),
                    payload: Payload::AssetRef("logo-1".into()),
                },
                region: LOGO_CORNER,
                rect: shrink(LOGO_CORNER),
                style: element_style(12.0),
                asset: None,
            }],
        });
    }
    let mut assets = BTreeMap::new();
    assets.insert(
        "logo-1".to_string(),
        AssetEntry {
            path: "assets/logo-1.png".into(),
            provenance: "procedural:logo".into(),
            width: 64,
            height: 64,
        },
    );
    DeckLayout {
        schema_version: SCHEMA_VERSION.into(),
        deck_id: "deck-test".into(),
        seed: 1,
        coherent_style: true,
        content: DeckContent {
            topic: "Testing".into(),
            subject: "CS".into(),
            slides: content_slides,
        },
        slides,
        assets,
        warnings: vec![],
    }
}
