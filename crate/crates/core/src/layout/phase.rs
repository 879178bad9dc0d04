//! Per-deck layout assembly.

use super::catalog::{get_layout_dimensions, select_layout};
use super::meta::{insert_meta_elements, DeckMeta, MetaProbabilities};
use super::perturb::{randomize_location, PerturbationParams, DEFAULT_TAU};
use super::style::{assign_styles, element_style};
use crate::assets::AssetStore;
use crate::deck::model::{
    DeckContent, DeckLayout, ElementContent, ElementKind, PlacedElement, PlacedSlide, Role, SlideContent, StyleSpec, SCHEMA_VERSION,
};
use crate::error::LayoutError;
use crate::geometry::Rect;
use crate::rng::{self, SlideRng};
use serde::{Deserialize, Serialize};

/// Chance that a visual body element gets a caption strip under it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CaptionProbabilities {
    pub table: f64,
    /// Diagrams, charts and photos.
    pub figure: f64,
}

impl Default for CaptionProbabilities {
    fn default() -> Self {
        Self { table: 0.4, figure: 0.25 }
    }
}

impl CaptionProbabilities {
    pub fn oversampled() -> Self {
        Self { table: 0.9, figure: 0.8 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayoutOptions {
    /// Chance of an untitled layout for slides with body elements.
    pub untitled: f64,
    pub tau: f64,
    pub meta: MetaProbabilities,
    pub captions: CaptionProbabilities,
    /// Background and title style fixed for the whole deck.
    pub coherent_style: bool,
}

impl Default for LayoutOptions {
    fn default() -> Self {
        Self {
            untitled: 0.1,
            tau: DEFAULT_TAU,
            meta: MetaProbabilities::default(),
            captions: CaptionProbabilities::default(),
            coherent_style: true,
        }
    }
}

impl LayoutOptions {
    /// Scarce-class oversampling with slide-level style independence.
    pub fn oversampled() -> Self {
        Self {
            meta: MetaProbabilities::oversampled(),
            captions: CaptionProbabilities::oversampled(),
            coherent_style: false,
            ..Self::default()
        }
    }
}

/// Height of a caption strip and its gap to the element, in slide units.
pub const CAPTION_STRIP: f64 = 0.45;
pub const CAPTION_GAP: f64 = 0.05;
/// Regions lower than this get no caption.
pub const CAPTION_MIN_REGION: f64 = 1.4;

fn caption_kind(kind: ElementKind) -> Option<ElementKind> {
    match kind {
        ElementKind::Table => Some(ElementKind::TableCaption),
        ElementKind::Diagram | ElementKind::Chart | ElementKind::NaturalImage => Some(ElementKind::FigureCaption),
        _ => None,
    }
}

pub fn deck_id_for(seed: u64) -> String {
    format!("deck-{}", rng::short_hash(&seed.to_string()))
}

struct Counters {
    table: usize,
    figure: usize,
}

fn place(
    style: &StyleSpec,
    role: Role,
    content: ElementContent,
    region: Rect,
    params: &PerturbationParams<f64>,
    r: &mut SlideRng,
) -> PlacedElement {
    PlacedElement {
        role,
        style: element_style(style, role, content.kind),
        rect: randomize_location(&region, params, r),
        region,
        content,
        asset: None,
    }
}

fn layout_slide(
    slide: &SlideContent,
    style: StyleSpec,
    options: &LayoutOptions,
    counters: &mut Counters,
    r: &mut SlideRng,
) -> Result<PlacedSlide, LayoutError> {
    let n = slide.elements.len();
    let with_title = n == 0 || !rng::chance(r, options.untitled);
    let layout_id = select_layout(n, with_title, r)?;
    let regions = get_layout_dimensions(&layout_id)?;
    let mut placed = Vec::new();
    if let Some(title_region) = regions.title {
        let c = ElementContent::text(ElementKind::Title, slide.title.clone());
        placed.push(place(&style, Role::Title, c, title_region, &PerturbationParams::title(), r));
    }
    let body_params = PerturbationParams::body(options.tau);
    for (element, region) in slide.elements.iter().zip(regions.body.iter()) {
        let cap = caption_kind(element.kind).filter(|k| {
            let p = if *k == ElementKind::TableCaption {
                options.captions.table
            } else {
                options.captions.figure
            };
            region.height >= CAPTION_MIN_REGION && rng::chance(r, p)
        });
        let (main, strip) = match cap {
            Some(_) => {
                let (upper, lower) = region.split_bottom(CAPTION_STRIP, CAPTION_GAP);
                (upper, Some(lower))
            }
            None => (*region, None),
        };
        placed.push(place(&style, Role::Body, element.clone(), main, &body_params, r));
        if let (Some(kind), Some(strip)) = (cap, strip) {
            let label = if kind == ElementKind::TableCaption {
                counters.table += 1;
                format!("Table {}: {}", counters.table, element.caption)
            } else {
                counters.figure += 1;
                format!("Figure {}: {}", counters.figure, element.caption)
            };
            placed.push(place(
                &style,
                Role::Caption,
                ElementContent::text(kind, label),
                strip,
                &PerturbationParams::footer(),
                r,
            ));
        }
    }
    Ok(PlacedSlide {
        layout_id,
        style,
        placed,
        meta_elements: Vec::new(),
    })
}

/// Lays out every slide: layout choice, element placement with
/// perturbation, captions, styles and meta elements. Meta rasters are
/// added to `store`; the returned asset table covers the whole store.
pub fn run_layout_phase(
    content: &DeckContent,
    seed: u64,
    options: &LayoutOptions,
    store: &mut AssetStore,
) -> Result<DeckLayout, LayoutError> {
    let styles = assign_styles(content, options.coherent_style, &mut rng::child_rng(seed, "style"));
    let meta = DeckMeta::draw(&content.topic, &mut rng::child_rng(seed, "deck-meta"));
    let mut counters = Counters { table: 0, figure: 0 };
    let mut slides = Vec::with_capacity(content.slides.len());
    for (i, (slide, style)) in content.slides.iter().zip(styles).enumerate() {
        let mut r = rng::child_rng(seed, &format!("slide-{i}"));
        let mut placed = layout_slide(slide, style, options, &mut counters, &mut r)?;
        let mut mr = rng::child_rng(seed, &format!("meta-{i}"));
        insert_meta_elements(&mut placed, i, &meta, &options.meta, store, &mut mr);
        slides.push(placed);
    }
    Ok(DeckLayout {
        schema_version: SCHEMA_VERSION.to_string(),
        deck_id: deck_id_for(seed),
        seed,
        coherent_style: options.coherent_style,
        content: content.clone(),
        slides,
        assets: store.entry_table(),
        warnings: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deck::model::{Payload, SlideType};
    use crate::deck::validate::validate_deck;
    use crate::layout::catalog::{Arrangement, LayoutCatalog};

    fn slide(n: usize) -> SlideContent {
        SlideContent {
            title: format!("Slide with {n}"),
            slide_type: SlideType::Example,
            elements: (0..n)
                .map(|i| ElementContent::text(ElementKind::Description, format!("text {i}")))
                .collect(),
        }
    }

    fn content(counts: &[usize]) -> DeckContent {
        DeckContent {
            topic: "Graphs".into(),
            subject: "CS".into(),
            slides: counts.iter().map(|n| slide(*n)).collect(),
        }
    }

    #[test]
    fn two_elements_land_in_distinct_cells_of_a_two_cell_layout() {
        let deck = run_layout_phase(&content(&[2; 10]), 5, &LayoutOptions::default(), &mut AssetStore::default()).unwrap();
        let catalog = LayoutCatalog::standard();
        for s in &deck.slides {
            assert_eq!(catalog.get(&s.layout_id).unwrap().body_regions.len(), 2);
            let bodies: Vec<&PlacedElement> = s.placed.iter().filter(|e| e.role == Role::Body).collect();
            assert_eq!(bodies.len(), 2);
            assert_ne!(bodies[0].region, bodies[1].region);
            assert!(!bodies[0].rect.overlaps(&bodies[1].rect));
        }
        assert!(validate_deck(&deck).is_valid(), "{}", validate_deck(&deck));
    }

    #[test]
    fn four_elements_get_the_grid() {
        let mut c = content(&[4]);
        c.slides[0].elements.truncate(4);
        let deck = run_layout_phase(&c, 1, &LayoutOptions::default(), &mut AssetStore::default()).unwrap();
        let t = LayoutCatalog::standard();
        assert_eq!(t.get(&deck.slides[0].layout_id).unwrap().arrangement, Arrangement::Grid2x2);
    }

    #[test]
    fn five_elements_are_unsupported() {
        let err = run_layout_phase(&content(&[5]), 1, &LayoutOptions::default(), &mut AssetStore::default());
        assert_eq!(err.unwrap_err(), LayoutError::UnsupportedElementCount(5));
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let c = content(&[0, 1, 2, 3, 1, 2]);
        let a = run_layout_phase(&c, 42, &LayoutOptions::oversampled(), &mut AssetStore::default()).unwrap();
        let b = run_layout_phase(&c, 42, &LayoutOptions::oversampled(), &mut AssetStore::default()).unwrap();
        assert_eq!(crate::deck::canonicalize(&a).unwrap(), crate::deck::canonicalize(&b).unwrap());
        let d = run_layout_phase(&c, 43, &LayoutOptions::oversampled(), &mut AssetStore::default()).unwrap();
        assert_ne!(a, d);
    }

    #[test]
    fn captions_sit_under_their_element() {
        let mut c = content(&[1]);
        c.slides[0].elements[0] = ElementContent {
            kind: ElementKind::Table,
            caption: "Scores".into(),
            payload: Payload::TypesetMarkup("a & b \\\\ 1 & 2".into()),
        };
        let opts = LayoutOptions {
            captions: CaptionProbabilities { table: 1.0, figure: 1.0 },
            ..LayoutOptions::default()
        };
        let deck = run_layout_phase(&c, 3, &opts, &mut AssetStore::default()).unwrap();
        let s = &deck.slides[0];
        let table = s.placed.iter().find(|e| e.content.kind == ElementKind::Table).unwrap();
        let cap = s.placed.iter().find(|e| e.content.kind == ElementKind::TableCaption).unwrap();
        assert!(cap.rect.top >= table.rect.bottom());
        assert_eq!(cap.content.visible_text().as_deref(), Some("Table 1: Scores"));
    }

    #[test]
    fn empty_slide_uses_title_only_layout() {
        let deck = run_layout_phase(&content(&[0]), 2, &LayoutOptions::default(), &mut AssetStore::default()).unwrap();
        assert_eq!(deck.slides[0].layout_id, "L01");
    }
}
