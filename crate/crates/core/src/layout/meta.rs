//! Probabilistic meta elements: slide numbers, footers, logos, decorative
//! photos and URLs. All sit in margin regions that no body, title or
//! caption region touches, so they never overlap content.

use super::catalog::{footer_regions, IMAGE_CORNER, LOGO_CORNER, URL_STRIP};
use super::perturb::{randomize_location, PerturbationParams};
use super::style::element_style;
use crate::assets::{procedural, AssetStore};
use crate::content::corpus::URL_HOSTS;
use crate::deck::model::{ElementContent, ElementKind, Payload, PlacedElement, PlacedSlide, Role};
use crate::geometry::Rect;
use crate::rng;
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetaProbabilities {
    pub slide_nr: f64,
    /// Chance of any footer; the count is then uniform in 1..=3.
    pub footer: f64,
    pub logo: f64,
    pub natural_image: f64,
    pub url: f64,
}

impl Default for MetaProbabilities {
    fn default() -> Self {
        Self {
            slide_nr: 0.7,
            footer: 0.6,
            logo: 0.3,
            natural_image: 0.1,
            url: 0.15,
        }
    }
}

impl MetaProbabilities {
    /// Scarce-class oversampling preset.
    pub fn oversampled() -> Self {
        Self {
            natural_image: 0.3,
            url: 0.45,
            ..Self::default()
        }
    }

    pub fn none() -> Self {
        Self {
            slide_nr: 0.0,
            footer: 0.0,
            logo: 0.0,
            natural_image: 0.0,
            url: 0.0,
        }
    }
}

/// Deck-wide facts the meta texts are drawn from.
#[derive(Debug, Clone, PartialEq)]
pub struct DeckMeta {
    pub instructor: String,
    pub institution: String,
    pub course: String,
    pub date: String,
    /// Key for the deck's logo image.
    pub logo_key: u64,
}

const MONTHS: [&str; 12] = [
    "January",
    "February",
    "March",
    "April",
    "May",
    "June",
    "July",
    "August",
    "September",
    "October",
    "November",
    "December",
];

impl DeckMeta {
    pub fn draw<R: Rng + ?Sized>(topic: &str, r: &mut R) -> Self {
        use crate::content::corpus::{INSTITUTIONS, INSTRUCTORS};
        Self {
            instructor: rng::pick(r, INSTRUCTORS).to_string(),
            institution: rng::pick(r, INSTITUTIONS).to_string(),
            course: topic.to_string(),
            date: format!("{} {}", MONTHS[rng::index(r, 12)], 2019 + rng::index(r, 6)),
            logo_key: r.gen(),
        }
    }

    fn footer_texts(&self) -> [String; 4] {
        [
            self.instructor.clone(),
            self.institution.clone(),
            self.course.clone(),
            self.date.clone(),
        ]
    }
}

/// Width of the slide-number box carved from the right footer area.
const SLIDE_NR_WIDTH: f64 = 0.9;

/// Footer slots (the right one trimmed) and the slide-number box.
pub fn meta_regions() -> ([Rect; 3], Rect) {
    let mut f = footer_regions();
    let right = f[2];
    f[2].width = right.width - SLIDE_NR_WIDTH - 0.1;
    let nr = Rect::new(right.right() - SLIDE_NR_WIDTH, right.top, SLIDE_NR_WIDTH, right.height);
    (f, nr)
}

fn slug(text: &str) -> String {
    let s: String = text
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c.to_ascii_lowercase() } else { '-' })
        .collect();
    s.split('-').filter(|p| !p.is_empty()).collect::<Vec<_>>().join("-")
}

fn place<R: Rng + ?Sized>(slide: &PlacedSlide, content: ElementContent, region: Rect, r: &mut R) -> PlacedElement {
    PlacedElement {
        role: Role::Meta,
        style: element_style(&slide.style, Role::Meta, content.kind),
        rect: randomize_location(&region, &PerturbationParams::footer(), r),
        region,
        content,
        asset: None,
    }
}

/// Adds meta elements to `slide` (slide number `index + 1`). Image meta
/// elements get their rasters in `store`.
pub fn insert_meta_elements<R: Rng + ?Sized>(
    slide: &mut PlacedSlide,
    index: usize,
    meta: &DeckMeta,
    probs: &MetaProbabilities,
    store: &mut AssetStore,
    r: &mut R,
) {
    let (footers, nr_box) = meta_regions();
    let mut out = Vec::new();
    if rng::chance(r, probs.slide_nr) {
        let c = ElementContent::text(ElementKind::SlideNr, (index + 1).to_string());
        out.push(place(slide, c, nr_box, r));
    }
    if rng::chance(r, probs.footer) {
        let count = 1 + rng::index(r, 3);
        let mut slots = vec![0usize, 1, 2];
        let texts = meta.footer_texts();
        let mut chosen = Vec::new();
        for _ in 0..count {
            chosen.push(slots.remove(rng::index(r, slots.len())));
        }
        chosen.sort_unstable();
        for slot in chosen {
            let text = &texts[(slot + index) % texts.len()];
            let c = ElementContent::text(ElementKind::FooterElement, text.clone());
            out.push(place(slide, c, footers[slot], r));
        }
    }
    if rng::chance(r, probs.logo) {
        let id = format!("lg-{:016x}", meta.logo_key);
        store.insert_if_absent(&id, procedural::logo(meta.logo_key, 128, 128), "procedural:logo");
        let c = ElementContent {
            kind: ElementKind::Logo,
            caption: format!("{} logo", meta.institution),
            payload: Payload::AssetRef(id),
        };
        out.push(place(slide, c, LOGO_CORNER, r));
    }
    if rng::chance(r, probs.natural_image) {
        let key: u64 = r.gen();
        let id = format!("ph-{key:016x}");
        store.insert_if_absent(&id, procedural::photo(key, 160, 120), "procedural:photo");
        let c = ElementContent {
            kind: ElementKind::NaturalImage,
            caption: "decorative photograph".into(),
            payload: Payload::AssetRef(id),
        };
        out.push(place(slide, c, IMAGE_CORNER, r));
    }
    if rng::chance(r, probs.url) {
        let host = rng::pick(r, URL_HOSTS);
        let text = format!("{host}{}", slug(&meta.course));
        out.push(place(slide, ElementContent::text(ElementKind::Url, text), URL_STRIP, r));
    }
    slide.meta_elements.extend(out);
}
