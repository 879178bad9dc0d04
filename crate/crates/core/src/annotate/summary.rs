//! Retrieval summaries in two styles: one built from the visible text, one
//! composed from element kinds, arrangement, positions and metadata.

use crate::content::stages::summarize_slide;
use crate::content::ContentCtx;
use crate::deck::model::{Background, DeckLayout, ElementKind, Payload, PlacedElement, PlacedSlide, Role, StageConfig};
use crate::geometry::{CANVAS_HEIGHT, CANVAS_WIDTH};
use crate::layout::catalog::LayoutCatalog;
use crate::layout::style::template;
use crate::rng;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SummaryStyle {
    Lecsd,
    Semantic,
}

impl SummaryStyle {
    pub const BOTH: [SummaryStyle; 2] = [SummaryStyle::Lecsd, SummaryStyle::Semantic];

    pub fn name(self) -> &'static str {
        match self {
            SummaryStyle::Lecsd => "lecsd",
            SummaryStyle::Semantic => "semantic",
        }
    }
}

impl fmt::Display for SummaryStyle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One row of `summaries.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRecord {
    pub image_id: u64,
    pub style: SummaryStyle,
    pub summary: String,
}

fn clean(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn with_article(phrase: &str) -> String {
    let vowel = phrase.starts_with(|c: char| "aeio".contains(c));
    format!("{} {phrase}", if vowel { "an" } else { "a" })
}

/// "a diagram", "a diagram and an enumeration", "a, b and c".
pub fn list_phrases(items: &[String]) -> String {
    match items {
        [] => String::new(),
        [one] => one.clone(),
        [init @ .., last] => format!("{} and {last}", init.join(", ")),
    }
}

fn title_text(slide: &PlacedSlide) -> Option<String> {
    slide
        .placed
        .iter()
        .find(|e| e.role == Role::Title)
        .and_then(|e| e.content.visible_text())
        .map(|t| clean(&t))
        .filter(|t| !t.is_empty())
}

fn body(slide: &PlacedSlide) -> Vec<&PlacedElement> {
    slide.placed.iter().filter(|e| e.role == Role::Body).collect()
}

fn distinct_kinds(elements: &[&PlacedElement]) -> Vec<ElementKind> {
    let mut kinds = Vec::new();
    for e in elements {
        if !kinds.contains(&e.content.kind) {
            kinds.push(e.content.kind);
        }
    }
    kinds
}

/// Title, the body element kinds and the first enumeration items. A slide
/// without body elements is summarized by its title alone.
pub fn lecsd_summary(slide: &PlacedSlide) -> String {
    let elements = body(slide);
    let title = title_text(slide);
    if elements.is_empty() {
        return title.unwrap_or_else(|| "Untitled slide".into());
    }
    let kinds: Vec<String> = distinct_kinds(&elements).iter().map(|k| with_article(k.phrase())).collect();
    let mut out = format!("{} explained using {}", title.as_deref().unwrap_or("Slide"), list_phrases(&kinds));
    let items: Vec<String> = elements
        .iter()
        .find_map(|e| match &e.content.payload {
            Payload::EnumerationItems(items) => Some(items.iter().map(|s| clean(s)).filter(|s| !s.is_empty()).take(2).collect()),
            _ => None,
        })
        .unwrap_or_default();
    if !items.is_empty() {
        out += &format!(": {}", items.join("; "));
    }
    out
}

/// "on the left", "at the top right", "in the center".
pub fn position_phrase(e: &PlacedElement) -> &'static str {
    let (cx, cy) = e.rect.center();
    let h = (cx / (CANVAS_WIDTH / 3.0)).floor().clamp(0.0, 2.0) as usize;
    let v = (cy / (CANVAS_HEIGHT / 3.0)).floor().clamp(0.0, 2.0) as usize;
    const TABLE: [[&str; 3]; 3] = [
        ["at the top left", "at the top", "at the top right"],
        ["on the left", "in the center", "on the right"],
        ["at the bottom left", "at the bottom", "at the bottom right"],
    ];
    TABLE[v][h]
}

fn meta_sentence(slide: &PlacedSlide) -> Option<String> {
    let mut parts = Vec::new();
    let footers: Vec<String> = slide
        .meta_elements
        .iter()
        .filter(|e| e.content.kind == ElementKind::FooterElement)
        .filter_map(|e| e.content.visible_text())
        .map(|t| clean(&t))
        .collect();
    if !footers.is_empty() {
        parts.push(format!("the footer names {}", list_phrases(&footers)));
    }
    for e in &slide.meta_elements {
        let what = match e.content.kind {
            ElementKind::SlideNr => "the slide number",
            ElementKind::Logo => "a logo",
            ElementKind::NaturalImage => "a small photograph",
            ElementKind::Url => "a web address",
            _ => continue,
        };
        parts.push(format!("{what} sits {}", position_phrase(e)));
    }
    if parts.is_empty() {
        return None;
    }
    let mut s = list_phrases(&parts);
    s[..1].make_ascii_uppercase();
    Some(s + ".")
}

/// Deterministic semantic summary of slide `index` of `deck`.
pub fn semantic_template(deck: &DeckLayout, index: usize, catalog: &LayoutCatalog) -> String {
    let slide = &deck.slides[index];
    let elements = body(slide);
    let shade = match slide.style.background {
        Background::Template(id) if template(id).is_dark() => "dark",
        _ => "light",
    };
    let mut s = format!("A {shade} slide about {}", clean(&deck.content.topic));
    let titled = slide.placed.iter().any(|e| e.role == Role::Title);
    s += if titled {
        " with a heading line at the top"
    } else {
        " without a title"
    };
    if elements.is_empty() {
        s += " and no further content.";
    } else {
        let placed: Vec<String> = elements
            .iter()
            .map(|e| format!("{} {}", with_article(e.content.kind.phrase()), position_phrase(e)))
            .collect();
        s += &format!(". It shows {}", list_phrases(&placed));
        if let Ok(t) = catalog.get(&slide.layout_id) {
            if elements.len() > 1 {
                s += &format!(" in a {} layout", t.arrangement.name());
            }
        }
        s += ".";
        let captions: Vec<String> = slide
            .placed
            .iter()
            .filter(|e| e.role == Role::Caption)
            .map(|e| with_article(e.content.kind.phrase()))
            .collect();
        if !captions.is_empty() {
            s += &format!(" It also carries {}.", list_phrases(&captions));
        }
    }
    if let Some(m) = meta_sentence(slide) {
        s += " ";
        s += &m;
    }
    let mut out = clean(&s);
    if let Some(first) = out.get_mut(..1) {
        first.make_ascii_uppercase();
    }
    out
}

/// Structured description sent to the summarizer model.
pub fn slide_description(deck: &DeckLayout, index: usize) -> String {
    let slide = &deck.slides[index];
    let mut lines = vec![format!("topic: {}", deck.content.topic)];
    if let Some(t) = title_text(slide) {
        lines.push(format!("title: {t}"));
    }
    for e in slide.placed.iter().filter(|e| e.role != Role::Title).chain(&slide.meta_elements) {
        let mut line = format!("{} {}", e.content.kind.phrase(), position_phrase(e));
        if let Some(t) = e.content.visible_text() {
            let t = clean(&t);
            if !t.is_empty() {
                line += &format!(": {}", t.chars().take(120).collect::<String>());
            }
        }
        lines.push(line);
    }
    lines.join("\n")
}

/// Live summarizer settings.
pub struct LiveSummaries<'a, 'b> {
    pub ctx: &'a ContentCtx<'b>,
    pub config: &'a StageConfig,
}

/// One record per slide. `image_ids[i]` is the image of slide `i`. Semantic
/// summaries go through `live` when given and fall back to the template on
/// failure, with a warning.
pub fn emit_summaries(
    deck: &DeckLayout,
    style: SummaryStyle,
    image_ids: &[u64],
    live: Option<&LiveSummaries<'_, '_>>,
    warnings: &mut Vec<String>,
) -> Vec<SummaryRecord> {
    let catalog = LayoutCatalog::standard();
    deck.slides
        .iter()
        .zip(image_ids)
        .enumerate()
        .map(|(i, (slide, &image_id))| {
            let summary = match style {
                SummaryStyle::Lecsd => lecsd_summary(slide),
                SummaryStyle::Semantic => {
                    let fallback = semantic_template(deck, i, &catalog);
                    match live {
                        None => fallback,
                        Some(l) => {
                            let mut r = rng::child_rng(deck.seed, &format!("summary-{i}"));
                            summarize_slide(&slide_description(deck, i), &fallback, l.ctx, l.config, &mut r).unwrap_or_else(|e| {
                                warnings.push(format!("{} slide {i}: {e}; using template summary", deck.deck_id));
                                fallback
                            })
                        }
                    }
                }
            };
            SummaryRecord { image_id, style, summary }
        })
        .collect()
}
