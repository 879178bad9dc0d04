use super::model::*;
use crate::geometry::Rect;
use crate::layout::catalog::LayoutCatalog;
use serde::Serialize;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// Location in the deck, e.g. `slides[3].placed[1]`.
    pub path: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

/// Violations found in a deck. Empty means valid.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first(&self) -> Option<&Violation> {
        self.violations.first()
    }

    fn push(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.violations.push(Violation {
            path: path.into(),
            message: message.into(),
        });
    }

    pub fn contains(&self, needle: &str) -> bool {
        self.violations.iter().any(|v| v.message.contains(needle))
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("valid");
        }
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

fn check_rect(report: &mut ValidationReport, path: &str, what: &str, r: &Rect) {
    let finite = [r.left, r.top, r.width, r.height].iter().all(|v| v.is_finite());
    if !finite || !r.has_positive_size() {
        report.push(path, format!("{what} has non-positive size"));
    } else if !r.inside_canvas() {
        report.push(path, format!("{what} rect outside canvas"));
    }
}

pub fn validate_content(content: &DeckContent, report: &mut ValidationReport) {
    if content.slides.is_empty() {
        report.push("content.slides", "deck has no slides");
    }
    if content.slides.len() > MAX_SLIDES {
        report.push(
            "content.slides",
            format!("slide count exceeds {MAX_SLIDES} ({})", content.slides.len()),
        );
    }
    for (i, slide) in content.slides.iter().enumerate() {
        let path = format!("content.slides[{i}]");
        if slide.elements.len() > MAX_BODY_ELEMENTS {
            report.push(
                &path,
                format!("body element count exceeds {MAX_BODY_ELEMENTS} ({})", slide.elements.len()),
            );
        }
        for (j, e) in slide.elements.iter().enumerate() {
            if !e.payload_compatible() {
                report.push(
                    format!("{path}.elements[{j}]"),
                    format!("payload {} incompatible with {}", e.payload.variant_name(), e.kind),
                );
            }
        }
    }
}

/// Checks every deck invariant; never fails, violations are returned.
pub fn validate_deck(deck: &DeckLayout) -> ValidationReport {
    let mut report = ValidationReport::default();
    if deck.schema_version != SCHEMA_VERSION {
        report.push("schema_version", format!("unsupported schema version '{}'", deck.schema_version));
    }
    if deck.deck_id.is_empty() {
        report.push("deck_id", "empty deck id");
    }
    validate_content(&deck.content, &mut report);
    if deck.slides.len() != deck.content.slides.len() {
        report.push(
            "slides",
            format!(
                "{} placed slides for {} content slides",
                deck.slides.len(),
                deck.content.slides.len()
            ),
        );
    }
    let catalog = LayoutCatalog::standard();
    let first_title = deck.slides.first().map(|s| &s.style.title);
    for (i, slide) in deck.slides.iter().enumerate() {
        let path = format!("slides[{i}]");
        if catalog.get(&slide.layout_id).is_err() {
            report.push(&path, format!("unknown layout id '{}'", slide.layout_id));
        }
        if Some(&slide.style.title) != first_title {
            report.push(&path, "title style differs from first slide");
        }
        let all: Vec<(String, &PlacedElement)> = slide
            .placed
            .iter()
            .enumerate()
            .map(|(j, e)| (format!("{path}.placed[{j}]"), e))
            .chain(
                slide
                    .meta_elements
                    .iter()
                    .enumerate()
                    .map(|(j, e)| (format!("{path}.meta_elements[{j}]"), e)),
            )
            .collect();
        for (p, e) in &all {
            check_rect(&mut report, p, "element", &e.rect);
            check_rect(&mut report, p, "region", &e.region);
            if !e.region.contains_rect(&e.rect) {
                report.push(p.clone(), "rect not inside its region");
            }
            if !e.content.payload_compatible() {
                report.push(
                    p.clone(),
                    format!("payload {} incompatible with {}", e.content.payload.variant_name(), e.content.kind),
                );
            }
            for id in [
                e.asset.as_deref(),
                match &e.content.payload {
                    Payload::AssetRef(id) => Some(id.as_str()),
                    _ => None,
                },
            ]
            .into_iter()
            .flatten()
            {
                if !deck.assets.contains_key(id) {
                    report.push(p.clone(), format!("asset '{id}' not in asset table"));
                }
            }
        }
        for (a, (pa, ea)) in all.iter().enumerate() {
            for (pb, eb) in &all[a + 1..] {
                if ea.rect.overlaps(&eb.rect) {
                    report.push(pa.clone(), format!("overlaps {pb}"));
                }
            }
        }
    }
    for (id, entry) in &deck.assets {
        if entry.path.starts_with('/') || entry.path.contains("..") {
            report.push(format!("assets.{id}"), "asset path must be relative to the deck directory");
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::sample_deck;

    #[test]
    fn well_formed_deck_is_valid() {
        let deck = sample_deck(12);
        let report = validate_deck(&deck);
        assert!(report.is_valid(), "{report}");
    }

    #[test]
    fn rect_past_right_edge_is_reported() {
        let mut deck = sample_deck(3);
        let e = &mut deck.slides[0].placed[0];
        e.rect.left = 12.0;
        e.region = e.rect;
        e.rect.width = 3.0;
        e.region.width = 3.0;
        let report = validate_deck(&deck);
        assert!(report.contains("rect outside canvas"), "{report}");
    }

    #[test]
    fn sixteen_slides_exceed_limit() {
        let deck = sample_deck(16);
        assert!(validate_deck(&deck).contains("slide count exceeds 15"));
    }

    #[test]
    fn dangling_asset_is_reported() {
        let mut deck = sample_deck(2);
        deck.assets.clear();
        let report = validate_deck(&deck);
        assert!(report.contains("not in asset table"), "{report}");
    }

    #[test]
    fn title_style_drift_is_reported() {
        let mut deck = sample_deck(3);
        deck.slides[2].style.title.size_pt += 4.0;
        assert!(validate_deck(&deck).contains("title style differs"));
        deck.coherent_style = false;
        assert!(validate_deck(&deck).contains("title style differs"));
    }
}
