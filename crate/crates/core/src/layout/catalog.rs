//! The 18-template layout catalog.
//!
//! Nine titled base arrangements (by body-cell count) plus an untitled
//! counterpart of each whose body band is extended up into the title area.
//! Ids `L01`..`L09` are titled, `L10`..`L18` untitled, in the same order.

use crate::error::LayoutError;
use crate::geometry::{Rect, CANVAS_WIDTH};
use crate::rng;
use rand::Rng;
use serde::{Deserialize, Serialize};

pub const MAX_BODY_CELLS: usize = 4;

pub const TITLE_REGION: Rect = Rect {
    left: 1.0,
    top: 0.3,
    width: 11.3,
    height: 1.2,
};

const BODY_LEFT: f64 = 1.0;
const BODY_WIDTH: f64 = 11.3;
const TITLED_BODY_TOP: f64 = 1.7;
const UNTITLED_BODY_TOP: f64 = 0.3;
const BODY_BOTTOM: f64 = 6.25;
const CELL_GAP: f64 = 0.25;

const FOOTER_TOP: f64 = 6.8;
const FOOTER_HEIGHT: f64 = 0.5;
const FOOTER_SPAN_LEFT: f64 = 0.5;
const FOOTER_WIDTH: f64 = 3.8;

/// Strip between body band and footers, used for URL meta elements.
pub const URL_STRIP: Rect = Rect {
    left: 1.0,
    top: 6.3,
    width: 6.0,
    height: 0.42,
};

/// Top-right margin box, used for logos. Lies right of every body band.
pub const LOGO_CORNER: Rect = Rect {
    left: 12.4,
    top: 0.3,
    width: 0.8,
    height: 0.8,
};

/// Top-left margin box, used for decorative natural images.
pub const IMAGE_CORNER: Rect = Rect {
    left: 0.1,
    top: 0.3,
    width: 0.8,
    height: 0.8,
};

/// Three equally spaced footer areas along the bottom edge.
pub fn footer_regions() -> [Rect; 3] {
    let span = CANVAS_WIDTH - 2.0 * FOOTER_SPAN_LEFT;
    let gap = (span - 3.0 * FOOTER_WIDTH) / 2.0;
    std::array::from_fn(|i| {
        Rect::new(
            FOOTER_SPAN_LEFT + i as f64 * (FOOTER_WIDTH + gap),
            FOOTER_TOP,
            FOOTER_WIDTH,
            FOOTER_HEIGHT,
        )
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Arrangement {
    TitleOnly,
    FullBody,
    TwoColumn,
    TwoRow,
    OneRowTwoColumn,
    TwoRowOneColumn,
    ThreeColumn,
    ThreeRow,
    Grid2x2,
}

impl Arrangement {
    pub const ALL: [Arrangement; 9] = [
        Arrangement::TitleOnly,
        Arrangement::FullBody,
        Arrangement::TwoColumn,
        Arrangement::TwoRow,
        Arrangement::OneRowTwoColumn,
        Arrangement::TwoRowOneColumn,
        Arrangement::ThreeColumn,
        Arrangement::ThreeRow,
        Arrangement::Grid2x2,
    ];

    pub fn cell_count(self) -> usize {
        match self {
            Arrangement::TitleOnly => 0,
            Arrangement::FullBody => 1,
            Arrangement::TwoColumn | Arrangement::TwoRow => 2,
            Arrangement::OneRowTwoColumn | Arrangement::TwoRowOneColumn | Arrangement::ThreeColumn | Arrangement::ThreeRow => 3,
            Arrangement::Grid2x2 => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Arrangement::TitleOnly => "title-only",
            Arrangement::FullBody => "full-body",
            Arrangement::TwoColumn => "two-column",
            Arrangement::TwoRow => "two-row",
            Arrangement::OneRowTwoColumn => "one-row-two-column",
            Arrangement::TwoRowOneColumn => "two-row-one-column",
            Arrangement::ThreeColumn => "three-column",
            Arrangement::ThreeRow => "three-row",
            Arrangement::Grid2x2 => "grid-2x2",
        }
    }

    /// Body cells inside `band`, in reading order (top-left first).
    fn cells(self, band: Rect) -> Vec<Rect> {
        let cols = |r: Rect, n: usize| -> Vec<Rect> {
            let w = (r.width - CELL_GAP * (n as f64 - 1.0)) / n as f64;
            (0..n)
                .map(|i| Rect::new(r.left + i as f64 * (w + CELL_GAP), r.top, w, r.height))
                .collect()
        };
        let rows = |r: Rect, n: usize| -> Vec<Rect> {
            let h = (r.height - CELL_GAP * (n as f64 - 1.0)) / n as f64;
            (0..n)
                .map(|i| Rect::new(r.left, r.top + i as f64 * (h + CELL_GAP), r.width, h))
                .collect()
        };
        match self {
            Arrangement::TitleOnly => vec![],
            Arrangement::FullBody => vec![band],
            Arrangement::TwoColumn => cols(band, 2),
            Arrangement::TwoRow => rows(band, 2),
            Arrangement::OneRowTwoColumn => {
                let r = rows(band, 2);
                let mut out = vec![r[0]];
                out.extend(cols(r[1], 2));
                out
            }
            Arrangement::TwoRowOneColumn => {
                let c = cols(band, 2);
                let left = rows(c[0], 2);
                vec![left[0], c[1], left[1]]
            }
            Arrangement::ThreeColumn => cols(band, 3),
            Arrangement::ThreeRow => rows(band, 3),
            Arrangement::Grid2x2 => rows(band, 2).into_iter().flat_map(|r| cols(r, 2)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayoutTemplate {
    pub layout_id: String,
    pub arrangement: Arrangement,
    pub title_present: bool,
    pub title_region: Option<Rect>,
    pub body_regions: Vec<Rect>,
    pub footer_regions: [Rect; 3],
}

/// Every region of a template, by role.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayoutRegions {
    pub title: Option<Rect>,
    pub body: Vec<Rect>,
    pub footer: [Rect; 3],
    pub url_strip: Rect,
    pub logo_corner: Rect,
    pub image_corner: Rect,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayoutCatalog {
    pub templates: Vec<LayoutTemplate>,
}

impl LayoutCatalog {
    pub fn standard() -> Self {
        let mut templates = Vec::with_capacity(18);
        for (titled, offset) in [(true, 1), (false, 10)] {
            let top = if titled { TITLED_BODY_TOP } else { UNTITLED_BODY_TOP };
            let band = Rect::new(BODY_LEFT, top, BODY_WIDTH, BODY_BOTTOM - top);
            for (i, arrangement) in Arrangement::ALL.into_iter().enumerate() {
                templates.push(LayoutTemplate {
                    layout_id: format!("L{:02}", offset + i),
                    arrangement,
                    title_present: titled,
                    title_region: titled.then_some(TITLE_REGION),
                    body_regions: arrangement.cells(band),
                    footer_regions: footer_regions(),
                });
            }
        }
        Self { templates }
    }

    pub fn get(&self, layout_id: &str) -> Result<&LayoutTemplate, LayoutError> {
        self.templates
            .iter()
            .find(|t| t.layout_id == layout_id)
            .ok_or_else(|| LayoutError::UnknownLayout(layout_id.to_string()))
    }

    pub fn pool(&self, n_body: usize, with_title: bool) -> Vec<&LayoutTemplate> {
        self.templates
            .iter()
            .filter(|t| t.body_regions.len() == n_body && t.title_present == with_title)
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("catalog serializes")
    }
}

/// Region map of a catalog template.
pub fn get_layout_dimensions(layout_id: &str) -> Result<LayoutRegions, LayoutError> {
    let catalog = LayoutCatalog::standard();
    let t = catalog.get(layout_id)?;
    Ok(LayoutRegions {
        title: t.title_region,
        body: t.body_regions.clone(),
        footer: t.footer_regions,
        url_strip: URL_STRIP,
        logo_corner: LOGO_CORNER,
        image_corner: IMAGE_CORNER,
    })
}

/// Uniform choice among templates with exactly `n_body` cells and the
/// requested title presence.
pub fn select_layout<R: Rng + ?Sized>(n_body: usize, with_title: bool, rng: &mut R) -> Result<String, LayoutError> {
    if n_body > MAX_BODY_CELLS {
        return Err(LayoutError::UnsupportedElementCount(n_body));
    }
    let catalog = LayoutCatalog::standard();
    let pool = catalog.pool(n_body, with_title);
    Ok(rng::pick(rng, &pool).layout_id.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;

    #[test]
    fn catalog_has_eighteen_stable_ids() {
        let c = LayoutCatalog::standard();
        assert_eq!(c.templates.len(), 18);
        let ids: Vec<&str> = c.templates.iter().map(|t| t.layout_id.as_str()).collect();
        assert_eq!(ids.first(), Some(&"L01"));
        assert_eq!(ids.last(), Some(&"L18"));
        assert_eq!(c.templates.iter().filter(|t| t.title_present).count(), 9);
    }

    #[test]
    fn regions_are_disjoint_and_inside_canvas() {
        for t in LayoutCatalog::standard().templates {
            let mut all: Vec<Rect> = t.body_regions.clone();
            all.extend(t.title_region);
            all.extend(t.footer_regions);
            all.extend([URL_STRIP, LOGO_CORNER, IMAGE_CORNER]);
            for (i, a) in all.iter().enumerate() {
                assert!(a.inside_canvas(), "{} region {i} outside canvas", t.layout_id);
                assert!(a.has_positive_size());
                for b in &all[i + 1..] {
                    assert!(!a.overlaps(b), "{}: {a:?} overlaps {b:?}", t.layout_id);
                }
            }
        }
    }

    #[test]
    fn footers_equally_spaced() {
        let f = footer_regions();
        let g1 = f[1].left - f[0].right();
        let g2 = f[2].left - f[1].right();
        assert!((g1 - g2).abs() < 1e-12);
        assert!(f.iter().all(|r| r.top == f[0].top && r.width == f[0].width));
    }

    #[test]
    fn two_column_splits_body_band_vertically() {
        let id = &LayoutCatalog::standard().pool(2, true)[0].layout_id.clone();
        let d = get_layout_dimensions(id).unwrap();
        assert_eq!(d.body.len(), 2);
        let (a, b) = (d.body[0], d.body[1]);
        assert_eq!(a.top, b.top);
        assert_eq!(a.height, b.height);
        assert!(a.right() <= b.left);
    }

    #[test]
    fn title_only_has_no_body() {
        let d = get_layout_dimensions("L01").unwrap();
        assert!(d.body.is_empty());
        assert_eq!(d.title, Some(TITLE_REGION));
    }

    #[test]
    fn unknown_layout_is_an_error() {
        assert!(matches!(get_layout_dimensions("L99"), Err(LayoutError::UnknownLayout(_))));
    }

    #[test]
    fn select_layout_pools() {
        let mut rng = rng_from_seed(5);
        assert_eq!(select_layout(0, true, &mut rng).unwrap(), "L01");
        assert_eq!(select_layout(0, false, &mut rng).unwrap(), "L10");
        assert!(matches!(
            select_layout(5, true, &mut rng),
            Err(LayoutError::UnsupportedElementCount(5))
        ));
        let catalog = LayoutCatalog::standard();
        for n in 0..=4 {
            for titled in [true, false] {
                for _ in 0..20 {
                    let id = select_layout(n, titled, &mut rng).unwrap();
                    let t = catalog.get(&id).unwrap();
                    assert_eq!(t.body_regions.len(), n);
                    assert_eq!(t.title_present, titled);
                }
            }
        }
    }

    #[test]
    fn untitled_bodies_extend_upward() {
        let c = LayoutCatalog::standard();
        for i in 0..9 {
            let (a, b) = (&c.templates[i], &c.templates[i + 9]);
            assert_eq!(a.arrangement, b.arrangement);
            assert!(b.title_region.is_none());
            for (ra, rb) in a.body_regions.iter().zip(&b.body_regions) {
                assert!(rb.top <= ra.top + 1e-9 && rb.height >= ra.height - 1e-9);
            }
        }
    }
}
