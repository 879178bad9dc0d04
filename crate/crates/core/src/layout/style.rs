//! Style assignment and the shipped background templates.

use crate::deck::model::{Align, Background, Color, DeckContent, ElementKind, ElementStyle, FontFamily, Role, StyleSpec, TextStyle};
use crate::rng;
use rand::Rng;

/// Where a template draws its decoration. All decorations stay in the
/// slide margins, clear of every layout region.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decoration {
    Plain,
    TopBar,
    BottomBar,
    LeftStripe,
    CornerTriangle,
    DoubleRule,
    Frame,
    Dots,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BackgroundTemplate {
    pub name: &'static str,
    pub base: Color,
    pub band: Color,
    pub decoration: Decoration,
}

impl BackgroundTemplate {
    pub fn is_dark(&self) -> bool {
        self.base.luminance() < 110.0
    }
}

pub const TEMPLATES: [BackgroundTemplate; 8] = [
    BackgroundTemplate {
        name: "paper",
        base: Color([255, 255, 255]),
        band: Color([200, 205, 215]),
        decoration: Decoration::Plain,
    },
    BackgroundTemplate {
        name: "harbor",
        base: Color([250, 251, 255]),
        band: Color([32, 78, 140]),
        decoration: Decoration::TopBar,
    },
    BackgroundTemplate {
        name: "sand",
        base: Color([250, 246, 236]),
        band: Color([190, 120, 60]),
        decoration: Decoration::BottomBar,
    },
    BackgroundTemplate {
        name: "mint",
        base: Color([240, 250, 245]),
        band: Color([40, 140, 100]),
        decoration: Decoration::LeftStripe,
    },
    BackgroundTemplate {
        name: "slate",
        base: Color([38, 44, 56]),
        band: Color([240, 170, 60]),
        decoration: Decoration::CornerTriangle,
    },
    BackgroundTemplate {
        name: "ledger",
        base: Color([255, 255, 250]),
        band: Color([150, 30, 40]),
        decoration: Decoration::DoubleRule,
    },
    BackgroundTemplate {
        name: "midnight",
        base: Color([18, 28, 52]),
        band: Color([90, 160, 230]),
        decoration: Decoration::Frame,
    },
    BackgroundTemplate {
        name: "grid",
        base: Color([246, 246, 250]),
        band: Color([170, 170, 200]),
        decoration: Decoration::Dots,
    },
];

pub fn template(id: u8) -> &'static BackgroundTemplate {
    &TEMPLATES[id as usize % TEMPLATES.len()]
}

/// Base fill of a background.
pub fn background_base(bg: &Background) -> Color {
    match bg {
        Background::Solid(c) => *c,
        Background::Template(id) => template(*id).base,
    }
}

const DARK_INKS: [Color; 4] = [Color([20, 20, 30]), Color([30, 40, 70]), Color([50, 30, 30]), Color([25, 55, 45])];
const LIGHT_INKS: [Color; 3] = [Color([245, 245, 245]), Color([230, 235, 250]), Color([250, 240, 220])];
const ACCENTS: [Color; 6] = [
    Color([30, 90, 160]),
    Color([170, 50, 40]),
    Color([40, 120, 80]),
    Color([120, 60, 150]),
    Color([200, 110, 20]),
    Color([20, 120, 140]),
];

fn ink<R: Rng + ?Sized>(r: &mut R, dark_bg: bool) -> Color {
    if dark_bg {
        *rng::pick(r, &LIGHT_INKS)
    } else {
        *rng::pick(r, &DARK_INKS)
    }
}

/// Probabilities of the per-slide decoration flags.
pub const BORDER_P: f64 = 0.2;
pub const SHADOW_P: f64 = 0.15;
/// Share of slides on a plain solid background instead of a template.
pub const SOLID_P: f64 = 0.2;

#[derive(Debug, Clone, PartialEq)]
struct DeckLook {
    background: Background,
    title: TextStyle,
}

fn draw_background<R: Rng + ?Sized>(r: &mut R) -> Background {
    if rng::chance(r, SOLID_P) {
        let v = r.gen_range(235..=255u8);
        Background::Solid(Color([v, v, r.gen_range(235..=255u8)]))
    } else {
        Background::Template(rng::index(r, TEMPLATES.len()) as u8)
    }
}

fn is_dark(bg: &Background) -> bool {
    background_base(bg).luminance() < 110.0
}

/// A background of the given brightness class, so a fixed title color
/// keeps its contrast.
fn draw_background_like<R: Rng + ?Sized>(r: &mut R, dark: bool) -> Background {
    if dark {
        let dark_ids: Vec<u8> = (0..TEMPLATES.len() as u8).filter(|i| template(*i).is_dark()).collect();
        return Background::Template(*rng::pick(r, &dark_ids));
    }
    loop {
        let bg = draw_background(r);
        if !is_dark(&bg) {
            return bg;
        }
    }
}

fn draw_look<R: Rng + ?Sized>(r: &mut R) -> DeckLook {
    let background = draw_background(r);
    let dark = is_dark(&background);
    let family = *rng::pick(r, &[FontFamily::Sans, FontFamily::Serif, FontFamily::Stix]);
    let title = TextStyle {
        family,
        size_pt: [30.0, 32.0, 36.0, 40.0, 44.0][rng::index(r, 5)],
        color: if !dark && rng::chance(r, 0.4) {
            *rng::pick(r, &ACCENTS)
        } else {
            ink(r, dark)
        },
        bold: family == FontFamily::Sans && rng::chance(r, 0.6),
        align: if rng::chance(r, 0.3) { Align::Center } else { Align::Left },
    };
    DeckLook { background, title }
}

/// One style per slide. The title style is drawn once per deck. With
/// `coherent` the background is too; otherwise every slide draws its own
/// background of the same brightness class. Body, meta, accent and decoration flags always vary per slide.
pub fn assign_styles<R: Rng + ?Sized>(deck: &DeckContent, coherent: bool, r: &mut R) -> Vec<StyleSpec> {
    let deck_look = draw_look(r);
    deck.slides
        .iter()
        .map(|_| {
            let background = if coherent {
                deck_look.background.clone()
            } else {
                draw_background_like(r, is_dark(&deck_look.background))
            };
            let dark = is_dark(&background);
            let body = TextStyle {
                family: *rng::pick(r, &[FontFamily::Sans, FontFamily::Serif, FontFamily::Stix]),
                size_pt: [16.0, 18.0, 20.0, 22.0, 24.0][rng::index(r, 5)],
                color: ink(r, dark),
                bold: false,
                align: Align::Left,
            };
            let meta = TextStyle {
                family: body.family,
                size_pt: [10.0, 11.0, 12.0, 14.0][rng::index(r, 4)],
                color: if dark { Color([190, 195, 210]) } else { Color([95, 95, 110]) },
                bold: false,
                align: Align::Left,
            };
            StyleSpec {
                background,
                title: deck_look.title.clone(),
                body,
                meta,
                accent: *rng::pick(r, &ACCENTS),
                border: rng::chance(r, BORDER_P),
                shadow: rng::chance(r, SHADOW_P),
            }
        })
        .collect()
}

/// Resolved style of one element under a slide style.
pub fn element_style(slide: &StyleSpec, role: Role, kind: ElementKind) -> ElementStyle {
    let mut text = match role {
        Role::Title => slide.title.clone(),
        Role::Body => slide.body.clone(),
        Role::Caption => TextStyle {
            size_pt: (slide.body.size_pt * 0.75).max(10.0),
            ..slide.body.clone()
        },
        Role::Meta => slide.meta.clone(),
    };
    match kind {
        ElementKind::Code => text.family = FontFamily::Mono,
        ElementKind::Heading => {
            text.bold = text.family == FontFamily::Sans;
            text.size_pt = (text.size_pt * 1.25).round();
        }
        ElementKind::Url => text.color = slide.accent,
        ElementKind::SlideNr => text.align = Align::Right,
        ElementKind::FigureCaption | ElementKind::TableCaption => text.align = Align::Center,
        _ => {}
    }
    let decorated = role == Role::Body;
    ElementStyle {
        text,
        border: decorated && slide.border,
        shadow: decorated && slide.shadow,
        accent: slide.accent,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deck::model::{SlideContent, SlideType};
    use crate::rng::rng_from_seed;
    use std::collections::BTreeSet;

    fn deck(n: usize) -> DeckContent {
        DeckContent {
            topic: "T".into(),
            subject: "S".into(),
            slides: (0..n)
                .map(|i| SlideContent {
                    title: format!("s{i}"),
                    slide_type: SlideType::Example,
                    elements: vec![],
                })
                .collect(),
        }
    }

    #[test]
    fn coherent_decks_share_title_and_background() {
        let styles = assign_styles(&deck(12), true, &mut rng_from_seed(3));
        assert!(styles
            .iter()
            .all(|s| s.title == styles[0].title && s.background == styles[0].background));
    }

    #[test]
    fn independent_slides_keep_the_title_and_vary_backgrounds() {
        let styles = assign_styles(&deck(12), false, &mut rng_from_seed(3));
        assert!(styles.iter().all(|s| s.title == styles[0].title));
        let backgrounds: BTreeSet<String> = styles.iter().map(|s| format!("{:?}", s.background)).collect();
        assert!(backgrounds.len() > 1);
    }

    #[test]
    fn same_seed_same_styles() {
        assert_eq!(
            assign_styles(&deck(5), true, &mut rng_from_seed(8)),
            assign_styles(&deck(5), true, &mut rng_from_seed(8))
        );
    }

    #[test]
    fn many_decks_use_many_templates() {
        let mut seen = BTreeSet::new();
        for seed in 0..100 {
            if let Background::Template(t) = assign_styles(&deck(1), true, &mut rng_from_seed(seed))[0].background {
                seen.insert(t);
            }
        }
        assert!(seen.len() >= 5, "{seen:?}");
    }

    #[test]
    fn text_contrasts_with_background() {
        for seed in 0..50 {
            for s in assign_styles(&deck(4), false, &mut rng_from_seed(seed)) {
                let bg = background_base(&s.background).luminance();
                assert!((bg - s.body.color.luminance()).abs() > 100.0);
                assert!((bg - s.title.color.luminance()).abs() > 60.0);
            }
        }
    }
}
