//! Bundled fonts.

use crate::deck::model::FontFamily;
use ab_glyph::FontRef;
use std::sync::OnceLock;

static SANS: &[u8] = include_bytes!("../../fonts/DejaVuSans.ttf");
static SANS_BOLD: &[u8] = include_bytes!("../../fonts/DejaVuSans-Bold.ttf");
static SERIF: &[u8] = include_bytes!("../../fonts/DejaVuSerif.ttf");
static SERIF_ITALIC: &[u8] = include_bytes!("../../fonts/DejaVuSerif-Italic.ttf");
static MONO: &[u8] = include_bytes!("../../fonts/DejaVuSansMono.ttf");
static STIX: &[u8] = include_bytes!("../../fonts/STIXGeneral.ttf");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Face {
    Sans,
    SansBold,
    Serif,
    SerifItalic,
    Mono,
    Stix,
}

fn load(slot: &'static OnceLock<FontRef<'static>>, data: &'static [u8]) -> &'static FontRef<'static> {
    slot.get_or_init(|| FontRef::try_from_slice(data).expect("bundled font parses"))
}

pub fn face(face: Face) -> &'static FontRef<'static> {
    static F: [OnceLock<FontRef<'static>>; 6] = [
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
    ];
    match face {
        Face::Sans => load(&F[0], SANS),
        Face::SansBold => load(&F[1], SANS_BOLD),
        Face::Serif => load(&F[2], SERIF),
        Face::SerifItalic => load(&F[3], SERIF_ITALIC),
        Face::Mono => load(&F[4], MONO),
        Face::Stix => load(&F[5], STIX),
    }
}

/// Face used for a style family. Only Sans has a bold cut.
pub fn face_for(family: FontFamily, bold: bool) -> Face {
    match (family, bold) {
        (FontFamily::Sans, true) => Face::SansBold,
        (FontFamily::Sans, false) => Face::Sans,
        (FontFamily::Serif, _) => Face::Serif,
        (FontFamily::Mono, _) => Face::Mono,
        (FontFamily::Stix, _) => Face::Stix,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ab_glyph::Font;

    #[test]
    fn all_faces_load_and_have_latin() {
        for f in [Face::Sans, Face::SansBold, Face::Serif, Face::SerifItalic, Face::Mono, Face::Stix] {
            assert_ne!(face(f).glyph_id('A').0, 0, "{f:?}");
        }
    }
}
