//! Best-effort OOXML presentation export. Shapes keep the placement rects;
//! styling is limited to fonts, sizes, colors and backgrounds.

use super::slide::paragraphs_of;
use crate::assets::AssetStore;
use crate::deck::model::{Align, DeckLayout, PlacedElement, PlacedSlide};
use crate::error::RenderError;
use crate::geometry::Rect;
use crate::layout::style::background_base;
use std::collections::BTreeMap;
use std::io::{Cursor, Write};
use std::path::Path;
use zip::write::SimpleFileOptions;
use zip::ZipWriter;

/// English Metric Units per slide unit (one inch).
pub const EMU_PER_UNIT: f64 = 914_400.0;
pub const SLIDE_CX: i64 = 12_192_000;
pub const SLIDE_CY: i64 = 6_858_000;

const NS_P: &str = "http://schemas.openxmlformats.org/presentationml/2006/main";
const NS_A: &str = "http://schemas.openxmlformats.org/drawingml/2006/main";
const NS_R: &str = "http://schemas.openxmlformats.org/officeDocument/2006/relationships";
const REL: &str = "http://schemas.openxmlformats.org/officeDocument/2006/relationships";
const PKG_REL: &str = "http://schemas.openxmlformats.org/package/2006/relationships";
const CORE_PROPS_REL: &str = "http://schemas.openxmlformats.org/package/2006/relationships/metadata/core-properties";
const XML_DECL: &str = r#"<?xml version="1.0" encoding="UTF-8" standalone="yes"?>"#;

fn esc(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            c if (c as u32) < 0x20 && c != '\t' && c != '\n' => {}
            c => out.push(c),
        }
    }
    out
}

fn emu(v: f64) -> i64 {
    (v * EMU_PER_UNIT).round() as i64
}

/// `(x, y, cx, cy)` in EMU.
pub fn rect_emu(r: &Rect) -> (i64, i64, i64, i64) {
    let (x, y) = (emu(r.left), emu(r.top));
    (x, y, emu(r.right()) - x, emu(r.bottom()) - y)
}

fn xfrm(r: &Rect) -> String {
    let (x, y, cx, cy) = rect_emu(r);
    format!(r#"<a:xfrm><a:off x="{x}" y="{y}"/><a:ext cx="{cx}" cy="{cy}"/></a:xfrm>"#)
}

fn rels(entries: &[(String, &str, String)]) -> String {
    let mut s = format!(r#"{XML_DECL}<Relationships xmlns="{PKG_REL}">"#);
    for (id, kind, target) in entries {
        let ty = if kind.starts_with("http") {
            kind.to_string()
        } else {
            format!("{REL}/{kind}")
        };
        s += &format!(r#"<Relationship Id="{id}" Type="{ty}" Target="{target}"/>"#);
    }
    s + "</Relationships>"
}

fn text_shape(id: usize, e: &PlacedElement) -> Option<String> {
    let paras = paragraphs_of(e);
    if paras.is_empty() {
        return None;
    }
    let t = &e.style.text;
    let algn = match t.align {
        Align::Left => "l",
        Align::Center => "ctr",
        Align::Right => "r",
    };
    let font = match t.family {
        crate::deck::model::FontFamily::Sans => "Arial",
        crate::deck::model::FontFamily::Serif => "Georgia",
        crate::deck::model::FontFamily::Mono => "Courier New",
        crate::deck::model::FontFamily::Stix => "Cambria",
    };
    let mut body = String::new();
    for p in &paras {
        let bullet = if !p.prefix.is_empty() {
            r#"<a:buChar char="&#8226;"/>"#
        } else {
            "<a:buNone/>"
        };
        body += &format!(
            r#"<a:p><a:pPr algn="{algn}">{bullet}</a:pPr><a:r><a:rPr lang="en-US" sz="{sz}" b="{b}"><a:solidFill><a:srgbClr val="{col}"/></a:solidFill><a:latin typeface="{font}"/></a:rPr><a:t>{text}</a:t></a:r></a:p>"#,
            sz = (t.size_pt * 100.0).round() as i64,
            b = t.bold as u8,
            col = t.color.hex().trim_start_matches('#').to_uppercase(),
            text = esc(&p.text),
        );
    }
    let line = if e.style.border {
        format!(
            r#"<a:ln w="19050"><a:solidFill><a:srgbClr val="{}"/></a:solidFill></a:ln>"#,
            e.style.accent.hex().trim_start_matches('#').to_uppercase()
        )
    } else {
        "<a:ln><a:noFill/></a:ln>".to_string()
    };
    Some(format!(
        r#"<p:sp><p:nvSpPr><p:cNvPr id="{id}" name="{name} {id}"/><p:cNvSpPr txBox="1"/><p:nvPr/></p:nvSpPr><p:spPr>{x}<a:prstGeom prst="rect"><a:avLst/></a:prstGeom><a:noFill/>{line}</p:spPr><p:txBody><a:bodyPr wrap="square" lIns="0" tIns="0" rIns="0" bIns="0"><a:normAutofit/></a:bodyPr><a:lstStyle/>{body}</p:txBody></p:sp>"#,
        name = esc(e.content.kind.name()),
        x = xfrm(&e.rect),
    ))
}

fn picture_shape(id: usize, e: &PlacedElement, rel: &str) -> String {
    format!(
        r#"<p:pic><p:nvPicPr><p:cNvPr id="{id}" name="{name} {id}" descr="{descr}"/><p:cNvPicPr><a:picLocks noChangeAspect="1"/></p:cNvPicPr><p:nvPr/></p:nvPicPr><p:blipFill><a:blip r:embed="{rel}"/><a:stretch><a:fillRect/></a:stretch></p:blipFill><p:spPr>{x}<a:prstGeom prst="rect"><a:avLst/></a:prstGeom></p:spPr></p:pic>"#,
        name = esc(e.content.kind.name()),
        descr = esc(&e.content.caption),
        x = xfrm(&e.rect),
    )
}

struct SlidePart {
    xml: String,
    rels: String,
}

fn slide_part(slide: &PlacedSlide, media: &mut BTreeMap<String, String>) -> SlidePart {
    let mut shapes = String::new();
    let mut rel_entries = vec![("rId1".to_string(), "slideLayout", "../slideLayouts/slideLayout1.xml".to_string())];
    for (i, e) in slide.all_elements().enumerate() {
        let id = i + 2;
        if let Some(asset) = e.drawn_asset() {
            let n = media.len() + 1;
            let file = media.entry(asset.to_string()).or_insert_with(|| format!("image{n}.png")).clone();
            let rid = format!("rId{}", rel_entries.len() + 1);
            rel_entries.push((rid.clone(), "image", format!("../media/{file}")));
            shapes += &picture_shape(id, e, &rid);
        } else if let Some(s) = text_shape(id, e) {
            shapes += &s;
        }
    }
    let bg = background_base(&slide.style.background)
        .hex()
        .trim_start_matches('#')
        .to_uppercase();
    let xml = format!(
        r#"{XML_DECL}<p:sld xmlns:a="{NS_A}" xmlns:r="{NS_R}" xmlns:p="{NS_P}"><p:cSld><p:bg><p:bgPr><a:solidFill><a:srgbClr val="{bg}"/></a:solidFill><a:effectLst/></p:bgPr></p:bg><p:spTree><p:nvGrpSpPr><p:cNvPr id="1" name=""/><p:cNvGrpSpPr/><p:nvPr/></p:nvGrpSpPr><p:grpSpPr/>{shapes}</p:spTree></p:cSld><p:clrMapOvr><a:masterClrMapping/></p:clrMapOvr></p:sld>"#
    );
    SlidePart {
        xml,
        rels: rels(&rel_entries.iter().map(|(a, b, c)| (a.clone(), *b, c.clone())).collect::<Vec<_>>()),
    }
}

fn content_types(n_slides: usize) -> String {
    let mut s = format!(
        r#"{XML_DECL}<Types xmlns="http://schemas.openxmlformats.org/package/2006/content-types"><Default Extension="rels" ContentType="application/vnd.openxmlformats-package.relationships+xml"/><Default Extension="xml" ContentType="application/xml"/><Default Extension="png" ContentType="image/png"/><Override PartName="/ppt/presentation.xml" ContentType="application/vnd.openxmlformats-officedocument.presentationml.presentation.main+xml"/><Override PartName="/ppt/slideMasters/slideMaster1.xml" ContentType="application/vnd.openxmlformats-officedocument.presentationml.slideMaster+xml"/><Override PartName="/ppt/slideLayouts/slideLayout1.xml" ContentType="application/vnd.openxmlformats-officedocument.presentationml.slideLayout+xml"/><Override PartName="/ppt/theme/theme1.xml" ContentType="application/vnd.openxmlformats-officedocument.theme+xml"/><Override PartName="/docProps/core.xml" ContentType="application/vnd.openxmlformats-package.core-properties+xml"/><Override PartName="/docProps/app.xml" ContentType="application/vnd.openxmlformats-officedocument.extended-properties+xml"/>"#
    );
    for i in 1..=n_slides {
        s += &format!(
            r#"<Override PartName="/ppt/slides/slide{i}.xml" ContentType="application/vnd.openxmlformats-officedocument.presentationml.slide+xml"/>"#
        );
    }
    s + "</Types>"
}

fn presentation(n_slides: usize) -> String {
    let ids: String = (1..=n_slides)
        .map(|i| format!(r#"<p:sldId id="{}" r:id="rId{}"/>"#, 255 + i, i + 1))
        .collect();
    format!(
        r#"{XML_DECL}<p:presentation xmlns:a="{NS_A}" xmlns:r="{NS_R}" xmlns:p="{NS_P}"><p:sldMasterIdLst><p:sldMasterId id="2147483648" r:id="rId1"/></p:sldMasterIdLst><p:sldIdLst>{ids}</p:sldIdLst><p:sldSz cx="{SLIDE_CX}" cy="{SLIDE_CY}"/><p:notesSz cx="{SLIDE_CY}" cy="{SLIDE_CX}"/></p:presentation>"#
    )
}

const EMPTY_TREE: &str = r#"<p:spTree><p:nvGrpSpPr><p:cNvPr id="1" name=""/><p:cNvGrpSpPr/><p:nvPr/></p:nvGrpSpPr><p:grpSpPr/></p:spTree>"#;

fn master() -> String {
    format!(
        r#"{XML_DECL}<p:sldMaster xmlns:a="{NS_A}" xmlns:r="{NS_R}" xmlns:p="{NS_P}"><p:cSld>{EMPTY_TREE}</p:cSld><p:clrMap bg1="lt1" tx1="dk1" bg2="lt2" tx2="dk2" accent1="accent1" accent2="accent2" accent3="accent3" accent4="accent4" accent5="accent5" accent6="accent6" hlink="hlink" folHlink="folHlink"/><p:sldLayoutIdLst><p:sldLayoutId id="2147483649" r:id="rId1"/></p:sldLayoutIdLst></p:sldMaster>"#
    )
}

fn layout() -> String {
    format!(
        r#"{XML_DECL}<p:sldLayout xmlns:a="{NS_A}" xmlns:r="{NS_R}" xmlns:p="{NS_P}" type="blank" preserve="1"><p:cSld name="Blank">{EMPTY_TREE}</p:cSld><p:clrMapOvr><a:masterClrMapping/></p:clrMapOvr></p:sldLayout>"#
    )
}

fn theme() -> String {
    let colors = [
        ("dk1", "000000"),
        ("lt1", "FFFFFF"),
        ("dk2", "1F2A44"),
        ("lt2", "E7E6E6"),
        ("accent1", "1E5AA0"),
        ("accent2", "AA3228"),
        ("accent3", "287850"),
        ("accent4", "783C96"),
        ("accent5", "C86E14"),
        ("accent6", "14788C"),
        ("hlink", "0563C1"),
        ("folHlink", "954F72"),
    ];
    let clr: String = colors
        .iter()
        .map(|(n, v)| format!(r#"<a:{n}><a:srgbClr val="{v}"/></a:{n}>"#))
        .collect();
    let fill = r#"<a:solidFill><a:schemeClr val="phClr"/></a:solidFill>"#;
    let fills = fill.repeat(3);
    let line = r#"<a:ln w="9525"><a:solidFill><a:schemeClr val="phClr"/></a:solidFill></a:ln>"#.repeat(3);
    let effects = "<a:effectStyle><a:effectLst/></a:effectStyle>".repeat(3);
    format!(
        r#"{XML_DECL}<a:theme xmlns:a="{NS_A}" name="Plain"><a:themeElements><a:clrScheme name="Plain">{clr}</a:clrScheme><a:fontScheme name="Plain"><a:majorFont><a:latin typeface="Arial"/><a:ea typeface=""/><a:cs typeface=""/></a:majorFont><a:minorFont><a:latin typeface="Arial"/><a:ea typeface=""/><a:cs typeface=""/></a:minorFont></a:fontScheme><a:fmtScheme name="Plain"><a:fillStyleLst>{fills}</a:fillStyleLst><a:lnStyleLst>{line}</a:lnStyleLst><a:effectStyleLst>{effects}</a:effectStyleLst><a:bgFillStyleLst>{fills}</a:bgFillStyleLst></a:fmtScheme></a:themeElements></a:theme>"#
    )
}

fn core_props(title: &str) -> String {
    format!(
        r#"{XML_DECL}<cp:coreProperties xmlns:cp="http://schemas.openxmlformats.org/package/2006/metadata/core-properties" xmlns:dc="http://purl.org/dc/elements/1.1/"><dc:title>{}</dc:title></cp:coreProperties>"#,
        esc(title)
    )
}

fn app_props(n_slides: usize) -> String {
    format!(
        r#"{XML_DECL}<Properties xmlns="http://schemas.openxmlformats.org/officeDocument/2006/extended-properties"><Application>slideforge</Application><Slides>{n_slides}</Slides></Properties>"#
    )
}

/// Serializes `deck` as a presentation archive in memory.
pub fn pptx_bytes(deck: &DeckLayout, assets: &AssetStore) -> Result<Vec<u8>, RenderError> {
    if deck.slides.is_empty() {
        return Err(RenderError::EmptyDeck);
    }
    let n = deck.slides.len();
    let mut media = BTreeMap::new();
    let parts: Vec<SlidePart> = deck.slides.iter().map(|s| slide_part(s, &mut media)).collect();
    let mut zip = ZipWriter::new(Cursor::new(Vec::new()));
    let opts = SimpleFileOptions::default().compression_method(zip::CompressionMethod::Deflated);
    let mut put = |name: &str, data: &[u8]| -> Result<(), RenderError> {
        zip.start_file(name, opts).map_err(std::io::Error::other)?;
        zip.write_all(data)?;
        Ok(())
    };
    put("[Content_Types].xml", content_types(n).as_bytes())?;
    put(
        "_rels/.rels",
        rels(&[
            ("rId1".into(), "officeDocument", "ppt/presentation.xml".into()),
            ("rId2".into(), CORE_PROPS_REL, "docProps/core.xml".into()),
            ("rId3".into(), "extended-properties", "docProps/app.xml".into()),
        ])
        .as_bytes(),
    )?;
    put("docProps/core.xml", core_props(&deck.content.topic).as_bytes())?;
    put("docProps/app.xml", app_props(n).as_bytes())?;
    put("ppt/presentation.xml", presentation(n).as_bytes())?;
    let mut pres_rels = vec![("rId1".to_string(), "slideMaster", "slideMasters/slideMaster1.xml".to_string())];
    for i in 1..=n {
        pres_rels.push((format!("rId{}", i + 1), "slide", format!("slides/slide{i}.xml")));
    }
    pres_rels.push((format!("rId{}", n + 2), "theme", "theme/theme1.xml".into()));
    put("ppt/_rels/presentation.xml.rels", rels(&pres_rels).as_bytes())?;
    put("ppt/slideMasters/slideMaster1.xml", master().as_bytes())?;
    put(
        "ppt/slideMasters/_rels/slideMaster1.xml.rels",
        rels(&[
            ("rId1".into(), "slideLayout", "../slideLayouts/slideLayout1.xml".into()),
            ("rId2".into(), "theme", "../theme/theme1.xml".into()),
        ])
        .as_bytes(),
    )?;
    put("ppt/slideLayouts/slideLayout1.xml", layout().as_bytes())?;
    put(
        "ppt/slideLayouts/_rels/slideLayout1.xml.rels",
        rels(&[("rId1".into(), "slideMaster", "../slideMasters/slideMaster1.xml".into())]).as_bytes(),
    )?;
    put("ppt/theme/theme1.xml", theme().as_bytes())?;
    for (i, part) in parts.iter().enumerate() {
        put(&format!("ppt/slides/slide{}.xml", i + 1), part.xml.as_bytes())?;
        put(&format!("ppt/slides/_rels/slide{}.xml.rels", i + 1), part.rels.as_bytes())?;
    }
    for (asset, file) in &media {
        let img = assets.image(asset).ok_or_else(|| RenderError::MissingAsset {
            asset: asset.clone(),
            element: "presentation export".into(),
        })?;
        let mut png = Vec::new();
        img.write_to(&mut Cursor::new(&mut png), image::ImageFormat::Png)?;
        put(&format!("ppt/media/{file}"), &png)?;
    }
    let cursor = zip.finish().map_err(std::io::Error::other)?;
    Ok(cursor.into_inner())
}

pub fn export_pptx(deck: &DeckLayout, assets: &AssetStore, path: &Path) -> Result<(), RenderError> {
    let bytes = pptx_bytes(deck, assets)?;
    std::fs::write(path, bytes)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::sample_deck;
    use std::io::Read;

    fn store_for(deck: &DeckLayout) -> AssetStore {
        let mut store = AssetStore::default();
        for id in deck.assets.keys() {
            store.insert_if_absent(id, image::RgbaImage::from_pixel(8, 8, image::Rgba([9, 9, 9, 255])), "test");
        }
        store
    }

    fn names(bytes: &[u8]) -> Vec<String> {
        let mut z = zip::ZipArchive::new(Cursor::new(bytes)).unwrap();
        (0..z.len()).map(|i| z.by_index(i).unwrap().name().unwrap().to_string()).collect()
    }

    #[test]
    fn one_slide_deck_has_presentation_and_one_slide() {
        let deck = sample_deck(1);
        let bytes = pptx_bytes(&deck, &store_for(&deck)).unwrap();
        let n = names(&bytes);
        assert!(n.contains(&"ppt/presentation.xml".to_string()));
        assert_eq!(
            n.iter()
                .filter(|f| f.starts_with("ppt/slides/slide") && f.ends_with(".xml"))
                .count(),
            1
        );
    }

    #[test]
    fn full_canvas_rect_spans_the_slide() {
        assert_eq!(rect_emu(&Rect::canvas()), (0, 0, SLIDE_CX, SLIDE_CY));
        // 40/3 units of one inch each.
        assert_eq!(SLIDE_CX, (40.0 / 3.0 * 914_400.0_f64).round() as i64);
    }

    #[test]
    fn empty_deck_is_rejected() {
        let mut deck = sample_deck(1);
        deck.slides.clear();
        let err = pptx_bytes(&deck, &AssetStore::default()).unwrap_err();
        assert_eq!(err.to_string(), "empty deck");
    }

    #[test]
    fn slide_xml_carries_text_and_pictures() {
        let deck = sample_deck(2);
        let bytes = pptx_bytes(&deck, &store_for(&deck)).unwrap();
        assert!(names(&bytes).iter().any(|f| f.starts_with("ppt/media/")));
        let mut z = zip::ZipArchive::new(Cursor::new(bytes)).unwrap();
        let mut xml = String::new();
        z.by_name("ppt/slides/slide2.xml").unwrap().read_to_string(&mut xml).unwrap();
        assert!(xml.contains("Slide 2"));
        assert!(xml.contains("<p:pic>"));
    }

    #[test]
    fn text_is_escaped() {
        assert_eq!(esc("a<b & \"c\""), "a&lt;b &amp; &quot;c&quot;");
    }
}
