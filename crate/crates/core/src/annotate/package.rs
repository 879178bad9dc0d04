//! Dataset assembly: images, COCO splits, summaries, manifest and the
//! per-deck layout files. Everything is written into `<out>.tmp` first and
//! renamed into place at the end, so a failed run never leaves a partial
//! dataset under the final name.

use super::coco::{emit_coco, subset, validate_coco, RenderedSlide};
use super::split::{split_by_presentation, Split};
use super::summary::{emit_summaries, LiveSummaries, SummaryRecord, SummaryStyle};
use crate::assets::AssetStore;
use crate::deck::canonical::{canonical_json, canonicalize};
use crate::deck::model::{DeckLayout, ElementKind, SCHEMA_VERSION};
use crate::error::AnnotateError;
use crate::geometry::PixelBox;
use crate::render::BoxTransform;
use crate::rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

/// One encoded slide image and what the annotator needs about it.
#[derive(Debug, Clone)]
pub struct SlideOutput {
    pub png: Vec<u8>,
    pub width: u32,
    pub height: u32,
    pub ink: Vec<Option<PixelBox>>,
    pub transform: BoxTransform,
}

#[derive(Debug, Clone)]
pub struct DeckOutput {
    pub layout: DeckLayout,
    pub assets: AssetStore,
    pub slides: Vec<SlideOutput>,
}

#[derive(Debug, Clone)]
pub struct PackageOptions {
    pub master_seed: u64,
    pub train_fraction: f64,
    /// Stored verbatim in the manifest.
    pub config: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub schema_version: String,
    pub master_seed: u64,
    pub deck_count: usize,
    pub slide_count: usize,
    pub annotation_count: usize,
    /// deck id to `train` or `val`.
    pub split: BTreeMap<String, String>,
    pub class_counts: BTreeMap<String, u64>,
    /// Image file name to SHA-256 of its bytes.
    pub images: BTreeMap<String, String>,
    pub warning_count: usize,
    pub config: serde_json::Value,
}

pub const MANIFEST: &str = "manifest.json";
pub const SUMMARIES: &str = "summaries.csv";
pub const WARNINGS: &str = "warnings.txt";

pub fn image_file_name(deck_id: &str, slide: usize) -> String {
    format!("{deck_id}_s{:02}.png", slide + 1)
}

pub fn tmp_dir_for(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|n| n.to_os_string()).unwrap_or_else(|| "dataset".into());
    name.push(".tmp");
    out.with_file_name(name)
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), AnnotateError> {
    if let Some(p) = path.parent() {
        std::fs::create_dir_all(p)?;
    }
    std::fs::write(path, bytes)?;
    Ok(())
}

fn summaries_csv(records: &[SummaryRecord]) -> Result<Vec<u8>, AnnotateError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
    for r in records {
        w.serialize(r)?;
    }
    w.into_inner().map_err(|e| AnnotateError::Dataset(e.to_string()))
}

fn assign_split(decks: &[DeckOutput], options: &PackageOptions, warnings: &mut Vec<String>) -> Result<Split, AnnotateError> {
    let layouts: Vec<DeckLayout> = decks.iter().map(|d| d.layout.clone()).collect();
    if layouts.len() == 1 {
        warnings.push("single deck: every slide goes to the training split".into());
        return Ok(Split {
            train: BTreeSet::from([layouts[0].deck_id.clone()]),
            val: BTreeSet::new(),
        });
    }
    split_by_presentation(&layouts, options.train_fraction, &mut rng::child_rng(options.master_seed, "split"))
}

/// Writes the dataset under `out`, replacing an earlier one.
pub fn package_dataset(
    decks: &[DeckOutput],
    out: &Path,
    options: &PackageOptions,
    live: Option<&LiveSummaries<'_, '_>>,
) -> Result<DatasetManifest, AnnotateError> {
    if decks.is_empty() {
        return Err(AnnotateError::Dataset("no decks to package".into()));
    }
    let tmp = tmp_dir_for(out);
    if tmp.exists() {
        std::fs::remove_dir_all(&tmp)?;
    }
    std::fs::create_dir_all(&tmp)?;

    let mut warnings: Vec<String> = decks.iter().flat_map(|d| d.layout.warnings.iter().cloned()).collect();
    let split = assign_split(decks, options, &mut warnings)?;

    let mut images = BTreeMap::new();
    let mut renders = Vec::with_capacity(decks.len());
    let mut summaries = Vec::new();
    let mut next_image = 1u64;
    let mut train_ids = BTreeSet::new();
    for d in decks {
        let deck = &d.layout;
        if d.slides.len() != deck.slides.len() {
            return Err(AnnotateError::MissingRender {
                deck: deck.deck_id.clone(),
                slide: d.slides.len(),
            });
        }
        let mut deck_renders = Vec::with_capacity(d.slides.len());
        for (s, out_slide) in d.slides.iter().enumerate() {
            let file_name = image_file_name(&deck.deck_id, s);
            write(&tmp.join("images").join(&file_name), &out_slide.png)?;
            images.insert(file_name.clone(), rng::sha256_hex(&out_slide.png));
            if split.train.contains(&deck.deck_id) {
                train_ids.insert(next_image);
            }
            deck_renders.push(RenderedSlide {
                image_id: next_image,
                file_name,
                width: out_slide.width,
                height: out_slide.height,
                ink: out_slide.ink.clone(),
                transform: out_slide.transform,
            });
            next_image += 1;
        }
        let ids: Vec<u64> = deck_renders.iter().map(|r| r.image_id).collect();
        for style in SummaryStyle::BOTH {
            summaries.extend(emit_summaries(deck, style, &ids, live, &mut warnings));
        }
        renders.push(deck_renders);

        let deck_dir = tmp.join("decks").join(&deck.deck_id);
        let json = canonicalize(deck).map_err(|e| AnnotateError::Dataset(e.to_string()))?;
        write(&deck_dir.join("deck.json"), &json)?;
        d.assets.write_to(&deck_dir).map_err(|e| AnnotateError::Dataset(e.to_string()))?;
    }
    summaries.sort_by_key(|r| (r.image_id, r.style));

    let layouts: Vec<DeckLayout> = decks.iter().map(|d| d.layout.clone()).collect();
    let coco = emit_coco(&layouts, &renders)?;
    let errors = validate_coco(&coco);
    if !errors.is_empty() {
        return Err(AnnotateError::Dataset(format!("invalid annotations: {}", errors.join("; "))));
    }
    let val_ids: BTreeSet<u64> = coco.images.iter().map(|i| i.id).filter(|id| !train_ids.contains(id)).collect();
    write(&tmp.join("annotations/train.json"), &canonical_json(&subset(&coco, &train_ids))?)?;
    write(&tmp.join("annotations/val.json"), &canonical_json(&subset(&coco, &val_ids))?)?;
    write(&tmp.join(SUMMARIES), &summaries_csv(&summaries)?)?;
    write(&tmp.join(WARNINGS), warnings.join("\n").as_bytes())?;

    let mut class_counts: BTreeMap<String, u64> = ElementKind::ALL.iter().map(|k| (k.name().to_string(), 0)).collect();
    for a in &coco.annotations {
        if let Some(k) = ElementKind::from_id(a.category_id) {
            *class_counts.entry(k.name().to_string()).or_default() += 1;
        }
    }
    let manifest = DatasetManifest {
        schema_version: SCHEMA_VERSION.to_string(),
        master_seed: options.master_seed,
        deck_count: decks.len(),
        slide_count: coco.images.len(),
        annotation_count: coco.annotations.len(),
        split: layouts
            .iter()
            .map(|d| (d.deck_id.clone(), split.side_of(&d.deck_id).unwrap_or("val").to_string()))
            .collect(),
        class_counts,
        images,
        warning_count: warnings.len(),
        config: options.config.clone(),
    };
    write(&tmp.join(MANIFEST), &canonical_json(&manifest)?)?;

    if out.exists() {
        std::fs::remove_dir_all(out)?;
    }
    std::fs::rename(&tmp, out)?;
    Ok(manifest)
}

pub fn read_manifest(dir: &Path) -> Result<DatasetManifest, AnnotateError> {
    let bytes = std::fs::read(dir.join(MANIFEST)).map_err(|e| AnnotateError::Dataset(format!("{}: {e}", dir.join(MANIFEST).display())))?;
    Ok(serde_json::from_slice(&bytes)?)
}

pub fn read_summaries(dir: &Path) -> Result<Vec<SummaryRecord>, AnnotateError> {
    let mut r = csv::Reader::from_path(dir.join(SUMMARIES))?;
    Ok(r.deserialize().collect::<Result<Vec<SummaryRecord>, _>>()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::sample_deck;

    fn outputs(n_decks: usize, n_slides: usize) -> Vec<DeckOutput> {
        (0..n_decks)
            .map(|d| {
                let mut layout = sample_deck(n_slides);
                layout.deck_id = format!("deck-{d}");
                let mut assets = AssetStore::default();
                for id in layout.assets.keys() {
                    assets.insert_if_absent(id, image::RgbaImage::from_pixel(4, 4, image::Rgba([1, 1, 1, 255])), "test");
                }
                let slides = layout
                    .slides
                    .iter()
                    .map(|s| SlideOutput {
                        png: vec![d as u8, s.element_count() as u8],
                        width: 1280,
                        height: 720,
                        ink: vec![Some(PixelBox::new(1, 1, 5, 5)); s.element_count()],
                        transform: BoxTransform::IDENTITY,
                    })
                    .collect();
                DeckOutput { layout, assets, slides }
            })
            .collect()
    }

    fn options() -> PackageOptions {
        PackageOptions {
            master_seed: 7,
            train_fraction: 0.5,
            config: serde_json::json!({"mode": "test"}),
        }
    }

    #[test]
    fn two_decks_of_twelve() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("ds");
        let m = package_dataset(&outputs(2, 12), &out, &options(), None).unwrap();
        assert_eq!(m.slide_count, 24);
        assert_eq!(std::fs::read_dir(out.join("images")).unwrap().count(), 24);
        let rows = read_summaries(&out).unwrap();
        assert_eq!(rows.len(), 48);
        assert!(!tmp_dir_for(&out).exists());
        let sides: BTreeSet<&String> = m.split.values().collect();
        assert_eq!(sides.len(), 2);
        assert!(out.join("decks/deck-0/deck.json").exists());
    }

    #[test]
    fn repackaging_is_byte_identical() {
        let dir = tempfile::tempdir().unwrap();
        let (a, b) = (dir.path().join("a"), dir.path().join("b"));
        package_dataset(&outputs(3, 4), &a, &options(), None).unwrap();
        package_dataset(&outputs(3, 4), &b, &options(), None).unwrap();
        for f in [MANIFEST, SUMMARIES, "annotations/train.json", "annotations/val.json"] {
            assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{f}");
        }
    }

    #[test]
    fn failure_leaves_only_the_tmp_dir() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("ds");
        let mut decks = outputs(2, 2);
        decks[1].slides.pop();
        assert!(package_dataset(&decks, &out, &options(), None).is_err());
        assert!(!out.exists());
        assert!(tmp_dir_for(&out).exists());
    }

    #[test]
    fn csv_quotes_commas() {
        let recs = vec![SummaryRecord {
            image_id: 3,
            style: SummaryStyle::Lecsd,
            summary: "a, \"b\"".into(),
        }];
        let text = String::from_utf8(summaries_csv(&recs).unwrap()).unwrap();
        assert_eq!(text, "image_id,style,summary\r\n3,lecsd,\"a, \"\"b\"\"\"\r\n");
    }
}
