//! In-memory asset images keyed by asset id.

use crate::deck::model::AssetEntry;
use image::RgbaImage;
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, Clone, PartialEq)]
pub struct StoredAsset {
    pub image: RgbaImage,
    /// Producer name (plugin, search client, "placeholder", ...).
    pub provenance: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct AssetStore {
    items: BTreeMap<String, StoredAsset>,
}

pub fn asset_path(id: &str) -> String {
    format!("assets/{id}.png")
}

impl AssetStore {
    /// Returns false when the id was already present (the old image stays).
    pub fn insert_if_absent(&mut self, id: &str, image: RgbaImage, provenance: &str) -> bool {
        if self.items.contains_key(id) {
            return false;
        }
        self.items.insert(
            id.to_string(),
            StoredAsset {
                image,
                provenance: provenance.to_string(),
            },
        );
        true
    }

    pub fn insert(&mut self, id: &str, asset: StoredAsset) {
        self.items.insert(id.to_string(), asset);
    }

    pub fn get(&self, id: &str) -> Option<&StoredAsset> {
        self.items.get(id)
    }

    pub fn image(&self, id: &str) -> Option<&RgbaImage> {
        self.items.get(id).map(|a| &a.image)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.items.contains_key(id)
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &StoredAsset)> {
        self.items.iter()
    }

    pub fn retain(&mut self, keep: impl Fn(&str) -> bool) {
        self.items.retain(|k, _| keep(k));
    }

    /// Asset table entries for a deck file.
    pub fn entry_table(&self) -> BTreeMap<String, AssetEntry> {
        self.items
            .iter()
            .map(|(id, a)| {
                (
                    id.clone(),
                    AssetEntry {
                        path: asset_path(id),
                        provenance: a.provenance.clone(),
                        width: a.image.width(),
                        height: a.image.height(),
                    },
                )
            })
            .collect()
    }

    /// Writes every asset as PNG under `deck_dir` at its table path.
    pub fn write_to(&self, deck_dir: &Path) -> Result<(), image::ImageError> {
        for (id, a) in &self.items {
            let path = deck_dir.join(asset_path(id));
            if let Some(parent) = path.parent() {
                std::fs::create_dir_all(parent).map_err(image::ImageError::IoError)?;
            }
            a.image.save_with_format(&path, image::ImageFormat::Png)?;
        }
        Ok(())
    }

    /// Loads the images listed in an asset table relative to `deck_dir`.
    pub fn load_from(deck_dir: &Path, table: &BTreeMap<String, AssetEntry>) -> Result<Self, image::ImageError> {
        let mut store = Self::default();
        for (id, entry) in table {
            let image = image::open(deck_dir.join(&entry.path))?.to_rgba8();
            store.insert(
                id,
                StoredAsset {
                    image,
                    provenance: entry.provenance.clone(),
                },
            );
        }
        Ok(store)
    }
}
