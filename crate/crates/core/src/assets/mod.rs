//! Raster assets: compilation of structural payloads, retrieved images and
//! the per-deck store.

pub mod chart;
pub mod equation;
pub mod graph;
pub mod plugin;
pub mod procedural;
pub mod store;
pub mod table;

use crate::deck::model::{DeckLayout, ElementContent};
use crate::error::CompileError;
use crate::geometry::Rect;
use crate::rng;
pub use plugin::{Compiled, CompilerPlugin, ExternalCommandPlugin, FallbackPlugin};
use std::collections::BTreeSet;
pub use store::{AssetStore, StoredAsset};

/// Assets are drawn at the 1280-pixel render scale.
pub const ASSET_PX_PER_UNIT: f64 = 96.0;

/// Pixel size of an asset compiled for `rect`.
pub fn asset_size(rect: &Rect<f64>) -> (u32, u32) {
    let px = |v: f64| ((v * ASSET_PX_PER_UNIT).round() as u32).max(1);
    (px(rect.width), px(rect.height))
}

/// Ordered plugin list; externals are tried before the fallback.
pub struct Compiler {
    plugins: Vec<Box<dyn CompilerPlugin>>,
}

impl Default for Compiler {
    fn default() -> Self {
        Self::hermetic()
    }
}

impl Compiler {
    pub fn hermetic() -> Self {
        Self {
            plugins: vec![Box::new(FallbackPlugin)],
        }
    }

    pub fn with_external(externals: Vec<ExternalCommandPlugin>) -> Self {
        let mut plugins: Vec<Box<dyn CompilerPlugin>> = Vec::new();
        for e in externals {
            plugins.push(Box::new(e));
        }
        plugins.push(Box::new(FallbackPlugin));
        Self { plugins }
    }

    pub fn plugins(&self) -> &[Box<dyn CompilerPlugin>] {
        &self.plugins
    }

    pub fn has_external(&self) -> bool {
        self.plugins.iter().any(|p| p.is_external())
    }
}

/// Compiles `content` for `size_hint` with the first accepting plugin and
/// records it in `store`. External failures degrade to later plugins with a
/// warning. Identical payloads at the same size share one asset.
pub fn compile_asset(
    content: &ElementContent,
    size_hint: &Rect<f64>,
    plugins: &[Box<dyn CompilerPlugin>],
    seed: u64,
    store: &mut AssetStore,
    warnings: &mut Vec<String>,
) -> Result<String, CompileError> {
    let (w, h) = asset_size(size_hint);
    let key = format!(
        "{}|{:?}|{w}x{h}|{seed}",
        serde_json::to_string(&content.payload).unwrap_or_default(),
        content.kind
    );
    let id = format!("cmp-{}", rng::short_hash(&key));
    if store.contains(&id) {
        return Ok(id);
    }
    let mut last_err = None;
    for p in plugins.iter().filter(|p| p.accepts(content)) {
        match p.compile(content, w, h, seed) {
            Ok(out) => {
                warnings.extend(out.warnings.into_iter().map(|m| format!("{}: {m}", content.kind)));
                store.insert_if_absent(&id, out.image, p.name());
                return Ok(id);
            }
            Err(message) => {
                warnings.push(format!(
                    "compiler '{}' failed on {}: {message}; trying next",
                    p.name(),
                    content.kind
                ));
                last_err = Some(CompileError::Plugin {
                    plugin: p.name().to_string(),
                    message,
                });
            }
        }
    }
    Err(last_err.unwrap_or_else(|| CompileError::NoPlugin(content.payload.variant_name().to_string())))
}

/// Compiles every structural payload of `deck` at its placed size, points
/// the elements at the results, drops unreferenced assets from `store` and
/// refreshes the deck's asset table.
pub fn compile_deck_assets(deck: &mut DeckLayout, compiler: &Compiler, store: &mut AssetStore) -> Result<(), CompileError> {
    let seed = deck.seed;
    let mut warnings = Vec::new();
    for (i, slide) in deck.slides.iter_mut().enumerate() {
        for (j, e) in slide.placed.iter_mut().enumerate() {
            if !e.content.payload.is_compilable() {
                continue;
            }
            let s = rng::derive_seed(seed, &format!("asset-{i}-{j}"));
            e.asset = Some(compile_asset(&e.content, &e.rect, compiler.plugins(), s, store, &mut warnings)?);
        }
    }
    let used: BTreeSet<String> = deck
        .slides
        .iter()
        .flat_map(|s| s.all_elements())
        .filter_map(|e| e.drawn_asset().map(str::to_string))
        .collect();
    store.retain(|id| used.contains(id));
    deck.assets = store.entry_table();
    deck.warnings.extend(warnings);
    Ok(())
}
