//! Image search for diagrams and natural images.

use crate::assets::store::AssetStore;
use crate::assets::{graph, procedural};
use crate::error::SearchError;
use crate::rng;
use image::RgbaImage;
use rand::Rng;
use serde::{Deserialize, Serialize};

pub const CANDIDATES: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ImageKind {
    Diagram,
    Photo,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageCandidate {
    pub url: String,
    pub kind: ImageKind,
}

pub trait ImageSearchClient: Send + Sync {
    fn search(&self, query: &str, kind: ImageKind, k: usize) -> Result<Vec<ImageCandidate>, SearchError>;

    fn fetch(&self, candidate: &ImageCandidate) -> Result<RgbaImage, SearchError>;

    fn name(&self) -> &str;
}

/// Hermetic client: `k` candidates per query, each a procedurally drawn
/// image keyed by the query hash and candidate index.
#[derive(Debug, Default, Clone)]
pub struct StubSearchClient;

const STUB_SCHEME: &str = "stub://";

pub fn stub_image(kind: ImageKind, key: u64) -> RgbaImage {
    match kind {
        ImageKind::Diagram => graph::stub_diagram(key, 640, 420),
        ImageKind::Photo => procedural::photo(key, 480, 360),
    }
}

impl ImageSearchClient for StubSearchClient {
    fn search(&self, query: &str, kind: ImageKind, k: usize) -> Result<Vec<ImageCandidate>, SearchError> {
        let h = rng::short_hash(query);
        let kind_name = match kind {
            ImageKind::Diagram => "diagram",
            ImageKind::Photo => "photo",
        };
        Ok((0..k)
            .map(|i| ImageCandidate {
                url: format!("{STUB_SCHEME}{kind_name}/{h}/{i}"),
                kind,
            })
            .collect())
    }

    fn fetch(&self, candidate: &ImageCandidate) -> Result<RgbaImage, SearchError> {
        let rest = candidate
            .url
            .strip_prefix(STUB_SCHEME)
            .ok_or_else(|| SearchError::Download(format!("stub client cannot fetch {}", candidate.url)))?;
        Ok(stub_image(candidate.kind, rng::stable_hash(rest)))
    }

    fn name(&self) -> &str {
        "stub-search"
    }
}

/// Client whose every call fails.
#[derive(Debug, Default, Clone)]
pub struct FailingSearchClient {
    /// Search succeeds with this many candidates but every download fails.
    pub candidates: usize,
}

impl ImageSearchClient for FailingSearchClient {
    fn search(&self, query: &str, kind: ImageKind, k: usize) -> Result<Vec<ImageCandidate>, SearchError> {
        if self.candidates == 0 {
            return Err(SearchError::Search(format!("no results for '{query}'")));
        }
        Ok((0..self.candidates.min(k))
            .map(|i| ImageCandidate {
                url: format!("http://unreachable.invalid/{i}"),
                kind,
            })
            .collect())
    }

    fn fetch(&self, candidate: &ImageCandidate) -> Result<RgbaImage, SearchError> {
        Err(SearchError::Download(format!("cannot fetch {}", candidate.url)))
    }

    fn name(&self) -> &str {
        "failing-search"
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Retrieved {
    pub asset_id: String,
    /// Index of the candidate used; `None` when the placeholder was used.
    pub chosen: Option<usize>,
}

pub fn asset_id_for(kind: ImageKind, caption: &str) -> String {
    let prefix = match kind {
        ImageKind::Diagram => "dg",
        ImageKind::Photo => "im",
    };
    format!("{prefix}-{}", rng::short_hash(caption))
}

/// Queries `k = 2` candidates, picks one uniformly, downloads it into the
/// asset store. Falls back to the other candidate, then to a placeholder.
pub fn retrieve_image<R: Rng + ?Sized>(
    caption: &str,
    kind: ImageKind,
    client: &dyn ImageSearchClient,
    rng: &mut R,
    store: &mut AssetStore,
    warnings: &mut Vec<String>,
) -> Retrieved {
    let asset_id = asset_id_for(kind, caption);
    let candidates = match client.search(caption, kind, CANDIDATES) {
        Ok(c) => c,
        Err(e) => {
            warnings.push(format!("image search for '{caption}': {e}"));
            Vec::new()
        }
    };
    if !candidates.is_empty() {
        let first = rng::index(rng, candidates.len());
        let order = std::iter::once(first).chain((0..candidates.len()).filter(|i| *i != first));
        for i in order {
            match client.fetch(&candidates[i]) {
                Ok(img) => {
                    store.insert_if_absent(&asset_id, img, client.name());
                    return Retrieved { asset_id, chosen: Some(i) };
                }
                Err(e) => warnings.push(format!("image download for '{caption}': {e}")),
            }
        }
    } else {
        warnings.push(format!("image search for '{caption}' returned no candidates"));
    }
    store.insert_if_absent(&asset_id, stub_image(kind, rng::stable_hash(caption)), "placeholder");
    Retrieved { asset_id, chosen: None }
}

pub fn retrieve_diagram<R: Rng + ?Sized>(
    caption: &str,
    client: &dyn ImageSearchClient,
    rng: &mut R,
    store: &mut AssetStore,
    warnings: &mut Vec<String>,
) -> Retrieved {
    retrieve_image(caption, ImageKind::Diagram, client, rng, store, warnings)
}
