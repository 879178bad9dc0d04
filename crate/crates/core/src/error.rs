use crate::deck::model::Stage;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DeckError {
    #[error("invalid deck: {0}")]
    Invalid(String),
    #[error("deck JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema version '{0}'")]
    SchemaVersion(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LayoutError {
    #[error("unknown layout id '{0}'")]
    UnknownLayout(String),
    #[error("no layout holds {0} body elements (max 4)")]
    UnsupportedElementCount(usize),
}

/// Payload could not be turned into the expected structure.
#[derive(Debug, Error, Clone, PartialEq)]
#[error("{message}")]
pub struct ParseError {
    pub message: String,
    /// The raw payload, kept for retry logging.
    pub raw: String,
}

impl ParseError {
    pub fn new(message: impl Into<String>, raw: &str) -> Self {
        Self {
            message: message.into(),
            raw: raw.to_string(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TransportError {
    #[error("transport failure (retryable): {0}")]
    Retryable(String),
    #[error("transport failure: {0}")]
    Fatal(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("stage {stage} failed after {attempts} attempt(s): {message}")]
pub struct StageError {
    pub stage: Stage,
    /// Pipeline step within the stage, e.g. "text" or "structural".
    pub step: String,
    pub attempts: u32,
    pub message: String,
}

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("image search failed: {0}")]
    Search(String),
    #[error("image download failed: {0}")]
    Download(String),
}

#[derive(Debug, Error)]
pub enum CompileError {
    #[error("no plugin accepts payload kind '{0}'")]
    NoPlugin(String),
    #[error("plugin '{plugin}' failed: {message}")]
    Plugin { plugin: String, message: String },
}

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("missing asset '{asset}' for element {element}")]
    MissingAsset { asset: String, element: String },
    #[error("element index {0} out of range")]
    NoSuchElement(usize),
    #[error("invalid render options: {0}")]
    Options(String),
    #[error("empty deck")]
    EmptyDeck,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("image codec: {0}")]
    Image(#[from] image::ImageError),
    #[error("archive: {0}")]
    Zip(#[from] zip::result::ZipError),
}

#[derive(Debug, Error)]
pub enum AnnotateError {
    #[error("missing render for deck {deck} slide {slide}")]
    MissingRender { deck: String, slide: usize },
    #[error("split needs at least 2 decks, got {0}")]
    TooFewDecks(usize),
    #[error("train fraction must lie strictly between 0 and 1, got {0}")]
    BadFraction(f64),
    #[error("dataset: {0}")]
    Dataset(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Render(#[from] RenderError),
}

/// Top-level error of the end-to-end pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Deck(#[from] DeckError),
    #[error(transparent)]
    Layout(#[from] LayoutError),
    #[error(transparent)]
    Stage(#[from] StageError),
    #[error(transparent)]
    Compile(#[from] CompileError),
    #[error(transparent)]
    Render(#[from] RenderError),
    #[error(transparent)]
    Annotate(#[from] AnnotateError),
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
