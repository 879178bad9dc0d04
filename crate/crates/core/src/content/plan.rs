//! Content-phase value types.

use crate::deck::model::{ElementKind, SlideType};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Textbook a deck is seeded from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BookSeed {
    pub subject: String,
    pub title: String,
    pub author: String,
}

impl BookSeed {
    pub fn new(subject: impl Into<String>, title: impl Into<String>, author: impl Into<String>) -> Self {
        Self {
            subject: subject.into(),
            title: title.into(),
            author: author.into(),
        }
    }
}

/// Content class requested by the element-type stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ElementClass {
    Description,
    Enumeration,
    Url,
    Heading,
    Equation,
    Table,
    Chart,
    Diagram,
    Code,
    Figure,
}

impl ElementClass {
    pub const ALL: [ElementClass; 10] = [
        ElementClass::Description,
        ElementClass::Enumeration,
        ElementClass::Url,
        ElementClass::Heading,
        ElementClass::Equation,
        ElementClass::Table,
        ElementClass::Chart,
        ElementClass::Diagram,
        ElementClass::Code,
        ElementClass::Figure,
    ];
    pub const TEXT: [ElementClass; 4] = [
        ElementClass::Description,
        ElementClass::Enumeration,
        ElementClass::Url,
        ElementClass::Heading,
    ];
    pub const VISUAL: [ElementClass; 6] = [
        ElementClass::Equation,
        ElementClass::Table,
        ElementClass::Chart,
        ElementClass::Diagram,
        ElementClass::Code,
        ElementClass::Figure,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ElementClass::Description => "description",
            ElementClass::Enumeration => "enumeration",
            ElementClass::Url => "url",
            ElementClass::Heading => "heading",
            ElementClass::Equation => "equation",
            ElementClass::Table => "table",
            ElementClass::Chart => "chart",
            ElementClass::Diagram => "diagram",
            ElementClass::Code => "code",
            ElementClass::Figure => "figure",
        }
    }

    /// Accepts the names models tend to use ("graph", "block-diagram", ...).
    pub fn parse(name: &str) -> Option<Self> {
        let key: String = name
            .trim()
            .to_ascii_lowercase()
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect();
        Some(match key.as_str() {
            "description" | "text" | "paragraph" => ElementClass::Description,
            "enumeration" | "list" | "bullets" | "bulletlist" => ElementClass::Enumeration,
            "url" | "link" | "hyperlink" => ElementClass::Url,
            "heading" | "subheading" => ElementClass::Heading,
            "equation" | "formula" | "math" => ElementClass::Equation,
            "table" => ElementClass::Table,
            "chart" | "graph" | "plot" => ElementClass::Chart,
            "diagram" | "blockdiagram" | "flowchart" => ElementClass::Diagram,
            "code" | "pseudocode" | "codesnippet" => ElementClass::Code,
            "figure" | "image" | "picture" | "photo" | "naturalimage" => ElementClass::Figure,
            _ => return None,
        })
    }

    pub fn is_text(self) -> bool {
        Self::TEXT.contains(&self)
    }

    /// Filled by the fenced-block structural request.
    pub fn is_structural(self) -> bool {
        matches!(
            self,
            ElementClass::Equation | ElementClass::Table | ElementClass::Chart | ElementClass::Code
        )
    }

    /// Filled by image search.
    pub fn is_retrieved(self) -> bool {
        matches!(self, ElementClass::Diagram | ElementClass::Figure)
    }

    pub fn kind(self) -> ElementKind {
        match self {
            ElementClass::Description => ElementKind::Description,
            ElementClass::Enumeration => ElementKind::Enumeration,
            ElementClass::Url => ElementKind::Url,
            ElementClass::Heading => ElementKind::Heading,
            ElementClass::Equation => ElementKind::Equation,
            ElementClass::Table => ElementKind::Table,
            ElementClass::Chart => ElementKind::Chart,
            ElementClass::Diagram => ElementKind::Diagram,
            ElementClass::Code => ElementKind::Code,
            ElementClass::Figure => ElementKind::NaturalImage,
        }
    }
}

impl fmt::Display for ElementClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementPlan {
    pub class: ElementClass,
    pub caption: String,
}

impl ElementPlan {
    pub fn new(class: ElementClass, caption: impl Into<String>) -> Self {
        Self {
            class,
            caption: caption.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlidePlan {
    pub title: String,
    pub slide_type: SlideType,
    pub plans: Vec<ElementPlan>,
}

/// One element plan together with the slide it belongs to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanRequest {
    pub slide_index: usize,
    pub slide_title: String,
    pub plan: ElementPlan,
}

/// Keyword rules mapping a slide title to its type; first match wins.
const SLIDE_TYPE_RULES: &[(SlideType, &[&str])] = &[
    (
        SlideType::References,
        &["reference", "further reading", "bibliography", "sources", "reading list"],
    ),
    (
        SlideType::Conclusion,
        &["summary", "conclusion", "takeaway", "recap", "wrap-up", "wrap up", "outlook"],
    ),
    (
        SlideType::Comparison,
        &[" vs", "v/s", "versus", "compar", "trade-off", "tradeoff", "contrast"],
    ),
    (
        SlideType::Introduction,
        &["introduction", "intro ", "overview", "motivation", "background", "history"],
    ),
    (
        SlideType::Example,
        &[
            "example",
            "case study",
            "application",
            "pseudocode",
            "demo",
            "in practice",
            "algorithm",
        ],
    ),
];

/// Backfills a missing slide type from title keywords; defaults to
/// Definition.
pub fn infer_slide_type(title: &str) -> SlideType {
    let t = format!("{} ", title.to_lowercase());
    SLIDE_TYPE_RULES
        .iter()
        .find(|(_, kws)| kws.iter().any(|k| t.contains(k)))
        .map(|(ty, _)| *ty)
        .unwrap_or(SlideType::Definition)
}
