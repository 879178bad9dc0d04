//! Versioned data model shared by every phase.

use crate::geometry::Rect;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

pub const SCHEMA_VERSION: &str = "synslide.deck/1";
pub const MAX_SLIDES: usize = 15;
pub const MAX_BODY_ELEMENTS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SlideType {
    Introduction,
    Definition,
    Example,
    Comparison,
    Conclusion,
    References,
}

impl SlideType {
    pub const ALL: [SlideType; 6] = [
        SlideType::Introduction,
        SlideType::Definition,
        SlideType::Example,
        SlideType::Comparison,
        SlideType::Conclusion,
        SlideType::References,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SlideType::Introduction => "Introduction",
            SlideType::Definition => "Definition",
            SlideType::Example => "Example",
            SlideType::Comparison => "Comparison",
            SlideType::Conclusion => "Conclusion",
            SlideType::References => "References",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        let n = name.trim().to_ascii_lowercase();
        Self::ALL.into_iter().find(|t| t.name().to_ascii_lowercase() == n)
    }
}

/// The sixteen detection categories. Ids are contiguous `1..=16` in
/// declaration order and must never be reordered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ElementKind {
    Title,
    Description,
    Enumeration,
    SlideNr,
    Equation,
    Table,
    Logo,
    Heading,
    Diagram,
    Chart,
    FooterElement,
    Code,
    FigureCaption,
    TableCaption,
    Url,
    NaturalImage,
}

impl ElementKind {
    pub const ALL: [ElementKind; 16] = [
        ElementKind::Title,
        ElementKind::Description,
        ElementKind::Enumeration,
        ElementKind::SlideNr,
        ElementKind::Equation,
        ElementKind::Table,
        ElementKind::Logo,
        ElementKind::Heading,
        ElementKind::Diagram,
        ElementKind::Chart,
        ElementKind::FooterElement,
        ElementKind::Code,
        ElementKind::FigureCaption,
        ElementKind::TableCaption,
        ElementKind::Url,
        ElementKind::NaturalImage,
    ];

    /// Category id, `1..=16`.
    pub fn id(self) -> u32 {
        Self::ALL.iter().position(|k| *k == self).expect("listed") as u32 + 1
    }

    pub fn from_id(id: u32) -> Option<Self> {
        Self::ALL.get((id as usize).checked_sub(1)?).copied()
    }

    /// Category name as written in the dataset's category table.
    pub fn name(self) -> &'static str {
        match self {
            ElementKind::Title => "Title",
            ElementKind::Description => "Description",
            ElementKind::Enumeration => "Enumeration",
            ElementKind::SlideNr => "SlideNr",
            ElementKind::Equation => "Equation",
            ElementKind::Table => "Table",
            ElementKind::Logo => "Logo",
            ElementKind::Heading => "Heading",
            ElementKind::Diagram => "Diagram",
            ElementKind::Chart => "Chart",
            ElementKind::FooterElement => "Footer-Element",
            ElementKind::Code => "Code",
            ElementKind::FigureCaption => "Figure-Caption",
            ElementKind::TableCaption => "Table-Caption",
            ElementKind::Url => "URL",
            ElementKind::NaturalImage => "Natural-Image",
        }
    }

    /// Lower-case phrase used in generated summaries.
    pub fn phrase(self) -> &'static str {
        match self {
            ElementKind::Title => "title",
            ElementKind::Description => "description",
            ElementKind::Enumeration => "enumeration",
            ElementKind::SlideNr => "slide number",
            ElementKind::Equation => "equation",
            ElementKind::Table => "table",
            ElementKind::Logo => "logo",
            ElementKind::Heading => "heading",
            ElementKind::Diagram => "diagram",
            ElementKind::Chart => "chart",
            ElementKind::FooterElement => "footer",
            ElementKind::Code => "code snippet",
            ElementKind::FigureCaption => "figure caption",
            ElementKind::TableCaption => "table caption",
            ElementKind::Url => "URL",
            ElementKind::NaturalImage => "natural image",
        }
    }

    /// Resolves a category name, accepting the aliases used in result
    /// tables ("Text" for Description, "Slide Number" for SlideNr, ...).
    pub fn from_name(name: &str) -> Option<Self> {
        let key: String = name
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        let alias = match key.as_str() {
            "text" => Some(ElementKind::Description),
            "slidenumber" => Some(ElementKind::SlideNr),
            "footer" => Some(ElementKind::FooterElement),
            "image" | "naturalimg" => Some(ElementKind::NaturalImage),
            _ => None,
        };
        alias.or_else(|| {
            Self::ALL.into_iter().find(|k| {
                let n: String = k.name().chars().filter(|c| c.is_ascii_alphanumeric()).collect();
                n.to_ascii_lowercase() == key
            })
        })
    }

    pub fn is_textual(self) -> bool {
        matches!(
            self,
            ElementKind::Title
                | ElementKind::Description
                | ElementKind::Enumeration
                | ElementKind::SlideNr
                | ElementKind::Heading
                | ElementKind::FooterElement
                | ElementKind::Code
                | ElementKind::FigureCaption
                | ElementKind::TableCaption
                | ElementKind::Url
        )
    }
}

impl fmt::Display for ElementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ElementKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::from_name(s).ok_or_else(|| {
            let names: Vec<&str> = Self::ALL.iter().map(|k| k.name()).collect();
            format!("unknown category '{s}'; valid names: {}", names.join(", "))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChartKind {
    Bar,
    Line,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartSeries {
    pub name: String,
    pub values: Vec<f64>,
}

/// Declarative chart: categories on the x axis, one value per category per
/// series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartSpec {
    pub kind: ChartKind,
    #[serde(default)]
    pub x_label: String,
    #[serde(default)]
    pub y_label: String,
    pub categories: Vec<String>,
    pub series: Vec<ChartSeries>,
}

impl ChartSpec {
    pub fn is_well_formed(&self) -> bool {
        !self.categories.is_empty()
            && !self.series.is_empty()
            && self
                .series
                .iter()
                .all(|s| s.values.len() == self.categories.len() && s.values.iter().all(|v| v.is_finite()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "value", rename_all = "snake_case")]
pub enum Payload {
    PlainText(String),
    EnumerationItems(Vec<String>),
    /// LaTeX source.
    TypesetMarkup(String),
    /// DOT source.
    GraphMarkup(String),
    /// Opaque plotting script, only compiled by external plugins.
    PlotScript(String),
    ChartSpec(ChartSpec),
    /// Asset table id.
    AssetRef(String),
}

impl Payload {
    pub fn variant_name(&self) -> &'static str {
        match self {
            Payload::PlainText(_) => "plain-text",
            Payload::EnumerationItems(_) => "enumeration-items",
            Payload::TypesetMarkup(_) => "typeset-markup",
            Payload::GraphMarkup(_) => "graph-markup",
            Payload::PlotScript(_) => "plot-script",
            Payload::ChartSpec(_) => "chart-spec",
            Payload::AssetRef(_) => "asset-ref",
        }
    }

    /// Needs the asset compiler before it can be drawn.
    pub fn is_compilable(&self) -> bool {
        matches!(
            self,
            Payload::TypesetMarkup(_) | Payload::GraphMarkup(_) | Payload::PlotScript(_) | Payload::ChartSpec(_)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElementContent {
    pub kind: ElementKind,
    pub caption: String,
    pub payload: Payload,
}

impl ElementContent {
    pub fn text(kind: ElementKind, text: impl Into<String>) -> Self {
        let text = text.into();
        Self {
            kind,
            caption: text.clone(),
            payload: Payload::PlainText(text),
        }
    }

    /// Whether the payload variant may carry this kind.
    pub fn payload_compatible(&self) -> bool {
        use ElementKind as K;
        match (&self.payload, self.kind) {
            (Payload::EnumerationItems(_), K::Enumeration) => true,
            (Payload::PlainText(_), K::Enumeration) => true,
            (Payload::PlainText(_), k) => k.is_textual(),
            (Payload::TypesetMarkup(_), K::Equation | K::Table) => true,
            (Payload::GraphMarkup(_), K::Diagram) => true,
            (Payload::PlotScript(_) | Payload::ChartSpec(_), K::Chart) => true,
            (Payload::AssetRef(_), K::Diagram | K::NaturalImage | K::Logo | K::Chart | K::Equation | K::Table) => true,
            _ => false,
        }
    }

    /// Text that would be visible on the slide, if the payload is textual.
    pub fn visible_text(&self) -> Option<String> {
        match &self.payload {
            Payload::PlainText(t) => Some(t.clone()),
            Payload::EnumerationItems(items) => Some(items.join("\n")),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlideContent {
    pub title: String,
    pub slide_type: SlideType,
    pub elements: Vec<ElementContent>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeckContent {
    pub topic: String,
    pub subject: String,
    pub slides: Vec<SlideContent>,
}

/// 8-bit RGB color, serialized as `#rrggbb`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Color(pub [u8; 3]);

impl Color {
    pub const WHITE: Color = Color([255, 255, 255]);
    pub const BLACK: Color = Color([0, 0, 0]);

    pub fn hex(&self) -> String {
        format!("#{:02x}{:02x}{:02x}", self.0[0], self.0[1], self.0[2])
    }

    pub fn parse_hex(s: &str) -> Option<Self> {
        let s = s.strip_prefix('#')?;
        if s.len() != 6 {
            return None;
        }
        let v = u32::from_str_radix(s, 16).ok()?;
        Some(Color([(v >> 16) as u8, (v >> 8) as u8, v as u8]))
    }

    pub fn luminance(&self) -> f64 {
        let [r, g, b] = self.0;
        0.2126 * r as f64 + 0.7152 * g as f64 + 0.0722 * b as f64
    }
}

impl Serialize for Color {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.hex())
    }
}

impl<'de> Deserialize<'de> for Color {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Color::parse_hex(&s).ok_or_else(|| serde::de::Error::custom(format!("bad color '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FontFamily {
    Sans,
    Serif,
    Mono,
    Stix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Align {
    Left,
    Center,
    Right,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TextStyle {
    pub family: FontFamily,
    /// Points; one slide unit is 72 points.
    pub size_pt: f64,
    pub color: Color,
    pub bold: bool,
    pub align: Align,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "value", rename_all = "snake_case")]
pub enum Background {
    Solid(Color),
    /// Index into the shipped design template palette.
    Template(u8),
}

/// Per-slide style. Title styling and the design template are drawn once
/// per deck; the rest may vary slide to slide.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StyleSpec {
    pub background: Background,
    pub title: TextStyle,
    pub body: TextStyle,
    pub meta: TextStyle,
    pub accent: Color,
    pub border: bool,
    pub shadow: bool,
}

/// Resolved style of one placed element.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElementStyle {
    pub text: TextStyle,
    pub border: bool,
    pub shadow: bool,
    pub accent: Color,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Title,
    Body,
    Caption,
    Meta,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlacedElement {
    pub role: Role,
    pub content: ElementContent,
    /// Layout cell assigned before perturbation.
    pub region: Rect,
    /// Final placement after perturbation.
    pub rect: Rect,
    pub style: ElementStyle,
    /// Compiled raster for markup/spec payloads.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub asset: Option<String>,
}

impl PlacedElement {
    /// Asset id the renderer draws for this element, if any.
    pub fn drawn_asset(&self) -> Option<&str> {
        if let Some(id) = &self.asset {
            return Some(id);
        }
        match &self.content.payload {
            Payload::AssetRef(id) => Some(id),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlacedSlide {
    pub layout_id: String,
    pub style: StyleSpec,
    /// Title, body and caption placements.
    pub placed: Vec<PlacedElement>,
    pub meta_elements: Vec<PlacedElement>,
}

impl PlacedSlide {
    pub fn all_elements(&self) -> impl Iterator<Item = &PlacedElement> {
        self.placed.iter().chain(self.meta_elements.iter())
    }

    pub fn element(&self, index: usize) -> Option<&PlacedElement> {
        self.all_elements().nth(index)
    }

    pub fn element_count(&self) -> usize {
        self.placed.len() + self.meta_elements.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssetEntry {
    /// Relative to the deck directory.
    pub path: String,
    /// Which producer made the file (compiler plugin, search client, ...).
    pub provenance: String,
    pub width: u32,
    pub height: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeckLayout {
    pub schema_version: String,
    pub deck_id: String,
    pub seed: u64,
    /// Title styling must then match on every slide.
    pub coherent_style: bool,
    pub content: DeckContent,
    pub slides: Vec<PlacedSlide>,
    pub assets: BTreeMap<String, AssetEntry>,
    #[serde(default)]
    pub warnings: Vec<String>,
}

impl DeckLayout {
    pub fn slide_count(&self) -> usize {
        self.slides.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Topic,
    Outline,
    Instruction,
    TextCode,
}

impl Stage {
    pub const ALL: [Stage; 4] = [Stage::Topic, Stage::Outline, Stage::Instruction, Stage::TextCode];

    pub fn key(self) -> &'static str {
        match self {
            Stage::Topic => "topic",
            Stage::Outline => "outline",
            Stage::Instruction => "instruction",
            Stage::TextCode => "text_code",
        }
    }

    pub fn from_key(key: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.key() == key)
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

/// Sampling configuration for one LLM stage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageConfig {
    pub stage: Stage,
    pub model: String,
    pub temperature: f64,
    pub top_p: f64,
    pub max_tokens: u32,
}

impl StageConfig {
    pub fn default_for(stage: Stage) -> Self {
        let (model, temperature, top_p, max_tokens) = match stage {
            Stage::Topic => ("gpt-4", 0.7, 0.9, 256),
            Stage::Outline => ("gpt-4", 0.6, 0.95, 512),
            Stage::Instruction => ("gpt-3.5-turbo", 0.7, 0.9, 1024),
            Stage::TextCode => ("gpt-3.5-turbo", 0.5, 0.8, 2048),
        };
        Self {
            stage,
            model: model.to_string(),
            temperature,
            top_p,
            max_tokens,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.model.trim().is_empty() {
            return Err(format!("{}: empty model name", self.stage));
        }
        if !(0.0..=2.0).contains(&self.temperature) {
            return Err(format!("{}: temperature {} outside [0, 2]", self.stage, self.temperature));
        }
        if !(self.top_p > 0.0 && self.top_p <= 1.0) {
            return Err(format!("{}: top_p {} outside (0, 1]", self.stage, self.top_p));
        }
        if self.max_tokens == 0 {
            return Err(format!("{}: max_tokens must be positive", self.stage));
        }
        Ok(())
    }
}

/// One config per stage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageConfigs {
    pub topic: StageConfig,
    pub outline: StageConfig,
    pub instruction: StageConfig,
    pub text_code: StageConfig,
}

impl Default for StageConfigs {
    fn default() -> Self {
        Self {
            topic: StageConfig::default_for(Stage::Topic),
            outline: StageConfig::default_for(Stage::Outline),
            instruction: StageConfig::default_for(Stage::Instruction),
            text_code: StageConfig::default_for(Stage::TextCode),
        }
    }
}

impl StageConfigs {
    pub fn get(&self, stage: Stage) -> &StageConfig {
        match stage {
            Stage::Topic => &self.topic,
            Stage::Outline => &self.outline,
            Stage::Instruction => &self.instruction,
            Stage::TextCode => &self.text_code,
        }
    }

    pub fn get_mut(&mut self, stage: Stage) -> &mut StageConfig {
        match stage {
            Stage::Topic => &mut self.topic,
            Stage::Outline => &mut self.outline,
            Stage::Instruction => &mut self.instruction,
            Stage::TextCode => &mut self.text_code,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn category_ids_are_contiguous_and_stable() {
        let names: Vec<(u32, &str)> = ElementKind::ALL.iter().map(|k| (k.id(), k.name())).collect();
        assert_eq!(names.len(), 16);
        assert_eq!(names[0], (1, "Title"));
        assert_eq!(names[3], (4, "SlideNr"));
        assert_eq!(names[10], (11, "Footer-Element"));
        assert_eq!(names[15], (16, "Natural-Image"));
        for (i, k) in ElementKind::ALL.iter().enumerate() {
            assert_eq!(k.id(), i as u32 + 1);
            assert_eq!(ElementKind::from_id(k.id()), Some(*k));
        }
        assert_eq!(ElementKind::from_id(0), None);
        assert_eq!(ElementKind::from_id(17), None);
    }

    #[test]
    fn category_aliases_resolve() {
        assert_eq!(ElementKind::from_name("Text"), Some(ElementKind::Description));
        assert_eq!(ElementKind::from_name("Slide Number"), Some(ElementKind::SlideNr));
        assert_eq!(ElementKind::from_name("footer-element"), Some(ElementKind::FooterElement));
        assert_eq!(ElementKind::from_name("url"), Some(ElementKind::Url));
        assert!("Banana".parse::<ElementKind>().unwrap_err().contains("Natural-Image"));
    }

    #[test]
    fn stage_defaults_match_configuration_table() {
        let c = StageConfigs::default();
        let tuple = |s: &StageConfig| (s.temperature, s.top_p, s.max_tokens);
        assert_eq!(tuple(&c.topic), (0.7, 0.9, 256));
        assert_eq!(tuple(&c.outline), (0.6, 0.95, 512));
        assert_eq!(tuple(&c.instruction), (0.7, 0.9, 1024));
        assert_eq!(tuple(&c.text_code), (0.5, 0.8, 2048));
    }

    #[test]
    fn slide_type_has_six_variants() {
        assert_eq!(SlideType::ALL.len(), 6);
        assert_eq!(SlideType::parse("references"), Some(SlideType::References));
    }

    #[test]
    fn color_hex_round_trip() {
        let c = Color([18, 52, 86]);
        assert_eq!(c.hex(), "#123456");
        assert_eq!(Color::parse_hex("#123456"), Some(c));
        assert_eq!(Color::parse_hex("123456"), None);
    }

    #[test]
    fn payload_compatibility() {
        let eq = ElementContent {
            kind: ElementKind::Equation,
            caption: "c".into(),
            payload: Payload::TypesetMarkup("y".into()),
        };
        assert!(eq.payload_compatible());
        let bad = ElementContent {
            kind: ElementKind::Equation,
            caption: "c".into(),
            payload: Payload::GraphMarkup("a->b".into()),
        };
        assert!(!bad.payload_compatible());
    }
}
