//! Run configuration. Sources are layered: a flat `key = value` file, then
//! command-line flags, then `SLIDEFORGE_*` environment variables.

use crate::content::ElementClass;
use crate::deck::model::{Stage, StageConfigs};
use crate::layout::LayoutOptions;
use crate::render::{AugmentSpec, RenderOptions};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Detection data: scarce-class oversampling, per-slide styles.
    Syndet,
    /// Retrieval data: deck-coherent styles, default frequencies.
    Synret,
    /// Every probability from the config.
    Custom,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "syndet" => Ok(Mode::Syndet),
            "synret" => Ok(Mode::Synret),
            "custom" => Ok(Mode::Custom),
            _ => Err(format!("unknown mode '{s}' (expected syndet, synret or custom)")),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Syndet => "syndet",
            Mode::Synret => "synret",
            Mode::Custom => "custom",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub seed: u64,
    pub decks: usize,
    pub mode: Mode,
    pub offline: bool,
    /// Worker threads; `None` uses every logical core.
    pub jobs: Option<usize>,
    pub out: PathBuf,
    pub stages: StageConfigs,
    pub layout: LayoutOptions,
    /// Element classes the instruction stage favours.
    pub emphasis: Vec<ElementClass>,
    pub render: RenderSettings,
    pub augment: AugmentSpec,
    pub train_fraction: f64,
    pub llm_base_url: String,
    pub search_endpoint: Option<String>,
    pub prompts_dir: Option<PathBuf>,
    /// `(payload kind, command line)` external compilers.
    pub compilers: Vec<(String, String)>,
}

/// Serializable subset of [`RenderOptions`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RenderSettings {
    pub width: u32,
    pub height: u32,
}

impl RenderSettings {
    pub fn options(&self) -> RenderOptions {
        RenderOptions {
            width: self.width,
            height: self.height,
            ..RenderOptions::default()
        }
    }
}

/// Resize preset matching common detector input sizes.
pub const TRAINING_RESIZE: (u32, u32) = (640, 360);

pub const SCARCE_EMPHASIS: [ElementClass; 3] = [ElementClass::Table, ElementClass::Figure, ElementClass::Url];

impl Default for RunConfig {
    fn default() -> Self {
        Self::preset(Mode::Synret)
    }
}

/// Keys that mode presets fix; they may only be set in custom mode.
const LOCKED_PREFIXES: [&str; 4] = ["meta.", "captions.", "coherent_style", "emphasis"];

impl RunConfig {
    pub fn preset(mode: Mode) -> Self {
        let (layout, emphasis) = match mode {
            Mode::Syndet => (LayoutOptions::oversampled(), SCARCE_EMPHASIS.to_vec()),
            Mode::Synret | Mode::Custom => (LayoutOptions::default(), Vec::new()),
        };
        Self {
            seed: 0,
            decks: 10,
            mode,
            offline: true,
            jobs: None,
            out: PathBuf::from("dataset"),
            stages: StageConfigs::default(),
            layout,
            emphasis,
            render: RenderSettings { width: 1280, height: 720 },
            augment: AugmentSpec::default(),
            train_fraction: 0.8,
            llm_base_url: "https://api.openai.com/v1".into(),
            search_endpoint: None,
            prompts_dir: None,
            compilers: Vec::new(),
        }
    }

    /// Layers `file`, then `flags`, then environment variables read through
    /// `env`. The mode is resolved first so its preset is the base.
    pub fn from_sources(file: Option<&str>, flags: &[(String, String)], env: &dyn Fn(&str) -> Option<String>) -> Result<Self, String> {
        let mut pairs: Vec<(String, String)> = match file {
            Some(text) => parse_flat(text)?,
            None => Vec::new(),
        };
        pairs.extend(flags.iter().cloned());
        for key in known_keys() {
            if let Some(v) = env(&env_name(&key)) {
                pairs.push((key, v));
            }
        }
        let mode = pairs
            .iter()
            .rev()
            .find(|(k, _)| k == "mode")
            .map(|(_, v)| v.parse::<Mode>())
            .transpose()?
            .unwrap_or(Mode::Synret);
        let mut cfg = Self::preset(mode);
        for (k, v) in &pairs {
            if k != "mode" {
                cfg.set(k, v)?;
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: Option<&Path>, flags: &[(String, String)]) -> Result<Self, String> {
        let text = match path {
            Some(p) => Some(std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?),
            None => None,
        };
        Self::from_sources(text.as_deref(), flags, &|k| std::env::var(k).ok())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let v = value.trim();
        if self.mode != Mode::Custom && LOCKED_PREFIXES.iter().any(|p| key.starts_with(p)) {
            return Err(format!("'{key}' is fixed by the {} preset; use mode = custom to set it", self.mode));
        }
        fn num<T: FromStr>(key: &str, v: &str) -> Result<T, String> {
            v.parse().map_err(|_| format!("invalid value '{v}' for '{key}'"))
        }
        fn flag(key: &str, v: &str) -> Result<bool, String> {
            match v.to_ascii_lowercase().as_str() {
                "true" | "1" | "yes" | "on" => Ok(true),
                "false" | "0" | "no" | "off" => Ok(false),
                _ => Err(format!("invalid boolean '{v}' for '{key}'")),
            }
        }
        match key {
            "seed" => self.seed = num(key, v)?,
            "decks" => self.decks = num(key, v)?,
            "offline" => self.offline = flag(key, v)?,
            "jobs" => self.jobs = Some(num(key, v)?),
            "out" => self.out = PathBuf::from(v),
            "width" => self.render.width = num(key, v)?,
            "height" => self.render.height = num(key, v)?,
            "resize" => self.augment.resize = Some(parse_size(v)?),
            "blur_sigma" => self.augment.blur_sigma = num(key, v)?,
            "pixelation_block" => self.augment.pixelation_block = num(key, v)?,
            "train_fraction" => self.train_fraction = num(key, v)?,
            "llm_base_url" => self.llm_base_url = v.to_string(),
            "search_endpoint" => self.search_endpoint = Some(v.to_string()).filter(|s| !s.is_empty()),
            "prompts_dir" => self.prompts_dir = Some(PathBuf::from(v)),
            "tau" => self.layout.tau = num(key, v)?,
            "untitled" => self.layout.untitled = num(key, v)?,
            "coherent_style" => self.layout.coherent_style = flag(key, v)?,
            "meta.slide_nr" => self.layout.meta.slide_nr = num(key, v)?,
            "meta.footer" => self.layout.meta.footer = num(key, v)?,
            "meta.logo" => self.layout.meta.logo = num(key, v)?,
            "meta.natural_image" => self.layout.meta.natural_image = num(key, v)?,
            "meta.url" => self.layout.meta.url = num(key, v)?,
            "captions.table" => self.layout.captions.table = num(key, v)?,
            "captions.figure" => self.layout.captions.figure = num(key, v)?,
            "emphasis" => {
                self.emphasis = v
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| ElementClass::parse(s).ok_or_else(|| format!("unknown element class '{s}'")))
                    .collect::<Result<_, _>>()?
            }
            _ => {
                if let Some(kind) = key.strip_prefix("compiler.") {
                    self.compilers.retain(|(k, _)| k != kind);
                    self.compilers.push((kind.to_string(), v.to_string()));
                    return Ok(());
                }
                let parts: Vec<&str> = key.split('.').collect();
                if let ["stage", stage, field] = parts[..] {
                    let stage = Stage::from_key(stage).ok_or_else(|| format!("unknown stage '{stage}'"))?;
                    let c = self.stages.get_mut(stage);
                    match field {
                        "model" => c.model = v.to_string(),
                        "temperature" => c.temperature = num(key, v)?,
                        "top_p" => c.top_p = num(key, v)?,
                        "max_tokens" => c.max_tokens = num(key, v)?,
                        _ => return Err(format!("unknown config key '{key}'")),
                    }
                    return Ok(());
                }
                return Err(format!("unknown config key '{key}'"));
            }
        }
        Ok(())
    }

    /// The settings that shape the dataset, without output location and
    /// thread count (neither changes a byte of the result).
    pub fn snapshot(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("config serializes");
        if let Some(m) = v.as_object_mut() {
            m.remove("out");
            m.remove("jobs");
        }
        v
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.decks == 0 {
            return Err("decks must be at least 1".into());
        }
        if self.jobs == Some(0) {
            return Err("jobs must be at least 1".into());
        }
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(format!("train_fraction {} must lie strictly between 0 and 1", self.train_fraction));
        }
        self.render.options().validate().map_err(|e| e.to_string())?;
        self.augment.validate()?;
        let p = &self.layout;
        for (name, v) in [
            ("untitled", p.untitled),
            ("meta.slide_nr", p.meta.slide_nr),
            ("meta.footer", p.meta.footer),
            ("meta.logo", p.meta.logo),
            ("meta.natural_image", p.meta.natural_image),
            ("meta.url", p.meta.url),
            ("captions.table", p.captions.table),
            ("captions.figure", p.captions.figure),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(format!("{name} = {v} is not a probability"));
            }
        }
        if !(p.tau > 0.0 && p.tau.is_finite()) {
            return Err(format!("tau {} must be positive", p.tau));
        }
        for s in Stage::ALL {
            self.stages.get(s).validate().map_err(|e| e.to_string())?;
        }
        if self.offline && self.search_endpoint.is_some() {
            return Err("offline runs cannot use a search endpoint".into());
        }
        Ok(())
    }
}

/// Every settable key except the open-ended `compiler.*` family.
pub fn known_keys() -> Vec<String> {
    let mut keys: Vec<String> = [
        "seed",
        "decks",
        "mode",
        "offline",
        "jobs",
        "out",
        "width",
        "height",
        "resize",
        "blur_sigma",
        "pixelation_block",
        "train_fraction",
        "llm_base_url",
        "search_endpoint",
        "prompts_dir",
        "tau",
        "untitled",
        "coherent_style",
        "meta.slide_nr",
        "meta.footer",
        "meta.logo",
        "meta.natural_image",
        "meta.url",
        "captions.table",
        "captions.figure",
        "emphasis",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    for s in Stage::ALL {
        for f in ["model", "temperature", "top_p", "max_tokens"] {
            keys.push(format!("stage.{}.{f}", s.key()));
        }
    }
    keys
}

/// `meta.slide_nr` reads `SLIDEFORGE_META_SLIDE_NR`.
pub fn env_name(key: &str) -> String {
    format!("SLIDEFORGE_{}", key.replace('.', "_").to_ascii_uppercase())
}

/// `WxH`, e.g. `640x360`.
pub fn parse_size(v: &str) -> Result<(u32, u32), String> {
    let (w, h) = v
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("invalid size '{v}' (expected WxH)"))?;
    let w: u32 = w.trim().parse().map_err(|_| format!("invalid width in '{v}'"))?;
    let h: u32 = h.trim().parse().map_err(|_| format!("invalid height in '{v}'"))?;
    if w == 0 || h == 0 {
        return Err(format!("size '{v}' must be positive"));
    }
    Ok((w, h))
}

/// Parses `key = value` lines; `#` starts a comment line.
pub fn parse_flat(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected key = value", i + 1))?;
        let v = v.trim();
        let v = v.strip_prefix('"').and_then(|s| s.strip_suffix('"')).unwrap_or(v);
        out.push((k.trim().to_string(), v.to_string()));
    }
    Ok(out)
}
