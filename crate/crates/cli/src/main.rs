use clap::{Parser, Subcommand};
use sha2::{Digest, Sha256};
use slideforge::annotate::package::MANIFEST;
use slideforge::annotate::stats::heatmap_from_coco;
use slideforge::annotate::{compute_stats, stats::load_coco_sets};
use slideforge::assets::AssetStore;
use slideforge::config::RunConfig;
use slideforge::deck::{parse_deck, validate_deck, DeckLayout, ElementKind};
use slideforge::error::{AnnotateError, DeckError, RenderError};
use slideforge::pipeline::{run_generate, Services};
use slideforge::render::slide::{contact_sheet, montage_columns};
use slideforge::render::{export_pptx, render_slide, RenderOptions};
use slideforge::Error;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_USAGE: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_STAGE: u8 = 3;
const EXIT_IO: u8 = 4;

#[derive(Parser)]
#[command(name = "slideforge", version, about = "Synthetic lecture-slide dataset generator")]
struct Cli {
    /// Log level (error, warn, info, debug, trace).
    #[arg(long, global = true, default_value = "info")]
    log: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate, render, annotate and package a dataset.
    Generate(GenerateArgs),
    /// Render a deck file to a contact-sheet PNG.
    Preview {
        deck: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Overlay element boxes colored by category.
        #[arg(long)]
        boxes: bool,
        /// Thumbnail width in pixels.
        #[arg(long, default_value_t = 320)]
        cell_width: u32,
    },
    /// Print per-class statistics of a packaged dataset and write them as JSON.
    Stats {
        dir: PathBuf,
        /// JSON output path (default: <dir>/stats.json).
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Write the spatial occupancy heatmap of one category as a PNG.
    Heatmap {
        dir: PathBuf,
        category: String,
        /// PNG output path (default: <dir>/heatmap_<category>.png).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Pixels per grid cell.
        #[arg(long, default_value_t = 10)]
        scale: u32,
    },
    /// Write a deck file as an editable presentation.
    ExportPptx {
        deck: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(clap::Args)]
struct GenerateArgs {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    decks: Option<usize>,
    /// syndet, synret or custom.
    #[arg(long)]
    mode: Option<String>,
    /// Use the bundled offline provider; no network access.
    #[arg(long)]
    offline: bool,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Flat `key = value` config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Resize rendered slides, e.g. 640x360.
    #[arg(long, value_name = "WxH")]
    resize: Option<String>,
    /// Extra `key=value` settings, applied after the named flags.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl GenerateArgs {
    fn flags(&self) -> Result<Vec<(String, String)>, String> {
        let mut f = Vec::new();
        let mut push = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                f.push((k.to_string(), v));
            }
        };
        push("mode", self.mode.clone());
        push("seed", self.seed.map(|v| v.to_string()));
        push("decks", self.decks.map(|v| v.to_string()));
        push("jobs", self.jobs.map(|v| v.to_string()));
        push("out", self.out.as_ref().map(|p| p.display().to_string()));
        push("resize", self.resize.clone());
        push("offline", self.offline.then(|| "true".to_string()));
        for kv in &self.set {
            let (k, v) = kv.split_once('=').ok_or_else(|| format!("--set expects KEY=VALUE, got '{kv}'"))?;
            f.push((k.trim().to_string(), v.trim().to_string()));
        }
        Ok(f)
    }
}

/// A failure with its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

fn annotate_code(e: &AnnotateError) -> u8 {
    match e {
        AnnotateError::TooFewDecks(_) | AnnotateError::BadFraction(_) => EXIT_USAGE,
        AnnotateError::MissingRender { .. } => EXIT_STAGE,
        AnnotateError::Render(r) => render_code(r),
        AnnotateError::Dataset(_) | AnnotateError::Io(_) | AnnotateError::Json(_) | AnnotateError::Csv(_) => EXIT_IO,
    }
}

fn render_code(e: &RenderError) -> u8 {
    match e {
        RenderError::Io(_) => EXIT_IO,
        _ => EXIT_STAGE,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, tag) = match &e {
            Error::Config(_) => (EXIT_USAGE, "config"),
            Error::Deck(_) => (EXIT_VALIDATION, "validation"),
            Error::Stage(s) => (EXIT_STAGE, s.stage.key()),
            Error::Layout(_) => (EXIT_STAGE, "layout"),
            Error::Compile(_) => (EXIT_STAGE, "compile"),
            Error::Render(r) => (render_code(r), "render"),
            Error::Annotate(a) => (annotate_code(a), "annotate"),
            Error::Io(_) => (EXIT_IO, "io"),
        };
        Failure::new(code, format!("[{tag}] {e}"))
    }
}

fn io_failure(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::new(EXIT_IO, format!("{}: {e}", path.display()))
}

fn cmd_generate(args: &GenerateArgs) -> Result<(), Failure> {
    let flags = args.flags().map_err(|m| Failure::new(EXIT_USAGE, m))?;
    let cfg = RunConfig::load(args.config.as_deref(), &flags).map_err(|m| Failure::new(EXIT_USAGE, format!("[config] {m}")))?;
    log::info!(
        "generating {} deck(s), mode {}, seed {}, {}",
        cfg.decks,
        cfg.mode,
        cfg.seed,
        if cfg.offline { "offline" } else { "live" }
    );
    let services = Services::from_config(&cfg)?;
    let m = run_generate(&cfg, &services)?;
    let manifest_path = cfg.out.join(MANIFEST);
    let bytes = std::fs::read(&manifest_path).map_err(|e| io_failure(&manifest_path, e))?;
    let train = m.split.values().filter(|s| *s == "train").count();
    println!("dataset      {}", cfg.out.display());
    println!("decks        {} ({} train, {} val)", m.deck_count, train, m.deck_count - train);
    println!("slides       {}", m.slide_count);
    println!("annotations  {}", m.annotation_count);
    println!("warnings     {}", m.warning_count);
    println!("manifest     sha256:{}", hex::encode(Sha256::digest(&bytes)));
    Ok(())
}

fn load_deck(path: &Path) -> Result<(DeckLayout, AssetStore), Failure> {
    let bytes = std::fs::read(path).map_err(|e| io_failure(path, e))?;
    let deck = parse_deck(&bytes).map_err(|e: DeckError| Failure::new(EXIT_VALIDATION, format!("{}: {e}", path.display())))?;
    let report = validate_deck(&deck);
    if !report.is_valid() {
        return Err(Failure::new(
            EXIT_VALIDATION,
            format!("{} failed validation:\n{report}", path.display()),
        ));
    }
    let dir = path.parent().unwrap_or(Path::new("."));
    let store = AssetStore::load_from(dir, &deck.assets).map_err(|e| io_failure(dir, e))?;
    Ok((deck, store))
}

fn cmd_preview(deck: &Path, out: &Path, boxes: bool, cell_width: u32) -> Result<(), Failure> {
    let (deck, store) = load_deck(deck)?;
    if deck.slides.is_empty() {
        return Err(Failure::new(EXIT_VALIDATION, "deck has no slides"));
    }
    let opts = RenderOptions {
        debug: boxes,
        ..RenderOptions::default()
    };
    let images = deck
        .slides
        .iter()
        .map(|s| render_slide(s, &store, &opts).map(|r| r.image))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::from(Error::from(e)))?;
    let cols = montage_columns(images.len());
    let sheet = contact_sheet(&images, cols, cell_width.max(16));
    sheet.save(out).map_err(|e| io_failure(out, e))?;
    let rows = (images.len() as u32).div_ceil(cols);
    println!("{} slides, {cols}x{rows} montage -> {}", images.len(), out.display());
    Ok(())
}

fn cmd_stats(dir: &Path, json: Option<&Path>) -> Result<(), Failure> {
    let report = compute_stats(dir).map_err(|e| Failure::new(annotate_code(&e), e.to_string()))?;
    print!("{}", report.table());
    let path = json.map(Path::to_path_buf).unwrap_or_else(|| dir.join("stats.json"));
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    std::fs::write(&path, text + "\n").map_err(|e| io_failure(&path, e))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_heatmap(dir: &Path, category: &str, out: Option<&Path>, scale: u32) -> Result<(), Failure> {
    let kind = ElementKind::from_name(category).ok_or_else(|| {
        let names: Vec<&str> = ElementKind::ALL.iter().map(|k| k.name()).collect();
        Failure::new(
            EXIT_USAGE,
            format!("unknown category '{category}'; valid names: {}", names.join(", ")),
        )
    })?;
    let sets = load_coco_sets(dir).map_err(|e| Failure::new(annotate_code(&e), e.to_string()))?;
    let map = heatmap_from_coco(&sets, kind);
    let path = out
        .map(Path::to_path_buf)
        .unwrap_or_else(|| dir.join(format!("heatmap_{}.png", kind.name().to_ascii_lowercase())));
    map.to_image(scale).save(&path).map_err(|e| io_failure(&path, e))?;
    println!("{}: {} cell hits -> {}", kind.name(), map.total(), path.display());
    Ok(())
}

fn cmd_export(deck: &Path, out: &Path) -> Result<(), Failure> {
    let (deck, store) = load_deck(deck)?;
    export_pptx(&deck, &store, out).map_err(|e| Failure::from(Error::from(e)))?;
    println!("{} slides -> {}", deck.slides.len(), out.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    env_logger::Builder::new()
        .parse_filters(&cli.log)
        .format_timestamp(None)
        .format_target(false)
        .init();
    let result = match &cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Preview {
            deck,
            out,
            boxes,
            cell_width,
        } => cmd_preview(deck, out, *boxes, *cell_width),
        Command::Stats { dir, json } => cmd_stats(dir, json.as_deref()),
        Command::Heatmap { dir, category, out, scale } => cmd_heatmap(dir, category, out.as_deref(), *scale),
        Command::ExportPptx { deck, out } => cmd_export(deck, out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
