//! End-to-end generation: content, layout, compilation, rendering and
//! packaging, with deck-level parallelism.

use crate::annotate::{package_dataset, DatasetManifest, DeckOutput, LiveSummaries, PackageOptions, SlideOutput};
use crate::assets::{compile_deck_assets, AssetStore, Compiler, ExternalCommandPlugin};
use crate::config::RunConfig;
use crate::content::corpus::BOOKS;
use crate::content::live::{LiveSearchClient, LiveTransport};
use crate::content::{
    ContentCtx, ContentSource, ImageSearchClient, LlmTransport, OfflineProvider, PromptSet, RetryPolicy, StubSearchClient,
};
use crate::deck::model::{DeckLayout, Stage};
use crate::deck::validate_deck;
use crate::error::{DeckError, Error, RenderError};
use crate::layout::run_layout_phase;
use crate::render::{augment_image, render_slide, AugmentSpec, RenderOptions};
use crate::rng;
use image::{DynamicImage, RgbaImage};
use rayon::prelude::*;
use std::io::Cursor;

/// Transports, search, prompts and compilers shared by all decks.
pub struct Services {
    pub transport: Box<dyn LlmTransport>,
    pub search: Box<dyn ImageSearchClient>,
    pub prompts: PromptSet,
    pub compiler: Compiler,
    pub retry: RetryPolicy,
}

impl Services {
    /// Offline provider, stub search and built-in compilers only.
    pub fn offline() -> Self {
        Self {
            transport: Box::new(OfflineProvider::new()),
            search: Box::new(StubSearchClient),
            prompts: PromptSet::bundled(),
            compiler: Compiler::hermetic(),
            retry: RetryPolicy::offline(),
        }
    }

    pub fn from_config(cfg: &RunConfig) -> Result<Self, Error> {
        let prompts = match &cfg.prompts_dir {
            Some(dir) => PromptSet::with_overrides(dir)?,
            None => PromptSet::bundled(),
        };
        let externals = cfg
            .compilers
            .iter()
            .map(|(kind, cmd)| ExternalCommandPlugin::from_command_line(kind, cmd).map_err(Error::Config))
            .collect::<Result<Vec<_>, _>>()?;
        let compiler = Compiler::with_external(externals);
        if cfg.offline {
            return Ok(Self {
                prompts,
                compiler,
                ..Self::offline()
            });
        }
        let search: Box<dyn ImageSearchClient> = match &cfg.search_endpoint {
            Some(url) => Box::new(LiveSearchClient::from_env(url.clone())),
            None => Box::new(StubSearchClient),
        };
        Ok(Self {
            transport: Box::new(LiveTransport::from_env(cfg.llm_base_url.clone())),
            search,
            prompts,
            compiler,
            retry: RetryPolicy::live(),
        })
    }

    fn ctx(&self) -> ContentCtx<'_> {
        let mut ctx = ContentCtx::new(self.transport.as_ref(), self.search.as_ref(), &self.prompts);
        ctx.retry = self.retry;
        ctx
    }
}

pub fn deck_seed(master: u64, index: usize) -> u64 {
    rng::derive_seed(master, &format!("deck-{index}"))
}

/// Book a deck draws its topic from.
pub fn deck_source(seed: u64) -> ContentSource {
    let mut r = rng::child_rng(seed, "book");
    ContentSource::Book(BOOKS[rng::index(&mut r, BOOKS.len())].seed())
}

/// Content, layout and asset compilation for deck `index`.
pub fn generate_deck(cfg: &RunConfig, services: &Services, index: usize) -> Result<(DeckLayout, AssetStore), Error> {
    let seed = deck_seed(cfg.seed, index);
    let mut ctx = services.ctx();
    ctx.emphasis = cfg.emphasis.clone();
    let out = crate::content::run_content_phase(&deck_source(seed), &mut ctx, &cfg.stages, &mut rng::child_rng(seed, "content"))?;
    let mut store = out.assets;
    let mut deck = run_layout_phase(&out.content, seed, &cfg.layout, &mut store)?;
    deck.warnings = out.warnings;
    compile_deck_assets(&mut deck, &services.compiler, &mut store)?;
    let report = validate_deck(&deck);
    if let Some(v) = report.first() {
        return Err(DeckError::Invalid(format!("{}: {v}", deck.deck_id)).into());
    }
    Ok((deck, store))
}

pub fn encode_png(img: &RgbaImage) -> Result<Vec<u8>, RenderError> {
    let rgb = DynamicImage::ImageRgba8(img.clone()).to_rgb8();
    let mut out = Vec::new();
    rgb.write_to(&mut Cursor::new(&mut out), image::ImageFormat::Png)?;
    Ok(out)
}

/// Renders, augments and encodes every slide.
pub fn render_deck(
    deck: &DeckLayout,
    store: &AssetStore,
    opts: &RenderOptions,
    augment: &AugmentSpec,
) -> Result<Vec<SlideOutput>, RenderError> {
    deck.slides
        .iter()
        .map(|slide| {
            let r = render_slide(slide, store, opts)?;
            let (img, transform) = augment_image(&r.image, augment);
            Ok(SlideOutput {
                png: encode_png(&img)?,
                width: img.width(),
                height: img.height(),
                ink: r.ink,
                transform,
            })
        })
        .collect()
}

pub fn build_deck(cfg: &RunConfig, services: &Services, index: usize) -> Result<DeckOutput, Error> {
    let (layout, assets) = generate_deck(cfg, services, index)?;
    let slides = render_deck(&layout, &assets, &cfg.render.options(), &cfg.augment)?;
    log::info!("deck {} ({}): {} slides", index + 1, layout.deck_id, slides.len());
    Ok(DeckOutput { layout, assets, slides })
}

/// Builds `cfg.decks` decks in parallel and packages them under `cfg.out`.
pub fn run_generate(cfg: &RunConfig, services: &Services) -> Result<DatasetManifest, Error> {
    cfg.validate().map_err(Error::Config)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cfg.jobs {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| Error::Config(e.to_string()))?;
    let decks: Vec<DeckOutput> = pool.install(|| {
        (0..cfg.decks)
            .into_par_iter()
            .map(|i| build_deck(cfg, services, i))
            .collect::<Result<_, _>>()
    })?;
    let options = PackageOptions {
        master_seed: cfg.seed,
        train_fraction: cfg.train_fraction,
        config: cfg.snapshot(),
    };
    let ctx = services.ctx();
    let summary_cfg = cfg.stages.get(Stage::TextCode).clone();
    let live = (!cfg.offline).then_some(LiveSummaries {
        ctx: &ctx,
        config: &summary_cfg,
    });
    Ok(package_dataset(&decks, &cfg.out, &options, live.as_ref())?)
}
