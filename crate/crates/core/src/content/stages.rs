//! The content-phase stages and their orchestration.

use super::context::*;
use super::parser::{self, ParsedPayload, RawSlidePlan, TextItem};
use super::plan::{infer_slide_type, BookSeed, ElementClass, ElementPlan, PlanRequest, SlidePlan};
use super::prompts::PromptSet;
use super::search::{retrieve_image, ImageKind, ImageSearchClient};
use super::transport::{ChatRequest, LlmTransport, RetryPolicy};
use crate::assets::store::AssetStore;
use crate::deck::model::*;
use crate::error::{ParseError, StageError, TransportError};
use crate::rng::{self, SlideRng};
use rand::Rng;
use serde::Serialize;

pub const MAX_TOPICS: usize = 15;
pub const MIN_TOPICS: usize = 10;
pub const MAX_TITLE_WORDS: usize = 5;
pub const MAX_ENUMERATION_ITEMS: usize = 6;

/// Shared state threaded through the stages of one deck.
pub struct ContentCtx<'a> {
    pub transport: &'a dyn LlmTransport,
    pub search: &'a dyn ImageSearchClient,
    pub prompts: &'a PromptSet,
    pub retry: RetryPolicy,
    /// Element classes the instruction stage should favour.
    pub emphasis: Vec<ElementClass>,
    pub warnings: Vec<String>,
}

impl<'a> ContentCtx<'a> {
    pub fn new(transport: &'a dyn LlmTransport, search: &'a dyn ImageSearchClient, prompts: &'a PromptSet) -> Self {
        Self {
            transport,
            search,
            prompts,
            retry: RetryPolicy::default(),
            emphasis: Vec::new(),
            warnings: Vec::new(),
        }
    }

    fn warn(&mut self, msg: String) {
        log::warn!("{msg}");
        self.warnings.push(msg);
    }
}

fn stage_error(stage: Stage, step: &str, attempts: u32, message: impl Into<String>) -> StageError {
    StageError {
        stage,
        step: step.to_string(),
        attempts,
        message: message.into(),
    }
}

fn check_stage(cfg: &StageConfig, want: Stage, step: &str) -> Result<(), StageError> {
    if cfg.stage != want {
        return Err(stage_error(want, step, 0, format!("given the {} stage config", cfg.stage)));
    }
    Ok(())
}

/// One request with retries. Each attempt reuses the drawn seed offset by
/// the attempt number; fatal transport errors stop immediately.
fn call<T, C: Serialize, R: Rng + ?Sized>(
    ctx: &ContentCtx<'_>,
    cfg: &StageConfig,
    step: &str,
    prompt_vars: &[(&str, String)],
    context: &C,
    rng: &mut R,
    parse: impl Fn(&str) -> Result<T, ParseError>,
) -> Result<T, StageError> {
    let template = match step {
        STEP_TOPICS => "topic",
        STEP_ELEMENTS => "instruction",
        other => other,
    };
    let base_seed: u64 = rng.gen();
    let request = ChatRequest {
        config: cfg.clone(),
        messages: ctx.prompts.render(template, prompt_vars),
        seed: base_seed,
        step: step.to_string(),
        context: serde_json::to_value(context).expect("context serializes"),
    };
    let mut last = String::from("no attempts made");
    let max = ctx.retry.max_attempts.max(1);
    for attempt in 1..=max {
        let delay = ctx.retry.delay_before(attempt);
        if !delay.is_zero() {
            std::thread::sleep(delay);
        }
        let req = ChatRequest {
            seed: base_seed.wrapping_add(u64::from(attempt - 1)),
            ..request.clone()
        };
        match ctx.transport.send(&req) {
            Ok(raw) => match parse(&raw) {
                Ok(v) => return Ok(v),
                Err(e) => {
                    log::debug!("{step} attempt {attempt}: {}; raw payload: {}", e.message, e.raw);
                    last = e.message;
                }
            },
            Err(TransportError::Fatal(m)) => return Err(stage_error(cfg.stage, step, attempt, m)),
            Err(e @ TransportError::Retryable(_)) => last = e.to_string(),
        }
    }
    Err(stage_error(cfg.stage, step, max, last))
}

fn clean_list(items: Vec<String>) -> Vec<String> {
    let mut out: Vec<String> = Vec::with_capacity(items.len());
    for s in items {
        let s = s.split_whitespace().collect::<Vec<_>>().join(" ");
        if !s.is_empty() && !out.iter().any(|o| o.eq_ignore_ascii_case(&s)) {
            out.push(s);
        }
    }
    out
}

const GENERIC_TITLES: &[&str] = &[
    "introduction",
    "applications",
    "overview",
    "basics",
    "fundamentals",
    "summary",
    "conclusion",
    "history",
    "examples",
];

/// "Introduction" becomes "Introduction to <subject>", "Applications"
/// becomes "Applications of <subject>".
pub fn augment_generic_title(title: &str, subject: &str) -> String {
    let key = title.trim().trim_end_matches(':').to_lowercase();
    if !GENERIC_TITLES.contains(&key.as_str()) || subject.trim().is_empty() {
        return title.to_string();
    }
    let joiner = if key == "introduction" { "to" } else { "of" };
    format!("{} {joiner} {}", title.trim().trim_end_matches(':'), subject.trim())
}

pub fn generate_topics<R: Rng + ?Sized>(
    book: &BookSeed,
    ctx: &mut ContentCtx<'_>,
    cfg: &StageConfig,
    rng: &mut R,
) -> Result<Vec<String>, StageError> {
    check_stage(cfg, Stage::Topic, STEP_TOPICS)?;
    if book.title.trim().is_empty() {
        return Err(stage_error(Stage::Topic, STEP_TOPICS, 0, "book title is empty"));
    }
    let vars = [
        ("subject", book.subject.clone()),
        ("book", book.title.clone()),
        ("author", book.author.clone()),
    ];
    let context = TopicContext {
        subject: book.subject.clone(),
        book: book.title.clone(),
        author: book.author.clone(),
    };
    let mut topics = call(ctx, cfg, STEP_TOPICS, &vars, &context, rng, |raw| {
        let list = clean_list(parser::parse_string_list(raw)?);
        if list.is_empty() {
            return Err(ParseError::new("empty topic list", raw));
        }
        Ok(list)
    })?;
    let subject_context = if book.subject.len() > 3 { &book.subject } else { &book.title };
    for t in topics.iter_mut() {
        *t = augment_generic_title(t, subject_context);
    }
    if topics.len() > MAX_TOPICS {
        ctx.warn(format!(
            "topic list for '{}' truncated from {} to {MAX_TOPICS}",
            book.title,
            topics.len()
        ));
        topics.truncate(MAX_TOPICS);
    } else if topics.len() < MIN_TOPICS {
        ctx.warn(format!("only {} topics for '{}'", topics.len(), book.title));
    }
    Ok(topics)
}

fn is_word(token: &str) -> bool {
    token.chars().any(char::is_alphanumeric)
}

pub fn word_count(title: &str) -> usize {
    title.split_whitespace().filter(|t| is_word(t)).count()
}

const DANGLING: [&str; 12] = ["a", "an", "and", "as", "for", "in", "of", "on", "or", "the", "to", "with"];

/// Keeps the first `max` words; punctuation-only tokens (":", "&") do not
/// count. A cut title loses trailing punctuation and connectives.
pub fn truncate_words(title: &str, max: usize) -> String {
    let mut kept = Vec::new();
    let mut words = 0;
    for tok in title.split_whitespace() {
        if is_word(tok) {
            if words == max {
                break;
            }
            words += 1;
        }
        kept.push(tok);
    }
    let cut = kept.len() < title.split_whitespace().count();
    while kept.len() > 1 {
        let last = kept[kept.len() - 1];
        if !is_word(last) || (cut && DANGLING.contains(&last.to_lowercase().as_str())) {
            kept.pop();
        } else {
            break;
        }
    }
    kept.join(" ")
}

pub fn generate_outline<R: Rng + ?Sized>(
    topic: &str,
    book: &BookSeed,
    ctx: &mut ContentCtx<'_>,
    cfg: &StageConfig,
    rng: &mut R,
) -> Result<Vec<String>, StageError> {
    check_stage(cfg, Stage::Outline, STEP_OUTLINE)?;
    let vars = [
        ("topic", topic.to_string()),
        ("book", book.title.clone()),
        ("max_slides", MAX_SLIDES.to_string()),
        ("max_words", MAX_TITLE_WORDS.to_string()),
    ];
    let context = OutlineContext {
        topic: topic.to_string(),
        book: book.title.clone(),
        max_slides: MAX_SLIDES,
        max_words: MAX_TITLE_WORDS,
    };
    let titles = call(ctx, cfg, STEP_OUTLINE, &vars, &context, rng, |raw| {
        let list = clean_list(parser::parse_string_list(raw)?);
        if list.is_empty() {
            return Err(ParseError::new("empty outline", raw));
        }
        Ok(list)
    })?;
    let mut out = Vec::with_capacity(titles.len().min(MAX_SLIDES));
    for t in titles {
        if word_count(&t) > MAX_TITLE_WORDS {
            let short = truncate_words(&t, MAX_TITLE_WORDS);
            ctx.warn(format!("slide title '{t}' truncated to '{short}'"));
            out.push(short);
        } else {
            out.push(t);
        }
    }
    if out.len() > MAX_SLIDES {
        ctx.warn(format!("outline for '{topic}' truncated from {} to {MAX_SLIDES} slides", out.len()));
        out.truncate(MAX_SLIDES);
    }
    Ok(out)
}

fn norm_title(t: &str) -> String {
    t.chars().filter(|c| c.is_alphanumeric()).collect::<String>().to_lowercase()
}

fn emphasis_line(emphasis: &[ElementClass]) -> String {
    if emphasis.is_empty() {
        String::new()
    } else {
        let names: Vec<&str> = emphasis.iter().map(|c| c.name()).collect();
        format!("Use these element types more often than usual: {}.", names.join(", "))
    }
}

pub fn assign_elements<R: Rng + ?Sized>(
    topic: &str,
    titles: &[String],
    ctx: &mut ContentCtx<'_>,
    cfg: &StageConfig,
    rng: &mut R,
) -> Result<Vec<SlidePlan>, StageError> {
    check_stage(cfg, Stage::Instruction, STEP_ELEMENTS)?;
    if titles.is_empty() {
        return Ok(Vec::new());
    }
    let outline = titles
        .iter()
        .enumerate()
        .map(|(i, t)| format!("{}. {t}", i + 1))
        .collect::<Vec<_>>()
        .join("\n");
    let vars = [
        ("topic", topic.to_string()),
        ("outline", outline),
        (
            "slide_types",
            SlideType::ALL.iter().map(|s| s.name()).collect::<Vec<_>>().join(", "),
        ),
        ("max_elements", MAX_BODY_ELEMENTS.to_string()),
        (
            "elements",
            ElementClass::ALL.iter().map(|c| c.name()).collect::<Vec<_>>().join(", "),
        ),
        ("emphasis", emphasis_line(&ctx.emphasis)),
    ];
    let context = ElementsContext {
        topic: topic.to_string(),
        titles: titles.to_vec(),
        max_elements: MAX_BODY_ELEMENTS,
        emphasis: ctx.emphasis.clone(),
    };
    let raw_plans = call(ctx, cfg, STEP_ELEMENTS, &vars, &context, rng, |raw| {
        let plans = parser::parse_slide_plans(raw)?;
        let any_valid = plans
            .iter()
            .flat_map(|p| &p.elements)
            .any(|e| ElementClass::parse(&e.element_type).is_some());
        if !any_valid {
            return Err(ParseError::new("no valid element plans", raw));
        }
        Ok(plans)
    })?;
    let mut used = vec![false; raw_plans.len()];
    let mut slides = Vec::with_capacity(titles.len());
    for (i, title) in titles.iter().enumerate() {
        let key = norm_title(title);
        let found = raw_plans
            .iter()
            .enumerate()
            .position(|(j, p)| !used[j] && norm_title(&p.title) == key)
            .or_else(|| (raw_plans.len() == titles.len() && !used[i]).then_some(i));
        let raw = found.map(|j| {
            used[j] = true;
            &raw_plans[j]
        });
        slides.push(resolve_slide(title, raw, ctx));
    }
    Ok(slides)
}

fn resolve_slide(title: &str, raw: Option<&RawSlidePlan>, ctx: &mut ContentCtx<'_>) -> SlidePlan {
    let slide_type = raw
        .and_then(|r| r.slide_type.as_deref())
        .and_then(SlideType::parse)
        .unwrap_or_else(|| infer_slide_type(title));
    let mut plans = Vec::new();
    for e in raw.map(|r| r.elements.as_slice()).unwrap_or_default() {
        let Some(class) = ElementClass::parse(&e.element_type) else {
            ctx.warn(format!("slide '{title}': unknown element type '{}' skipped", e.element_type));
            continue;
        };
        if plans.len() == MAX_BODY_ELEMENTS {
            ctx.warn(format!(
                "slide '{title}': element '{}' dropped, at most {MAX_BODY_ELEMENTS} allowed",
                class
            ));
            continue;
        }
        let caption = if e.caption.trim().is_empty() {
            format!("{} for {title}", class.name())
        } else {
            e.caption.split_whitespace().collect::<Vec<_>>().join(" ")
        };
        plans.push(ElementPlan::new(class, caption));
    }
    if plans.is_empty() {
        ctx.warn(format!("slide '{title}': no usable element plan, added a description"));
        plans.push(ElementPlan::new(ElementClass::Description, format!("Overview of {title}")));
    }
    SlidePlan {
        title: title.to_string(),
        slide_type,
        plans,
    }
}

fn describe_requests(requests: &[PlanRequest]) -> String {
    requests
        .iter()
        .enumerate()
        .map(|(i, r)| {
            format!(
                "{}. [{}] slide {} \"{}\": {}",
                i + 1,
                r.plan.class,
                r.slide_index + 1,
                r.slide_title,
                r.plan.caption
            )
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn placeholder_text(plan: &ElementPlan) -> Payload {
    match plan.class {
        ElementClass::Enumeration => Payload::EnumerationItems(vec![plan.caption.clone()]),
        _ => Payload::PlainText(plan.caption.clone()),
    }
}

fn split_items(text: &str) -> Vec<String> {
    let lines: Vec<String> = text
        .lines()
        .map(|l| l.trim().trim_start_matches(['-', '*', '\u{2022}']).trim().to_string())
        .filter(|l| !l.is_empty())
        .collect();
    if lines.len() > 1 {
        lines
    } else {
        text.split("; ").map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
    }
}

fn text_payload(plan: &ElementPlan, item: &TextItem) -> Option<Payload> {
    let payload = match (plan.class, item) {
        (ElementClass::Enumeration, TextItem::Items(items)) => {
            let items: Vec<String> = items
                .iter()
                .map(|s| s.trim().to_string())
                .filter(|s| !s.is_empty())
                .take(MAX_ENUMERATION_ITEMS)
                .collect();
            Payload::EnumerationItems(items)
        }
        (ElementClass::Enumeration, TextItem::Text(t)) => {
            Payload::EnumerationItems(split_items(t).into_iter().take(MAX_ENUMERATION_ITEMS).collect())
        }
        (_, TextItem::Text(t)) => Payload::PlainText(t.trim().to_string()),
        (_, TextItem::Items(items)) => Payload::PlainText(items.join(" ").trim().to_string()),
    };
    let empty = match &payload {
        Payload::EnumerationItems(v) => v.is_empty(),
        Payload::PlainText(t) => t.is_empty(),
        _ => false,
    };
    (!empty).then_some(payload)
}

pub fn generate_text_payloads<R: Rng + ?Sized>(
    topic: &str,
    subject: &str,
    requests: &[PlanRequest],
    ctx: &mut ContentCtx<'_>,
    cfg: &StageConfig,
    rng: &mut R,
) -> Result<Vec<ElementContent>, StageError> {
    check_stage(cfg, Stage::TextCode, STEP_TEXT)?;
    if requests.is_empty() {
        return Ok(Vec::new());
    }
    if let Some(bad) = requests.iter().find(|r| !r.plan.class.is_text()) {
        return Err(stage_error(
            Stage::TextCode,
            STEP_TEXT,
            0,
            format!("'{}' is not a text element", bad.plan.class),
        ));
    }
    let vars = [("topic", topic.to_string()), ("requests", describe_requests(requests))];
    let context = PayloadContext {
        topic: topic.to_string(),
        subject: subject.to_string(),
        requests: requests.to_vec(),
    };
    let items = call(ctx, cfg, STEP_TEXT, &vars, &context, rng, |raw| {
        match parser::parse_llm_payload(raw, parser::ExpectedShape::TextItems)? {
            ParsedPayload::TextItems(items) => Ok(items),
            _ => unreachable!("shape requested"),
        }
    })?;
    if items.len() > requests.len() {
        ctx.warn(format!(
            "text payload had {} entries for {} requests; extras ignored",
            items.len(),
            requests.len()
        ));
    }
    let mut out = Vec::with_capacity(requests.len());
    for (i, req) in requests.iter().enumerate() {
        let payload = match items.get(i).and_then(|it| text_payload(&req.plan, it)) {
            Some(p) => p,
            None => {
                ctx.warn(format!(
                    "missing text for {} on slide '{}'; caption used as placeholder",
                    req.plan.class, req.slide_title
                ));
                placeholder_text(&req.plan)
            }
        };
        out.push(ElementContent {
            kind: req.plan.class.kind(),
            caption: req.plan.caption.clone(),
            payload,
        });
    }
    Ok(out)
}

fn braces_balanced(src: &str) -> bool {
    let mut depth: i64 = 0;
    let mut prev = ' ';
    for c in src.chars() {
        if prev != '\\' {
            match c {
                '{' => depth += 1,
                '}' => depth -= 1,
                _ => {}
            }
        }
        if depth < 0 {
            return false;
        }
        prev = if prev == '\\' && c == '\\' { ' ' } else { c };
    }
    depth == 0
}

/// Drops display-math wrappers and equation environments.
pub fn strip_math_wrappers(src: &str) -> String {
    let mut s = src.trim().to_string();
    for (open, close) in [
        ("$$", "$$"),
        ("\\[", "\\]"),
        ("$", "$"),
        ("\\begin{equation*}", "\\end{equation*}"),
        ("\\begin{equation}", "\\end{equation}"),
    ] {
        if s.starts_with(open) && s.ends_with(close) && s.len() >= open.len() + close.len() {
            s = s[open.len()..s.len() - close.len()].trim().to_string();
        }
    }
    s
}

fn structural_payload(req: &PlanRequest, block: &parser::FencedBlock, raw: &str) -> Result<Payload, ParseError> {
    let body = block.body.trim();
    if body.is_empty() {
        return Err(ParseError::new(format!("empty snippet for {}", req.plan.class), raw));
    }
    let lang = block.lang.to_lowercase();
    match req.plan.class {
        ElementClass::Equation | ElementClass::Table => {
            if !braces_balanced(body) {
                return Err(ParseError::new(format!("unbalanced braces in {} markup", req.plan.class), raw));
            }
            Ok(Payload::TypesetMarkup(if req.plan.class == ElementClass::Equation {
                strip_math_wrappers(body)
            } else {
                body.to_string()
            }))
        }
        ElementClass::Chart => {
            if lang == "json" || body.starts_with('{') {
                let spec: ChartSpec = serde_json::from_str(body).map_err(|e| ParseError::new(format!("chart spec: {e}"), raw))?;
                if !spec.is_well_formed() {
                    return Err(ParseError::new("chart spec series do not match categories", raw));
                }
                Ok(Payload::ChartSpec(spec))
            } else {
                Ok(Payload::PlotScript(body.to_string()))
            }
        }
        _ => Ok(Payload::PlainText(body.to_string())),
    }
}

pub fn generate_structural_payloads<R: Rng + ?Sized>(
    topic: &str,
    subject: &str,
    requests: &[PlanRequest],
    ctx: &mut ContentCtx<'_>,
    cfg: &StageConfig,
    rng: &mut R,
) -> Result<Vec<ElementContent>, StageError> {
    check_stage(cfg, Stage::TextCode, STEP_STRUCTURAL)?;
    if requests.is_empty() {
        return Ok(Vec::new());
    }
    if let Some(bad) = requests.iter().find(|r| !r.plan.class.is_structural()) {
        return Err(stage_error(
            Stage::TextCode,
            STEP_STRUCTURAL,
            0,
            format!("'{}' is not a structural element", bad.plan.class),
        ));
    }
    let vars = [("topic", topic.to_string()), ("requests", describe_requests(requests))];
    let context = PayloadContext {
        topic: topic.to_string(),
        subject: subject.to_string(),
        requests: requests.to_vec(),
    };
    let payloads = call(ctx, cfg, STEP_STRUCTURAL, &vars, &context, rng, |raw| {
        let blocks = parser::extract_fenced_blocks(raw);
        if blocks.len() != requests.len() {
            return Err(ParseError::new(
                format!("snippet count mismatch: {} requested, {} received", requests.len(), blocks.len()),
                raw,
            ));
        }
        requests
            .iter()
            .zip(&blocks)
            .map(|(req, b)| structural_payload(req, b, raw))
            .collect::<Result<Vec<_>, _>>()
    })?;
    Ok(requests
        .iter()
        .zip(payloads)
        .map(|(req, payload)| ElementContent {
            kind: req.plan.class.kind(),
            caption: req.plan.caption.clone(),
            payload,
        })
        .collect())
}

/// One retrieval summary through the transport. Empty replies count as
/// parse failures and are retried.
pub fn summarize_slide<R: Rng + ?Sized>(
    description: &str,
    fallback: &str,
    ctx: &ContentCtx<'_>,
    cfg: &StageConfig,
    rng: &mut R,
) -> Result<String, StageError> {
    let context = SummaryContext {
        slide: description.to_string(),
        fallback: fallback.to_string(),
    };
    call(
        ctx,
        cfg,
        STEP_SUMMARY,
        &[("slide", description.to_string())],
        &context,
        rng,
        |raw| {
            let text = raw.split_whitespace().collect::<Vec<_>>().join(" ");
            if text.is_empty() {
                Err(ParseError::new("empty summary", raw))
            } else {
                Ok(text)
            }
        },
    )
}

/// Where a deck's content starts from.
#[derive(Debug, Clone, PartialEq)]
pub enum ContentSource {
    /// Pick one of the book's generated topics.
    Book(BookSeed),
    /// Skip topic generation.
    Topic { topic: String, book: BookSeed },
}

#[derive(Debug, Clone)]
pub struct ContentOutput {
    pub content: DeckContent,
    pub assets: AssetStore,
    pub warnings: Vec<String>,
}

/// Topic, outline, element types, payloads, then image retrieval.
pub fn run_content_phase<R: Rng + ?Sized>(
    source: &ContentSource,
    ctx: &mut ContentCtx<'_>,
    configs: &StageConfigs,
    rng: &mut R,
) -> Result<ContentOutput, StageError> {
    let base: u64 = rng.gen();
    let step_rng = |label: &str| -> SlideRng { rng::child_rng(base, label) };

    let (topic, book) = match source {
        ContentSource::Book(book) => {
            let topics = generate_topics(book, ctx, configs.get(Stage::Topic), &mut step_rng("topics"))?;
            let mut pick = step_rng("topic-pick");
            (rng::pick(&mut pick, &topics).clone(), book.clone())
        }
        ContentSource::Topic { topic, book } => (topic.clone(), book.clone()),
    };
    let titles = generate_outline(&topic, &book, ctx, configs.get(Stage::Outline), &mut step_rng("outline"))?;
    let slide_plans = assign_elements(&topic, &titles, ctx, configs.get(Stage::Instruction), &mut step_rng("elements"))?;

    let mut text_reqs = Vec::new();
    let mut struct_reqs = Vec::new();
    let mut image_reqs = Vec::new();
    for (i, s) in slide_plans.iter().enumerate() {
        for plan in &s.plans {
            let req = PlanRequest {
                slide_index: i,
                slide_title: s.title.clone(),
                plan: plan.clone(),
            };
            if plan.class.is_text() {
                text_reqs.push(req);
            } else if plan.class.is_structural() {
                struct_reqs.push(req);
            } else {
                image_reqs.push(req);
            }
        }
    }
    let text_cfg = configs.get(Stage::TextCode);
    let mut texts = generate_text_payloads(&topic, &book.subject, &text_reqs, ctx, text_cfg, &mut step_rng("text"))?.into_iter();
    let mut structs =
        generate_structural_payloads(&topic, &book.subject, &struct_reqs, ctx, text_cfg, &mut step_rng("structural"))?.into_iter();

    let mut assets = AssetStore::default();
    let mut retrieval_rng = step_rng("retrieval");
    let mut images = Vec::with_capacity(image_reqs.len());
    for req in &image_reqs {
        let kind = match req.plan.class {
            ElementClass::Diagram => ImageKind::Diagram,
            _ => ImageKind::Photo,
        };
        let got = retrieve_image(
            &req.plan.caption,
            kind,
            ctx.search,
            &mut retrieval_rng,
            &mut assets,
            &mut ctx.warnings,
        );
        images.push(ElementContent {
            kind: req.plan.class.kind(),
            caption: req.plan.caption.clone(),
            payload: Payload::AssetRef(got.asset_id),
        });
    }
    let mut images = images.into_iter();

    let slides = slide_plans
        .into_iter()
        .map(|s| {
            let elements = s
                .plans
                .iter()
                .map(|p| {
                    let next = if p.class.is_text() {
                        texts.next()
                    } else if p.class.is_structural() {
                        structs.next()
                    } else {
                        images.next()
                    };
                    next.expect("one payload per plan")
                })
                .collect();
            SlideContent {
                title: s.title,
                slide_type: s.slide_type,
                elements,
            }
        })
        .collect();
    Ok(ContentOutput {
        content: DeckContent {
            topic,
            subject: book.subject.clone(),
            slides,
        },
        assets,
        warnings: std::mem::take(&mut ctx.warnings),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_truncation_skips_punctuation_tokens() {
        assert_eq!(word_count("Introduction : Definition & Characteristics"), 3);
        assert_eq!(truncate_words("A b c d e f g", 5), "A b c d e");
        assert_eq!(truncate_words("One two three four five : six", 5), "One two three four five");
        assert_eq!(truncate_words("Core Idea of Money and Inflation", 5), "Core Idea of Money");
        assert_eq!(truncate_words("Trees and", 5), "Trees and");
    }

    #[test]
    fn generic_titles_get_context() {
        assert_eq!(
            augment_generic_title("Introduction", "Deep Learning"),
            "Introduction to Deep Learning"
        );
        assert_eq!(
            augment_generic_title("Applications", "Deep Learning"),
            "Applications of Deep Learning"
        );
        assert_eq!(augment_generic_title("Shallow Networks", "Deep Learning"), "Shallow Networks");
    }

    #[test]
    fn math_wrappers_removed() {
        assert_eq!(strip_math_wrappers("$$ y = mx + b $$"), "y = mx + b");
        assert_eq!(strip_math_wrappers("\\begin{equation}E = mc^2\\end{equation}"), "E = mc^2");
    }

    #[test]
    fn brace_balance() {
        assert!(braces_balanced("\\frac{a}{b}"));
        assert!(braces_balanced("\\{ x \\}"));
        assert!(!braces_balanced("\\frac{a}{b"));
    }
}
