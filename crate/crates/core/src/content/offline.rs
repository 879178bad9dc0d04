//! Deterministic offline provider.
//!
//! Answers every request from its structured context and a generator
//! seeded by `(request.seed, step)`. It never parses the prompt prose and
//! never touches the network. Replies use the same loose formats a chat
//! model produces (prose preambles, code fences, Python literals) so the
//! payload parser is exercised on every run.

use super::context::*;
use super::corpus::{self, Book};
use super::plan::{infer_slide_type, ElementClass, PlanRequest};
use super::transport::{ChatRequest, LlmTransport};
use crate::deck::model::{ChartKind, ChartSeries, ChartSpec, SlideType};
use crate::error::TransportError;
use crate::rng::{self, SlideRng};
use rand::Rng;
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

/// Per-slide body element count weights for 1, 2 and 3 elements.
pub const ELEMENT_COUNT_WEIGHTS: [f64; 3] = [0.15, 0.70, 0.15];

/// Description, enumeration, url, heading.
pub const TEXT_WEIGHTS: [f64; 4] = [0.40, 0.40, 0.07, 0.13];
pub const TEXT_WEIGHTS_EMPHASIS: [f64; 4] = [0.32, 0.33, 0.25, 0.10];
/// Equation, table, chart, diagram, code, figure.
pub const VISUAL_WEIGHTS: [f64; 6] = [0.20, 0.10, 0.22, 0.26, 0.12, 0.10];
pub const VISUAL_WEIGHTS_EMPHASIS: [f64; 6] = [0.10, 0.30, 0.13, 0.15, 0.02, 0.30];

#[derive(Debug, Default, Clone)]
pub struct OfflineProvider;

impl OfflineProvider {
    pub fn new() -> Self {
        Self
    }
}

fn context<T: DeserializeOwned>(request: &ChatRequest) -> Result<T, TransportError> {
    serde_json::from_value(request.context.clone())
        .map_err(|e| TransportError::Fatal(format!("offline provider: bad {} context: {e}", request.step)))
}

impl LlmTransport for OfflineProvider {
    fn send(&self, request: &ChatRequest) -> Result<String, TransportError> {
        let mut rng = rng::rng_from_seed(rng::derive_seed(request.seed, &request.step));
        let reply = match request.step.as_str() {
            STEP_TOPICS => topics(&context(request)?, &mut rng),
            STEP_OUTLINE => outline(&context(request)?, &mut rng),
            STEP_ELEMENTS => elements(&context(request)?, &mut rng),
            STEP_TEXT => text(&context(request)?, &mut rng),
            STEP_STRUCTURAL => structural(&context(request)?, &mut rng),
            STEP_SUMMARY => context::<SummaryContext>(request)?.fallback,
            other => return Err(TransportError::Fatal(format!("offline provider: unknown step '{other}'"))),
        };
        Ok(reply)
    }

    fn name(&self) -> &str {
        "offline"
    }
}

/// Wraps a literal the way chat models tend to.
fn dress(body: String, rng: &mut SlideRng) -> String {
    match rng::index(rng, 4) {
        0 => body,
        1 => format!("```python\n{body}\n```"),
        2 => format!("Here is the requested output:\n{body}"),
        _ => format!("Sure.\n\n```\n{body}\n```\n"),
    }
}

fn topics(ctx: &TopicContext, rng: &mut SlideRng) -> String {
    let list: Vec<String> = match corpus::find_book(&ctx.book) {
        Some(Book { topics, .. }) => topics.iter().map(|s| s.to_string()).collect(),
        None => {
            let n = 10 + rng::index(rng, 2);
            corpus::GENERIC_TOPIC_PATTERNS
                .iter()
                .take(n)
                .map(|p| p.replace("{s}", &ctx.subject))
                .collect()
        }
    };
    let body = serde_json::to_string_pretty(&json!({ ctx.subject.clone(): list })).expect("json");
    dress(body, rng)
}

fn outline(ctx: &OutlineContext, rng: &mut SlideRng) -> String {
    let titles: Vec<String> = if ctx.topic.trim().eq_ignore_ascii_case("tree data structures") {
        corpus::TREE_OUTLINE.iter().map(|s| s.to_string()).collect()
    } else {
        let target = 12 + rng::index(rng, 4);
        let n_optional = target - corpus::OUTLINE_LEAD.len() - corpus::OUTLINE_TAIL.len();
        let mut pool: Vec<&str> = corpus::OUTLINE_OPTIONAL.to_vec();
        let mut picked = Vec::with_capacity(n_optional);
        for _ in 0..n_optional {
            let i = rng::index(rng, pool.len());
            picked.push((corpus::OUTLINE_OPTIONAL.iter().position(|p| *p == pool[i]).unwrap(), pool.remove(i)));
        }
        picked.sort_by_key(|(pos, _)| *pos);
        corpus::OUTLINE_LEAD
            .iter()
            .copied()
            .chain(picked.into_iter().map(|(_, p)| p))
            .chain(corpus::OUTLINE_TAIL.iter().copied())
            .map(|p| p.replace("{t}", &ctx.topic))
            .collect()
    };
    dress(serde_json::to_string_pretty(&titles).expect("json"), rng)
}

fn weights_for(slide_type: SlideType, emphasis: bool) -> ([f64; 4], [f64; 6]) {
    let mut text = if emphasis { TEXT_WEIGHTS_EMPHASIS } else { TEXT_WEIGHTS };
    let mut visual = if emphasis { VISUAL_WEIGHTS_EMPHASIS } else { VISUAL_WEIGHTS };
    let boost = |w: &mut f64, f: f64| *w *= f;
    match slide_type {
        SlideType::Introduction => {
            boost(&mut visual[3], 1.5);
            boost(&mut visual[5], 1.5);
        }
        SlideType::Definition => boost(&mut visual[0], 2.0),
        SlideType::Example => {
            boost(&mut visual[4], 2.0);
            boost(&mut visual[2], 1.5);
        }
        SlideType::Comparison => boost(&mut visual[1], 2.0),
        SlideType::Conclusion => boost(&mut text[1], 2.0),
        SlideType::References => {
            text = [0.1, 0.6, 0.3, 0.0];
        }
    }
    (text, visual)
}

fn caption_for(class: ElementClass, title: &str, rng: &mut SlideRng) -> String {
    let patterns: &[&str] = match class {
        ElementClass::Description => &["Overview of {t}", "Short explanation of {t}", "What to know about {t}"],
        ElementClass::Enumeration => &["Key points of {t}", "List of main aspects of {t}", "Steps involved in {t}"],
        ElementClass::Url => &["Further reading on {t}", "Reference link for {t}"],
        ElementClass::Heading => &["Key message of {t}", "Headline for {t}"],
        ElementClass::Equation => &["Mathematical formulation of {t}", "Equation describing {t}"],
        ElementClass::Table => &["Comparison of properties in {t}", "Summary table for {t}"],
        ElementClass::Chart => &["Trend of measurements for {t}", "Plot comparing results of {t}"],
        ElementClass::Diagram => &["Diagram illustrating {t}", "Block diagram of {t}", "Flow of steps in {t}"],
        ElementClass::Code => &["Pseudocode for {t}", "Code example of {t}"],
        ElementClass::Figure => &["Illustration of {t}", "Photo related to {t}"],
    };
    rng::pick(rng, patterns).replace("{t}", title)
}

fn elements(ctx: &ElementsContext, rng: &mut SlideRng) -> String {
    let emphasis = !ctx.emphasis.is_empty();
    let max = ctx.max_elements.clamp(1, 3);
    let mut map = serde_json::Map::new();
    for title in &ctx.titles {
        let slide_type = infer_slide_type(title);
        let (tw, vw) = weights_for(slide_type, emphasis);
        let n = (rng::weighted_index(rng, &ELEMENT_COUNT_WEIGHTS) + 1).min(max);
        let text_only = slide_type == SlideType::References;
        let mut classes = Vec::with_capacity(n);
        for i in 0..n {
            let want_text = if text_only {
                true
            } else if n == 1 || i == 2 {
                rng::chance(rng, 0.5)
            } else {
                i == 0
            };
            let class = if want_text {
                ElementClass::TEXT[rng::weighted_index(rng, &tw)]
            } else {
                ElementClass::VISUAL[rng::weighted_index(rng, &vw)]
            };
            classes.push(class);
        }
        let elements: Vec<Value> = classes
            .into_iter()
            .map(|c| json!({ "element_type": c.name(), "element_caption": caption_for(c, title, rng) }))
            .collect();
        map.insert(title.clone(), json!({ "slide_type": slide_type.name(), "elements": elements }));
    }
    dress(serde_json::to_string_pretty(&Value::Object(map)).expect("json"), rng)
}

fn content_words(text: &str) -> Vec<String> {
    text.split(|c: char| c.is_whitespace() || c == ':' || c == ',')
        .map(|w| w.trim_matches(|c: char| !c.is_alphanumeric()))
        .filter(|w| w.len() > 2 && !corpus::STOPWORDS.contains(&w.to_lowercase().as_str()))
        .map(str::to_string)
        .collect()
}

fn lower_first(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_lowercase().chain(c).collect(),
        None => String::new(),
    }
}

fn upper_first(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

fn description(req: &PlanRequest, topic: &str, rng: &mut SlideRng) -> String {
    let subject = lower_first(req.plan.caption.trim().trim_end_matches('.'));
    let fill = |p: &str| {
        p.replace("{C}", &upper_first(&subject))
            .replace("{c}", &subject)
            .replace("{t}", topic)
    };
    let n_middle = 1 + rng::index(rng, 2);
    let mut parts = vec![fill(rng::pick(rng, corpus::DESCRIPTION_OPENERS))];
    for _ in 0..n_middle {
        parts.push(fill(rng::pick(rng, corpus::DESCRIPTION_MIDDLES)));
    }
    parts.push(fill(rng::pick(rng, corpus::DESCRIPTION_CLOSERS)));
    parts.dedup();
    parts.join(" ")
}

fn bullets(req: &PlanRequest, topic: &str, rng: &mut SlideRng) -> Vec<String> {
    let n = 3 + rng::index(rng, 4);
    let words = content_words(&req.slide_title);
    let anchor = words.first().cloned().unwrap_or_else(|| topic.to_string());
    let mut pool: Vec<&str> = corpus::BULLET_PATTERNS.to_vec();
    (0..n)
        .map(|_| {
            let p = pool.remove(rng::index(rng, pool.len()));
            p.replace("{w}", &lower_first(&anchor)).replace("{t}", topic)
        })
        .collect()
}

fn slug(text: &str) -> String {
    let words: Vec<String> = content_words(text).iter().take(3).map(|w| w.to_lowercase()).collect();
    if words.is_empty() {
        "lecture-notes".into()
    } else {
        words.join("_")
    }
}

fn url(req: &PlanRequest, topic: &str, rng: &mut SlideRng) -> String {
    let host = rng::pick(rng, corpus::URL_HOSTS);
    let path = if host.contains("arxiv") {
        format!(
            "{}{:02}.{:05}",
            15 + rng::index(rng, 9),
            1 + rng::index(rng, 12),
            rng::index(rng, 99999)
        )
    } else if rng::chance(rng, 0.5) {
        slug(topic)
    } else {
        slug(&req.slide_title)
    };
    format!("{host}{path}")
}

fn heading(req: &PlanRequest, rng: &mut SlideRng) -> String {
    let head = rng::pick(rng, corpus::HEADING_PATTERNS);
    match content_words(&req.slide_title).first() {
        Some(w) => format!("{head}: {w}"),
        None => head.to_string(),
    }
}

fn text(ctx: &PayloadContext, rng: &mut SlideRng) -> String {
    let entries: Vec<Value> = ctx
        .requests
        .iter()
        .map(|req| match req.plan.class {
            ElementClass::Enumeration => json!(bullets(req, &ctx.topic, rng)),
            ElementClass::Url => json!(url(req, &ctx.topic, rng)),
            ElementClass::Heading => json!(heading(req, rng)),
            _ => json!(description(req, &ctx.topic, rng)),
        })
        .collect();
    dress(serde_json::to_string_pretty(&entries).expect("json"), rng)
}

fn equation(req: &PlanRequest, rng: &mut SlideRng) -> String {
    let probe = format!("{} {}", req.plan.caption, req.slide_title).to_lowercase();
    if probe.contains("linear regression") {
        return corpus::LINEAR_REGRESSION_EQUATION.to_string();
    }
    rng::pick(rng, corpus::EQUATIONS).to_string()
}

fn table(req: &PlanRequest, rng: &mut SlideRng) -> String {
    let cols = 2 + rng::index(rng, 3);
    let rows = 2 + rng::index(rng, 3);
    let mut pool: Vec<&str> = corpus::TABLE_COLUMNS.to_vec();
    let header: Vec<&str> = (0..cols).map(|_| pool.remove(rng::index(rng, pool.len()))).collect();
    let words = content_words(&req.slide_title);
    let mut lines = vec![
        format!("\\begin{{tabular}}{{|{}|}}", vec!["c"; cols].join("|")),
        "\\hline".to_string(),
        format!("{} \\\\", header.join(" & ")),
        "\\hline".to_string(),
    ];
    for r in 0..rows {
        let label = words.get(r).cloned().unwrap_or_else(|| format!("Case {}", r + 1));
        let mut cells = vec![label];
        for _ in 1..cols {
            let v: f64 = rng.gen_range(0.0..100.0);
            cells.push(format!("{v:.1}"));
        }
        lines.push(format!("{} \\\\", cells.join(" & ")));
    }
    lines.push("\\hline".to_string());
    lines.push("\\end{tabular}".to_string());
    lines.join("\n")
}

/// Chart-spec with 3 series over 5 categories.
pub fn chart_spec(rng: &mut SlideRng) -> ChartSpec {
    let categories: Vec<String> = rng::pick(rng, corpus::CHART_CATEGORIES).iter().map(|s| s.to_string()).collect();
    let kind = if rng::chance(rng, 0.5) { ChartKind::Bar } else { ChartKind::Line };
    let mut names: Vec<&str> = corpus::SERIES_NAMES.to_vec();
    let series = (0..3)
        .map(|_| {
            let name = names.remove(rng::index(rng, names.len())).to_string();
            let mut v: f64 = rng.gen_range(10.0..60.0);
            let values = (0..categories.len())
                .map(|_| {
                    v = (v + rng.gen_range(-8.0..12.0)).max(1.0);
                    (v * 10.0).round() / 10.0
                })
                .collect();
            ChartSeries { name, values }
        })
        .collect();
    ChartSpec {
        kind,
        x_label: "Setting".into(),
        y_label: "Value".into(),
        categories,
        series,
    }
}

fn structural(ctx: &PayloadContext, rng: &mut SlideRng) -> String {
    let mut out = String::from("Here are the snippets.\n\n");
    for req in &ctx.requests {
        let (lang, body) = match req.plan.class {
            ElementClass::Equation => ("latex", equation(req, rng)),
            ElementClass::Table => ("latex", table(req, rng)),
            ElementClass::Chart => ("json", serde_json::to_string(&chart_spec(rng)).expect("json")),
            _ => ("python", rng::pick(rng, corpus::CODE_SNIPPETS).to_string()),
        };
        out.push_str(&format!("```{lang}\n{body}\n```\n\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::content::parser::{parse_slide_plans, parse_string_list};
    use crate::content::plan::ElementPlan;
    use crate::deck::model::{Stage, StageConfig};

    fn request(step: &str, context: Value, seed: u64) -> ChatRequest {
        ChatRequest {
            config: StageConfig::default_for(Stage::Topic),
            messages: vec![],
            seed,
            step: step.into(),
            context,
        }
    }

    #[test]
    fn udl_topics_come_from_the_one_shot_list() {
        let ctx = json!({"subject": "CS", "book": "Understanding Deep Learning", "author": "S. Prince"});
        let raw = OfflineProvider.send(&request(STEP_TOPICS, ctx, 1)).unwrap();
        let topics = parse_string_list(&raw).unwrap();
        assert_eq!(topics.len(), corpus::UDL_TOPICS.len());
        assert!(topics.contains(&"Math for Deep Learning Basics".to_string()));
    }

    #[test]
    fn outlines_have_12_to_15_titles() {
        for seed in 0..50 {
            let ctx = json!({"topic": "Growth Theory in Macroeconomics", "book": "Macroeconomics", "max_slides": 15, "max_words": 5});
            let raw = OfflineProvider.send(&request(STEP_OUTLINE, ctx, seed)).unwrap();
            let n = parse_string_list(&raw).unwrap().len();
            assert!((12..=15).contains(&n), "{n}");
        }
    }

    #[test]
    fn element_plans_parse_and_respect_cap() {
        let titles: Vec<String> = corpus::TREE_OUTLINE.iter().map(|s| s.to_string()).collect();
        let ctx = json!({"topic": "Trees", "titles": titles, "max_elements": 3});
        for seed in 0..20 {
            let raw = OfflineProvider.send(&request(STEP_ELEMENTS, ctx.clone(), seed)).unwrap();
            let plans = parse_slide_plans(&raw).unwrap();
            assert_eq!(plans.len(), 17);
            for p in &plans {
                assert!((1..=3).contains(&p.elements.len()));
                assert!(p.slide_type.is_some());
            }
        }
    }

    #[test]
    fn structural_emits_one_fence_per_request() {
        let requests: Vec<PlanRequest> = [ElementClass::Equation, ElementClass::Table, ElementClass::Chart]
            .iter()
            .map(|c| PlanRequest {
                slide_index: 0,
                slide_title: "Linear Regression".into(),
                plan: ElementPlan::new(*c, "Representation of a linear regression model"),
            })
            .collect();
        let ctx = serde_json::to_value(PayloadContext {
            topic: "Stats".into(),
            subject: "Mathematics".into(),
            requests,
        })
        .unwrap();
        let raw = OfflineProvider.send(&request(STEP_STRUCTURAL, ctx, 3)).unwrap();
        let blocks = crate::content::parser::extract_fenced_blocks(&raw);
        assert_eq!(blocks.len(), 3);
        assert_eq!(blocks[0].body, corpus::LINEAR_REGRESSION_EQUATION);
        let spec: ChartSpec = serde_json::from_str(&blocks[2].body).unwrap();
        assert_eq!(spec.series.len(), 3);
        assert!(spec.series.iter().all(|s| s.values.len() == 5));
    }

    #[test]
    fn same_seed_same_reply() {
        let ctx = json!({"topic": "Graph Algorithms", "book": "x", "max_slides": 15, "max_words": 5});
        let a = OfflineProvider.send(&request(STEP_OUTLINE, ctx.clone(), 9)).unwrap();
        let b = OfflineProvider.send(&request(STEP_OUTLINE, ctx, 9)).unwrap();
        assert_eq!(a, b);
    }
}
