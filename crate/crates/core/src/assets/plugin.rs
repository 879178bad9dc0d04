//! Compiler plugins: the hermetic fallback and external commands.

use super::{chart, equation, graph, table};
use crate::deck::model::{ElementContent, ElementKind, Payload};
use crate::rng;
use image::{Rgba, RgbaImage};
use std::path::Path;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

/// Equation and diagram ink on transparent assets.
pub const ASSET_INK: Rgba<u8> = Rgba([25, 25, 35, 255]);
pub const EXTERNAL_TIMEOUT: Duration = Duration::from_secs(30);

#[derive(Debug, Clone, PartialEq)]
pub struct Compiled {
    pub image: RgbaImage,
    pub warnings: Vec<String>,
}

impl Compiled {
    fn clean(image: RgbaImage) -> Self {
        Self {
            image,
            warnings: Vec::new(),
        }
    }
}

pub trait CompilerPlugin: Send + Sync {
    fn name(&self) -> &str;
    fn accepts(&self, content: &ElementContent) -> bool;
    /// Runs something outside the process.
    fn is_external(&self) -> bool;
    fn compile(&self, content: &ElementContent, w: u32, h: u32, seed: u64) -> Result<Compiled, String>;
}

/// Pure native renderer; total on every compilable payload.
#[derive(Debug, Clone, Copy, Default)]
pub struct FallbackPlugin;

impl CompilerPlugin for FallbackPlugin {
    fn name(&self) -> &str {
        "fallback"
    }

    fn accepts(&self, content: &ElementContent) -> bool {
        content.payload.is_compilable()
    }

    fn is_external(&self) -> bool {
        false
    }

    fn compile(&self, content: &ElementContent, w: u32, h: u32, seed: u64) -> Result<Compiled, String> {
        Ok(match &content.payload {
            Payload::TypesetMarkup(src) if content.kind == ElementKind::Table => {
                let t = table::fallback_table_render(src, w, h);
                Compiled {
                    image: t.image,
                    warnings: t.warning.into_iter().collect(),
                }
            }
            Payload::TypesetMarkup(src) => Compiled::clean(equation::render_equation(src, w, h, ASSET_INK)),
            Payload::GraphMarkup(src) => match graph::render_dot(src, w, h) {
                Ok(img) => Compiled::clean(img),
                Err(e) => Compiled {
                    image: graph::stub_diagram(rng::stable_hash(src), w, h),
                    warnings: vec![format!("graph markup not drawable ({e}); stand-in diagram used")],
                },
            },
            Payload::ChartSpec(spec) if spec.is_well_formed() => Compiled::clean(chart::render_chart(spec, w, h, seed)),
            Payload::ChartSpec(_) => Compiled {
                image: chart::placeholder_chart(seed, w, h),
                warnings: vec!["malformed chart spec; placeholder chart drawn".into()],
            },
            Payload::PlotScript(src) => Compiled {
                image: chart::placeholder_chart(rng::stable_hash(src), w, h),
                warnings: vec!["plot script needs an external compiler; placeholder chart drawn".into()],
            },
            other => return Err(format!("payload '{}' is not compilable", other.variant_name())),
        })
    }
}

/// Canonical payload variant name for a config key such as `latex`.
pub fn payload_kind_key(key: &str) -> Option<&'static str> {
    Some(match key.trim().to_ascii_lowercase().as_str() {
        "typeset-markup" | "typeset_markup" | "latex" | "tex" => "typeset-markup",
        "graph-markup" | "graph_markup" | "dot" | "graphviz" => "graph-markup",
        "plot-script" | "plot_script" | "plot" | "python" => "plot-script",
        "chart-spec" | "chart_spec" | "chart" => "chart-spec",
        _ => return None,
    })
}

/// Runs an argv template with `{in}`, `{out}`, `{w}` and `{h}` replaced.
/// The source goes to `{in}`; a PNG is expected at `{out}`.
#[derive(Debug, Clone)]
pub struct ExternalCommandPlugin {
    pub name: String,
    /// Payload variant name it compiles.
    pub payload_kind: String,
    pub argv: Vec<String>,
    pub timeout: Duration,
}

impl ExternalCommandPlugin {
    pub fn new(payload_kind: &str, argv: Vec<String>) -> Result<Self, String> {
        let kind = payload_kind_key(payload_kind).ok_or_else(|| format!("unknown compiler kind '{payload_kind}'"))?;
        if argv.is_empty() {
            return Err(format!("empty command for compiler kind '{kind}'"));
        }
        Ok(Self {
            name: format!("external:{}", argv[0]),
            payload_kind: kind.to_string(),
            argv,
            timeout: EXTERNAL_TIMEOUT,
        })
    }

    /// Splits a command line on whitespace; quoting is not supported.
    pub fn from_command_line(payload_kind: &str, line: &str) -> Result<Self, String> {
        Self::new(payload_kind, line.split_whitespace().map(str::to_string).collect())
    }

    fn source_of(content: &ElementContent) -> Option<(String, &'static str)> {
        Some(match &content.payload {
            Payload::TypesetMarkup(s) => (s.clone(), "tex"),
            Payload::GraphMarkup(s) => (s.clone(), "dot"),
            Payload::PlotScript(s) => (s.clone(), "py"),
            Payload::ChartSpec(c) => (serde_json::to_string(c).ok()?, "json"),
            _ => return None,
        })
    }

    fn run(&self, dir: &Path, src: &str, ext: &str, w: u32, h: u32) -> Result<RgbaImage, String> {
        let input = dir.join(format!("in.{ext}"));
        let output = dir.join("out.png");
        std::fs::write(&input, src).map_err(|e| e.to_string())?;
        let fill = |a: &str| {
            a.replace("{in}", &input.to_string_lossy())
                .replace("{out}", &output.to_string_lossy())
                .replace("{w}", &w.to_string())
                .replace("{h}", &h.to_string())
        };
        let args: Vec<String> = self.argv.iter().map(|a| fill(a)).collect();
        let mut child = Command::new(&args[0])
            .args(&args[1..])
            .current_dir(dir)
            .stdin(Stdio::null())
            .stdout(Stdio::null())
            .stderr(Stdio::null())
            .spawn()
            .map_err(|e| format!("cannot start '{}': {e}", args[0]))?;
        let start = Instant::now();
        let status = loop {
            match child.try_wait().map_err(|e| e.to_string())? {
                Some(s) => break s,
                None if start.elapsed() >= self.timeout => {
                    let _ = child.kill();
                    let _ = child.wait();
                    return Err(format!("timed out after {:?}", self.timeout));
                }
                None => std::thread::sleep(Duration::from_millis(20)),
            }
        };
        if !status.success() {
            return Err(format!("exited with {status}"));
        }
        let img = image::open(&output).map_err(|e| format!("no readable output: {e}"))?;
        Ok(img.to_rgba8())
    }
}

impl CompilerPlugin for ExternalCommandPlugin {
    fn name(&self) -> &str {
        &self.name
    }

    fn accepts(&self, content: &ElementContent) -> bool {
        content.payload.variant_name() == self.payload_kind
    }

    fn is_external(&self) -> bool {
        true
    }

    fn compile(&self, content: &ElementContent, w: u32, h: u32, _seed: u64) -> Result<Compiled, String> {
        let (src, ext) = Self::source_of(content).ok_or("payload has no source")?;
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        self.run(dir.path(), &src, ext, w, h).map(Compiled::clean)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deck::model::{ChartKind, ChartSeries, ChartSpec};

    fn content(kind: ElementKind, payload: Payload) -> ElementContent {
        ElementContent {
            kind,
            caption: "c".into(),
            payload,
        }
    }

    #[test]
    fn fallback_is_total_on_compilable_payloads() {
        let cases = [
            content(ElementKind::Equation, Payload::TypesetMarkup("y = mx + b".into())),
            content(ElementKind::Table, Payload::TypesetMarkup("".into())),
            content(ElementKind::Diagram, Payload::GraphMarkup("nonsense".into())),
            content(ElementKind::Chart, Payload::PlotScript("plt.plot()".into())),
            content(
                ElementKind::Chart,
                Payload::ChartSpec(ChartSpec {
                    kind: ChartKind::Line,
                    x_label: String::new(),
                    y_label: String::new(),
                    categories: vec!["a".into()],
                    series: vec![ChartSeries {
                        name: "s".into(),
                        values: vec![],
                    }],
                }),
            ),
        ];
        for c in &cases {
            assert!(FallbackPlugin.accepts(c));
            let out = FallbackPlugin.compile(c, 200, 120, 1).unwrap();
            assert_eq!(out.image.dimensions(), (200, 120));
        }
        assert!(!FallbackPlugin.accepts(&content(ElementKind::Description, Payload::PlainText("x".into()))));
    }

    #[test]
    fn kind_keys() {
        assert_eq!(payload_kind_key("latex"), Some("typeset-markup"));
        assert_eq!(payload_kind_key("DOT"), Some("graph-markup"));
        assert_eq!(payload_kind_key("banana"), None);
        assert!(ExternalCommandPlugin::new("chart", vec![]).is_err());
    }

    #[test]
    fn missing_program_is_an_error_not_a_panic() {
        let p = ExternalCommandPlugin::from_command_line("latex", "/nonexistent/slideforge-compiler {in} {out}").unwrap();
        let c = content(ElementKind::Equation, Payload::TypesetMarkup("x".into()));
        assert!(p.accepts(&c));
        assert!(p.compile(&c, 10, 10, 0).unwrap_err().contains("cannot start"));
    }
}
