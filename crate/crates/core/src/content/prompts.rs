//! Prompt templates, one text file per pipeline step.
//!
//! A template is split into `[system]` and `[user]` sections; `{name}`
//! placeholders are filled from a key/value list and unknown braces are
//! left alone so JSON examples survive.

use super::transport::ChatMessage;
use std::collections::BTreeMap;
use std::path::Path;

pub const STEPS: [&str; 6] = ["topic", "outline", "instruction", "text", "structural", "summary"];

#[derive(Debug, Clone, PartialEq)]
pub struct PromptSet {
    templates: BTreeMap<String, String>,
}

impl Default for PromptSet {
    fn default() -> Self {
        Self::bundled()
    }
}

impl PromptSet {
    pub fn bundled() -> Self {
        let pairs = [
            ("topic", include_str!("../../prompts/topic.txt")),
            ("outline", include_str!("../../prompts/outline.txt")),
            ("instruction", include_str!("../../prompts/instruction.txt")),
            ("text", include_str!("../../prompts/text.txt")),
            ("structural", include_str!("../../prompts/structural.txt")),
            ("summary", include_str!("../../prompts/summary.txt")),
        ];
        Self {
            templates: pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
        }
    }

    /// Bundled templates, replaced by any `<step>.txt` found in `dir`.
    pub fn with_overrides(dir: &Path) -> std::io::Result<Self> {
        let mut set = Self::bundled();
        for step in STEPS {
            let path = dir.join(format!("{step}.txt"));
            if path.is_file() {
                set.templates.insert(step.to_string(), std::fs::read_to_string(path)?);
            }
        }
        Ok(set)
    }

    pub fn template(&self, step: &str) -> Option<&str> {
        self.templates.get(step).map(String::as_str)
    }

    pub fn render(&self, step: &str, vars: &[(&str, String)]) -> Vec<ChatMessage> {
        let template = self.template(step).unwrap_or("[user]\n{input}");
        split_sections(&fill(template, vars))
    }
}

pub fn fill(template: &str, vars: &[(&str, String)]) -> String {
    let mut out = String::with_capacity(template.len());
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let tail = &rest[open + 1..];
        let close = tail.find('}');
        let name = close.map(|c| &tail[..c]);
        match name.and_then(|n| vars.iter().find(|(k, _)| *k == n)) {
            Some((k, v)) => {
                out.push_str(v);
                rest = &tail[k.len() + 1..];
            }
            None => {
                out.push('{');
                rest = tail;
            }
        }
    }
    out.push_str(rest);
    out
}

fn split_sections(text: &str) -> Vec<ChatMessage> {
    let mut messages = Vec::new();
    let mut role: Option<&str> = None;
    let mut buf = String::new();
    let flush = |role: Option<&str>, buf: &mut String, messages: &mut Vec<ChatMessage>| {
        let body = buf.trim();
        if !body.is_empty() {
            messages.push(ChatMessage {
                role: role.unwrap_or("user").to_string(),
                content: body.to_string(),
            });
        }
        buf.clear();
    };
    for line in text.lines() {
        let marker = match line.trim() {
            "[system]" => Some("system"),
            "[user]" => Some("user"),
            _ => None,
        };
        if let Some(r) = marker {
            flush(role, &mut buf, &mut messages);
            role = Some(r);
        } else {
            buf.push_str(line);
            buf.push('\n');
        }
    }
    flush(role, &mut buf, &mut messages);
    messages
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fill_keeps_unknown_braces() {
        let s = fill("{a} and {\"k\": 1} and {b}", &[("a", "x".into())]);
        assert_eq!(s, "x and {\"k\": 1} and {b}");
    }

    #[test]
    fn bundled_topic_prompt_has_system_and_user() {
        let msgs = PromptSet::bundled().render("topic", &[("subject", "CS".into()), ("book", "B".into()), ("author", "A".into())]);
        assert_eq!(msgs.len(), 2);
        assert_eq!(msgs[0].role, "system");
        assert!(msgs[1].content.contains("\"B\" by A"));
    }

    #[test]
    fn override_dir_replaces_one_step() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("outline.txt"), "[user]\nOutline {topic}").unwrap();
        let set = PromptSet::with_overrides(dir.path()).unwrap();
        let msgs = set.render("outline", &[("topic", "Trees".into())]);
        assert_eq!(msgs[0].content, "Outline Trees");
        assert_eq!(set.template("topic"), PromptSet::bundled().template("topic"));
    }
}
