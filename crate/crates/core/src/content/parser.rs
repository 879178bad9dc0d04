//! Tolerant parser for LLM payloads.
//!
//! Models answer with Python- or JSON-flavoured literals, often wrapped in
//! code fences or a sentence of prose. This module strips that wrapping,
//! parses list/dict literals (either quote style, trailing commas, Python
//! `True`/`False`/`None`) and checks the result against an expected shape.
//! It never panics: any input yields a value or a [`ParseError`].

use crate::error::ParseError;

const MAX_DEPTH: usize = 64;

/// Parsed literal. Dict entries keep their source order.
#[derive(Debug, Clone, PartialEq)]
pub enum Literal {
    Str(String),
    Num(f64),
    Bool(bool),
    Null,
    List(Vec<Literal>),
    Dict(Vec<(String, Literal)>),
}

impl Literal {
    pub fn as_str(&self) -> Option<&str> {
        match self {
            Literal::Str(s) => Some(s),
            _ => None,
        }
    }

    pub fn get(&self, key: &str) -> Option<&Literal> {
        match self {
            Literal::Dict(entries) => entries.iter().find(|(k, _)| k == key).map(|(_, v)| v),
            _ => None,
        }
    }
}

/// A fenced code block: ```` ```lang\nbody\n``` ````.
#[derive(Debug, Clone, PartialEq)]
pub struct FencedBlock {
    pub lang: String,
    pub body: String,
}

/// What the caller expects the payload to contain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpectedShape {
    /// A list of strings, or a dict whose single value is such a list.
    StringList,
    /// Exactly one fenced block; its body is returned.
    FencedMarkup,
    /// Zero or more fenced blocks.
    FencedBlocks,
    /// Slide title -> element list (or `{slide_type, elements}`).
    SlidePlans,
    /// List whose items are strings or lists of strings.
    TextItems,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawElementPlan {
    pub element_type: String,
    pub caption: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawSlidePlan {
    pub title: String,
    pub slide_type: Option<String>,
    pub elements: Vec<RawElementPlan>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TextItem {
    Text(String),
    Items(Vec<String>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParsedPayload {
    Strings(Vec<String>),
    Markup(String),
    Blocks(Vec<FencedBlock>),
    SlidePlans(Vec<RawSlidePlan>),
    TextItems(Vec<TextItem>),
}

pub fn parse_llm_payload(raw: &str, expected: ExpectedShape) -> Result<ParsedPayload, ParseError> {
    match expected {
        ExpectedShape::StringList => parse_string_list(raw).map(ParsedPayload::Strings),
        ExpectedShape::FencedMarkup => {
            let blocks = extract_fenced_blocks(raw);
            match blocks.len() {
                1 => Ok(ParsedPayload::Markup(blocks[0].body.clone())),
                0 => Err(ParseError::new("no fenced block found", raw)),
                n => Err(ParseError::new(format!("expected one fenced block, found {n}"), raw)),
            }
        }
        ExpectedShape::FencedBlocks => Ok(ParsedPayload::Blocks(extract_fenced_blocks(raw))),
        ExpectedShape::SlidePlans => parse_slide_plans(raw).map(ParsedPayload::SlidePlans),
        ExpectedShape::TextItems => parse_text_items(raw).map(ParsedPayload::TextItems),
    }
}

pub fn parse_string_list(raw: &str) -> Result<Vec<String>, ParseError> {
    let lit = find_literal(raw, |l| string_list(l).is_some())?;
    Ok(string_list(&lit).expect("checked by predicate"))
}

fn string_list(lit: &Literal) -> Option<Vec<String>> {
    match lit {
        Literal::List(items) => items.iter().map(|i| i.as_str().map(str::to_string)).collect(),
        Literal::Dict(entries) if entries.len() == 1 => string_list(&entries[0].1),
        _ => None,
    }
}

pub fn parse_text_items(raw: &str) -> Result<Vec<TextItem>, ParseError> {
    let lit = find_literal(raw, |l| text_items(l).is_some())?;
    Ok(text_items(&lit).expect("checked by predicate"))
}

fn text_items(lit: &Literal) -> Option<Vec<TextItem>> {
    let Literal::List(items) = lit else { return None };
    items
        .iter()
        .map(|i| match i {
            Literal::Str(s) => Some(TextItem::Text(s.clone())),
            Literal::List(_) => string_list(i).map(TextItem::Items),
            _ => None,
        })
        .collect()
}

pub fn parse_slide_plans(raw: &str) -> Result<Vec<RawSlidePlan>, ParseError> {
    let lit = find_literal(raw, |l| slide_plans(l).is_some())?;
    Ok(slide_plans(&lit).expect("checked by predicate"))
}

fn element_plans(lit: &Literal) -> Option<Vec<RawElementPlan>> {
    let Literal::List(items) = lit else { return None };
    items
        .iter()
        .map(|i| {
            let t = i.get("element_type").or_else(|| i.get("element"))?.as_str()?;
            let c = i
                .get("element_caption")
                .or_else(|| i.get("caption"))
                .and_then(Literal::as_str)
                .unwrap_or("");
            Some(RawElementPlan {
                element_type: t.to_string(),
                caption: c.to_string(),
            })
        })
        .collect()
}

fn slide_plans(lit: &Literal) -> Option<Vec<RawSlidePlan>> {
    match lit {
        Literal::Dict(entries) => entries
            .iter()
            .map(|(title, v)| {
                let (slide_type, elements) = match v {
                    Literal::List(_) => (None, element_plans(v)?),
                    Literal::Dict(_) => (
                        v.get("slide_type").and_then(Literal::as_str).map(str::to_string),
                        element_plans(v.get("elements")?)?,
                    ),
                    _ => return None,
                };
                Some(RawSlidePlan {
                    title: title.clone(),
                    slide_type,
                    elements,
                })
            })
            .collect(),
        Literal::List(items) => items
            .iter()
            .map(|i| {
                Some(RawSlidePlan {
                    title: i.get("title")?.as_str()?.to_string(),
                    slide_type: i.get("slide_type").and_then(Literal::as_str).map(str::to_string),
                    elements: element_plans(i.get("elements")?)?,
                })
            })
            .collect(),
        _ => None,
    }
}

/// All fenced blocks in order. An unterminated final fence runs to the end
/// of the text.
pub fn extract_fenced_blocks(raw: &str) -> Vec<FencedBlock> {
    let mut blocks = Vec::new();
    let mut rest = raw;
    while let Some(start) = rest.find("```") {
        let after = &rest[start + 3..];
        let (header, body_start) = match after.find('\n') {
            Some(nl) => (&after[..nl], nl + 1),
            None => (after, after.len()),
        };
        // ```latex y = mx``` on a single line: header holds everything.
        if let Some(close) = header.find("```") {
            let inline = header[..close].trim();
            let (lang, body) = split_inline_lang(inline);
            blocks.push(FencedBlock {
                lang,
                body: body.to_string(),
            });
            rest = &header[close + 3..];
            continue;
        }
        let lang = header.trim().to_string();
        let body_all = &after[body_start..];
        match body_all.find("```") {
            Some(end) => {
                blocks.push(FencedBlock {
                    lang,
                    body: body_all[..end].trim_end_matches(['\n', '\r']).to_string(),
                });
                rest = &body_all[end + 3..];
            }
            None => {
                blocks.push(FencedBlock {
                    lang,
                    body: body_all.trim_end().to_string(),
                });
                break;
            }
        }
    }
    blocks
}

fn split_inline_lang(inline: &str) -> (String, &str) {
    for lang in ["latex", "json", "python", "dot", "tex"] {
        if let Some(rest) = inline.strip_prefix(lang) {
            if rest.starts_with(char::is_whitespace) || rest.is_empty() {
                return (lang.to_string(), rest.trim());
            }
        }
    }
    (String::new(), inline)
}

/// Finds the first list/dict literal satisfying `accept`, looking inside
/// fenced blocks first and then in the whole text.
fn find_literal(raw: &str, accept: impl Fn(&Literal) -> bool) -> Result<Literal, ParseError> {
    let mut sources: Vec<String> = extract_fenced_blocks(raw).into_iter().map(|b| b.body).collect();
    sources.push(raw.to_string());
    let mut saw_literal = false;
    for src in &sources {
        let chars: Vec<char> = src.chars().collect();
        for (i, c) in chars.iter().enumerate() {
            if *c != '[' && *c != '{' {
                continue;
            }
            let mut p = LiteralParser { s: &chars, pos: i };
            if let Ok(lit) = p.value(0) {
                saw_literal = true;
                if accept(&lit) {
                    return Ok(lit);
                }
            }
        }
    }
    let msg = if saw_literal {
        "literal found but it does not have the expected shape"
    } else {
        "no parsable list or dict literal"
    };
    Err(ParseError::new(msg, raw))
}

/// Parses a single literal from the start of `text`.
pub fn parse_literal(text: &str) -> Result<Literal, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut p = LiteralParser { s: &chars, pos: 0 };
    let v = p.value(0).map_err(|m| ParseError::new(m, text))?;
    p.skip_ws();
    if p.pos != chars.len() {
        return Err(ParseError::new("trailing characters after literal", text));
    }
    Ok(v)
}

struct LiteralParser<'a> {
    s: &'a [char],
    pos: usize,
}

impl LiteralParser<'_> {
    fn peek(&self) -> Option<char> {
        self.s.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += 1;
            } else if c == '#' {
                // Python comment to end of line.
                while let Some(c) = self.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.pos += 1;
                }
            } else {
                break;
            }
        }
    }

    /// Skips a bare `...` placeholder entry and its trailing comma.
    fn skip_ellipsis(&mut self) -> bool {
        let dots = if self.s[self.pos..].starts_with(&['.', '.', '.']) {
            3
        } else if self.peek() == Some('\u{2026}') {
            1
        } else {
            return false;
        };
        self.pos += dots;
        self.skip_ws();
        if self.peek() == Some(',') {
            self.pos += 1;
        }
        true
    }

    fn value(&mut self, depth: usize) -> Result<Literal, String> {
        if depth > MAX_DEPTH {
            return Err("literal nested too deeply".into());
        }
        self.skip_ws();
        match self.peek() {
            Some('[') | Some('(') => self.list(depth),
            Some('{') => self.dict(depth),
            Some('"') | Some('\'') => self.string().map(Literal::Str),
            Some(c) if c == '-' || c == '+' || c == '.' || c.is_ascii_digit() => self.number(),
            Some(c) if c.is_alphabetic() => self.word(),
            Some(c) => Err(format!("unexpected character '{c}'")),
            None => Err("unexpected end of input".into()),
        }
    }

    fn list(&mut self, depth: usize) -> Result<Literal, String> {
        let close = if self.peek() == Some('(') { ')' } else { ']' };
        self.pos += 1;
        let mut items = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(c) if c == close => {
                    self.pos += 1;
                    return Ok(Literal::List(items));
                }
                None => return Err("unterminated list".into()),
                _ => {}
            }
            if self.skip_ellipsis() {
                continue;
            }
            items.push(self.value(depth + 1)?);
            self.skip_ws();
            match self.peek() {
                Some(',') => self.pos += 1,
                Some(c) if c == close => {}
                _ => return Err("expected ',' in list".into()),
            }
        }
    }

    fn dict(&mut self, depth: usize) -> Result<Literal, String> {
        self.pos += 1;
        let mut entries = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some('}') => {
                    self.pos += 1;
                    return Ok(Literal::Dict(entries));
                }
                // `{{ ... }}` as written in templated prompts.
                Some('{') if entries.is_empty() => {
                    let inner = self.dict(depth + 1)?;
                    self.skip_ws();
                    if self.peek() == Some('}') {
                        self.pos += 1;
                        return Ok(inner);
                    }
                    return Err("expected '}' after nested dict".into());
                }
                None => return Err("unterminated dict".into()),
                _ => {}
            }
            if self.skip_ellipsis() {
                continue;
            }
            let key = match self.value(depth + 1)? {
                Literal::Str(s) => s,
                Literal::Num(n) => format!("{n}"),
                _ => return Err("dict key must be a string".into()),
            };
            self.skip_ws();
            if self.peek() != Some(':') {
                return Err("expected ':' in dict".into());
            }
            self.pos += 1;
            let v = self.value(depth + 1)?;
            entries.push((key, v));
            self.skip_ws();
            match self.peek() {
                Some(',') => self.pos += 1,
                Some('}') => {}
                _ => return Err("expected ',' in dict".into()),
            }
        }
    }

    fn string(&mut self) -> Result<String, String> {
        let quote = self.peek().ok_or("expected string")?;
        self.pos += 1;
        let mut out = String::new();
        while let Some(c) = self.peek() {
            self.pos += 1;
            if c == quote {
                return Ok(out);
            }
            if c == '\\' {
                let e = self.peek().ok_or("unterminated escape")?;
                self.pos += 1;
                match e {
                    'n' => out.push('\n'),
                    't' => out.push('\t'),
                    'r' => out.push('\r'),
                    '"' | '\'' | '\\' | '/' => out.push(e),
                    'u' => {
                        let hex: String = self.s.iter().skip(self.pos).take(4).collect();
                        let code = u32::from_str_radix(&hex, 16).map_err(|_| "bad \\u escape")?;
                        self.pos += 4;
                        out.push(char::from_u32(code).unwrap_or('\u{FFFD}'));
                    }
                    // Keep unknown escapes verbatim; LaTeX inside strings relies on it.
                    other => {
                        out.push('\\');
                        out.push(other);
                    }
                }
            } else {
                out.push(c);
            }
        }
        Err("unterminated string".into())
    }

    fn number(&mut self) -> Result<Literal, String> {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() || matches!(c, '-' | '+' | '.' | 'e' | 'E') {
                self.pos += 1;
            } else {
                break;
            }
        }
        let text: String = self.s[start..self.pos].iter().collect();
        text.parse::<f64>().map(Literal::Num).map_err(|_| format!("bad number '{text}'"))
    }

    fn word(&mut self) -> Result<Literal, String> {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || c == '_' {
                self.pos += 1;
            } else {
                break;
            }
        }
        let w: String = self.s[start..self.pos].iter().collect();
        match w.as_str() {
            "true" | "True" => Ok(Literal::Bool(true)),
            "false" | "False" => Ok(Literal::Bool(false)),
            "null" | "None" => Ok(Literal::Null),
            _ => Err(format!("unexpected word '{w}'")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn fenced_latex() {
        let out = parse_llm_payload("```latex\ny = mx + b\n```", ExpectedShape::FencedMarkup).unwrap();
        assert_eq!(out, ParsedPayload::Markup("y = mx + b".into()));
    }

    #[test]
    fn list_after_prose() {
        let out = parse_llm_payload("Here you go: [\"A\", \"B\"]", ExpectedShape::StringList).unwrap();
        assert_eq!(out, ParsedPayload::Strings(vec!["A".into(), "B".into()]));
    }

    #[test]
    fn no_list_is_an_error() {
        let err = parse_llm_payload("no list here", ExpectedShape::StringList).unwrap_err();
        assert_eq!(err.raw, "no list here");
    }

    #[test]
    fn python_style_literals() {
        let raw = "```python\n['a', \"b\", 'it\\'s',]\n```";
        assert_eq!(parse_string_list(raw).unwrap(), vec!["a", "b", "it's"]);
        let lit = parse_literal("{'x': True, 'y': None, 'z': (1, 2.5,)}").unwrap();
        assert_eq!(lit.get("x"), Some(&Literal::Bool(true)));
        assert_eq!(lit.get("z"), Some(&Literal::List(vec![Literal::Num(1.0), Literal::Num(2.5)])));
    }

    #[test]
    fn subject_dict_of_topics() {
        let raw = "{{\n \"CS\": [\n \"Math for Deep Learning Basics\",\n \"Activation Functions\"\n ]\n}}";
        assert_eq!(
            parse_string_list(raw).unwrap(),
            vec!["Math for Deep Learning Basics", "Activation Functions"]
        );
    }

    #[test]
    fn slide_plans_in_both_forms() {
        let raw = r#"{
            "The Normal Distribution: Definition": [
                {"element_type": "description", "element_caption": "Formal definition"},
                {"element_type": "equation", "element_caption": "Equation"},
            ],
            "References": {"slide_type": "References", "elements": [{"element_type": "enumeration", "element_caption": "Books"}]}
        }"#;
        let plans = parse_slide_plans(raw).unwrap();
        assert_eq!(plans.len(), 2);
        assert_eq!(plans[0].elements[1].element_type, "equation");
        assert_eq!(plans[1].slide_type.as_deref(), Some("References"));
    }

    #[test]
    fn multiple_fences_and_inline_fence() {
        let raw = "a\n```latex\nx\n```\nthen\n```json\n{\"k\": 1}\n```\n```latex y = 2```";
        let blocks = extract_fenced_blocks(raw);
        assert_eq!(blocks.len(), 3);
        assert_eq!(blocks[0].lang, "latex");
        assert_eq!(blocks[1].body, "{\"k\": 1}");
        assert_eq!(blocks[2].body, "y = 2");
    }

    #[test]
    fn text_items_mix_strings_and_lists() {
        let raw = "[\"A paragraph.\", [\"one\", \"two\"]]";
        assert_eq!(
            parse_text_items(raw).unwrap(),
            vec![
                TextItem::Text("A paragraph.".into()),
                TextItem::Items(vec!["one".into(), "two".into()])
            ]
        );
    }

    #[test]
    fn deep_nesting_is_rejected_not_overflowed() {
        let raw = "[".repeat(100_000);
        assert!(parse_string_list(&raw).is_err());
    }

    proptest! {
        #[test]
        fn parser_is_total(bytes in proptest::collection::vec(any::<u8>(), 0..512)) {
            let s = String::from_utf8_lossy(&bytes);
            for shape in [
                ExpectedShape::StringList,
                ExpectedShape::FencedMarkup,
                ExpectedShape::FencedBlocks,
                ExpectedShape::SlidePlans,
                ExpectedShape::TextItems,
            ] {
                let _ = parse_llm_payload(&s, shape);
            }
        }

        #[test]
        fn parser_is_total_on_literal_alphabet(s in "[\\[\\]{}(),:'\"a-c0-9 \\\\`\n]{0,200}") {
            let _ = parse_llm_payload(&s, ExpectedShape::SlidePlans);
            let _ = parse_llm_payload(&s, ExpectedShape::StringList);
        }

        #[test]
        fn string_lists_round_trip_through_json(items in proptest::collection::vec("[ -~]{0,20}", 0..8)) {
            let raw = format!("Sure! {}", serde_json::to_string(&items).unwrap());
            prop_assert_eq!(parse_string_list(&raw).unwrap(), items);
        }
    }
}
