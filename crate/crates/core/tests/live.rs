//! Live transports against a local mock server. Kept in its own test
//! binary: the other suites install a process-wide network guard.

use image::{Rgba, RgbaImage};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use slideforge::assets::AssetStore;
use slideforge::content::live::{LiveSearchClient, LiveTransport};
use slideforge::content::search::{retrieve_image, ImageKind};
use slideforge::content::stages::{generate_topics, ContentCtx};
use slideforge::content::transport::{ChatMessage, ChatRequest};
use slideforge::content::{BookSeed, ImageSearchClient, LlmTransport, PromptSet, RetryPolicy, StubSearchClient};
use slideforge::deck::{Stage, StageConfig};
use slideforge::error::TransportError;
use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpListener;
use std::sync::{Arc, Mutex};
use std::time::Duration;

#[derive(Debug, Clone)]
struct Seen {
    method: String,
    path: String,
    headers: Vec<(String, String)>,
    body: String,
}

impl Seen {
    fn header(&self, name: &str) -> Option<&str> {
        self.headers
            .iter()
            .find(|(k, _)| k.eq_ignore_ascii_case(name))
            .map(|(_, v)| v.as_str())
    }
}

type Reply = (u16, &'static str, Vec<u8>);

/// Serves `handler(n, request)` for the n-th request until the test ends.
struct Mock {
    base: String,
    seen: Arc<Mutex<Vec<Seen>>>,
}

impl Mock {
    fn start(handler: impl Fn(usize, &Seen, &str) -> Reply + Send + 'static) -> Self {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let base = format!("http://{}", listener.local_addr().unwrap());
        let seen = Arc::new(Mutex::new(Vec::new()));
        let log = seen.clone();
        let base_for_handler = base.clone();
        std::thread::spawn(move || {
            for stream in listener.incoming() {
                let Ok(mut stream) = stream else { break };
                let mut reader = BufReader::new(stream.try_clone().unwrap());
                let mut line = String::new();
                if reader.read_line(&mut line).unwrap_or(0) == 0 {
                    continue;
                }
                let mut parts = line.split_whitespace();
                let method = parts.next().unwrap_or("").to_string();
                let path = parts.next().unwrap_or("").to_string();
                let mut headers = Vec::new();
                loop {
                    let mut h = String::new();
                    reader.read_line(&mut h).unwrap();
                    let h = h.trim_end();
                    if h.is_empty() {
                        break;
                    }
                    if let Some((k, v)) = h.split_once(':') {
                        headers.push((k.trim().to_string(), v.trim().to_string()));
                    }
                }
                let len = headers
                    .iter()
                    .find(|(k, _)| k.eq_ignore_ascii_case("content-length"))
                    .and_then(|(_, v)| v.parse::<usize>().ok())
                    .unwrap_or(0);
                let mut body = vec![0; len];
                reader.read_exact(&mut body).unwrap();
                let req = Seen {
                    method,
                    path,
                    headers,
                    body: String::from_utf8_lossy(&body).into_owned(),
                };
                let n = {
                    let mut log = log.lock().unwrap();
                    log.push(req.clone());
                    log.len() - 1
                };
                let (status, ctype, payload) = handler(n, &req, &base_for_handler);
                let head = format!(
                    "HTTP/1.1 {status} X\r\nContent-Type: {ctype}\r\nContent-Length: {}\r\nConnection: close\r\n\r\n",
                    payload.len()
                );
                let _ = stream.write_all(head.as_bytes());
                let _ = stream.write_all(&payload);
            }
        });
        Self { base, seen }
    }

    fn seen(&self) -> Vec<Seen> {
        self.seen.lock().unwrap().clone()
    }
}

fn completion(content: &str) -> Reply {
    let body = json!({"choices": [{"index": 0, "message": {"role": "assistant", "content": content}}]});
    (200, "application/json", body.to_string().into_bytes())
}

fn request(stage: Stage) -> ChatRequest {
    ChatRequest {
        config: StageConfig::default_for(stage),
        messages: vec![ChatMessage {
            role: "user".into(),
            content: "List topics.".into(),
        }],
        seed: 42,
        step: "topics".into(),
        context: Value::Null,
    }
}

fn fast_retry() -> RetryPolicy {
    RetryPolicy {
        max_attempts: 3,
        base_delay: Duration::from_millis(1),
        factor: 2.0,
    }
}

#[test]
fn chat_request_carries_stage_hyperparameters_and_key() {
    let mock = Mock::start(|_, _, _| completion("[\"Sorting\"]"));
    let t = LiveTransport::new(format!("{}/v1/", mock.base), Some("sk-test".into()));
    let reply = t.send(&request(Stage::Outline)).unwrap();
    assert_eq!(reply, "[\"Sorting\"]");
    let seen = mock.seen();
    assert_eq!(seen.len(), 1);
    assert_eq!((seen[0].method.as_str(), seen[0].path.as_str()), ("POST", "/v1/chat/completions"));
    assert_eq!(seen[0].header("authorization"), Some("Bearer sk-test"));
    let body: Value = serde_json::from_str(&seen[0].body).unwrap();
    let d = StageConfig::default_for(Stage::Outline);
    assert_eq!(body["model"], json!(d.model));
    assert_eq!(body["temperature"], json!(d.temperature));
    assert_eq!(body["top_p"], json!(d.top_p));
    assert_eq!(body["max_tokens"], json!(d.max_tokens));
    assert_eq!(body["seed"], 42);
    assert_eq!(body["messages"][0]["content"], "List topics.");
}

#[test]
fn status_codes_map_to_retryable_or_fatal() {
    let mock = Mock::start(|n, _, _| match n {
        0 => (503, "text/plain", b"busy".to_vec()),
        1 => (429, "text/plain", b"slow down".to_vec()),
        2 => (401, "text/plain", b"bad key".to_vec()),
        _ => (200, "application/json", b"{\"choices\": []}".to_vec()),
    });
    let t = LiveTransport::new(mock.base.clone(), None);
    let r = request(Stage::Topic);
    assert!(matches!(t.send(&r), Err(TransportError::Retryable(m)) if m.contains("503")));
    assert!(matches!(t.send(&r), Err(TransportError::Retryable(_))));
    assert!(matches!(t.send(&r), Err(TransportError::Fatal(m)) if m.contains("401")));
    assert!(matches!(t.send(&r), Err(TransportError::Retryable(_))));
    assert!(mock.seen()[0].header("authorization").is_none());
}

#[test]
fn topic_stage_retries_a_transient_failure() {
    let mock = Mock::start(|n, _, _| {
        if n == 0 {
            (500, "text/plain", b"oops".to_vec())
        } else {
            completion("Here you go:\n[\"Binary Search\", \"Hash Tables\", \"Graph Traversal\"]")
        }
    });
    let transport = LiveTransport::new(mock.base.clone(), None);
    let prompts = PromptSet::bundled();
    let mut ctx = ContentCtx::new(&transport, &StubSearchClient, &prompts);
    ctx.retry = fast_retry();
    let book = BookSeed::new("Computer Science", "Algorithms Illuminated", "A. Author");
    let topics = generate_topics(
        &book,
        &mut ctx,
        &StageConfig::default_for(Stage::Topic),
        &mut ChaCha8Rng::seed_from_u64(1),
    )
    .unwrap();
    assert_eq!(topics, ["Binary Search", "Hash Tables", "Graph Traversal"]);
    assert_eq!(mock.seen().len(), 2);
    assert!(mock.seen()[1].body.contains("Algorithms Illuminated"));
}

#[test]
fn persistent_failure_stops_at_the_retry_bound() {
    let mock = Mock::start(|_, _, _| completion("I cannot help with that."));
    let transport = LiveTransport::new(mock.base.clone(), None);
    let prompts = PromptSet::bundled();
    let mut ctx = ContentCtx::new(&transport, &StubSearchClient, &prompts);
    ctx.retry = fast_retry();
    let book = BookSeed::new("Physics", "Mechanics", "B. Author");
    let err = generate_topics(
        &book,
        &mut ctx,
        &StageConfig::default_for(Stage::Topic),
        &mut ChaCha8Rng::seed_from_u64(1),
    )
    .unwrap_err();
    assert_eq!(err.stage, Stage::Topic);
    assert_eq!(err.attempts, 3);
    assert_eq!(mock.seen().len(), 3);
}

fn png(color: [u8; 4]) -> Vec<u8> {
    let img = RgbaImage::from_pixel(40, 30, Rgba(color));
    let mut out = Vec::new();
    img.write_to(&mut std::io::Cursor::new(&mut out), image::ImageFormat::Png).unwrap();
    out
}

#[test]
fn image_search_fetches_the_first_usable_candidate() {
    let mock = Mock::start(|_, req, base| {
        if req.path.starts_with("/search") {
            let body = json!({"value": [
                {"contentUrl": format!("{base}/broken.png")},
                {"contentUrl": format!("{base}/good.png")},
            ]});
            (200, "application/json", body.to_string().into_bytes())
        } else if req.path == "/good.png" {
            (200, "image/png", png([10, 200, 30, 255]))
        } else {
            (404, "text/plain", b"gone".to_vec())
        }
    });
    let client = LiveSearchClient::new(format!("{}/search", mock.base), Some("search-key".into()));
    let hits = client.search("binary tree", ImageKind::Diagram, 2).unwrap();
    assert_eq!(hits.len(), 2);
    let q = &mock.seen()[0];
    assert!(
        q.path.contains("q=binary+tree+diagram") || q.path.contains("q=binary%20tree%20diagram"),
        "{}",
        q.path
    );
    assert_eq!(q.header("ocp-apim-subscription-key"), Some("search-key"));

    let mut store = AssetStore::default();
    let mut warnings = Vec::new();
    let got = retrieve_image(
        "binary tree",
        ImageKind::Diagram,
        &client,
        &mut ChaCha8Rng::seed_from_u64(3),
        &mut store,
        &mut warnings,
    );
    assert!(got.chosen.is_some());
    let img = store.image(&got.asset_id).expect("asset stored");
    assert_eq!(img.get_pixel(0, 0).0, [10, 200, 30, 255]);
}

#[test]
fn failed_search_falls_back_to_a_placeholder() {
    let mock = Mock::start(|_, _, _| (500, "text/plain", b"down".to_vec()));
    let client = LiveSearchClient::new(format!("{}/search", mock.base), None);
    let mut store = AssetStore::default();
    let mut warnings = Vec::new();
    let got = retrieve_image(
        "heap",
        ImageKind::Photo,
        &client,
        &mut ChaCha8Rng::seed_from_u64(3),
        &mut store,
        &mut warnings,
    );
    assert_eq!(got.chosen, None);
    assert!(store.contains(&got.asset_id));
    assert!(!warnings.is_empty());
}
