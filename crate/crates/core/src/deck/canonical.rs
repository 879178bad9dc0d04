//! Canonical deck encoding: UTF-8 JSON with object keys sorted at every
//! level, two-space indentation and a trailing newline. Equal decks encode
//! to equal bytes.

use super::model::{DeckLayout, SCHEMA_VERSION};
use super::validate::validate_deck;
use crate::error::DeckError;
use serde::Serialize;

/// Canonical bytes of any serializable value (keys sorted).
pub fn canonical_json<T: Serialize>(value: &T) -> Result<Vec<u8>, serde_json::Error> {
    // serde_json's Value uses a BTreeMap, so the round trip sorts keys.
    let v = serde_json::to_value(value)?;
    let mut out = serde_json::to_vec_pretty(&v)?;
    out.push(b'\n');
    Ok(out)
}

pub fn canonicalize(deck: &DeckLayout) -> Result<Vec<u8>, DeckError> {
    let report = validate_deck(deck);
    if let Some(v) = report.first() {
        return Err(DeckError::Invalid(v.to_string()));
    }
    Ok(canonical_json(deck)?)
}

/// Parses deck JSON. Only the schema version is checked here; run
/// [`validate_deck`] for the full invariant set.
pub fn parse_deck(bytes: &[u8]) -> Result<DeckLayout, DeckError> {
    let value: serde_json::Value = serde_json::from_slice(bytes)?;
    match value.get("schema_version").and_then(|v| v.as_str()) {
        Some(SCHEMA_VERSION) => {}
        Some(other) => return Err(DeckError::SchemaVersion(other.to_string())),
        None => return Err(DeckError::Invalid("missing schema_version".into())),
    }
    Ok(serde_json::from_value(value)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::sample_deck;

    #[test]
    fn round_trip_is_identity() {
        let deck = sample_deck(5);
        let a = canonicalize(&deck).unwrap();
        let back = parse_deck(&a).unwrap();
        assert_eq!(back, deck);
        assert_eq!(canonicalize(&back).unwrap(), a);
    }

    #[test]
    fn key_order_does_not_matter() {
        let deck = sample_deck(2);
        let bytes = canonicalize(&deck).unwrap();
        // Re-emit with keys in reverse order.
        fn reverse(v: &serde_json::Value) -> String {
            match v {
                serde_json::Value::Object(m) => {
                    let parts: Vec<String> = m
                        .iter()
                        .rev()
                        .map(|(k, v)| format!("{}:{}", serde_json::to_string(k).unwrap(), reverse(v)))
                        .collect();
                    format!("{{{}}}", parts.join(","))
                }
                serde_json::Value::Array(a) => {
                    format!("[{}]", a.iter().map(reverse).collect::<Vec<_>>().join(","))
                }
                other => other.to_string(),
            }
        }
        let v: serde_json::Value = serde_json::from_slice(&bytes).unwrap();
        let shuffled = reverse(&v);
        assert_ne!(shuffled.as_bytes(), &bytes[..]);
        let reparsed = parse_deck(shuffled.as_bytes()).unwrap();
        assert_eq!(canonicalize(&reparsed).unwrap(), bytes);
    }

    #[test]
    fn invalid_deck_is_rejected_with_first_violation() {
        let deck = sample_deck(16);
        let err = canonicalize(&deck).unwrap_err();
        assert!(err.to_string().contains("slide count exceeds 15"), "{err}");
    }

    #[test]
    fn wrong_schema_version_rejected() {
        let deck = sample_deck(1);
        let mut v = serde_json::to_value(&deck).unwrap();
        v["schema_version"] = "synslide.deck/0".into();
        let bytes = serde_json::to_vec(&v).unwrap();
        assert!(matches!(parse_deck(&bytes), Err(DeckError::SchemaVersion(_))));
    }
}
