//! Deck data model, validation and canonical serialization.

pub mod canonical;
pub mod model;
pub mod validate;

pub use canonical::{canonical_json, canonicalize, parse_deck};
pub use model::*;
pub use validate::{validate_deck, ValidationReport, Violation};
