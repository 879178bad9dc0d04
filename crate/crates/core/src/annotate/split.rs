//! Presentation-wise train/val partition.

use crate::deck::model::DeckLayout;
use crate::error::AnnotateError;
use rand::seq::SliceRandom;
use rand::Rng;
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Split {
    pub train: BTreeSet<String>,
    pub val: BTreeSet<String>,
}

impl Split {
    pub fn side_of(&self, deck_id: &str) -> Option<&'static str> {
        if self.train.contains(deck_id) {
            Some("train")
        } else if self.val.contains(deck_id) {
            Some("val")
        } else {
            None
        }
    }
}

/// Splits `(deck_id, slide_count)` pairs. Decks are visited in a shuffled
/// order and join the training side while that moves its slide total
/// closer to the target, so the realized fraction is within one deck of it.
/// Both sides are non-empty.
pub fn split_ids<R: Rng + ?Sized>(items: &[(String, usize)], train_fraction: f64, rng: &mut R) -> Result<Split, AnnotateError> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(AnnotateError::BadFraction(train_fraction));
    }
    if items.len() < 2 {
        return Err(AnnotateError::TooFewDecks(items.len()));
    }
    let mut order: Vec<&(String, usize)> = items.iter().collect();
    order.sort();
    order.shuffle(rng);
    let total: usize = items.iter().map(|(_, n)| n).sum();
    let target = train_fraction * total as f64;
    let mut train = Vec::new();
    let mut val = Vec::new();
    let mut have = 0.0;
    for (id, n) in order {
        let after = have + *n as f64;
        if have < target && (after - target).abs() <= (target - have).abs() {
            have = after;
            train.push(id.clone());
        } else {
            val.push(id.clone());
        }
    }
    if train.is_empty() {
        train.push(val.remove(0));
    }
    if val.is_empty() {
        val.push(train.pop().expect("two or more decks"));
    }
    Ok(Split {
        train: train.into_iter().collect(),
        val: val.into_iter().collect(),
    })
}

pub fn split_by_presentation<R: Rng + ?Sized>(decks: &[DeckLayout], train_fraction: f64, rng: &mut R) -> Result<Split, AnnotateError> {
    let items: Vec<(String, usize)> = decks.iter().map(|d| (d.deck_id.clone(), d.slides.len())).collect();
    split_ids(&items, train_fraction, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;
    use proptest::prelude::*;

    fn equal(n: usize) -> Vec<(String, usize)> {
        (0..n).map(|i| (format!("deck-{i}"), 12)).collect()
    }

    #[test]
    fn ten_equal_decks_at_thirty_percent() {
        let s = split_ids(&equal(10), 0.3, &mut rng_from_seed(1)).unwrap();
        assert_eq!((s.train.len(), s.val.len()), (3, 7));
        assert!(s.train.is_disjoint(&s.val));
    }

    #[test]
    fn degenerate_inputs_are_rejected() {
        assert!(matches!(
            split_ids(&equal(10), 0.0, &mut rng_from_seed(1)),
            Err(AnnotateError::BadFraction(_))
        ));
        assert!(matches!(
            split_ids(&equal(10), 1.0, &mut rng_from_seed(1)),
            Err(AnnotateError::BadFraction(_))
        ));
        assert!(matches!(
            split_ids(&equal(1), 0.5, &mut rng_from_seed(1)),
            Err(AnnotateError::TooFewDecks(1))
        ));
    }

    #[test]
    fn same_seed_same_partition() {
        let a = split_ids(&equal(9), 0.5, &mut rng_from_seed(4)).unwrap();
        assert_eq!(a, split_ids(&equal(9), 0.5, &mut rng_from_seed(4)).unwrap());
    }

    proptest! {
        #[test]
        fn partition_within_one_deck(
            sizes in prop::collection::vec(1usize..16, 2..30),
            fraction in 0.05f64..0.95,
            seed in any::<u64>(),
        ) {
            let items: Vec<(String, usize)> = sizes.iter().enumerate().map(|(i, n)| (format!("d{i}"), *n)).collect();
            let s = split_ids(&items, fraction, &mut rng_from_seed(seed)).unwrap();
            prop_assert!(s.train.is_disjoint(&s.val));
            prop_assert_eq!(s.train.len() + s.val.len(), items.len());
            prop_assert!(!s.train.is_empty() && !s.val.is_empty());
            let total: usize = sizes.iter().sum();
            let got: usize = items.iter().filter(|(id, _)| s.train.contains(id)).map(|(_, n)| n).sum();
            let biggest = *sizes.iter().max().unwrap() as f64;
            prop_assert!((got as f64 - fraction * total as f64).abs() <= biggest + 1e-9);
        }
    }
}
