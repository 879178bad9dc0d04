//! Seeded randomness.
//!
//! Every random draw in the pipeline flows from one master seed. Child seeds
//! are derived by hashing `(parent, label)` so decks, phases and slides get
//! independent streams that do not shift when unrelated draws are added.

use crate::scalar::Scalar;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

pub type SlideRng = ChaCha8Rng;

/// Derives a child seed from a parent seed and a label.
pub fn derive_seed(parent: u64, label: &str) -> u64 {
    let mut h = Sha256::new();
    h.update(parent.to_le_bytes());
    h.update(label.as_bytes());
    let out = h.finalize();
    u64::from_le_bytes(out[..8].try_into().expect("8 bytes"))
}

pub fn rng_from_seed(seed: u64) -> SlideRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn child_rng(parent: u64, label: &str) -> SlideRng {
    rng_from_seed(derive_seed(parent, label))
}

/// Stable 64-bit hash of a string (platform independent).
pub fn stable_hash(text: &str) -> u64 {
    let out = Sha256::digest(text.as_bytes());
    u64::from_le_bytes(out[..8].try_into().expect("8 bytes"))
}

/// Twelve hex characters of the SHA-256 of `text`.
pub fn short_hash(text: &str) -> String {
    let out = Sha256::digest(text.as_bytes());
    hex::encode(&out[..6])
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Uniform draw in `[0, 1)`.
pub fn unit<T: Scalar, R: Rng + ?Sized>(rng: &mut R) -> T {
    T::lit(rng.gen::<f64>())
}

/// Standard normal via Box–Muller (cosine branch only, two uniforms per
/// draw) so the number of consumed uniforms is fixed.
pub fn standard_normal<T: Scalar, R: Rng + ?Sized>(rng: &mut R) -> T {
    // u1 in (0, 1] keeps ln finite.
    let u1 = 1.0 - rng.gen::<f64>();
    let u2 = rng.gen::<f64>();
    let z = (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos();
    T::lit(z)
}

pub fn normal<T: Scalar, R: Rng + ?Sized>(rng: &mut R, sigma: T) -> T {
    standard_normal::<T, R>(rng) * sigma
}

/// Uniform index in `0..n`. `n` must be non-zero.
pub fn index<R: Rng + ?Sized>(rng: &mut R, n: usize) -> usize {
    assert!(n > 0, "index over empty range");
    rng.gen_range(0..n as u64) as usize
}

pub fn chance<R: Rng + ?Sized>(rng: &mut R, p: f64) -> bool {
    if p <= 0.0 {
        // Still consume a draw so toggling a probability does not shift
        // every later draw.
        let _ = rng.gen::<f64>();
        return false;
    }
    rng.gen::<f64>() < p
}

pub fn pick<'a, T, R: Rng + ?Sized>(rng: &mut R, items: &'a [T]) -> &'a T {
    &items[index(rng, items.len())]
}

/// Weighted index; weights need not be normalized. Zero total picks 0.
pub fn weighted_index<R: Rng + ?Sized>(rng: &mut R, weights: &[f64]) -> usize {
    let total: f64 = weights.iter().filter(|w| **w > 0.0).sum();
    let mut x = rng.gen::<f64>() * total;
    for (i, w) in weights.iter().enumerate() {
        if *w <= 0.0 {
            continue;
        }
        if x < *w {
            return i;
        }
        x -= w;
    }
    weights.iter().rposition(|w| *w > 0.0).unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_seeds_differ_by_label() {
        assert_ne!(derive_seed(7, "deck-0"), derive_seed(7, "deck-1"));
        assert_eq!(derive_seed(7, "deck-0"), derive_seed(7, "deck-0"));
    }

    #[test]
    fn box_muller_moments() {
        let mut rng = rng_from_seed(1);
        let n = 50_000;
        let xs: Vec<f64> = (0..n).map(|_| standard_normal::<f64, _>(&mut rng)).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
        assert!(mean.abs() < 0.02, "mean {mean}");
        assert!((var - 1.0).abs() < 0.03, "var {var}");
    }

    #[test]
    fn weighted_index_respects_zero_weights() {
        let mut rng = rng_from_seed(3);
        for _ in 0..1000 {
            let i = weighted_index(&mut rng, &[0.0, 1.0, 0.0, 2.0]);
            assert!(i == 1 || i == 3);
        }
    }
}
