//! Position and size perturbation of an element inside its layout cell.
//!
//! For a region `(left, top, W, H)` the element is resized to `(w0, h0)` and
//! then placed at
//!
//! ```text
//! top'  = top  + (H - h0)/2 + clip(N(0, sigma), -(H - h0)/2, (H - h0)/2)
//! left' = left + (W - w0)/2 + clip(N(0, sigma), -(W - w0)/2, (W - w0)/2)
//! ```
//!
//! so the result always stays inside the region.

use crate::geometry::Rect;
use crate::rng;
use crate::scalar::Scalar;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// How the element size is derived from the region size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SizeLaw<T> {
    /// `h0 = height * H`, `w0 = width * W`.
    Fixed { height: T, width: T },
    /// One `alpha ~ U(tau, 1)` shared by both axes.
    Uniform { tau: T },
    /// Keep the region size.
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbationParams<T> {
    pub sigma: T,
    pub size_law: SizeLaw<T>,
}

/// Default shrink lower bound for body elements.
pub const DEFAULT_TAU: f64 = 0.7;

impl<T: Scalar> PerturbationParams<T> {
    pub fn title() -> Self {
        Self {
            sigma: T::lit(0.5),
            size_law: SizeLaw::Fixed {
                height: T::lit(0.8),
                width: T::lit(0.8),
            },
        }
    }

    pub fn body(tau: T) -> Self {
        Self {
            sigma: T::lit(1.0),
            size_law: SizeLaw::Uniform { tau },
        }
    }

    pub fn footer() -> Self {
        Self {
            sigma: T::lit(0.2),
            size_law: SizeLaw::Fixed {
                height: T::one(),
                width: T::lit(0.8),
            },
        }
    }

    pub fn identity() -> Self {
        Self {
            sigma: T::zero(),
            size_law: SizeLaw::Full,
        }
    }
}

/// The random inputs of one perturbation, drawn in this field order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbationDraw<T> {
    pub top_noise: T,
    pub left_noise: T,
    /// Only meaningful under [`SizeLaw::Uniform`].
    pub alpha: T,
}

impl<T: Scalar> PerturbationDraw<T> {
    /// Draw order is fixed: top noise, left noise, then alpha (only when the
    /// size law samples one).
    pub fn sample<R: Rng + ?Sized>(params: &PerturbationParams<T>, rng: &mut R) -> Self {
        let top_noise = rng::normal(rng, params.sigma);
        let left_noise = rng::normal(rng, params.sigma);
        let alpha = match params.size_law {
            SizeLaw::Uniform { tau } => tau + (T::one() - tau) * rng::unit::<T, R>(rng),
            _ => T::one(),
        };
        Self {
            top_noise,
            left_noise,
            alpha,
        }
    }
}

pub fn clip<T: Scalar>(x: T, lo: T, hi: T) -> T {
    if x < lo {
        lo
    } else if x > hi {
        hi
    } else {
        x
    }
}

/// Deterministic part of the perturbation.
pub fn apply_perturbation<T: Scalar>(region: &Rect<T>, params: &PerturbationParams<T>, draw: &PerturbationDraw<T>) -> Rect<T> {
    let two = T::lit(2.0);
    let (h0, w0) = match params.size_law {
        SizeLaw::Fixed { height, width } => (height * region.height, width * region.width),
        SizeLaw::Uniform { .. } => (draw.alpha * region.height, draw.alpha * region.width),
        SizeLaw::Full => (region.height, region.width),
    };
    let slack_v = (region.height - h0) / two;
    let slack_h = (region.width - w0) / two;
    let top = region.top + slack_v + clip(draw.top_noise, -slack_v, slack_v);
    let left = region.left + slack_h + clip(draw.left_noise, -slack_h, slack_h);
    let top = settle(top, h0, region.top, region.bottom());
    let left = settle(left, w0, region.left, region.right());
    Rect::new(left, top, w0, h0)
}

/// Clamps `start` so that `[start, start + size]` lies in `[lo, hi]` in
/// floating point, where `start + size` may round past `hi` by an ulp.
fn settle<T: Scalar>(start: T, size: T, lo: T, hi: T) -> T {
    let mut s = start.min(hi - size).max(lo);
    let step = T::epsilon() * hi.abs().max(T::one());
    for _ in 0..64 {
        if s + size <= hi || s <= lo {
            break;
        }
        s = (s - step).max(lo);
    }
    s
}

pub fn randomize_location<T: Scalar, R: Rng + ?Sized>(region: &Rect<T>, params: &PerturbationParams<T>, rng: &mut R) -> Rect<T> {
    let draw = PerturbationDraw::sample(params, rng);
    apply_perturbation(region, params, &draw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;

    #[test]
    fn identity_params_return_region() {
        let mut rng = rng_from_seed(1);
        let region = Rect::<f64>::new(1.0, 1.7, 5.525, 4.55);
        for _ in 0..100 {
            let r = randomize_location(&region, &PerturbationParams::identity(), &mut rng);
            assert_eq!(r, region);
        }
    }

    #[test]
    fn title_worked_example_saturates() {
        // h0 = 0.8 * 1.2 = 0.96, slack 0.12, noise +10 clips to +0.12
        let region = Rect::<f64>::new(1.0, 0.3, 11.3, 1.2);
        let draw = PerturbationDraw {
            top_noise: 10.0,
            left_noise: 0.0,
            alpha: 1.0,
        };
        let r = apply_perturbation(&region, &PerturbationParams::title(), &draw);
        assert!((r.top - 0.54).abs() < 1e-9);
        assert!((r.height - 0.96).abs() < 1e-12);
        assert!((r.width - 9.04).abs() < 1e-12);
        // zero left noise keeps the element horizontally centered
        assert!((r.left - (1.0 + 1.13)).abs() < 1e-12);
    }

    #[test]
    fn centered_when_sigma_zero() {
        let mut rng = rng_from_seed(2);
        let region = Rect::<f64>::new(2.0, 2.0, 4.0, 2.0);
        let params = PerturbationParams {
            sigma: 0.0,
            size_law: SizeLaw::Uniform { tau: 0.7 },
        };
        for _ in 0..200 {
            let r = randomize_location(&region, &params, &mut rng);
            assert!((r.top - region.top - (region.height - r.height) / 2.0).abs() < 1e-12);
            assert!((r.left - region.left - (region.width - r.width) / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn footer_keeps_height() {
        let mut rng = rng_from_seed(3);
        let region = Rect::<f64>::new(0.5, 6.8, 3.8, 0.5);
        let r = randomize_location(&region, &PerturbationParams::footer(), &mut rng);
        assert_eq!(r.top, region.top);
        assert!((r.width - 3.04).abs() < 1e-12);
    }

    #[test]
    fn works_in_single_precision() {
        let mut rng = rng_from_seed(4);
        let region: Rect<f32> = Rect::new(1.0, 1.7, 5.5, 2.2);
        for _ in 0..10_000 {
            let r = randomize_location(&region, &PerturbationParams::<f32>::body(0.7), &mut rng);
            assert!(region.contains_rect(&r));
        }
    }
}
