use image::{Rgba, RgbaImage};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use slideforge::config::{Mode, RunConfig};
use slideforge::content::install_network_guard;
use slideforge::deck::{canonicalize, parse_deck, validate_deck, ElementKind, Role};
use slideforge::geometry::PixelBox;
use slideforge::layout::catalog::{get_layout_dimensions, select_layout};
use slideforge::layout::perturb::{randomize_location, SizeLaw};
use slideforge::pipeline::{generate_deck, Services};
use slideforge::render::{augment_image, render_element_mask, render_slide, AugmentSpec, RenderOptions};
use slideforge::{PerturbationParams, Rect};

fn region() -> impl Strategy<Value = Rect> {
    (0.0f64..10.0, 0.0f64..6.0, 0.05f64..3.3, 0.05f64..1.5).prop_map(|(l, t, w, h)| Rect::new(l, t, w, h))
}

fn params() -> impl Strategy<Value = PerturbationParams> {
    let law = prop_oneof![
        (0.05f64..=1.0, 0.05f64..=1.0).prop_map(|(height, width)| SizeLaw::Fixed { height, width }),
        (0.0f64..=1.0).prop_map(|tau| SizeLaw::Uniform { tau }),
        Just(SizeLaw::Full),
    ];
    (0.0f64..3.0, law).prop_map(|(sigma, size_law)| PerturbationParams { sigma, size_law })
}

proptest! {
    #[test]
    fn perturbed_rect_stays_in_region(region in region(), params in params(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..64 {
            let r = randomize_location(&region, &params, &mut rng);
            prop_assert!(r.left >= region.left && r.top >= region.top);
            prop_assert!(r.right() <= region.right() && r.bottom() <= region.bottom(), "{:?} in {:?}", r, region);
            prop_assert!(r.width > 0.0 && r.height > 0.0);
            prop_assert!(r.width <= region.width && r.height <= region.height);
        }
    }

    #[test]
    fn zero_sigma_centers_the_rect(region in region(), params in params(), seed in any::<u64>()) {
        let params = PerturbationParams { sigma: 0.0, ..params };
        let r = randomize_location(&region, &params, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert!((r.top - region.top - (region.height - r.height) / 2.0).abs() < 1e-9);
        prop_assert!((r.left - region.left - (region.width - r.width) / 2.0).abs() < 1e-9);
    }

    #[test]
    fn selected_layout_has_the_requested_cells(n in 0usize..=4, titled in any::<bool>(), seed in any::<u64>()) {
        let id = select_layout(n, titled, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let regions = get_layout_dimensions(&id).unwrap();
        prop_assert_eq!(regions.body.len(), n);
        prop_assert_eq!(regions.title.is_some(), titled);
    }

    // Down to half size the filter footprint is at most one output pixel.
    #[test]
    fn resize_remap_matches_the_resized_mask(
        x in 0u32..1200, y in 0u32..680, w in 1u32..400, h in 1u32..300,
        scale in prop_oneof![Just(0.5f64), Just(0.75), 0.5f64..=1.0],
    ) {
        let (w, h) = (w.min(1280 - x), h.min(720 - y));
        let mut img = RgbaImage::from_pixel(1280, 720, Rgba([255, 255, 255, 255]));
        for yy in y..y + h {
            for xx in x..x + w {
                img.put_pixel(xx, yy, Rgba([20, 30, 40, 255]));
            }
        }
        let size = (((1280.0 * scale).round() as u32).max(1), ((720.0 * scale).round() as u32).max(1));
        let spec = AugmentSpec { resize: Some(size), ..AugmentSpec::default() };
        let (out, t) = augment_image(&img, &spec);
        let [bx, by, bw, bh] = t.apply(&PixelBox::new(x as i64, y as i64, (x + w) as i64, (y + h) as i64));
        let (mut x0, mut y0, mut x1, mut y1) = (u32::MAX, u32::MAX, 0, 0);
        for (px, py, p) in out.enumerate_pixels() {
            if p.0 != [255, 255, 255, 255] {
                x0 = x0.min(px);
                y0 = y0.min(py);
                x1 = x1.max(px + 1);
                y1 = y1.max(py + 1);
            }
        }
        // A box thinner than one output pixel may vanish under the filter.
        prop_assume!(x0 != u32::MAX);
        // Compared on the pixel grid: the remapped box rounded outward.
        let grid = [bx.floor(), by.floor(), (bx + bw).ceil(), (by + bh).ceil()];
        let mask = [x0 as f64, y0 as f64, x1 as f64, y1 as f64];
        prop_assert!(grid.iter().zip(&mask).all(|(a, b)| (a - b).abs() <= 1.0), "{:?} vs {:?}", grid, mask);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn generated_decks_hold_every_deck_invariant(seed in any::<u64>(), syndet in any::<bool>()) {
        install_network_guard();
        let mode = if syndet { Mode::Syndet } else { Mode::Synret };
        let cfg = RunConfig { seed, ..RunConfig::preset(mode) };
        let services = Services::offline();
        let (deck, store) = generate_deck(&cfg, &services, 0).unwrap();

        prop_assert!(validate_deck(&deck).is_valid());
        prop_assert!((1..=15).contains(&deck.slides.len()));

        let bytes = canonicalize(&deck).unwrap();
        let back = parse_deck(&bytes).unwrap();
        prop_assert_eq!(&back, &deck);
        prop_assert_eq!(canonicalize(&back).unwrap(), bytes.clone());

        let (again, store2) = generate_deck(&cfg, &services, 0).unwrap();
        prop_assert_eq!(canonicalize(&again).unwrap(), bytes);
        prop_assert_eq!(&store2, &store);

        let title_style = deck.slides[0].placed.iter().find(|e| e.role == Role::Title).map(|e| e.style.text.clone());
        let opts = RenderOptions::default();
        for slide in &deck.slides {
            let body: Vec<_> = slide.placed.iter().filter(|e| e.role == Role::Body).collect();
            prop_assert!(body.len() <= 3);
            for (i, a) in body.iter().enumerate() {
                prop_assert!(a.region.contains_rect(&a.rect));
                for b in &body[i + 1..] {
                    prop_assert!(!a.rect.overlaps(&b.rect), "{:?} overlaps {:?}", a.rect, b.rect);
                }
            }
            if let (Some(t), Some(expected)) = (slide.placed.iter().find(|e| e.role == Role::Title), &title_style) {
                prop_assert_eq!(&t.style.text, expected);
            }
            let render = render_slide(slide, &store, &opts).unwrap();
            for (i, e) in slide.all_elements().enumerate() {
                let mask = render_element_mask(slide, i, &store, &opts).unwrap();
                prop_assert_eq!(mask.bbox, render.ink[i], "{:?} element {}", e.content.kind, i);
                if let Some(b) = mask.bbox {
                    let r = PixelBox::from_rect(&e.rect, opts.width, opts.height);
                    prop_assert!(b.x0 >= r.x0 - 1 && b.y0 >= r.y0 - 1 && b.x1 <= r.x1 + 1 && b.y1 <= r.y1 + 1,
                        "{:?} ink {:?} outside rect {:?}", e.content.kind, b, r);
                }
            }
        }
    }
}

#[test]
fn category_ids_are_contiguous_and_stable() {
    let names: Vec<&str> = ElementKind::ALL.iter().map(|k| k.name()).collect();
    assert_eq!(names.len(), 16);
    for (i, k) in ElementKind::ALL.iter().enumerate() {
        assert_eq!(k.id() as usize, i + 1);
        assert_eq!(ElementKind::from_id(k.id()), Some(*k));
    }
    assert_eq!(names[0], "Title");
    assert_eq!(names[15], "Natural-Image");
}
