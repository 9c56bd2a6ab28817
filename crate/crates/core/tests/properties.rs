mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use obia::features::{compute_features, compute_features_with, longest_axis, shape_index};
use obia::io::{random_scene_spec, synth_scene};
use obia::par::Execution;
use obia::seg::{segment_with, SegmentationParams};

use common::{brute_diameter_sq, check_segmentation};

fn blob(seed_steps: &[(u8, u8)]) -> Vec<(usize, usize)> {
    let mut set = BTreeSet::from([(100usize, 100usize)]);
    let mut pixels = vec![(100usize, 100usize)];
    for &(pick, dir) in seed_steps {
        let (r, c) = pixels[pick as usize % pixels.len()];
        let next = match dir % 4 {
            0 => (r + 1, c),
            1 => (r - 1, c),
            2 => (r, c + 1),
            _ => (r, c - 1),
        };
        if set.insert(next) {
            pixels.push(next);
        }
    }
    pixels
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn segmentation_matches_recomputation(
        seed in 0u64..10_000,
        w in 1usize..40,
        h in 1usize..40,
        bands in 1usize..4,
        scale in 1.0f64..120.0,
        shape in 0.0f64..0.9,
        compactness in 0.0f64..=1.0,
    ) {
        let (raster, _) = synth_scene(&random_scene_spec(seed, w, h, bands)).unwrap();
        let params = SegmentationParams::new(scale, shape).with_compactness(compactness);
        let seq = segment_with(&raster, &params, Execution::Sequential).unwrap();
        if let Err(e) = check_segmentation(&raster, &seq) {
            return Err(TestCaseError::fail(e));
        }
        let par = segment_with(&raster, &params, Execution::Parallel).unwrap();
        prop_assert_eq!(&seq.labels, &par.labels);
        prop_assert_eq!(seq.passes, par.passes);
        prop_assert!(seq.labels.is_compact());
    }

    #[test]
    fn feature_invariants(seed in 0u64..10_000, scale in 5.0f64..80.0) {
        let (raster, _) = synth_scene(&random_scene_spec(seed, 32, 32, 3)).unwrap();
        let seg = segment_with(&raster, &SegmentationParams::new(scale, 0.1), Execution::Sequential).unwrap();
        let seq = compute_features_with(&seg.labels, &seg.stats, &seg.graph, &raster, Execution::Sequential).unwrap();
        let par = compute_features(&seg.labels, &seg.stats, &seg.graph, &raster).unwrap();
        prop_assert_eq!(&seq, &par);
        let pixels = seg.labels.pixels_by_segment();
        for v in &seq {
            prop_assert!(v.shape_index > 0.0 && v.shape_index <= 1.05, "SI {}", v.shape_index);
            prop_assert!(v.longest_axis >= 2f64.sqrt());
            let lo = v.band_means.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = v.band_means.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            prop_assert!(v.brightness >= lo - 1e-9 && v.brightness <= hi + 1e-9);
            let px: Vec<(usize, usize)> = pixels[v.id as usize].iter().map(|&p| (p / 32, p % 32)).collect();
            prop_assert_eq!(v.longest_axis, (brute_diameter_sq(&px) as f64).sqrt());
            prop_assert_eq!(v.neighbor_count, seg.graph.degree(v.id));
        }
    }

    #[test]
    fn shape_index_is_scale_invariant(
        steps in prop::collection::vec((any::<u8>(), any::<u8>()), 0..80),
        k in 2usize..5,
    ) {
        let base = blob(&steps);
        let scaled: Vec<(usize, usize)> = base
            .iter()
            .flat_map(|&(r, c)| (0..k).flat_map(move |dr| (0..k).map(move |dc| (r * k + dr, c * k + dc))))
            .collect();
        let si = |px: &[(usize, usize)]| shape_index(px.len() as f64, longest_axis(px)).unwrap();
        prop_assert!((si(&base) - si(&scaled)).abs() < 0.02);
    }
}

#[test]
fn rectangle_family_shape_index() {
    let rect = |w: usize, h: usize| -> Vec<(usize, usize)> {
        (0..h).flat_map(|r| (0..w).map(move |c| (r, c))).collect()
    };
    let si = |px: &[(usize, usize)]| shape_index(px.len() as f64, longest_axis(px)).unwrap();
    // L = √(m² + 1)
    for m in 1..=20usize {
        let expected = 1.27 * m as f64 / (m * m + 1) as f64;
        assert!((si(&rect(m, 1)) - expected).abs() < 1e-12);
    }
    assert!((si(&rect(2, 2)) - 0.635).abs() < 1e-12);
    assert!((si(&rect(3, 5)) - 1.27 * 15.0 / 34.0).abs() < 1e-12);
}
