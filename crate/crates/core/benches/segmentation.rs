//! Sequential vs rayon execution on the bundled urban scene and a larger
//! random scene. Build with `--no-default-features` to see the parallel
//! strategy collapse to sequential.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use obia::cli::presets;
use obia::features::compute_features_with;
use obia::io::{random_scene_spec, synth_scene};
use obia::par::Execution;
use obia::seg::{segment_with, SegmentationParams};
use obia::Raster;

const STRATEGIES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn scenes() -> Vec<(&'static str, Raster)> {
    let (urban, _) = synth_scene(&presets::URBAN.scene()).unwrap();
    let (random, _) = synth_scene(&random_scene_spec(42, 256, 256, 4)).unwrap();
    vec![("urban_128", urban), ("random_256", random)]
}

fn bench_segment(c: &mut Criterion) {
    let mut group = c.benchmark_group("segment");
    group.sample_size(20);
    let params = SegmentationParams::default();
    for (name, raster) in scenes() {
        for (label, exec) in STRATEGIES {
            group.bench_with_input(BenchmarkId::new(label, name), &raster, |b, r| {
                b.iter(|| segment_with(black_box(r), &params, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_features(c: &mut Criterion) {
    let mut group = c.benchmark_group("features");
    for (name, raster) in scenes() {
        let seg = segment_with(&raster, &SegmentationParams::new(20.0, 0.1), Execution::default()).unwrap();
        for (label, exec) in STRATEGIES {
            group.bench_function(BenchmarkId::new(label, name), |b| {
                b.iter(|| compute_features_with(&seg.labels, &seg.stats, &seg.graph, black_box(&raster), exec).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    let (raster, _) = synth_scene(&presets::URBAN.scene()).unwrap();
    let params: Vec<SegmentationParams> = [30.0, 50.0, 70.0, 100.0]
        .iter()
        .map(|&s| SegmentationParams::new(s, 0.1))
        .collect();
    for (label, exec) in STRATEGIES {
        group.bench_function(label, |b| {
            b.iter(|| {
                exec.map(&params, |p| segment_with(&raster, p, Execution::Sequential).unwrap().segment_count())
            })
        });
    }
    group.finish();
}

criterion_group!(benches, bench_segment, bench_features, bench_sweep);
criterion_main!(benches);
