//! Benchmarks for the enumeration-heavy paths, comparing the rayon scan
//! against the sequential fallback on identical inputs.
//!
//! Run with default features for both flavors side by side; with
//! `--no-default-features` only the sequential path is compiled.

use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use maxvol::combinatorics::binomial;
use maxvol::random::random_matrix;
use maxvol::reduction::{build_maxvol_instance, repeat, sat_to_labelcover, DEFAULT_REPEAT_CELL_CAP};
use maxvol::solvers::{exact_scan_seq, greedy_select, volume_sampling_distribution};

fn bench_exact_scan(c: &mut Criterion) {
    let mut group = c.benchmark_group("exact_scan");
    group.sample_size(10).measurement_time(Duration::from_secs(8));
    for (n, k) in [(14, 5), (18, 6)] {
        let a = random_matrix(32, n, 7_000 + n as u64);
        let total = binomial(n, k).unwrap();
        group.bench_with_input(BenchmarkId::new("seq", format!("C({n},{k})")), &a, |b, a| {
            b.iter(|| black_box(exact_scan_seq(a, k, total)));
        });
        #[cfg(feature = "parallel")]
        group.bench_with_input(BenchmarkId::new("par", format!("C({n},{k})")), &a, |b, a| {
            b.iter(|| black_box(maxvol::solvers::exact_scan_par(a, k, total)));
        });
        #[cfg(feature = "parallel")]
        {
            let seq = exact_scan_seq(&a, k, total);
            let par = maxvol::solvers::exact_scan_par(&a, k, total);
            assert_eq!(seq, par, "parallel scan must match the sequential scan");
        }
    }
    group.finish();
}

fn bench_greedy(c: &mut Criterion) {
    let mut group = c.benchmark_group("greedy_select");
    group.sample_size(20);
    for (rows, cols, k) in [(60, 41, 8), (200, 120, 20)] {
        let a = random_matrix(rows, cols, 9_000 + cols as u64);
        group.bench_function(
            BenchmarkId::from_parameter(format!("{rows}x{cols}_k{k}")),
            |b| {
                b.iter(|| black_box(greedy_select(&a, k).unwrap()));
            },
        );
    }
    group.finish();
}

fn bench_distribution(c: &mut Criterion) {
    let a = random_matrix(24, 14, 11_000);
    c.bench_function("volume_sampling_distribution_C(14,5)", |b| {
        b.iter(|| black_box(volume_sampling_distribution(&a, 5, 10_000_000).unwrap()));
    });
}

fn bench_instance_build(c: &mut Criterion) {
    let formula = maxvol::fixtures::sat5_n3();
    let lc = sat_to_labelcover(&formula).unwrap();
    let squared = repeat(&lc, 2, DEFAULT_REPEAT_CELL_CAP).unwrap();
    let mut group = c.benchmark_group("build_maxvol_instance");
    group.sample_size(10);
    group.bench_function("fixture_ell1_60x41", |b| {
        b.iter(|| black_box(build_maxvol_instance(&lc, 1).unwrap()));
    });
    group.bench_function("fixture_ell2_1800x1261", |b| {
        b.iter(|| black_box(build_maxvol_instance(&squared, 2).unwrap()));
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_exact_scan,
    bench_greedy,
    bench_distribution,
    bench_instance_build
);
criterion_main!(benches);
