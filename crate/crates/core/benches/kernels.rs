//! Kernel benchmarks. Build with default features for the rayon-backed
//! numbers and with `--no-default-features` for the sequential fallback;
//! the group names carry the mode so the two runs can be compared:
//!
//! ```text
//! cargo bench -p ftoracle
//! cargo bench -p ftoracle --no-default-features
//! ```

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use ftoracle::dist::Rat;
use ftoracle::dso::build_full_dso;
use ftoracle::exact;
use ftoracle::gen;
use ftoracle::sssp::apsp;

fn mode() -> &'static str {
    if cfg!(feature = "parallel") {
        "parallel"
    } else {
        "sequential"
    }
}

fn bench_apsp(c: &mut Criterion) {
    let g = gen::random_strongly_connected(96, 384, 3, 1).unwrap();
    c.bench_function(&format!("apsp/{}/n96", mode()), |b| {
        b.iter(|| black_box(apsp(&g)))
    });
}

fn bench_diameter_sweep(c: &mut Criterion) {
    let g = gen::random_strongly_connected(48, 192, 1, 2).unwrap();
    c.bench_function(&format!("diameter-per-edge/{}/n48", mode()), |b| {
        b.iter(|| {
            let mut acc = 0u64;
            for e in 0..g.m() {
                if let Some(d) = exact::diameter(&g, &[e]).finite() {
                    acc ^= d;
                }
            }
            black_box(acc)
        })
    });
}

fn bench_full_dso(c: &mut Criterion) {
    let g = gen::random_strongly_connected(24, 72, 1, 3).unwrap();
    c.bench_function(&format!("full-dso-build/{}/n24", mode()), |b| {
        b.iter(|| black_box(build_full_dso(&g, Rat::from_integer(2)).unwrap().1))
    });
}

fn bench_strong_bridges(c: &mut Criterion) {
    let g = gen::random_strongly_connected(64, 256, 1, 4).unwrap();
    c.bench_function(&format!("strong-bridges/{}/n64", mode()), |b| {
        b.iter(|| black_box(exact::strong_bridges(&g).unwrap()))
    });
}

criterion_group!(
    kernels,
    bench_apsp,
    bench_diameter_sweep,
    bench_full_dso,
    bench_strong_bridges
);
criterion_main!(kernels);
