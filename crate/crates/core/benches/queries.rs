use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hybsel::bench::{gen_queries, gen_synthetic_text, SyntheticKind, SyntheticSpec};
use hybsel::rank_select::{rank_batch, select_batch};
use hybsel::text_index::{SaLcpBundle, Text};
use hybsel::wavelet::{Shape, WaveletTree};
use hybsel::{Execution, HybParams, HybVector, PackedBits, PlainBitVector, RankSelect};

const N: usize = 1 << 22;
const QUERIES: usize = 100_000;
const MODES: [(&str, Execution); 2] = [("seq", Execution::Sequential), ("par", Execution::Parallel)];

fn inputs() -> Vec<(&'static str, PackedBits)> {
    let mut r = ChaCha8Rng::seed_from_u64(1);
    let random: PackedBits = (0..N).map(|_| r.random_bool(0.5)).collect();
    let mut runs = PackedBits::zeros(0);
    let mut bit = false;
    while runs.len() < N {
        for _ in 0..r.random_range(1..400).min(N - runs.len()) {
            runs.push(bit);
        }
        bit = !bit;
    }
    vec![("random", random), ("runs", runs)]
}

fn build(c: &mut Criterion) {
    let mut g = c.benchmark_group("build");
    g.sample_size(10).throughput(Throughput::Elements(N as u64));
    for (name, bits) in inputs() {
        for (mode, exec) in MODES {
            g.bench_with_input(BenchmarkId::new(format!("hyb-{mode}"), name), &bits, |b, bits| {
                b.iter(|| HybVector::build_with(bits, &HybParams::default(), exec))
            });
        }
        g.bench_with_input(BenchmarkId::new("plain", name), &bits, |b, bits| {
            b.iter(|| PlainBitVector::new(bits.clone()))
        });
    }
    g.finish();
}

fn batches(c: &mut Criterion) {
    let mut g = c.benchmark_group("batch");
    g.sample_size(20).throughput(Throughput::Elements(QUERIES as u64));
    for (name, bits) in inputs() {
        let hyb = HybVector::build(&bits, &HybParams::default());
        let plain = PlainBitVector::new(bits);
        let ranks = gen_queries(2, N, QUERIES);
        let selects = gen_queries(3, hyb.count(true), QUERIES);
        for (mode, exec) in MODES {
            g.bench_function(BenchmarkId::new(format!("select-hyb-{mode}"), name), |b| {
                b.iter(|| select_batch(&hyb, true, &selects, exec).unwrap())
            });
            g.bench_function(BenchmarkId::new(format!("select-plain-{mode}"), name), |b| {
                b.iter(|| select_batch(&plain, true, &selects, exec).unwrap())
            });
            g.bench_function(BenchmarkId::new(format!("rank-hyb-{mode}"), name), |b| {
                b.iter(|| rank_batch(&hyb, true, &ranks, exec).unwrap())
            });
            g.bench_function(BenchmarkId::new(format!("rank-plain-{mode}"), name), |b| {
                b.iter(|| rank_batch(&plain, true, &ranks, exec).unwrap())
            });
        }
    }
    g.finish();
}

fn single_select(c: &mut Criterion) {
    let mut g = c.benchmark_group("select");
    g.throughput(Throughput::Elements(QUERIES as u64));
    for (name, bits) in inputs() {
        let hyb = HybVector::build(&bits, &HybParams::default());
        let mut general = hyb.clone();
        general.set_shortcuts(false);
        let plain = PlainBitVector::new(bits);
        let qs = gen_queries(4, hyb.count(false), QUERIES);
        let structures: [(&str, &dyn RankSelect); 3] =
            [("hyb", &hyb), ("hyb-no-shortcuts", &general), ("plain", &plain)];
        for (label, bv) in structures {
            g.bench_function(BenchmarkId::new(label, name), |b| {
                b.iter(|| qs.iter().fold(0usize, |s, &q| s.wrapping_add(bv.select(false, black_box(q)).unwrap())))
            });
        }
    }
    g.finish();
}

fn wavelet(c: &mut Criterion) {
    let spec = SyntheticSpec::new(SyntheticKind::Repetitive, 1 << 20, 5).with_mutation_rate(0.01);
    let text = Text::new(gen_synthetic_text(&spec).unwrap()).unwrap();
    let bwt = SaLcpBundle::build(&text).bwt;
    let mut g = c.benchmark_group("wavelet-build");
    g.sample_size(10).throughput(Throughput::Bytes(bwt.len() as u64));
    for (mode, exec) in MODES {
        for (shape_name, shape) in [("huff", Shape::Huffman), ("blcd", Shape::Balanced)] {
            g.bench_function(BenchmarkId::new(format!("hyb-{shape_name}"), mode), |b| {
                b.iter(|| WaveletTree::<HybVector>::build_with(&bwt, shape, &HybParams::default(), exec).unwrap())
            });
        }
    }
    g.finish();
}

criterion_group!(benches, build, batches, single_select, wavelet);
criterion_main!(benches);
