use burnside_core::classify::classify;
use burnside_core::semigroup::{algebra_closure, extract_singular, gen_conjugated_canonical, gen_rank_one_family, gen_totally_positive, is_irreducible};
use burnside_core::trace::{build_trace_system, matrix_unit_generators, reconstruct};
use burnside_core::{matlin, Domain, Mat, DEFAULT_TOL};
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;

fn closure(c: &mut Criterion) {
    let mut g = c.benchmark_group("closure");
    for n in [2, 4, 6] {
        let spec = gen_rank_one_family(n, 1).unwrap();
        g.bench_with_input(BenchmarkId::new("rank-one", n), &spec, |b, s| {
            b.iter(|| algebra_closure(black_box(s), DEFAULT_TOL, None).unwrap())
        });
    }
    g.finish();
}

fn irreducibility(c: &mut Criterion) {
    let mut g = c.benchmark_group("irreducible");
    for (kind, ambient, n) in [(Domain::R, Domain::R, 4), (Domain::C, Domain::R, 4), (Domain::R, Domain::H, 2)] {
        let spec = gen_conjugated_canonical(kind, ambient, n, 1).unwrap();
        g.bench_function(format!("{kind}-in-{ambient}-{n}"), |b| {
            b.iter(|| is_irreducible(black_box(&spec), DEFAULT_TOL, 1).unwrap())
        });
    }
    g.finish();
}

fn classification(c: &mut Criterion) {
    let mut g = c.benchmark_group("classify");
    g.sample_size(20);
    for (kind, ambient, n) in [(Domain::R, Domain::R, 4), (Domain::H, Domain::R, 8), (Domain::R, Domain::C, 4), (Domain::C, Domain::H, 2)] {
        let spec = gen_conjugated_canonical(kind, ambient, n, 2).unwrap();
        g.bench_function(format!("{kind}-in-{ambient}-{n}"), |b| {
            b.iter(|| classify(black_box(&spec), DEFAULT_TOL, 2).unwrap())
        });
    }
    g.finish();
}

fn extraction(c: &mut Criterion) {
    let spec = gen_totally_positive(4, 3).unwrap();
    c.bench_function("extract_singular/totally-positive-4", |b| {
        b.iter(|| extract_singular(black_box(&spec), DEFAULT_TOL, 256, 3).unwrap())
    });
}

fn eigen(c: &mut Criterion) {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
    let mut g = c.benchmark_group("spectrum");
    for d in [Domain::R, Domain::C, Domain::H] {
        let m = Mat::random(d, 8, 8, &mut rng);
        g.bench_function(format!("{d}-8"), |b| b.iter(|| matlin::spectrum(black_box(&m)).unwrap()));
    }
    g.finish();
}

fn trace_systems(c: &mut Criterion) {
    let sys = build_trace_system(&matrix_unit_generators(4)).unwrap();
    let y: Vec<f64> = (0..16).map(f64::from).collect();
    c.bench_function("trace/reconstruct-4", |b| b.iter(|| reconstruct(black_box(&sys), &y).unwrap()));
}

criterion_group!(benches, closure, irreducibility, classification, extraction, eigen, trace_systems);
criterion_main!(benches);
