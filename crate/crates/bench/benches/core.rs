use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use evohull_core::ea::{run_ea, EaConfig, TerminationCriteria};
use evohull_core::encoding::{Decoder, Genotype};
use evohull_core::mesh::{absolute_curvature, greedy_descent, l1_curvature, shapes, CurvatureMeasure, DescentPolicy};
use evohull_core::problems::{scramble, triangulation_pipeline, SwapCodecParams, TriangulationProblem};
use evohull_core::simplicial::convex_hull_oracle;
use evohull_core::RandomStream;

fn instance(n: usize) -> TriangulationProblem {
    let points = shapes::sphere_points(n, 1.0, &mut RandomStream::new(n as u64));
    TriangulationProblem::from_points(points).expect("sphere points are in convex position")
}

fn scrambled(n: usize) -> TriangulationProblem {
    let p = instance(n);
    let k = 4 * p.initial().edge_count();
    let start = scramble(p.initial(), k, &mut RandomStream::new(1).substream("scramble"));
    p.with_initial(start).expect("same points")
}

fn hull_oracle(c: &mut Criterion) {
    let mut g = c.benchmark_group("hull_oracle");
    for n in [8, 20, 40] {
        let points = shapes::sphere_points(n, 1.0, &mut RandomStream::new(3));
        g.bench_with_input(BenchmarkId::from_parameter(n), &points, |b, p| b.iter(|| convex_hull_oracle(p)));
    }
    g.finish();
}

fn curvature(c: &mut Criterion) {
    let mut g = c.benchmark_group("curvature");
    for n in [20, 50] {
        let m = scrambled(n).initial().clone();
        g.bench_with_input(BenchmarkId::new("l1", n), &m, |b, m| b.iter(|| l1_curvature(m)));
        g.bench_with_input(BenchmarkId::new("absolute", n), &m, |b, m| b.iter(|| absolute_curvature(m)));
    }
    g.finish();
}

fn descent(c: &mut Criterion) {
    let mut g = c.benchmark_group("greedy_descent");
    g.sample_size(20);
    for n in [12, 20] {
        let m = scrambled(n).initial().clone();
        g.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| {
            b.iter(|| greedy_descent(m, DescentPolicy::BestImprovement, CurvatureMeasure::Absolute))
        });
    }
    g.finish();
}

fn ea(c: &mut Criterion) {
    let mut g = c.benchmark_group("ea");
    g.sample_size(10);
    let p = scrambled(8);
    let pipe = triangulation_pipeline(&p, &SwapCodecParams::default()).expect("valid codec");
    let mut cfg = EaConfig::standard(10, pipe.codec.length(), 20);
    cfg.termination = TerminationCriteria::max_generations(20);
    g.bench_function("triangulation_n8_20_generations", |b| b.iter(|| run_ea(&pipe, &cfg, 5)));
    g.bench_function("decode_n20", |b| {
        let p = scrambled(20);
        let pipe = triangulation_pipeline(&p, &SwapCodecParams::default()).expect("valid codec");
        let s = Genotype(vec![1; pipe.codec.length()]);
        b.iter(|| pipe.evaluate(&s))
    });
    g.finish();
}

criterion_group!(benches, hull_oracle, curvature, descent, ea);
criterion_main!(benches);
