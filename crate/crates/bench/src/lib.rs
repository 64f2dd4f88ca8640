//! Benchmark fixtures and criterion groups for the core algorithms.

use std::hint::black_box;

use aspire_core::optimizers::nondominated_sort;
use aspire_core::systems::{SynthParams, SynthSystem, TableSystem};
use aspire_core::{
    hypervolume_2d, run, wilcoxon_rank_sum, ConfigurationSpace, Direction, ModelChoice,
    ObjectiveSpec, OptimizerConfig, OptimizerKind, OptionDef, Pattern, PatternKind, Scenario,
    System,
};
use criterion::{BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `n` random points in the unit square.
pub fn random_points(n: usize, seed: u64) -> Vec<[f64; 2]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| [rng.gen(), rng.gen()]).collect()
}

/// `n` mutually nondominated points on a concave curve.
pub fn front_points(n: usize) -> Vec<[f64; 2]> {
    (0..n)
        .map(|i| {
            let t = i as f64 / (n.max(2) - 1) as f64 * std::f64::consts::FRAC_PI_2;
            [t.cos(), t.sin()]
        })
        .collect()
}

/// A 2560-configuration synthetic system materialized as a table.
pub fn table_system(seed: u64) -> TableSystem {
    let mut opts: Vec<OptionDef> = (0..8)
        .map(|i| OptionDef::binary(format!("b{i}")).unwrap())
        .collect();
    opts.push(OptionDef::integer("workers", 0, 4).unwrap());
    opts.push(OptionDef::enumerated("policy", ["a", "b"]).unwrap());
    let space = ConfigurationSpace::new(opts).unwrap();
    let objectives = [
        ObjectiveSpec::minimize("latency"),
        ObjectiveSpec::maximize("throughput"),
    ];
    let synth = SynthSystem::new(
        space.clone(),
        objectives.clone(),
        SynthParams {
            seed,
            k: 3,
            sparsity: 0.7,
            conflict: 0.8,
        },
    )
    .unwrap();
    let rows: Vec<_> = space
        .iter()
        .map(|c| {
            let p = synth.measure(&c).unwrap();
            (c, p)
        })
        .collect();
    TableSystem::from_rows(space, objectives, rows).unwrap()
}

pub fn hypervolume(c: &mut Criterion) {
    let mut group = c.benchmark_group("hypervolume_2d");
    for n in [10, 100, 1000] {
        let pts = random_points(n, 1);
        group.bench_with_input(BenchmarkId::new("random", n), &pts, |b, pts| {
            b.iter(|| hypervolume_2d(black_box(pts), [-0.1, -0.1], Direction::Maximize))
        });
        let front = front_points(n);
        group.bench_with_input(BenchmarkId::new("front", n), &front, |b, pts| {
            b.iter(|| hypervolume_2d(black_box(pts), [-0.1, -0.1], Direction::Maximize))
        });
    }
    group.finish();
}

pub fn sorting(c: &mut Criterion) {
    let mut group = c.benchmark_group("nondominated_sort");
    for n in [20, 200, 2000] {
        let pts = random_points(n, 2);
        group.bench_with_input(BenchmarkId::from_parameter(n), &pts, |b, pts| {
            b.iter(|| nondominated_sort(black_box(pts), [Direction::Minimize; 2]))
        });
    }
    group.finish();
}

pub fn rank_sum(c: &mut Criterion) {
    let x: Vec<f64> = random_points(100, 3).iter().map(|p| p[0]).collect();
    let y: Vec<f64> = random_points(100, 4).iter().map(|p| p[0] + 0.1).collect();
    c.bench_function("wilcoxon_rank_sum/100x100", |b| {
        b.iter(|| wilcoxon_rank_sum(black_box(&x), black_box(&y)))
    });
    c.bench_function("wilcoxon_rank_sum/10x10 exact", |b| {
        b.iter(|| wilcoxon_rank_sum(black_box(&x[..10]), black_box(&y[..10])))
    });
}

pub fn search(c: &mut Criterion) {
    let sys = table_system(5);
    let scenario = Scenario::online(
        [
            Pattern::with_level(PatternKind::P2, 500.0).unwrap(),
            Pattern::with_level(PatternKind::P3, 500.0).unwrap(),
        ],
        sys.objectives().clone(),
    );
    let mut group = c.benchmark_group("run_budget_300");
    group.sample_size(20);
    for kind in OptimizerKind::ALL {
        for (label, model) in [
            ("without", ModelChoice::Without),
            ("with", ModelChoice::With(scenario.clone())),
        ] {
            let cfg = OptimizerConfig::new(kind, 30);
            group.bench_function(format!("{kind}/{label}"), |b| {
                b.iter(|| run(sys.space(), &sys, 300, &model, &cfg, 11).unwrap())
            });
        }
    }
    group.finish();
}

pub fn benchmarks(c: &mut Criterion) {
    hypervolume(c);
    sorting(c);
    rank_sum(c);
    search(c);
}
