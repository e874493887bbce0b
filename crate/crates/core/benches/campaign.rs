use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rearrange::bench::{run_campaign, BenchSpec};
use rearrange::oracle::min_relocation_set;
use rearrange::par::Execution;
use rearrange::scene::{generate, GenSpec};
use rearrange::{CSpaceParams, Method};

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn campaign(c: &mut Criterion) {
    let mut group = c.benchmark_group("campaign");
    group.sample_size(10);
    for (name, exec) in MODES {
        let mut spec = BenchSpec::new(Method::ALL.to_vec(), vec![4, 6, 8, 10], 20);
        spec.timing = false;
        spec.exec = exec;
        group.bench_function(BenchmarkId::new(name, "3x4x20"), |b| {
            b.iter(|| run_campaign(&spec).unwrap())
        });
    }
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    let scene = generate(&GenSpec::tabletop(15, 3)).unwrap();
    let cs = CSpaceParams::default();
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::new(name, 15), |b| {
            b.iter(|| min_relocation_set(&scene, &cs, 45.0, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, campaign, oracle);
criterion_main!(benches);
