use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use framelab::gallery::random_frame;
use framelab::unconditional::{c_epsilon_exact_with, c_sigma_exact_with, ExactOptions, RelativeOperator};
use framelab::{Execution, Field};

fn strategies() -> [(&'static str, Execution); 2] {
    [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)]
}

fn sigma(c: &mut Criterion) {
    let mut group = c.benchmark_group("c_sigma_exact");
    group.sample_size(10);
    for n in [10usize, 14, 16] {
        let op = RelativeOperator::new(&random_frame(4, n, 1, Field::Real).unwrap()).unwrap();
        for (name, execution) in strategies() {
            let opts = ExactOptions {
                execution,
                ..Default::default()
            };
            group.bench_with_input(BenchmarkId::new(name, n), &op, |b, op| {
                b.iter(|| c_sigma_exact_with(black_box(op), &opts).unwrap())
            });
        }
    }
    group.finish();
}

fn epsilon(c: &mut Criterion) {
    let mut group = c.benchmark_group("c_epsilon_exact");
    group.sample_size(10);
    for (field, n) in [(Field::Real, 14usize), (Field::Complex, 12)] {
        let op = RelativeOperator::new(&random_frame(5, n, 2, field).unwrap()).unwrap();
        for (name, execution) in strategies() {
            let opts = ExactOptions {
                execution,
                ..Default::default()
            };
            group.bench_with_input(BenchmarkId::new(name, format!("{field:?}/{n}")), &op, |b, op| {
                b.iter(|| c_epsilon_exact_with(black_box(op), &opts).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, sigma, epsilon);
criterion_main!(benches);
